"""Sweep the attack's guessing probability vs. average fidelity for several q_max.

Writes one CSV per (scheme, q_max) into the output directory, in the same
format as ``qseal curve``.
"""

import argparse
from pathlib import Path

from qseal.cli import curve_csv, tradeoff_curve
from qseal.seal import make_product_scheme, make_stringent_scheme

SCHEMES = {"stringent": make_stringent_scheme, "product": make_product_scheme}


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--qmax", type=float, nargs="+", default=[0.2, 0.4, 0.6, 0.8, 1.0])
    parser.add_argument("--steps", type=int, default=50)
    parser.add_argument("--out", type=Path, default=Path("results/curves"))
    args = parser.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    for name, make in SCHEMES.items():
        for q_max in args.qmax:
            points = tradeoff_curve(make(q_max), args.steps)
            path = args.out / f"{name}_qmax{q_max:g}.csv"
            path.write_text(curve_csv(points), newline="\n")
            worst = max(p.detection_bound for p in points)
            print(f"{path}: {len(points)} rows, max detection {worst:.6f}")


if __name__ == "__main__":
    main()
