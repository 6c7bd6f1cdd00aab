"""Run the POVM search against the min-max bound over a range of q_max values."""

import argparse
import time

import numpy as np

from qseal.errors import BoundViolation
from qseal.optimizer import verify_bound


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--qmax", type=float, nargs="+", default=[0.3, 0.6, 0.9])
    parser.add_argument("--points", type=int, default=4)
    parser.add_argument("--outcomes", type=int, default=4)
    parser.add_argument("--restarts", type=int, default=64)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    print("q_max,q,best_fbar,bound,gap,warm_fbar,povms_checked")
    failed = False
    for q_max in args.qmax:
        grid = q_max * np.arange(1, args.points + 1) / args.points
        t0 = time.perf_counter()
        try:
            rep = verify_bound(q_max, grid, k=args.outcomes, restarts=args.restarts, seed=args.seed)
        except BoundViolation as exc:
            print(f"# q_max={q_max}: {exc}")
            failed = True
            continue
        for r in rep.rows:
            print(f"{q_max:.15g},{r.q:.15g},{r.best_fbar:.15g},{r.bound:.15g},"
                  f"{r.gap:.3e},{r.warm_fbar:.15g},{r.povms_checked}")
        print(f"# q_max={q_max}: {time.perf_counter() - t0:.1f}s")
    raise SystemExit(5 if failed else 0)


if __name__ == "__main__":
    main()
