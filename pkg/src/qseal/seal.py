"""Quantum bit sealing schemes: construction, reduced states and scheme files.

A scheme is a pair of bipartite pure states over a public factor B (handed
to readers) and a private factor A (kept for verifiers). Amplitudes are
stored in the B-major / A-minor order described in ``qseal.matrixcore``.

Scheme files are JSON documents with exactly four fields::

    {
      "dim_b": 2,
      "dim_a": 3,
      "psi0": [[re, im], ...],
      "psi1": [[re, im], ...]
    }

Floats are written with ``repr`` so a save/load round trip is bit-exact.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

import numpy as np

from . import matrixcore as mc
from .errors import DimensionMismatch, NormalizationError, ParseError, QmaxOutOfRange

NORM_TOL = 1e-10
LOAD_NORM_TOL = 1e-8
SCHEME_FIELDS = ("dim_b", "dim_a", "psi0", "psi1")


@dataclass(frozen=True, eq=False)
class SealScheme:
    dim_b: int
    dim_a: int
    psi0: np.ndarray
    psi1: np.ndarray

    def __post_init__(self):
        if self.dim_b < 2:
            raise DimensionMismatch("public factor needs dim_b >= 2 to carry a bit")
        if self.dim_a < 1:
            raise DimensionMismatch("dim_a must be >= 1")
        n = self.dim_b * self.dim_a
        for name in ("psi0", "psi1"):
            v = np.array(getattr(self, name), dtype=complex).ravel()
            if v.size != n:
                raise DimensionMismatch(f"{name} has length {v.size}, expected {n}")
            norm = np.linalg.norm(v)
            if abs(norm - 1.0) > NORM_TOL:
                raise NormalizationError(f"{name} has norm {norm:.12g}")
            v.setflags(write=False)
            object.__setattr__(self, name, v)

    @property
    def states(self) -> tuple[np.ndarray, np.ndarray]:
        return self.psi0, self.psi1

    def __eq__(self, other):
        if not isinstance(other, SealScheme):
            return NotImplemented
        return (self.dim_b == other.dim_b and self.dim_a == other.dim_a
                and np.array_equal(self.psi0, other.psi0)
                and np.array_equal(self.psi1, other.psi1))


@dataclass(frozen=True)
class SchemeAnalysis:
    rho0: np.ndarray
    rho1: np.ndarray
    q_max: float


def _check_qmax(q_max: float) -> float:
    q_max = float(q_max)
    if not (0.0 < q_max <= 1.0):
        raise QmaxOutOfRange(f"q_max must lie in (0, 1], got {q_max}")
    return q_max


def make_stringent_scheme(q_max: float) -> SealScheme:
    """Scheme with ancilla dimension 3 whose reductions are diag((1 +/- q_max)/2).

    For this scheme no reading strategy with classical distance ``q`` beats
    the min-max average fidelity, which makes it the witness used by the
    optimality oracle.
    """
    q_max = _check_qmax(q_max)
    w = math.sqrt(1.0 - q_max) / 2.0
    r = math.sqrt(q_max)
    psi = []
    for i in (0, 1):
        sign = -1.0 if i else 1.0
        m = np.zeros((2, 3), dtype=complex)
        # (|0> + sign|1>) (x) |0>_A
        m[0, 0] = w
        m[1, 0] = sign * w
        # (|0> - sign|1>) (x) |1>_A
        m[0, 1] = w
        m[1, 1] = -sign * w
        m[i, 2] = r
        psi.append(m.ravel())
    return SealScheme(2, 3, psi[0], psi[1])


def make_product_scheme(q_max: float) -> SealScheme:
    """Scheme without ancilla: two real qubit states at trace distance ``q_max``."""
    q_max = _check_qmax(q_max)
    hi = math.sqrt((1.0 + q_max) / 2.0)
    lo = math.sqrt((1.0 - q_max) / 2.0)
    return SealScheme(2, 1, np.array([hi, lo], dtype=complex), np.array([lo, hi], dtype=complex))


def analyze_scheme(s: SealScheme) -> SchemeAnalysis:
    rho0 = mc.partial_trace_over_a(s.psi0, s.dim_b, s.dim_a)
    rho1 = mc.partial_trace_over_a(s.psi1, s.dim_b, s.dim_a)
    return SchemeAnalysis(rho0, rho1, mc.trace_distance(rho0, rho1))


def is_stringent_pair(rho0, rho1, tol: float = 1e-9) -> bool:
    """True when the reductions are, up to a unitary, diag((1 +/- q)/2) on a qubit.

    That holds iff the two commute and sum to the identity.
    """
    rho0 = np.asarray(rho0)
    rho1 = np.asarray(rho1)
    if rho0.shape != (2, 2):
        return False
    return bool(np.max(np.abs(rho0 + rho1 - np.eye(2))) <= tol
                and np.max(np.abs(rho0 @ rho1 - rho1 @ rho0)) <= tol)


# -- scheme files -----------------------------------------------------------

def _format_state(v: np.ndarray) -> str:
    rows = ",\n".join(f"    [{float(z.real)!r}, {float(z.imag)!r}]" for z in v)
    return "[\n" + rows + "\n  ]"


def dumps_scheme(s: SealScheme) -> str:
    return (
        "{\n"
        f'  "dim_b": {s.dim_b},\n'
        f'  "dim_a": {s.dim_a},\n'
        f'  "psi0": {_format_state(s.psi0)},\n'
        f'  "psi1": {_format_state(s.psi1)}\n'
        "}\n"
    )


def save_scheme(s: SealScheme, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_scheme(s))


def _field_line(text: str, field: str) -> int | None:
    needle = f'"{field}"'
    for n, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return n
    return None


def _parse_dim(doc: dict, text: str, field: str) -> int:
    value = doc[field]
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ParseError("expected a positive integer", _field_line(text, field), field)
    return value


def _parse_state(doc: dict, text: str, field: str, n: int) -> np.ndarray:
    value = doc[field]
    line = _field_line(text, field)
    if not isinstance(value, list) or len(value) != n:
        raise ParseError(f"expected a list of {n} [re, im] pairs", line, field)
    out = np.empty(n, dtype=complex)
    for i, pair in enumerate(value):
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)):
            raise ParseError(f"entry {i} is not a [re, im] pair of numbers", line, field)
        out[i] = complex(float(pair[0]), float(pair[1]))
    return out


def loads_scheme(text: str) -> SealScheme:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("scheme document must be a JSON object", 1)
    for key in doc:
        if key not in SCHEME_FIELDS:
            raise ParseError("unknown field", _field_line(text, key), key)
    for key in SCHEME_FIELDS:
        if key not in doc:
            raise ParseError("missing field", None, key)
    dim_b = _parse_dim(doc, text, "dim_b")
    dim_a = _parse_dim(doc, text, "dim_a")
    states = []
    for key in ("psi0", "psi1"):
        v = _parse_state(doc, text, key, dim_b * dim_a)
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > LOAD_NORM_TOL:
            raise NormalizationError(f"{key} has norm {norm:.12g}, expected 1")
        if abs(norm - 1.0) > NORM_TOL:
            v = v / norm
        states.append(v)
    return SealScheme(dim_b, dim_a, states[0], states[1])


def load_scheme(path) -> SealScheme:
    with open(os.fspath(path), encoding="utf-8") as fh:
        return loads_scheme(fh.read())
