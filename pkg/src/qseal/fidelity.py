"""Average fidelity of sealed states after a reading attack.

Two routes are provided and cross-checked in the tests: exact simulation on
the joint state, and the closed forms in the overlap ``a`` and ``q_max``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .attack import (
    HELSTROM_TOL,
    Q_SLACK,
    Povm,
    apply_channel,
    expectation,
    helstrom_decomposition,
    lift,
    overlap_report,
)
from .errors import DimensionMismatch, ParamOutOfRange, QmaxZero
from .seal import SealScheme, analyze_scheme

RANGE_SLACK = 1e-9


@dataclass(frozen=True)
class FidelityReport:
    f_bar: float
    detection: float
    q: float
    q_max: float
    a: float | None = None


def average_fidelity(s: SealScheme, p: Povm) -> float:
    """``1/2 sum_i sum_j |<psi_i| N_j (x) I |psi_i>|^2``."""
    if p.dim != s.dim_b:
        raise DimensionMismatch(f"POVM acts on {p.dim}, scheme has dim_b={s.dim_b}")
    total = 0.0
    for n in p:
        big = lift(n, s.dim_a)
        for psi in s.states:
            total += abs(expectation(big, psi)) ** 2
    return 0.5 * total


def verification_pass_probability(s: SealScheme, p: Povm, bit: int) -> float:
    """Probability that the attacked joint state passes a projective check onto ``psi_bit``."""
    if bit not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {bit!r}")
    psi = s.states[bit]
    out = apply_channel(p, psi, s.dim_b, s.dim_a)
    return float(np.vdot(psi, out @ psi).real)


def _radical(q: float, q_max: float) -> float:
    if q >= q_max - Q_SLACK:
        return 0.0
    return math.sqrt(max(0.0, 1.0 - (q / q_max) ** 2))


def _check_q(q: float, q_max: float):
    if q_max <= 0.0:
        raise QmaxZero("the min-max fidelity is undefined at q_max = 0")
    if q_max > 1.0 + RANGE_SLACK:
        raise ParamOutOfRange(f"q_max = {q_max} exceeds 1")
    if q < 0.0 or q > q_max + RANGE_SLACK:
        raise ParamOutOfRange(f"q = {q} outside [0, q_max = {q_max}]")


def fbar_at_a(a: float, q: float, q_max: float) -> float:
    """Average fidelity of the blended Helstrom attack as a function of the overlap ``a``."""
    _check_q(q, q_max)
    if a < q_max - RANGE_SLACK or a > 1.0 + RANGE_SLACK:
        raise ParamOutOfRange(f"a = {a} outside [q_max = {q_max}, 1]")
    r = _radical(q, q_max)
    return ((1 - 2 * a) * (1 + q_max) + 2 * a * a + q_max * q_max
            - (2 * a * a + (q_max - 2 * a) * (1 + q_max)) * r)


def fbar_minmax(q: float, q_max: float) -> float:
    """Min over schemes of the max over attacks of the average fidelity at distance ``q``.

    Returns exactly 1 at ``q = 0`` (the reader leaves the state alone).
    Raises ``QmaxZero`` at ``q_max = 0``, where the value is discontinuous.
    """
    _check_q(q, q_max)
    if q == 0.0:
        return 1.0
    return 0.5 * (1 + q_max * q_max) + 0.5 * (1 - q_max * q_max) * _radical(q, q_max)


def fidelity_report(s: SealScheme, p: Povm, q: float) -> FidelityReport:
    an = analyze_scheme(s)
    a = None
    if an.q_max > HELSTROM_TOL:
        a = overlap_report(s, helstrom_decomposition(an.rho0, an.rho1)).a
    f = average_fidelity(s, p)
    return FidelityReport(f_bar=f, detection=1.0 - f, q=q, q_max=an.q_max, a=a)
