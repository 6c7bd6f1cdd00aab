"""Reading attacks on sealed bits.

The central construction blends the Helstrom projectors of a scheme,
``M0 = c+ P0 + c- P1`` and ``M1 = c- P0 + c+ P1`` with
``c+/- = sqrt((1 +/- q/q_max) / 2)``, which tunes the classical distance of
the outcome statistics continuously from 0 (identity channel) to ``q_max``
(the Helstrom measurement).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import matrixcore as mc
from .errors import (
    DimensionMismatch,
    IncompletePovm,
    QmaxZero,
    QOutOfRange,
    WrongOutcomeCount,
)
from .seal import SealScheme, analyze_scheme

HELSTROM_TOL = 1e-10
COMPLETENESS_TOL = 1e-9
Q_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class Povm:
    """Measurement operators ``N_j`` on the public factor, stacked as ``(k, d, d)``."""

    operators: np.ndarray

    def __post_init__(self):
        ops = np.array(self.operators, dtype=complex)
        if ops.ndim == 2:
            ops = ops[None]
        if ops.ndim != 3 or ops.shape[1] != ops.shape[2] or ops.shape[0] < 1:
            raise DimensionMismatch(f"operators must have shape (k, d, d), got {ops.shape}")
        ops.setflags(write=False)
        object.__setattr__(self, "operators", ops)
        err = self.completeness_error()
        if err > COMPLETENESS_TOL:
            raise IncompletePovm(f"sum of N^dag N deviates from I by {err:.3g}")

    @property
    def k(self) -> int:
        return self.operators.shape[0]

    @property
    def dim(self) -> int:
        return self.operators.shape[1]

    def effects(self) -> np.ndarray:
        """``N_j^dag N_j`` for every outcome."""
        ops = self.operators
        return np.einsum("jba,jbc->jac", ops.conj(), ops)

    def completeness_error(self) -> float:
        s = self.effects().sum(axis=0)
        return float(np.max(np.abs(s - np.eye(self.dim))))

    def __iter__(self):
        return iter(self.operators)

    def __len__(self):
        return self.k


def identity_povm(dim: int) -> Povm:
    return Povm(np.eye(dim, dtype=complex)[None])


@dataclass(frozen=True)
class HelstromDecomposition:
    q0: np.ndarray
    q1: np.ndarray
    pi0: np.ndarray
    pi1: np.ndarray

    def helstrom_povm(self) -> Povm:
        return Povm(np.stack([self.pi0, self.pi1]))


@dataclass(frozen=True)
class OverlapReport:
    """Overlap ``a = <psi0| P0 (x) I |psi0>`` and its three consequences.

    The ``*_direct`` fields are expectation values computed from the states;
    the plain fields come from ``a`` and ``q_max`` by arithmetic.
    """

    a: float
    q_max: float
    one_minus_a: float
    a_minus_qmax: float
    complement: float
    one_minus_a_direct: float
    a_minus_qmax_direct: float
    complement_direct: float

    @property
    def max_discrepancy(self) -> float:
        return max(abs(self.one_minus_a - self.one_minus_a_direct),
                   abs(self.a_minus_qmax - self.a_minus_qmax_direct),
                   abs(self.complement - self.complement_direct))


def helstrom_decomposition(rho0, rho1, tol: float = HELSTROM_TOL) -> HelstromDecomposition:
    """Split ``rho0 - rho1`` into positive parts with orthogonal support.

    Eigenvalues inside ``[-tol, tol]`` are assigned to ``pi1``.
    """
    rho0 = mc.as_matrix(rho0)
    rho1 = mc.as_matrix(rho1)
    if rho0.shape != rho1.shape:
        raise DimensionMismatch(f"shapes {rho0.shape} and {rho1.shape} differ")
    diff = rho0 - rho1
    lam, vec = mc.hermitian_eigendecomposition(0.5 * (diff + diff.conj().T))
    pos = lam > tol
    neg = lam < -tol
    if not pos.any() and not neg.any():
        raise QmaxZero("rho0 - rho1 vanishes; no Helstrom projectors exist")
    vp = vec[:, pos]
    vn = vec[:, neg]
    q0 = (vp * lam[pos]) @ vp.conj().T
    q1 = (vn * -lam[neg]) @ vn.conj().T
    pi0 = vp @ vp.conj().T
    pi1 = np.eye(rho0.shape[0]) - pi0
    return HelstromDecomposition(q0, q1, pi0, pi1)


def attack_coefficients(q: float, q_max: float) -> tuple[float, float]:
    """``(sqrt((1 + q/q_max)/2), sqrt((1 - q/q_max)/2))``."""
    if q_max <= 0.0:
        raise QmaxZero("q_max must be positive")
    if q < 0.0 or q > q_max + Q_SLACK:
        raise QOutOfRange(f"q = {q} outside [0, q_max = {q_max}]")
    # snap so rounding in a computed q_max does not leak through the square root
    ratio = 1.0 if q >= q_max - Q_SLACK else q / q_max
    return math.sqrt(0.5 * (1.0 + ratio)), math.sqrt(0.5 * (1.0 - ratio))


def build_attack(d: HelstromDecomposition, q: float, q_max: float) -> Povm:
    hi, lo = attack_coefficients(q, q_max)
    m0 = hi * d.pi0 + lo * d.pi1
    m1 = lo * d.pi0 + hi * d.pi1
    return Povm(np.stack([m0, m1]))


def scheme_attack(s: SealScheme, q: float) -> Povm:
    """``build_attack`` for a scheme, deriving its Helstrom split and ``q_max``."""
    an = analyze_scheme(s)
    return build_attack(helstrom_decomposition(an.rho0, an.rho1), q, an.q_max)


def _check_povm_dim(p: Povm, dim: int):
    if p.dim != dim:
        raise DimensionMismatch(f"POVM acts on dimension {p.dim}, state has {dim}")


def outcome_distribution(p: Povm, rho) -> np.ndarray:
    rho = mc.as_matrix(rho)
    _check_povm_dim(p, rho.shape[0])
    probs = np.einsum("jab,ba->j", p.effects(), rho).real
    probs[(probs < 0.0) & (probs >= -1e-12)] = 0.0
    return probs


def classical_l1(p: Povm, rho0, rho1) -> float:
    """Half the L1 distance between the outcome distributions on two states."""
    p0 = outcome_distribution(p, rho0)
    p1 = outcome_distribution(p, rho1)
    return float(0.5 * np.sum(np.abs(p0 - p1)))


def lift(op, dim_a: int) -> np.ndarray:
    """``op (x) I_A`` in the global index convention."""
    return mc.tensor_product(op, np.eye(dim_a))


def _check_state(psi, dim_b: int, dim_a: int) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.size != dim_b * dim_a:
        raise DimensionMismatch(f"state length {psi.size} != {dim_b}*{dim_a}")
    return psi


def apply_channel(p: Povm, psi, dim_b: int, dim_a: int) -> np.ndarray:
    """Post-measurement joint state ``sum_j (N_j (x) I)|psi><psi|(N_j (x) I)^dag``."""
    psi = _check_state(psi, dim_b, dim_a)
    _check_povm_dim(p, dim_b)
    out = np.zeros((psi.size, psi.size), dtype=complex)
    for n in p:
        v = lift(n, dim_a) @ psi
        out += np.outer(v, v.conj())
    return out


def expectation(op, psi) -> complex:
    psi = np.asarray(psi, dtype=complex).ravel()
    return complex(np.vdot(psi, op @ psi))


def guess_probability(s: SealScheme, p: Povm) -> float:
    """Success probability of reading outcome ``j`` as bit ``j`` with equal priors."""
    if p.k != 2:
        raise WrongOutcomeCount(f"guessing needs exactly 2 outcomes, POVM has {p.k}")
    _check_povm_dim(p, s.dim_b)
    eff = p.effects()
    total = 0.0
    for i, psi in enumerate(s.states):
        total += expectation(lift(eff[i], s.dim_a), psi).real
    return 0.5 * total


def overlap_report(s: SealScheme, d: HelstromDecomposition) -> OverlapReport:
    if d.pi0.shape[0] != s.dim_b:
        raise DimensionMismatch(f"projectors act on {d.pi0.shape[0]}, scheme has dim_b={s.dim_b}")
    q_max = analyze_scheme(s).q_max
    p0 = lift(d.pi0, s.dim_a)
    p1 = lift(d.pi1, s.dim_a)
    a = expectation(p0, s.psi0).real
    return OverlapReport(
        a=a,
        q_max=q_max,
        one_minus_a=1.0 - a,
        a_minus_qmax=a - q_max,
        complement=1.0 - a + q_max,
        one_minus_a_direct=expectation(p1, s.psi0).real,
        a_minus_qmax_direct=expectation(p0, s.psi1).real,
        complement_direct=expectation(p1, s.psi1).real,
    )
