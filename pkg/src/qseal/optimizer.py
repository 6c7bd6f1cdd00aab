"""Brute-force oracle: maximize average fidelity over general qubit POVMs.

For a scheme with a two-dimensional public factor, search K-outcome POVMs
whose outcome statistics sit at a fixed classical distance ``q`` and keep
the best average fidelity found. On the stringent scheme nothing should
beat ``fbar_minmax(q, q_max)``; ``verify_bound`` runs that check and also
tests the two entrywise inequalities behind it on every POVM it sees.

Search per restart:

1. start from the blended Helstrom attack (restart 0) or a Gaussian raw vector;
2. Nelder-Mead on ``F - w (q - q_target)^2`` with completeness enforced by
   retraction, doubling ``w`` over the penalty rounds;
3. slide along the segment to an anchor POVM with ``q = 0`` or ``q = q_max``
   until ``q`` hits the target (Brent root find), then re-evaluate exactly;
4. keep whichever of the start and end points scores higher.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize

from . import matrixcore as mc
from ._kernels import fidelity_and_distance, penalized_objective
from .attack import (
    HELSTROM_TOL,
    Q_SLACK,
    Povm,
    build_attack,
    classical_l1,
    helstrom_decomposition,
)
from .errors import (
    BoundViolation,
    DimensionMismatch,
    NoFeasiblePoint,
    ParamOutOfRange,
    QOutOfRange,
    SingularRetraction,
)
from .fidelity import average_fidelity, fbar_minmax
from .seal import SealScheme, analyze_scheme, make_stringent_scheme

SINGULAR_EIG = 1e-12
FEASIBILITY_TOL = 1e-6
BOUND_TOL = 1e-6
INEQUALITY_TOL = 1e-9


@dataclass(frozen=True)
class PovmParameterization:
    """``k`` qubit operators packed as ``8k`` reals (see ``qseal._kernels``)."""

    k: int
    raw: np.ndarray

    def __post_init__(self):
        raw = np.asarray(self.raw, dtype=float).ravel()
        if raw.size != 8 * self.k:
            raise DimensionMismatch(f"expected {8 * self.k} raw values, got {raw.size}")
        object.__setattr__(self, "raw", raw)

    def operators(self) -> np.ndarray:
        r = self.raw.reshape(self.k, 2, 2, 2)
        return r[..., 0] + 1j * r[..., 1]

    @classmethod
    def from_operators(cls, ops) -> PovmParameterization:
        ops = np.asarray(ops, dtype=complex)
        if ops.ndim != 3 or ops.shape[1:] != (2, 2):
            raise DimensionMismatch(f"expected (k, 2, 2) operators, got {ops.shape}")
        raw = np.stack([ops.real, ops.imag], axis=-1)
        return cls(ops.shape[0], raw.ravel())


def retract_operators(ops) -> np.ndarray:
    """Right-multiply every operator by ``S^(-1/2)`` with ``S = sum_j N_j^dag N_j``."""
    ops = np.asarray(ops, dtype=complex)
    s = np.einsum("jba,jbc->ac", ops.conj(), ops)
    lam, v = mc.hermitian_eigendecomposition(0.5 * (s + s.conj().T))
    if lam[0] <= SINGULAR_EIG:
        raise SingularRetraction(f"sum of N^dag N has eigenvalue {lam[0]:.3g}")
    inv_sqrt = (v / np.sqrt(lam)) @ v.conj().T
    return ops @ inv_sqrt


def retract_to_povm(p: PovmParameterization) -> Povm:
    return Povm(retract_operators(p.operators()))


def sample_raw(rng: np.random.Generator, k: int) -> np.ndarray:
    return rng.standard_normal(8 * k)


def sample_povm(rng: np.random.Generator, k: int) -> Povm:
    """Random qubit POVM: Gaussian operators pushed through the retraction."""
    return retract_to_povm(PovmParameterization(k, sample_raw(rng, k)))


def _pad(ops, k: int) -> np.ndarray:
    ops = np.asarray(ops, dtype=complex)
    out = np.zeros((k, 2, 2), dtype=complex)
    out[: len(ops)] = ops
    return out


def stringent_inequalities(povm: Povm, q: float, q_max: float) -> tuple[float, float, float]:
    """Left sides of the two diagonal-entry inequalities and the right side of the second.

    Returns ``(sum_j |alpha_j|^2 + |delta_j|^2, sum_j 2 Re(alpha_j conj(delta_j)),
    2 sqrt(1 - q^2/q_max^2))``; the first must stay <= 2.
    """
    alpha = povm.operators[:, 0, 0]
    delta = povm.operators[:, 1, 1]
    diag_mass = float(np.sum(np.abs(alpha) ** 2 + np.abs(delta) ** 2))
    cross = float(np.sum(2.0 * (alpha * delta.conj()).real))
    ratio = 1.0 if q >= q_max - Q_SLACK else q / q_max
    return diag_mass, cross, 2.0 * math.sqrt(max(0.0, 1.0 - ratio * ratio))


@dataclass
class OptimizationResult:
    best_fbar: float
    best_povm: Povm
    achieved_q: float
    restarts_used: int
    gap_to_bound: float
    q_target: float
    q_max: float
    warm_fbar: float | None = None
    candidates: list = field(default_factory=list, repr=False)  # (restart, Povm, q, F)
    samples: list = field(default_factory=list, repr=False)  # random starting POVMs


class _Search:
    def __init__(self, s: SealScheme, q_target: float, k: int):
        an = analyze_scheme(s)
        self.scheme = s
        self.k = k
        self.q_target = q_target
        self.q_max = an.q_max
        self.rho0 = np.ascontiguousarray(an.rho0)
        self.rho1 = np.ascontiguousarray(an.rho1)
        self.low_anchor = PovmParameterization.from_operators(
            np.repeat(np.eye(2, dtype=complex)[None] / math.sqrt(k), k, axis=0)).raw
        if an.q_max > HELSTROM_TOL:
            d = helstrom_decomposition(an.rho0, an.rho1)
            self.warm = PovmParameterization.from_operators(
                _pad(build_attack(d, q_target, an.q_max).operators, k)).raw
            self.high_anchor = PovmParameterization.from_operators(
                _pad(d.helstrom_povm().operators, k)).raw
        else:
            self.warm = PovmParameterization.from_operators(_pad(np.eye(2)[None], k)).raw
            self.high_anchor = None

    def distance(self, x) -> float:
        f, q, ok = fidelity_and_distance(x, self.k, self.rho0, self.rho1)
        if not ok:
            raise SingularRetraction("singular operators on restoration path")
        return q

    def local_search(self, x, rounds: int, weight: float, max_iter: int, fatol: float):
        per_round = max_iter // rounds
        budgets = [per_round] * rounds
        budgets[0] += max_iter - per_round * rounds
        for budget in budgets:
            res = minimize(
                penalized_objective, x,
                args=(self.k, weight, self.q_target, self.rho0, self.rho1),
                method="Nelder-Mead",
                options={"maxiter": budget, "fatol": fatol, "xatol": 1e-12, "adaptive": True},
            )
            x = res.x
            weight *= 2.0
        return x

    def restore(self, x, tol: float = 1e-13):
        """Move ``x`` toward an anchor until the classical distance equals the target."""
        g0 = self.distance(x) - self.q_target
        if abs(g0) <= tol:
            return x
        anchor = self.low_anchor if g0 > 0 else self.high_anchor
        if anchor is None:
            return x

        def g(t):
            return self.distance((1.0 - t) * x + t * anchor) - self.q_target

        g1 = g(1.0)
        if abs(g1) <= tol:
            return anchor.copy()
        if np.sign(g1) == np.sign(g0):
            return x
        t = brentq(g, 0.0, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
        return (1.0 - t) * x + t * anchor


    def finish(self, x):
        """Restore, retract and exactly evaluate ``x``; None if infeasible."""
        try:
            x = self.restore(x)
            povm = retract_to_povm(PovmParameterization(self.k, x))
        except (SingularRetraction, ValueError):
            return None
        q = classical_l1(povm, self.rho0, self.rho1)
        if abs(q - self.q_target) > FEASIBILITY_TOL:
            return None
        return povm, q, average_fidelity(self.scheme, povm)


def maximize_fidelity(s: SealScheme, q_target: float, k: int = 4, restarts: int = 64,
                      seed: int = 0, *, rounds: int = 12, initial_weight: float = 10.0,
                      max_iter: int = 2000, fatol: float = 1e-10) -> OptimizationResult:
    """Best average fidelity over ``k``-outcome POVMs at classical distance ``q_target``.

    Restart 0 starts from the blended Helstrom attack; the others from
    Gaussian raw vectors seeded by ``(seed, restart)``. ``max_iter`` is the
    simplex iteration budget per restart, shared by the penalty rounds.
    Only POVMs within 1e-6 of the target distance are eligible, and the
    reported fidelity is the exact simulation of the returned POVM.
    """
    if s.dim_b != 2:
        raise DimensionMismatch("the POVM search handles dim_b = 2 only")
    if k < 2:
        raise ParamOutOfRange(f"need k >= 2 outcomes, got {k}")
    if restarts < 1:
        raise ParamOutOfRange(f"need restarts >= 1, got {restarts}")
    search = _Search(s, float(q_target), int(k))
    if q_target < 0.0 or q_target > search.q_max + 1e-12:
        raise QOutOfRange(f"q_target = {q_target} outside [0, q_max = {search.q_max}]")

    candidates = []
    samples = []
    warm_fbar = None
    for r in range(restarts):
        if r == 0:
            x0 = search.warm.copy()
        else:
            x0 = sample_raw(np.random.default_rng([seed, r]), k)
            try:
                samples.append(retract_to_povm(PovmParameterization(k, x0)))
            except SingularRetraction:
                pass
        x = search.local_search(x0, rounds, initial_weight, max_iter, fatol)
        # the search may trade fidelity for a small q error; keep the warm start if it was better
        found = [search.finish(x)] + ([search.finish(x0)] if r == 0 else [])
        found = [c for c in found if c is not None]
        if not found:
            continue
        povm, q, f = max(found, key=lambda c: c[2])
        if r == 0:
            warm_fbar = f
        candidates.append((r, povm, q, f))

    if not candidates:
        raise NoFeasiblePoint(
            f"no restart reached |q - {q_target}| <= {FEASIBILITY_TOL}; "
            "increase max_iter or the number of penalty rounds")
    # ties resolved toward the lowest restart index
    best = max(candidates, key=lambda c: (c[3], -c[0]))
    if search.q_max > HELSTROM_TOL:
        gap = best[3] - fbar_minmax(min(q_target, search.q_max), search.q_max)
    else:
        gap = best[3] - 1.0
    return OptimizationResult(
        best_fbar=best[3], best_povm=best[1], achieved_q=best[2], restarts_used=restarts,
        gap_to_bound=gap, q_target=float(q_target), q_max=search.q_max, warm_fbar=warm_fbar,
        candidates=candidates, samples=samples,
    )


@dataclass(frozen=True)
class BoundRow:
    q: float
    best_fbar: float
    bound: float
    gap: float
    achieved_q: float
    warm_fbar: float | None
    povms_checked: int


@dataclass(frozen=True)
class BoundReport:
    q_max: float
    k: int
    restarts: int
    seed: int
    rows: tuple

    @property
    def max_gap(self) -> float:
        return max(r.gap for r in self.rows)


def check_povm_against_bound(povm: Povm, rho0, rho1, q_max: float, q: float | None = None):
    """Raise ``BoundViolation`` if ``povm`` breaks either inequality on the stringent reductions."""
    if q is None:
        q = classical_l1(povm, rho0, rho1)
    q = min(q, q_max)
    diag_mass, cross, cross_bound = stringent_inequalities(povm, q, q_max)
    if diag_mass > 2.0 + INEQUALITY_TOL:
        raise BoundViolation(f"diagonal mass {diag_mass:.12g} exceeds 2", q, povm)
    if cross > cross_bound + INEQUALITY_TOL:
        raise BoundViolation(
            f"cross term {cross:.12g} exceeds {cross_bound:.12g} at q = {q:.12g}", q, povm)


def verify_bound(q_max: float, q_grid, k: int = 4, restarts: int = 64,
                 seed: int = 0) -> BoundReport:
    """Run the POVM search on the stringent scheme at every ``q`` in the grid.

    Raises ``BoundViolation`` if the search ever beats the min-max fidelity
    by more than 1e-6, or if any POVM it touched (random starts included)
    breaks the diagonal-entry inequalities.
    """
    s = make_stringent_scheme(q_max)
    an = analyze_scheme(s)
    rows = []
    for q in q_grid:
        q = float(q)
        if not (0.0 < q <= q_max):
            raise QOutOfRange(f"grid point {q} outside (0, q_max = {q_max}]")
        res = maximize_fidelity(s, q, k=k, restarts=restarts, seed=seed)
        bound = fbar_minmax(q, q_max)
        if res.best_fbar > bound + BOUND_TOL:
            raise BoundViolation(
                f"fidelity {res.best_fbar:.12g} beats bound {bound:.12g} at q = {q}",
                q, res.best_povm)
        checked = 0
        for _, povm, q_p, _ in res.candidates:
            check_povm_against_bound(povm, an.rho0, an.rho1, q_max, q_p)
            checked += 1
        for povm in res.samples:
            check_povm_against_bound(povm, an.rho0, an.rho1, q_max)
            checked += 1
        rows.append(BoundRow(q, res.best_fbar, bound, res.best_fbar - bound,
                             res.achieved_q, res.warm_fbar, checked))
    return BoundReport(q_max, k, restarts, seed, tuple(rows))
