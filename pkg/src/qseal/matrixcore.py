"""Dense complex linear algebra shared by the rest of the package.

Matrices and state vectors are plain ``numpy`` complex arrays. Bipartite
vectors use one global index convention, B-major / A-minor::

    index = b * dim_a + a

so ``psi.reshape(dim_b, dim_a)`` puts the public factor on rows, and
``tensor_product(op_b, op_a)`` acts on such vectors without reordering.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, InvalidDensityMatrix, NoConvergence, NotHermitian

HERMITIAN_TOL = 1e-12
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
MAX_DIM = 64


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # real, ascending
    eigenvectors: np.ndarray  # orthonormal columns


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionMismatch(f"expected a non-empty 2-d matrix, got shape {m.shape}")
    return m


def is_hermitian(h, tol: float = HERMITIAN_TOL) -> bool:
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        return False
    return bool(np.max(np.abs(h - h.conj().T), initial=0.0) <= tol)


def dagger(a) -> np.ndarray:
    return np.asarray(a).conj().T


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product, entry ``(ia*rows_b + ib, ja*cols_b + jb)`` = ``a[ia, ja] * b[ib, jb]``."""
    a = as_matrix(a)
    b = as_matrix(b)
    ra, ca = a.shape
    rb, cb = b.shape
    out = a[:, None, :, None] * b[None, :, None, :]
    return out.reshape(ra * rb, ca * cb)


def _jacobi_pair(h: np.ndarray, p: int, q: int) -> np.ndarray | None:
    """2x2 unitary that zeroes ``h[p, q]`` under ``J^H h J``; None if already zero."""
    hpq = h[p, q]
    mag = abs(hpq)
    if mag == 0.0:
        return None
    phase = hpq / mag
    theta = (h[q, q].real - h[p, p].real) / (2.0 * mag)
    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
    if theta < 0.0:
        t = -t
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    # phase fix diag(1, conj(phase)) makes the pair real, then a real rotation
    return np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=complex)


def hermitian_eigendecomposition(h, tol: float = JACOBI_TOL,
                                 max_sweeps: int = JACOBI_MAX_SWEEPS) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Sweeps over all upper-triangular pairs until the largest off-diagonal
    magnitude drops to ``tol * max(1, max|h|)``.

    Raises
    ------
    NotHermitian
        If ``h`` is not square or deviates from its adjoint by more than 1e-12.
    NoConvergence
        If ``max_sweeps`` sweeps do not reach the tolerance.
    """
    h = as_matrix(h)
    if not is_hermitian(h):
        raise NotHermitian("matrix is not Hermitian within 1e-12")
    n = h.shape[0]
    if n > MAX_DIM:
        raise DimensionMismatch(f"dimension {n} exceeds supported maximum {MAX_DIM}")

    a = 0.5 * (h + h.conj().T)
    v = np.eye(n, dtype=complex)
    threshold = tol * max(1.0, float(np.max(np.abs(h))))

    def off_max(m):
        if n == 1:
            return 0.0
        return float(np.max(np.abs(m[np.triu_indices(n, 1)])))

    sweeps = 0
    while off_max(a) > threshold:
        if sweeps >= max_sweeps:
            raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) <= 0.01 * threshold:
                    continue
                j = _jacobi_pair(a, p, q)
                if j is None:
                    continue
                idx = [p, q]
                a[:, idx] = a[:, idx] @ j
                a[idx, :] = j.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ j
        sweeps += 1

    w = np.real(np.diag(a)).copy()
    order = np.argsort(w, kind="stable")
    return EigenDecomposition(w[order], v[:, order])


def partial_trace_over_a(state, dim_b: int, dim_a: int) -> np.ndarray:
    """Reduced ``dim_b x dim_b`` matrix of a bipartite pure state (private factor traced out)."""
    psi = np.asarray(state, dtype=complex).ravel()
    if psi.size != dim_b * dim_a:
        raise DimensionMismatch(
            f"state of length {psi.size} does not match dim_b*dim_a = {dim_b * dim_a}")
    m = psi.reshape(dim_b, dim_a)
    rho = m @ m.conj().T
    return 0.5 * (rho + rho.conj().T)


def check_density_matrix(rho, tol: float = 1e-8) -> np.ndarray:
    rho = as_matrix(rho)
    if rho.shape[0] != rho.shape[1]:
        raise InvalidDensityMatrix(f"density matrix must be square, got {rho.shape}")
    if not is_hermitian(rho, tol):
        raise InvalidDensityMatrix("density matrix is not Hermitian")
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol:
        raise InvalidDensityMatrix(f"trace {tr.real:.12g} differs from 1")
    lam = hermitian_eigendecomposition(0.5 * (rho + rho.conj().T)).eigenvalues
    if lam[0] < -tol:
        raise InvalidDensityMatrix(f"negative eigenvalue {lam[0]:.3g}")
    return rho


def trace_distance(rho0, rho1) -> float:
    """Half the trace norm of ``rho0 - rho1``."""
    rho0 = as_matrix(rho0)
    rho1 = as_matrix(rho1)
    if rho0.shape != rho1.shape:
        raise DimensionMismatch(f"shapes {rho0.shape} and {rho1.shape} differ")
    check_density_matrix(rho0)
    check_density_matrix(rho1)
    diff = rho0 - rho1
    lam = hermitian_eigendecomposition(0.5 * (diff + diff.conj().T)).eigenvalues
    return float(min(1.0, 0.5 * np.sum(np.abs(lam))))


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def projector(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=complex).ravel()
    return np.outer(v, v.conj())
