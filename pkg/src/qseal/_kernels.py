"""Compiled inner loop for the qubit POVM search.

Raw parameter layout, 8 reals per operator ``N_j = [[alpha, beta], [gamma, delta]]``::

    x[8j + 4r + 2c + 0] = Re N_j[r, c]
    x[8j + 4r + 2c + 1] = Im N_j[r, c]

Operators are retracted onto the POVM set (right-multiplied by
``S^(-1/2)``, ``S = sum_j N_j^dag N_j``) with the closed-form 2x2 square
root before evaluation. Falls back to plain Python when numba is missing.
"""

import math

try:
    from numba import njit
except ImportError:  # pragma: no cover
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

SINGULAR_DET = 1e-24


@njit(cache=True)
def fidelity_and_distance(x, k, rho0, rho1):
    """Return ``(F, q, ok)`` for the retracted operators encoded in ``x``.

    ``F = 1/2 sum_ij |Tr(N_j rho_i)|^2`` is the average fidelity of any
    purification with these reductions; ``q`` is the classical distance of
    the outcome statistics. ``ok`` is False when the retraction is singular.
    """
    s00 = 0.0
    s11 = 0.0
    s01 = 0j
    for j in range(k):
        o = 8 * j
        a = complex(x[o], x[o + 1])
        b = complex(x[o + 2], x[o + 3])
        c = complex(x[o + 4], x[o + 5])
        d = complex(x[o + 6], x[o + 7])
        s00 += a.real * a.real + a.imag * a.imag + c.real * c.real + c.imag * c.imag
        s11 += b.real * b.real + b.imag * b.imag + d.real * d.real + d.imag * d.imag
        s01 += a.conjugate() * b + c.conjugate() * d
    det = s00 * s11 - (s01.real * s01.real + s01.imag * s01.imag)
    if det <= SINGULAR_DET:
        return 0.0, 0.0, False
    # sqrt(S) = (S + sqrt(det) I) / sqrt(tr S + 2 sqrt(det)), then invert the 2x2
    sd = math.sqrt(det)
    t = math.sqrt(s00 + s11 + 2.0 * sd)
    r00 = (s00 + sd) / t
    r11 = (s11 + sd) / t
    r01 = s01 / t
    dr = r00 * r11 - (r01.real * r01.real + r01.imag * r01.imag)
    i00 = r11 / dr
    i11 = r00 / dr
    i01 = -r01 / dr
    i10 = i01.conjugate()

    f = 0.0
    l1 = 0.0
    for j in range(k):
        o = 8 * j
        a = complex(x[o], x[o + 1])
        b = complex(x[o + 2], x[o + 3])
        c = complex(x[o + 4], x[o + 5])
        d = complex(x[o + 6], x[o + 7])
        m00 = a * i00 + b * i10
        m01 = a * i01 + b * i11
        m10 = c * i00 + d * i10
        m11 = c * i01 + d * i11
        e00 = abs(m00) ** 2 + abs(m10) ** 2
        e11 = abs(m01) ** 2 + abs(m11) ** 2
        e01 = m00.conjugate() * m01 + m10.conjugate() * m11
        p0 = e00 * rho0[0, 0].real + e11 * rho0[1, 1].real + 2.0 * (e01 * rho0[1, 0]).real
        p1 = e00 * rho1[0, 0].real + e11 * rho1[1, 1].real + 2.0 * (e01 * rho1[1, 0]).real
        l1 += abs(p0 - p1)
        t0 = m00 * rho0[0, 0] + m01 * rho0[1, 0] + m10 * rho0[0, 1] + m11 * rho0[1, 1]
        t1 = m00 * rho1[0, 0] + m01 * rho1[1, 0] + m10 * rho1[0, 1] + m11 * rho1[1, 1]
        f += abs(t0) ** 2 + abs(t1) ** 2
    return 0.5 * f, 0.5 * l1, True


@njit(cache=True)
def penalized_objective(x, k, weight, q_target, rho0, rho1):
    """Negated ``F - weight * (q - q_target)^2``, for minimization."""
    f, q, ok = fidelity_and_distance(x, k, rho0, rho1)
    if not ok:
        return 1e6
    dq = q - q_target
    return -(f - weight * dq * dq)
