"""Special-function and quadrature kernels on uniform grids.

Provides the Airy function Ai on the real line, physicists' Hermite
polynomials, and composite Simpson integration. Everything here is a pure
function of its inputs with no shared mutable state, so concurrent use is
safe.

Ai is evaluated in three branches:

* |z| <= 9: Maclaurin series Ai = c1*f(z) - c2*g(z). The two series reach
  ~1e7 before cancelling down to values as small as 1e-10, so the sums are
  accumulated in double-double (~32 significant digits) arithmetic.
* z > 9: monotonic asymptotic branch, Ai ~ e^{-zeta}/(2 sqrt(pi) z^{1/4})
  * sum_k (-1)^k u_k zeta^{-k}, zeta = (2/3) z^{3/2}.
* z < -9: oscillatory branch with phase zeta + pi/4 and the even/odd u_k
  subsums multiplying sin and cos.

Both asymptotic sums are truncated at their smallest term; at |z| = 9 the
optimal truncation error is ~e^{-36}, far below the seam tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ContractError, DomainError

__all__ = ["GridSpec", "airy_ai", "hermite", "integrate", "simpson_weights"]


@dataclass(frozen=True)
class GridSpec:
    """Uniform 1D coordinate grid, reproducible bit-for-bit from its fields."""

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)):
            raise DomainError("GridSpec bounds must be finite")
        if not self.x_min < self.x_max:
            raise DomainError(
                f"GridSpec requires x_min < x_max, got [{self.x_min}, {self.x_max}]"
            )
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise DomainError(f"GridSpec requires integer n_points >= 2, got {self.n_points}")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    def points(self) -> np.ndarray:
        # x_k = x_min + k*dx exactly; linspace rounds differently.
        return self.x_min + np.arange(self.n_points) * self.dx


# ----------------------------------------------------------------------
# double-double helpers (value = hi + lo, |lo| <= ulp(hi)/2)
# ----------------------------------------------------------------------

_SPLITTER = 134217729.0  # 2**27 + 1, Dekker split constant


def _two_sum(a, b):
    s = a + b
    t = s - a
    return s, (a - (s - t)) + (b - t)


def _fast_norm(hi, lo):
    s = hi + lo
    return s, lo - (s - hi)


def _two_prod(a, b):
    p = a * b
    ta = _SPLITTER * a
    ahi = ta - (ta - a)
    alo = a - ahi
    tb = _SPLITTER * b
    bhi = tb - (tb - b)
    blo = b - bhi
    err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, err


def _dd_mul(ahi, alo, bhi, blo):
    p, e = _two_prod(ahi, bhi)
    e = e + (ahi * blo + alo * bhi)
    return _fast_norm(p, e)


def _dd_fma_presplit(ahi, alo, bhi, bhi_h, bhi_l, blo, chi, clo):
    """One Horner step a*b + c in dd, with b pre-split.

    The product is left unnormalized before the addition (two_sum is exact
    for any operand split, so only a bounded-ulp term is deferred).
    """
    p = ahi * bhi
    ta = _SPLITTER * ahi
    ahi_h = ta - (ta - ahi)
    ahi_l = ahi - ahi_h
    e = ((ahi_h * bhi_h - p) + ahi_h * bhi_l + ahi_l * bhi_h) + ahi_l * bhi_l
    e = e + (ahi * blo + alo * bhi)
    s, e2 = _two_sum(p, chi)
    return _fast_norm(s, e + (e2 + clo))


def _dd_add(ahi, alo, bhi, blo):
    s, e = _two_sum(ahi, bhi)
    e = e + (alo + blo)
    return _fast_norm(s, e)


def _dd_from_str(text: str) -> tuple[float, float]:
    """Split a decimal literal into a double-double constant."""
    frac = Fraction(text)
    hi = float(frac)
    lo = float(frac - Fraction(hi))
    return hi, lo


# Ai(0) = 3^{-2/3}/Gamma(2/3), -Ai'(0) = 3^{-1/3}/Gamma(1/3)
_C1 = _dd_from_str("0.355028053887817239260063186004183176397979174")
_C2 = _dd_from_str("0.258819403792806798405183560189203963479091138")

# Terms k <= 50 leave a tail below 1e-33 at |z| = 9, far under the
# double-double accumulation floor.
_SERIES_TERMS = 50


def _series_coeff_tables() -> np.ndarray:
    """Double-double Maclaurin coefficients for f (row 0) and g (row 1).

    f(z) = sum a_k z^{3k},  a_k = a_{k-1}/((3k)(3k-1))
    g(z) = z * sum b_k z^{3k},  b_k = b_{k-1}/((3k)(3k+1))
    """
    a = [Fraction(1)]
    b = [Fraction(1)]
    for k in range(1, _SERIES_TERMS + 1):
        a.append(a[-1] / ((3 * k) * (3 * k - 1)))
        b.append(b[-1] / ((3 * k) * (3 * k + 1)))
    table = np.empty((2, _SERIES_TERMS + 1, 2))
    for k in range(_SERIES_TERMS + 1):
        for row, coeffs in ((0, a), (1, b)):
            hi = float(coeffs[k])
            lo = float(coeffs[k] - Fraction(hi))
            table[row, k] = (hi, lo)
    return table


_SERIES_COEFFS = _series_coeff_tables()
_CHI = [_SERIES_COEFFS[:, k, 0].reshape(2, 1) for k in range(_SERIES_TERMS + 1)]
_CLO = [_SERIES_COEFFS[:, k, 1].reshape(2, 1) for k in range(_SERIES_TERMS + 1)]


def _ai_series(z: np.ndarray) -> np.ndarray:
    """Maclaurin branch for |z| <= 9, double-double accumulation.

    Runs a fixed term count with no data-dependent control flow, so each
    element's result is bit-identical regardless of how calls are batched.
    """
    z = np.ravel(z)
    zero = np.zeros_like(z)
    z2h, z2l = _two_prod(z, z)
    wh, wl = _dd_mul(z2h, z2l, z, zero)  # w = z^3 to full precision
    tw = _SPLITTER * wh
    wh_h = tw - (tw - wh)
    wh_l = wh - wh_h

    # Horner over w for both series at once; rows: 0 -> f-sum, 1 -> g-sum.
    acc_hi = np.empty((2, z.size))
    acc_lo = np.empty((2, z.size))
    acc_hi[...] = _CHI[_SERIES_TERMS]
    acc_lo[...] = _CLO[_SERIES_TERMS]
    for k in range(_SERIES_TERMS - 1, -1, -1):
        acc_hi, acc_lo = _dd_fma_presplit(acc_hi, acc_lo, wh, wh_h, wh_l, wl,
                                          _CHI[k], _CLO[k])

    fh, fl = acc_hi[0], acc_lo[0]
    gh, gl = _dd_mul(acc_hi[1], acc_lo[1], z, zero)  # g(z) = z * g-sum

    t1h, t1l = _dd_mul(fh, fl, np.full_like(z, _C1[0]), np.full_like(z, _C1[1]))
    t2h, t2l = _dd_mul(gh, gl, np.full_like(z, _C2[0]), np.full_like(z, _C2[1]))
    rh, rl = _dd_add(t1h, t1l, -t2h, -t2l)
    return rh + rl


def _u_coefficients(count: int) -> np.ndarray:
    """Asymptotic-series coefficients u_k (u_0 = 1, u_1 = 5/72, ...)."""
    u = np.empty(count)
    u[0] = 1.0
    for k in range(1, count):
        u[k] = u[k - 1] * ((6 * k - 5) * (6 * k - 3) * (6 * k - 1)) / (216.0 * k * (2 * k - 1))
    return u


_U = _u_coefficients(52)


def _ai_asym_pos(z: np.ndarray) -> np.ndarray:
    """Monotonic asymptotic branch for z > 9.

    Each element is frozen independently, either at its smallest term or
    once terms can no longer change its sum; the loop exit is therefore a
    bitwise no-op and results do not depend on batching.
    """
    zeta = (2.0 / 3.0) * z ** 1.5
    total = np.ones_like(z)
    term = np.ones_like(z)
    done = np.zeros(z.shape, dtype=bool)
    for k in range(1, len(_U)):
        new_term = term * (-(_U[k] / _U[k - 1])) / zeta
        done |= np.abs(new_term) >= np.abs(term)
        done |= np.abs(new_term) < 1e-17 * np.abs(total)
        new_term = np.where(done, 0.0, new_term)
        total = total + new_term
        term = np.where(done, term, new_term)
        if done.all():
            break
    return np.exp(-zeta) * total / (2.0 * math.sqrt(math.pi) * z ** 0.25)


def _ai_asym_neg(z: np.ndarray) -> np.ndarray:
    """Oscillatory asymptotic branch for z < -9."""
    a = -z
    zeta = (2.0 / 3.0) * a ** 1.5
    phase = zeta + 0.25 * math.pi
    inv2 = 1.0 / (zeta * zeta)

    p_total = np.ones_like(a)
    p_term = np.ones_like(a)
    q_term = _U[1] / zeta
    q_total = q_term.copy()
    p_done = np.zeros(a.shape, dtype=bool)
    q_done = np.zeros(a.shape, dtype=bool)
    for j in range(1, (len(_U) - 1) // 2):
        new_p = p_term * (-(_U[2 * j] / _U[2 * j - 2])) * inv2
        p_done |= np.abs(new_p) >= np.abs(p_term)
        p_done |= np.abs(new_p) < 1e-17 * np.abs(p_total)
        new_p = np.where(p_done, 0.0, new_p)
        p_total = p_total + new_p
        p_term = np.where(p_done, p_term, new_p)

        new_q = q_term * (-(_U[2 * j + 1] / _U[2 * j - 1])) * inv2
        q_done |= np.abs(new_q) >= np.abs(q_term)
        q_done |= np.abs(new_q) < 1e-17 * np.abs(q_total)
        new_q = np.where(q_done, 0.0, new_q)
        q_total = q_total + new_q
        q_term = np.where(q_done, q_term, new_q)
        if p_done.all() and q_done.all():
            break
    return (np.sin(phase) * p_total - np.cos(phase) * q_total) / (
        math.sqrt(math.pi) * a ** 0.25
    )


def airy_ai(z):
    """Airy function Ai(z) for real z (scalar or array).

    Accurate to ~1e-12 absolute everywhere and ~1e-10 relative in the
    oscillatory region; validated against an independent quadrature oracle
    over [-60, 20] and well beyond.
    """
    scalar = np.isscalar(z) or np.ndim(z) == 0
    arr = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("airy_ai: argument must be finite")

    out = np.empty_like(arr)
    mid = np.abs(arr) <= 9.0
    pos = arr > 9.0
    neg = arr < -9.0
    if mid.any():
        out[mid] = _ai_series(arr[mid])
    if pos.any():
        out[pos] = _ai_asym_pos(arr[pos])
    if neg.any():
        out[neg] = _ai_asym_neg(arr[neg])
    return float(out) if scalar else out


def hermite(n: int, x):
    """Physicists' Hermite polynomial H_n(x) via the three-term recurrence.

    H_{k+1} = 2x H_k - 2k H_{k-1}; scalar or array x.
    """
    if int(n) != n or n < 0:
        raise DomainError(f"hermite: order must be a non-negative integer, got {n}")
    scalar = np.isscalar(x) or np.ndim(x) == 0
    arr = np.asarray(x, dtype=float)
    h_prev = np.ones_like(arr)
    if n == 0:
        return float(h_prev) if scalar else h_prev
    h = 2.0 * arr
    for k in range(1, n):
        h, h_prev = 2.0 * arr * h - 2.0 * k * h_prev, h
    return float(h) if scalar else h


def simpson_weights(n_points: int, dx: float) -> np.ndarray:
    """Quadrature weights on a uniform grid.

    Composite Simpson for an even interval count; trapezoid fallback when
    the interval count is odd (even n_points).
    """
    if n_points < 2:
        raise DomainError("quadrature needs at least 2 points")
    w = np.ones(n_points)
    if (n_points - 1) % 2 == 0:
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        w *= dx / 3.0
    else:
        w[1:-1] = 2.0
        w *= dx / 2.0
    return w


def integrate(samples, grid: GridSpec):
    """Integrate samples on the grid; O(dx^4) on smooth integrands."""
    arr = np.asarray(samples)
    if arr.shape != (grid.n_points,):
        raise ContractError(
            f"integrate: got {arr.shape[0] if arr.ndim == 1 else arr.shape} samples "
            f"for a {grid.n_points}-point grid"
        )
    return np.sum(simpson_weights(grid.n_points, grid.dx) * arr)
