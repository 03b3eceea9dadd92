"""Phase-space representation: Wigner transform, marginals, negativity.

Convention: W(x, p) = (1/pi) * integral dy conj(psi)(x+y) psi(x-y) e^{2ipy},
so that the vacuum peaks at W(0,0) = 1/pi and the total mass is 1.

At each x the y integration runs over the largest symmetric interval that
keeps both x+y and x-y on the grid; states are expected to decay below
~1e-10 at the grid edges (the states module enforces support margins), so
the truncation is harmless. Because the integrand at -y is the complex
conjugate of the integrand at +y, the symmetric quadrature sum is real by
construction; the imaginary residue it discards is provably below
round-off, which the test suite verifies against an unfolded evaluation.

The transform is evaluated by direct quadrature (two real matrix products
per block of rows). Rows are independent, so blocks may be dispatched to a
thread pool; the block size is fixed, making results bit-identical for any
worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DomainError
from .numerics import GridSpec, simpson_weights
from .states import WaveFunction

__all__ = [
    "WignerGrid",
    "transform",
    "marginal_x",
    "marginal_p",
    "negativity_volume",
    "integrate_2d",
    "wigner_to_json",
    "wigner_from_json",
    "write_wigner_csv",
]

_ROW_BLOCK = 64  # rows per worker task; fixed so threading cannot change results

#: Default momentum axis, matching the default coordinate grid.
DEFAULT_P_AXIS = GridSpec(-10.0, 10.0, 801)


def default_thread_count() -> int:
    env = os.environ.get("CATGATE_THREADS", "")
    if env.strip():
        try:
            n = int(env)
        except ValueError as exc:
            raise DomainError(f"CATGATE_THREADS must be an integer, got {env!r}") from exc
        if n < 1:
            raise DomainError(f"CATGATE_THREADS must be >= 1, got {n}")
        return n
    return min(os.cpu_count() or 1, 4)


@dataclass(frozen=True)
class WignerGrid:
    """Real W(x, p) samples; values[i, j] = W(x_i, p_j)."""

    x_axis: GridSpec
    p_axis: GridSpec
    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        if arr.shape != (self.x_axis.n_points, self.p_axis.n_points):
            raise ContractError(
                f"WignerGrid values must have shape "
                f"({self.x_axis.n_points}, {self.p_axis.n_points}), got {arr.shape}"
            )
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)


def transform(psi: WaveFunction, p_axis: GridSpec = DEFAULT_P_AXIS,
              threads: int | None = None) -> WignerGrid:
    """Wigner transform of a normalized wavefunction onto (its grid) x p_axis."""
    grid = psi.grid
    dx = grid.dx
    p_lim = math.pi / dx
    if max(abs(p_axis.x_min), abs(p_axis.x_max)) > p_lim:
        raise DomainError(
            f"p_axis exceeds the Nyquist limit |p| <= pi/dx = {p_lim:.3f} "
            f"for dx = {dx}"
        )
    dev = abs(psi.norm() - 1.0)
    if dev > 1e-6:
        raise ContractError(f"transform: input must be normalized (|norm-1| = {dev:.2e})")
    n = grid.n_points
    a = psi.amplitudes
    idx = np.arange(n)
    k_rows = np.minimum(idx, n - 1 - idx)  # per-row half-width in grid steps
    k_max = int(k_rows.max())
    k = np.arange(k_max + 1)

    # Correlation g[i, k] = conj(a[i+k]) * a[i-k] for k <= k_rows[i], else 0.
    ip = np.minimum(idx[:, None] + k[None, :], n - 1)
    im = np.maximum(idx[:, None] - k[None, :], 0)
    g = np.conj(a)[ip] * a[im]

    # Simpson weights for the symmetric interval [-K dx, K dx]; node k sits
    # at position K + k from the left end. Negative-k nodes are folded into
    # a factor 2 on the real part (the integrand at -y is the conjugate).
    parity4 = (k_rows[:, None] + k[None, :]) % 2 == 1
    w = np.where(parity4, 4.0, 2.0)
    w = np.where(k[None, :] == k_rows[:, None], 1.0, w)
    w = np.where(k[None, :] > k_rows[:, None], 0.0, w)
    w[k_rows == 0, :] = 0.0  # zero-length interval at the grid edges
    w *= dx / 3.0
    fold = np.where(k == 0, 1.0, 2.0)
    b = g * (w * fold)

    p = p_axis.points()
    phase = 2.0 * (k[:, None] * dx) * p[None, :]
    e_re = np.cos(phase)
    e_im = np.sin(phase)
    b_re = np.ascontiguousarray(b.real)
    b_im = np.ascontiguousarray(b.imag)

    out = np.empty((n, p_axis.n_points))
    blocks = range(0, n, _ROW_BLOCK)

    def run_block(start: int):
        stop = min(start + _ROW_BLOCK, n)
        out[start:stop] = (b_re[start:stop] @ e_re - b_im[start:stop] @ e_im) / math.pi

    workers = default_thread_count() if threads is None else threads
    if workers < 1:
        raise DomainError(f"threads must be >= 1, got {workers}")
    if workers == 1:
        for start in blocks:
            run_block(start)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run_block, blocks))
    return WignerGrid(grid, p_axis, out)


def integrate_2d(w: WignerGrid, values: np.ndarray | None = None) -> float:
    """Integral over the full phase-space rectangle (Simpson in x and p)."""
    arr = w.values if values is None else np.asarray(values)
    wx = simpson_weights(w.x_axis.n_points, w.x_axis.dx)
    wp = simpson_weights(w.p_axis.n_points, w.p_axis.dx)
    return float(wx @ arr @ wp)


def marginal_x(w: WignerGrid) -> np.ndarray:
    """Coordinate marginal: integral of W over p; equals |psi(x)|^2."""
    wp = simpson_weights(w.p_axis.n_points, w.p_axis.dx)
    return w.values @ wp


def marginal_p(w: WignerGrid) -> np.ndarray:
    """Momentum marginal: integral of W over x."""
    wx = simpson_weights(w.x_axis.n_points, w.x_axis.dx)
    return wx @ w.values


def negativity_volume(w: WignerGrid) -> float:
    """Integral of max(0, -W): the volume of the negative part."""
    return integrate_2d(w, np.maximum(0.0, -w.values))


# ----------------------------------------------------------------------
# serialization: CSV long format `x, p, w` and a JSON object with a flat
# row-major values list (x outer, p inner)
# ----------------------------------------------------------------------

def wigner_to_json(w: WignerGrid) -> dict:
    return {
        "x_axis": {"x_min": w.x_axis.x_min, "x_max": w.x_axis.x_max,
                   "n_points": w.x_axis.n_points},
        "p_axis": {"x_min": w.p_axis.x_min, "x_max": w.p_axis.x_max,
                   "n_points": w.p_axis.n_points},
        "values": w.values.ravel(order="C").tolist(),
    }


def wigner_from_json(obj: dict) -> WignerGrid:
    xa = obj["x_axis"]
    pa = obj["p_axis"]
    x_axis = GridSpec(xa["x_min"], xa["x_max"], xa["n_points"])
    p_axis = GridSpec(pa["x_min"], pa["x_max"], pa["n_points"])
    values = np.asarray(obj["values"]).reshape(x_axis.n_points, p_axis.n_points)
    return WignerGrid(x_axis, p_axis, values)


def write_wigner_csv(w: WignerGrid, stream, header_lines=()):
    for line in header_lines:
        stream.write(f"# {line}\n")
    stream.write("x,p,w\n")
    xs = [float(x) for x in w.x_axis.points()]
    ps = [float(p) for p in w.p_axis.points()]
    for i, x in enumerate(xs):
        row = w.values[i]
        for j, p in enumerate(ps):
            stream.write(f"{x!r},{p!r},{float(row[j])!r}\n")
