"""Grid-based wavefunctions: constructors, normalization, overlap, fidelity.

Conventions: [q, p] = i with the vacuum wavefunction psi_0(x) =
pi^{-1/4} e^{-x^2/2}; a Glauber state |alpha> is centred at
x = sqrt(2) Re(alpha) and carries momentum p = sqrt(2) Im(alpha).
WaveFunction values are immutable after construction and all operations
are pure, so concurrent use is safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DomainError
from .numerics import GridSpec, hermite, integrate

__all__ = [
    "FockSpec",
    "WaveFunction",
    "make_fock",
    "make_coherent",
    "normalize",
    "overlap",
    "fidelity",
    "wavefunction_to_json",
    "wavefunction_from_json",
    "write_wavefunction_csv",
    "read_wavefunction_csv",
]

#: Half-width margin (in grid units) required around a state's support.
SUPPORT_MARGIN = 6.0


@dataclass(frozen=True)
class FockSpec:
    """Photon-number input state |n>."""

    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise DomainError(f"FockSpec requires integer n >= 0, got {self.n}")


@dataclass(frozen=True)
class WaveFunction:
    """Complex amplitudes sampled on a uniform grid."""

    grid: GridSpec
    amplitudes: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.amplitudes, dtype=complex)
        if arr.shape != (self.grid.n_points,):
            raise ContractError(
                f"WaveFunction needs {self.grid.n_points} amplitudes, got {arr.shape}"
            )
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "amplitudes", arr)

    def norm(self) -> float:
        """sqrt of the grid integral of |psi|^2."""
        return math.sqrt(abs(integrate(np.abs(self.amplitudes) ** 2, self.grid)))

    def probability_density(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def normalize(psi: WaveFunction) -> WaveFunction:
    """Rescale so the grid integral of |psi|^2 is exactly 1."""
    n = psi.norm()
    if n == 0.0:
        raise DomainError("cannot normalize the zero wavefunction")
    return WaveFunction(psi.grid, psi.amplitudes / n)


def _require_span(grid: GridSpec, lo: float, hi: float, what: str):
    if grid.x_min > lo or grid.x_max < hi:
        raise DomainError(
            f"{what} requires a grid spanning at least [{lo:.3f}, {hi:.3f}], "
            f"got [{grid.x_min}, {grid.x_max}]"
        )


def make_fock(spec: FockSpec, grid: GridSpec) -> WaveFunction:
    """Fock state |n>: psi_n(x) = pi^{-1/4} (2^n n!)^{-1/2} H_n(x) e^{-x^2/2}.

    Grid-normalized on return. The grid must cover the classical turning
    points sqrt(2n+1) plus a tail margin.
    """
    half = math.sqrt(2 * spec.n + 1) + SUPPORT_MARGIN
    _require_span(grid, -half, half, f"make_fock(n={spec.n})")
    x = grid.points()
    log_pref = -0.25 * math.log(math.pi) - 0.5 * (spec.n * math.log(2.0) + math.lgamma(spec.n + 1))
    psi = math.exp(log_pref) * hermite(spec.n, x) * np.exp(-0.5 * x * x)
    return normalize(WaveFunction(grid, psi.astype(complex)))


def make_coherent(alpha: complex, grid: GridSpec) -> WaveFunction:
    """Glauber state |alpha> in the coordinate representation.

    psi_alpha(x) = pi^{-1/4} exp(-(x - xb)^2/2 + i pb x - i xb pb / 2)
    with xb = sqrt(2) Re(alpha), pb = sqrt(2) Im(alpha). The phase makes
    <0|alpha> = e^{-|alpha|^2/2} real positive. Grid-normalized on return.
    """
    alpha = complex(alpha)
    if not (math.isfinite(alpha.real) and math.isfinite(alpha.imag)):
        raise DomainError("make_coherent: alpha must be finite")
    xb = math.sqrt(2.0) * alpha.real
    pb = math.sqrt(2.0) * alpha.imag
    _require_span(grid, xb - SUPPORT_MARGIN, xb + SUPPORT_MARGIN, f"make_coherent(alpha={alpha})")
    if abs(pb) + SUPPORT_MARGIN > math.pi / grid.dx:
        raise DomainError(
            f"make_coherent: momentum {pb:.3f} too close to the Nyquist limit "
            f"pi/dx = {math.pi / grid.dx:.3f}"
        )
    x = grid.points()
    psi = math.pi ** -0.25 * np.exp(-0.5 * (x - xb) ** 2 + 1j * pb * x - 0.5j * xb * pb)
    return normalize(WaveFunction(grid, psi))


def _require_same_grid(a: WaveFunction, b: WaveFunction):
    if a.grid != b.grid:
        raise ContractError(f"grid mismatch: {a.grid} vs {b.grid}")


def overlap(a: WaveFunction, b: WaveFunction) -> complex:
    """<a|b> = integral of conj(a) * b over the shared grid."""
    _require_same_grid(a, b)
    return complex(integrate(np.conj(a.amplitudes) * b.amplitudes, a.grid))


def fidelity(a: WaveFunction, b: WaveFunction) -> float:
    """|<a|b>|^2 for normalized pure states; clamped to 1 against round-off."""
    _require_same_grid(a, b)
    for name, psi in (("first", a), ("second", b)):
        dev = abs(psi.norm() - 1.0)
        if dev > 1e-6:
            raise ContractError(f"fidelity: {name} argument unnormalized (|norm-1| = {dev:.2e})")
    f = abs(overlap(a, b)) ** 2
    if f > 1.0 + 1e-9:
        raise ContractError(f"fidelity exceeded 1 by {f - 1.0:.2e}; inputs inconsistent")
    return min(f, 1.0)


# ----------------------------------------------------------------------
# serialization: CSV columns x, re, im and a JSON object
# ----------------------------------------------------------------------

def wavefunction_to_json(psi: WaveFunction) -> dict:
    g = psi.grid
    return {
        "grid": {"x_min": g.x_min, "x_max": g.x_max, "n_points": g.n_points},
        "re": psi.amplitudes.real.tolist(),
        "im": psi.amplitudes.imag.tolist(),
    }


def wavefunction_from_json(obj: dict) -> WaveFunction:
    g = obj["grid"]
    grid = GridSpec(g["x_min"], g["x_max"], g["n_points"])
    return WaveFunction(grid, np.asarray(obj["re"]) + 1j * np.asarray(obj["im"]))


def write_wavefunction_csv(psi: WaveFunction, stream, header_lines=()):
    """Write `x, re, im` rows; header_lines are emitted as `# ` comments."""
    for line in header_lines:
        stream.write(f"# {line}\n")
    stream.write("x,re,im\n")
    for x, a in zip(psi.grid.points(), psi.amplitudes):
        stream.write(f"{float(x)!r},{float(a.real)!r},{float(a.imag)!r}\n")


def read_wavefunction_csv(stream) -> WaveFunction:
    xs, res, ims = [], [], []
    for line in stream:
        line = line.strip()
        if not line or line.startswith("#") or line.startswith("x,"):
            continue
        sx, sre, sim = line.split(",")
        xs.append(float(sx))
        res.append(float(sre))
        ims.append(float(sim))
    if len(xs) < 2:
        raise ContractError("wavefunction CSV holds fewer than 2 samples")
    grid = GridSpec(xs[0], xs[-1], len(xs))
    return WaveFunction(grid, np.asarray(res) + 1j * np.asarray(ims))
