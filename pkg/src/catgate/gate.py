"""The measurement-induced cubic-phase gate and its cat-state references.

A target oscillator in state psi(x) is entangled (C_Z) with an ancilla
prepared in the cubic-phase state exp(i gamma q^3)|0>_p; measuring the
ancilla momentum with outcome y_m multiplies the input wavefunction by an
Airy-shaped factor:

    psi_out(x) ~ psi(x) * sqrt(2 pi) (3 gamma)^{-1/3}
                 * Ai((x - y_m) / (3 gamma)^{1/3})

When two stationary points x'_st = +-sqrt((y_m - x)/(3 gamma)) exist over
the input support, the factor splits into two interfering branches and the
output is a superposition of two copies of the input displaced by +-p_plus
along the momentum axis, p_plus = sqrt(y_m / (3 gamma)), with relative
phase set by theta = pi/4 - (2/(3 sqrt(3 gamma))) y_m^{3/2}.

Both gate outputs are returned grid-normalized; the normalization factors
of the underlying formulas are absorbed so that fidelity comparisons are
well defined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DegenerateOutcomeError, DomainError
from .numerics import GridSpec, airy_ai, hermite
from .states import (
    SUPPORT_MARGIN,
    FockSpec,
    WaveFunction,
    fidelity,
    normalize,
)

__all__ = [
    "GateParams",
    "CatDiagnostics",
    "PhasePoint",
    "PARITY_EVEN",
    "PARITY_ODD",
    "PARITY_INTERMEDIATE",
    "apply_gate_factor",
    "exact_factor",
    "exact_output",
    "stationary_points",
    "stationary_factor",
    "stationary_output",
    "cat_diagnostics",
    "classify_parity",
    "perfect_cat",
    "perfect_cat_general",
    "semiclassical_momenta",
]

#: Unnormalized output norms below this are measurement outcomes that are
#: essentially impossible for the given input; renormalizing them would
#: amplify numerical noise into a garbage state.
DEGENERATE_NORM = 1e-12

PARITY_EVEN = "even"
PARITY_ODD = "odd"
PARITY_INTERMEDIATE = "intermediate"


@dataclass(frozen=True)
class GateParams:
    """Cubic-phase strength gamma > 0 and homodyne outcome y_m."""

    gamma: float
    y_m: float

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and math.isfinite(self.y_m)):
            raise DomainError("GateParams must be finite")
        if self.gamma <= 0:
            raise DomainError(f"GateParams requires gamma > 0, got {self.gamma}")


@dataclass(frozen=True)
class CatDiagnostics:
    """Scalar diagnostics of the two-branch (cat) regime for one (gamma, y_m).

    lambda_shear uses the exact coefficient 1/(4 sqrt(3)); lambda_shear_rounded
    the rounded 0.14 form. Both are reported.
    """

    theta: float
    p_plus: float
    alpha: complex
    lambda_shear: float
    lambda_shear_rounded: float
    parity_angle: float


@dataclass(frozen=True)
class PhasePoint:
    """A point (q, p) in single-oscillator phase space."""

    q: float
    p: float

    def __post_init__(self):
        if not (math.isfinite(self.q) and math.isfinite(self.p)):
            raise DomainError("PhasePoint components must be finite")


def exact_factor(grid: GridSpec, params: GateParams) -> np.ndarray:
    """Multiplicative gate factor sqrt(2 pi)/(3g)^{1/3} * Ai((x - y_m)/(3g)^{1/3})."""
    s = (3.0 * params.gamma) ** (1.0 / 3.0)
    x = grid.points()
    return (math.sqrt(2.0 * math.pi) / s) * airy_ai((x - params.y_m) / s)


def apply_gate_factor(psi: WaveFunction, factor: np.ndarray) -> WaveFunction:
    """Multiply a normalized input by a gate factor and renormalize.

    Shared kernel of exact_output and stationary_output; also used by the
    sweep driver, which evaluates factors for many parameter cells in one
    batch. Raises DegenerateOutcomeError when the product's norm is too
    small to renormalize meaningfully.
    """
    out = WaveFunction(psi.grid, psi.amplitudes * factor)
    if out.norm() < DEGENERATE_NORM:
        raise DegenerateOutcomeError(
            f"output norm {out.norm():.2e} below {DEGENERATE_NORM}: measurement outcome "
            "incompatible with the input support"
        )
    return normalize(out)


def _require_normalized(psi: WaveFunction, who: str):
    dev = abs(psi.norm() - 1.0)
    if dev > 1e-6:
        raise ContractError(f"{who}: input must be normalized (|norm-1| = {dev:.2e})")


def exact_output(psi: WaveFunction, params: GateParams) -> WaveFunction:
    """Exact gate output: input times the Airy factor, grid-normalized."""
    _require_normalized(psi, "exact_output")
    return apply_gate_factor(psi, exact_factor(psi.grid, params))


def stationary_points(x: float, params: GateParams) -> tuple[float, ...]:
    """Stationary points +-sqrt((y_m - x)/(3 gamma)); empty when y_m <= x."""
    if not math.isfinite(x):
        raise DomainError("stationary_points: x must be finite")
    if params.y_m <= x:
        return ()
    r = math.sqrt((params.y_m - x) / (3.0 * params.gamma))
    return (-r, r)


def stationary_factor(grid: GridSpec, params: GateParams) -> np.ndarray:
    """Two-branch factor 2 Re phi^+ of the stationary-phase approximation.

    phi^+(x - y_m) = exp(i [pi/4 - (2/(3 sqrt(3 gamma))) (y_m - x)^{3/2}])
                     * [12 gamma (y_m - x)]^{-1/4}

    The amplitude diverges at the turning point x = y_m where the
    approximation breaks down anyway: the factor is zeroed for
    y_m - x <= dx/2 and its magnitude capped at the value one grid step
    away from the turning point so a single sample cannot dominate the norm.
    """
    x = grid.points()
    u = params.y_m - x
    valid = u > 0.5 * grid.dx
    u_safe = np.where(valid, u, 1.0)
    amp = (12.0 * params.gamma * u_safe) ** -0.25
    amp_cap = (12.0 * params.gamma * grid.dx) ** -0.25
    amp = np.minimum(amp, amp_cap)
    phase = 0.25 * math.pi - (2.0 / (3.0 * math.sqrt(3.0 * params.gamma))) * u_safe ** 1.5
    return np.where(valid, 2.0 * np.cos(phase) * amp, 0.0)


def stationary_output(psi: WaveFunction, params: GateParams) -> WaveFunction:
    """Gate output in the stationary-phase approximation, grid-normalized."""
    _require_normalized(psi, "stationary_output")
    if np.count_nonzero(psi.grid.points() < params.y_m) < 2:
        raise DegenerateOutcomeError(
            f"stationary_output: fewer than 2 grid points with y_m - x > 0 (y_m = {params.y_m})"
        )
    return apply_gate_factor(psi, stationary_factor(psi.grid, params))


def cat_diagnostics(params: GateParams) -> CatDiagnostics:
    """theta, p_plus, alpha and the shear measure for the two-branch regime."""
    g, ym = params.gamma, params.y_m
    if ym <= 0:
        raise DomainError(f"cat_diagnostics requires y_m > 0 (two-branch regime), got {ym}")
    theta = 0.25 * math.pi - (2.0 / (3.0 * math.sqrt(3.0 * g))) * ym ** 1.5
    return CatDiagnostics(
        theta=theta,
        p_plus=math.sqrt(ym / (3.0 * g)),
        alpha=1j * math.sqrt(ym / (6.0 * g)),
        lambda_shear=1.0 / (4.0 * math.sqrt(3.0 * g * ym)),
        lambda_shear_rounded=0.14 / math.sqrt(g * ym),
        parity_angle=theta % math.pi,
    )


def classify_parity(diag: CatDiagnostics, tolerance: float) -> str:
    """Even cat for theta = m pi, odd for (m + 1/2) pi, else intermediate."""
    if not 0.0 < tolerance < 0.25 * math.pi:
        raise DomainError(f"classify_parity: tolerance must lie in (0, pi/4), got {tolerance}")
    angle = diag.theta % math.pi
    if min(angle, math.pi - angle) <= tolerance:
        return PARITY_EVEN
    if abs(angle - 0.5 * math.pi) <= tolerance:
        return PARITY_ODD
    return PARITY_INTERMEDIATE


def _cat_envelope(psi: WaveFunction, params: GateParams) -> WaveFunction:
    theta = cat_diagnostics(params).theta
    p_plus = math.sqrt(params.y_m / (3.0 * params.gamma))
    x = psi.grid.points()
    return normalize(WaveFunction(psi.grid, psi.amplitudes * np.cos(theta + p_plus * x)))


def perfect_cat(spec: FockSpec, params: GateParams, grid: GridSpec) -> WaveFunction:
    """Reference cat: cos(theta + p_plus x) H_n(x) e^{-x^2/2}, normalized.

    For n = 0 this is the two-component Glauber superposition
    e^{i theta}|alpha> + e^{-i theta}|-alpha> with alpha = i sqrt(y_m/6 gamma).
    """
    if params.y_m <= 0:
        raise DomainError(f"perfect_cat requires y_m > 0, got {params.y_m}")
    half = math.sqrt(2 * spec.n + 1) + SUPPORT_MARGIN
    if grid.x_min > -half or grid.x_max < half:
        raise DomainError(
            f"perfect_cat(n={spec.n}) requires a grid spanning at least "
            f"[{-half:.3f}, {half:.3f}], got [{grid.x_min}, {grid.x_max}]"
        )
    p_plus = math.sqrt(params.y_m / (3.0 * params.gamma))
    if p_plus + SUPPORT_MARGIN > math.pi / grid.dx:
        raise DomainError(
            f"perfect_cat: copy momentum {p_plus:.3f} too close to the Nyquist "
            f"limit pi/dx = {math.pi / grid.dx:.3f}"
        )
    x = grid.points()
    envelope = hermite(spec.n, x) * np.exp(-0.5 * x * x)
    return _cat_envelope(normalize(WaveFunction(grid, envelope.astype(complex))), params)


def perfect_cat_general(psi: WaveFunction, params: GateParams) -> WaveFunction:
    """Perfect-cat reference for an arbitrary input: cos factor times psi."""
    if params.y_m <= 0:
        raise DomainError(f"perfect_cat_general requires y_m > 0, got {params.y_m}")
    _require_normalized(psi, "perfect_cat_general")
    return _cat_envelope(psi, params)


def semiclassical_momenta(initial: PhasePoint, params: GateParams) -> tuple[PhasePoint, ...]:
    """Measurement-induced branches of the target quadratures.

    q stays q(0); p splits to p(0) +- (3 gamma)^{-1/2} sqrt(y_m - q(0))
    when the radicand is positive (the ancilla momentum p2(0) annihilates
    the |0>_p resource and is dropped). Empty when the branches merge.
    """
    radicand = params.y_m - initial.q
    if radicand <= 0:
        return ()
    shift = math.sqrt(radicand) / math.sqrt(3.0 * params.gamma)
    return (
        PhasePoint(initial.q, initial.p - shift),
        PhasePoint(initial.q, initial.p + shift),
    )


def gate_report(psi: WaveFunction, params: GateParams, parity_tolerance: float = 0.05,
                exact: WaveFunction | None = None) -> dict:
    """Bundle of diagnostics for one gate application, used by the CLI.

    Fields that are undefined for the given parameters (for example the
    cat references when y_m <= 0) are reported as None rather than failing
    the whole report. Pass a precomputed exact output to avoid recomputing.
    """
    out = exact_output(psi, params) if exact is None else exact
    report: dict = {}
    try:
        diag = cat_diagnostics(params)
        report.update(
            theta=diag.theta,
            p_plus=diag.p_plus,
            alpha_im=diag.alpha.imag,
            lambda_shear=diag.lambda_shear,
            lambda_shear_rounded=diag.lambda_shear_rounded,
            parity_angle=diag.parity_angle,
            parity=classify_parity(diag, parity_tolerance),
        )
    except DomainError:
        report.update(
            theta=None, p_plus=None, alpha_im=None, lambda_shear=None,
            lambda_shear_rounded=None, parity_angle=None, parity=None,
        )
    try:
        report["fidelity_vs_stationary"] = fidelity(out, stationary_output(psi, params))
    except (DomainError, DegenerateOutcomeError):
        report["fidelity_vs_stationary"] = None
    try:
        report["fidelity_vs_perfect_cat"] = fidelity(out, perfect_cat_general(psi, params))
    except (DomainError, DegenerateOutcomeError):
        report["fidelity_vs_perfect_cat"] = None
    return report
