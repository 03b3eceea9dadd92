"""Parameter-sweep drivers over (y_m, gamma) rectangles.

A sweep tabulates one scalar metric per cell:

* ``infidelity_st``  1 - F between the exact output and the
  stationary-phase output,
* ``infidelity_cat`` 1 - F between the exact output and the perfect-cat
  reference,
* ``theta`` / ``lambda`` scalars from the cat diagnostics.

Cells are independent; rows of the result may be computed concurrently.
Each cell runs the same arithmetic regardless of scheduling, and the rows
are assembled by index, so the values array is bit-identical for any
worker count. Cells whose parameters are outside an operation's domain
(for example y_m <= 0 for the cat metrics) are recorded as failures and
left as NaN, never interpolated and never aborting the sweep.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import gate
from .errors import CatgateError, ContractError, DegenerateOutcomeError, DomainError
from .numerics import GridSpec, airy_ai
from .states import FockSpec, WaveFunction, fidelity, make_fock
from .wigner import default_thread_count

__all__ = [
    "METRICS",
    "SweepSpec",
    "SweepResult",
    "GuideCurves",
    "run_sweep",
    "overlay_guides",
    "sweep_to_json",
    "write_sweep_csv",
    "write_guides_csv",
]

METRICS = ("infidelity_st", "infidelity_cat", "theta", "lambda")

_FAILURE_KINDS = {
    DomainError: "domain_error",
    DegenerateOutcomeError: "degenerate_outcome",
    ContractError: "contract_error",
}


@dataclass(frozen=True)
class SweepSpec:
    """Axes, input Fock state and metric of one sweep."""

    y_m_axis: GridSpec
    gamma_axis: GridSpec
    input: FockSpec
    metric: str

    def __post_init__(self):
        if self.gamma_axis.x_min <= 0:
            raise DomainError(
                f"gamma axis must be strictly positive, starts at {self.gamma_axis.x_min}"
            )
        if self.metric not in METRICS:
            raise DomainError(f"unknown metric {self.metric!r}; choose one of {METRICS}")


@dataclass
class SweepResult:
    """values[i, j] = metric at (y_m_axis[i], gamma_axis[j]); NaN at failures."""

    spec: SweepSpec
    values: np.ndarray
    failures: list[tuple[tuple[int, int], str]] = field(default_factory=list)


def sweep_grid(spec: SweepSpec) -> GridSpec:
    """One coordinate grid serving every cell of the sweep.

    Wide enough for the input Fock state; fine enough that the largest
    copy momentum sqrt(y_m_max / (3 gamma_min)) stays well under Nyquist.
    """
    half = max(12.0, math.sqrt(2 * spec.input.n + 1) + 6.0)
    p_req = math.sqrt(max(spec.y_m_axis.x_max, 0.0) / (3.0 * spec.gamma_axis.x_min))
    p_req += math.sqrt(2 * spec.input.n + 1) + 6.0
    dx = min(0.01, math.pi / (2.0 * p_req))
    n = int(math.ceil(2.0 * half / dx)) + 1
    if n % 2 == 0:  # odd point count keeps Simpson exact everywhere
        n += 1
    return GridSpec(-half, half, n)


def _state_row(metric: str, psi: WaveFunction, y_m: float,
               gammas: np.ndarray) -> tuple[np.ndarray, list[tuple[int, str]]]:
    """One y_m row of an infidelity metric.

    The Airy factors of the whole row are evaluated in a single call (the
    special-function kernel is element-wise and iteration counts are fixed
    per element, so batching cannot change any bit of the result).
    """
    x = psi.grid.points()
    scale = (3.0 * gammas) ** (1.0 / 3.0)
    factors = (math.sqrt(2.0 * math.pi) / scale)[:, None] * airy_ai(
        (x[None, :] - y_m) / scale[:, None]
    )
    row = np.full(len(gammas), np.nan)
    failures: list[tuple[int, str]] = []
    for j, g in enumerate(gammas):
        params = gate.GateParams(float(g), y_m)
        try:
            out = gate.apply_gate_factor(psi, factors[j])
            if metric == "infidelity_st":
                ref = gate.stationary_output(psi, params)
            else:
                ref = gate.perfect_cat_general(psi, params)
            row[j] = 1.0 - fidelity(out, ref)
        except CatgateError as exc:
            failures.append((j, _FAILURE_KINDS.get(type(exc), "error")))
    return row, failures


def _scalar_row(metric: str, y_m: float,
                gammas: np.ndarray) -> tuple[np.ndarray, list[tuple[int, str]]]:
    row = np.full(len(gammas), np.nan)
    failures: list[tuple[int, str]] = []
    for j, g in enumerate(gammas):
        try:
            diag = gate.cat_diagnostics(gate.GateParams(float(g), y_m))
            row[j] = diag.theta if metric == "theta" else diag.lambda_shear
        except CatgateError as exc:
            failures.append((j, _FAILURE_KINDS.get(type(exc), "error")))
    return row, failures


def run_sweep(spec: SweepSpec, threads: int | None = None,
              grid: GridSpec | None = None) -> SweepResult:
    """Evaluate the metric on every (y_m, gamma) cell of the spec."""
    grid = sweep_grid(spec) if grid is None else grid
    psi = make_fock(spec.input, grid)
    y_ms = spec.y_m_axis.points()
    gammas = spec.gamma_axis.points()

    def run_row(i: int):
        y_m = float(y_ms[i])
        if spec.metric in ("theta", "lambda"):
            return _scalar_row(spec.metric, y_m, gammas)
        return _state_row(spec.metric, psi, y_m, gammas)

    workers = default_thread_count() if threads is None else threads
    if workers < 1:
        raise DomainError(f"threads must be >= 1, got {workers}")
    if workers == 1:
        rows = [run_row(i) for i in range(len(y_ms))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run_row, range(len(y_ms))))

    values = np.vstack([row for row, _ in rows])
    failures = [((i, j), kind) for i, (_, fails) in enumerate(rows) for j, kind in fails]
    return SweepResult(spec, values, failures)


@dataclass(frozen=True)
class GuideCurves:
    """Overlay curves: the unit-shear hyperbola and the breakdown line.

    gamma * y_m = 1 separates large from small shear deformation;
    y_m = sqrt(2n+1) marks where the stationary-phase picture turns on.
    """

    hyperbola_y_m: np.ndarray
    hyperbola_gamma: np.ndarray
    breakdown_y_m: float
    breakdown_gamma: np.ndarray


def overlay_guides(spec: SweepSpec) -> GuideCurves:
    y = spec.y_m_axis.points()
    pos = y > 0
    return GuideCurves(
        hyperbola_y_m=y[pos],
        hyperbola_gamma=1.0 / y[pos],
        breakdown_y_m=math.sqrt(2 * spec.input.n + 1),
        breakdown_gamma=spec.gamma_axis.points(),
    )


# ----------------------------------------------------------------------
# serialization: CSV long format `y_m, gamma, value, status`, guides as a
# separate CSV, and a JSON object with a flat row-major values list
# (y_m outer, gamma inner)
# ----------------------------------------------------------------------

def sweep_to_json(result: SweepResult) -> dict:
    spec = result.spec
    values = [None if math.isnan(v) else float(v) for v in result.values.ravel(order="C")]
    return {
        "spec": {
            "y_m_axis": {"x_min": spec.y_m_axis.x_min, "x_max": spec.y_m_axis.x_max,
                         "n_points": spec.y_m_axis.n_points},
            "gamma_axis": {"x_min": spec.gamma_axis.x_min, "x_max": spec.gamma_axis.x_max,
                           "n_points": spec.gamma_axis.n_points},
            "input_n": spec.input.n,
            "metric": spec.metric,
        },
        "values": values,
        "failures": [
            {"i_y_m": i, "i_gamma": j, "kind": kind}
            for (i, j), kind in result.failures
        ],
    }


def write_sweep_csv(result: SweepResult, stream, header_lines=()):
    for line in header_lines:
        stream.write(f"# {line}\n")
    stream.write("y_m,gamma,value,status\n")
    status = {}
    for (i, j), kind in result.failures:
        status[(i, j)] = kind
    y_ms = [float(y) for y in result.spec.y_m_axis.points()]
    gammas = [float(g) for g in result.spec.gamma_axis.points()]
    for i, ym in enumerate(y_ms):
        for j, g in enumerate(gammas):
            v = float(result.values[i, j])
            stream.write(f"{ym!r},{g!r},{v!r},{status.get((i, j), 'ok')}\n")


def write_guides_csv(guides: GuideCurves, stream, header_lines=()):
    for line in header_lines:
        stream.write(f"# {line}\n")
    stream.write("guide,y_m,gamma\n")
    for ym, g in zip(guides.hyperbola_y_m, guides.hyperbola_gamma):
        stream.write(f"unit_shear,{float(ym)!r},{float(g)!r}\n")
    for g in guides.breakdown_gamma:
        stream.write(f"stationary_breakdown,{float(guides.breakdown_y_m)!r},{float(g)!r}\n")
