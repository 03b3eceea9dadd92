"""Simulation of a measurement-induced cubic-phase gate.

The gate entangles a target oscillator with a cubic-phase resource state
and measures the ancilla momentum; the conditional output is a
Schrodinger-cat-like superposition of two momentum-displaced copies of the
input. This package computes the exact output, its stationary-phase and
perfect-cat references, fidelity and phase maps over the gate parameters,
and Wigner functions, plus a CLI to drive everything from scripts.
"""

__version__ = "0.1.0"

from .errors import CatgateError, ContractError, DegenerateOutcomeError, DomainError
from .numerics import GridSpec, airy_ai, hermite, integrate
from .states import (
    FockSpec,
    WaveFunction,
    fidelity,
    make_coherent,
    make_fock,
    normalize,
    overlap,
)
from .gate import (
    CatDiagnostics,
    GateParams,
    PhasePoint,
    cat_diagnostics,
    classify_parity,
    exact_output,
    perfect_cat,
    perfect_cat_general,
    semiclassical_momenta,
    stationary_output,
    stationary_points,
)
from .wigner import WignerGrid, marginal_x, negativity_volume, transform
from .sweeps import SweepResult, SweepSpec, overlay_guides, run_sweep

__all__ = [
    "CatgateError",
    "ContractError",
    "DegenerateOutcomeError",
    "DomainError",
    "GridSpec",
    "airy_ai",
    "hermite",
    "integrate",
    "FockSpec",
    "WaveFunction",
    "fidelity",
    "make_coherent",
    "make_fock",
    "normalize",
    "overlap",
    "CatDiagnostics",
    "GateParams",
    "PhasePoint",
    "cat_diagnostics",
    "classify_parity",
    "exact_output",
    "perfect_cat",
    "perfect_cat_general",
    "semiclassical_momenta",
    "stationary_output",
    "stationary_points",
    "WignerGrid",
    "marginal_x",
    "negativity_volume",
    "transform",
    "SweepResult",
    "SweepSpec",
    "overlay_guides",
    "run_sweep",
    "__version__",
]
