"""Figure rendering for the CLI report path.

Renders matplotlib figures to files next to the delimited output; nothing
here feeds back into the numerics.
"""

from __future__ import annotations

import numpy as np
import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .states import WaveFunction
from .sweeps import GuideCurves, SweepResult
from .wigner import WignerGrid

__all__ = ["plot_wavefunction", "plot_wigner", "plot_sweep"]


def plot_wavefunction(psi: WaveFunction, path: str, title: str | None = None):
    x = psi.grid.points()
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.plot(x, psi.probability_density(), "k-", lw=1.4, label=r"$|\psi|^2$")
    ax.plot(x, psi.amplitudes.real, lw=0.8, label="Re")
    ax.plot(x, psi.amplitudes.imag, lw=0.8, label="Im")
    ax.set_xlabel("x")
    ax.axhline(0.0, color="0.8", lw=0.6)
    ax.legend(frameon=False)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_wigner(w: WignerGrid, path: str, title: str | None = None):
    vmax = float(np.max(np.abs(w.values))) or 1.0
    fig, ax = plt.subplots(figsize=(6.0, 4.8))
    mesh = ax.pcolormesh(
        w.x_axis.points(), w.p_axis.points(), w.values.T,
        cmap="RdBu_r", vmin=-vmax, vmax=vmax, shading="nearest", rasterized=True,
    )
    fig.colorbar(mesh, ax=ax, label="W(x, p)")
    ax.set_xlabel("x")
    ax.set_ylabel("p")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_sweep(result: SweepResult, guides: GuideCurves, path: str,
               title: str | None = None):
    spec = result.spec
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    mesh = ax.pcolormesh(
        spec.y_m_axis.points(), spec.gamma_axis.points(), result.values.T,
        cmap="viridis", shading="nearest", rasterized=True,
    )
    fig.colorbar(mesh, ax=ax, label=spec.metric)
    mask = (guides.hyperbola_gamma >= spec.gamma_axis.x_min) & (
        guides.hyperbola_gamma <= spec.gamma_axis.x_max)
    ax.plot(guides.hyperbola_y_m[mask], guides.hyperbola_gamma[mask],
            "w--", lw=1.2, label=r"$\gamma\, y_m = 1$")
    ax.axvline(guides.breakdown_y_m, color="w", ls=":", lw=1.2,
               label=r"$y_m = \sqrt{2n+1}$")
    ax.set_xlim(spec.y_m_axis.x_min, spec.y_m_axis.x_max)
    ax.set_ylim(spec.gamma_axis.x_min, spec.gamma_axis.x_max)
    ax.set_xlabel(r"$y_m$")
    ax.set_ylabel(r"$\gamma$")
    ax.legend(frameon=False, labelcolor="w")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
