"""Figure rendering for sweep output.

Figures are written straight to files through a standalone Agg canvas, so no
interactive backend, global pyplot state, or display is ever touched.
"""

from __future__ import annotations

from typing import Sequence

__all__ = ["save_sweep_figure"]


def save_sweep_figure(
    mus: Sequence[float],
    means: Sequence[float],
    dist: str,
    nu: float,
    path: str,
) -> None:
    """Mean of the derived variate against the location, with the diagonal
    (its large-location asymptote) dotted underneath."""
    from matplotlib.backends.backend_agg import FigureCanvasAgg
    from matplotlib.figure import Figure

    fig = Figure(figsize=(6.4, 4.8))
    FigureCanvasAgg(fig)
    ax = fig.subplots()
    ax.plot(mus, mus, linestyle=":", color="0.4", label="diagonal")
    label = "E|X|" if dist == "folded" else "E[X | X > lower]"
    ax.plot(mus, means, color="C0", label=label)
    ax.set_xlabel("location")
    ax.set_ylabel("mean")
    ax.set_title(f"{dist} Student t mean, nu = {nu:g}")
    ax.legend(loc="best", frameon=False)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
