"""Plot-data export and figure rendering.

The data path is tool-agnostic: two columns (scale, exponent), fixed
formatting so repeated runs are byte-identical.  Figure rendering uses the
Agg backend and writes PNG next to the tabular output.
"""

from __future__ import annotations

import math
from typing import Optional, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .sets import CountProfile, DimensionEstimate  # noqa: E402


def _profile_rows(profile: CountProfile):
    rows = []
    for n in range(1, profile.n_max + 1):
        rows.append((n, math.log2(max(profile.cumulative[n], 1)) / n))
    return rows


def write_plot_data(obj: Union[CountProfile, DimensionEstimate], fh) -> int:
    """Two-column ``scale exponent`` dump with fixed 6-decimal formatting.

    Returns the number of data rows written (header excluded)."""
    fh.write("scale,exponent\n")
    if isinstance(obj, CountProfile):
        rows = _profile_rows(obj)
    elif isinstance(obj, DimensionEstimate):
        rows = [(n, u) for n, u in obj.cumulative_exponents]
    else:
        raise TypeError(f"cannot export plot data for {type(obj).__name__}")
    for n, u in rows:
        fh.write(f"{n},{u:.6f}\n")
    return len(rows)


def render_estimate(est: DimensionEstimate, path: str,
                    title: Optional[str] = None) -> None:
    """Exponent-vs-scale figure with the tail window and bounds marked."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ns = [n for n, _ in est.cumulative_exponents]
    us = [u for _, u in est.cumulative_exponents]
    es = [e for _, e in est.per_scale_exponents]
    ax.plot(ns, us, "o-", ms=3, lw=1.2, label="cumulative exponent")
    ax.plot(ns, es, ".--", ms=3, lw=0.8, alpha=0.6, label="block exponent")
    ax.axhline(est.upper, color="tab:red", lw=0.8, ls=":",
               label=f"upper = {est.upper:.4f}")
    ax.axhline(est.lower, color="tab:green", lw=0.8, ls=":",
               label=f"lower = {est.lower:.4f}")
    ax.axvspan(est.window[0], est.window[1], alpha=0.12, color="gray")
    ax.set_xlabel("dyadic scale n")
    ax.set_ylabel("exponent")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8, loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_profile(profile: CountProfile, path: str,
                   title: Optional[str] = None) -> None:
    """log2 block/cumulative counts against scale."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ns = list(range(profile.n_max + 1))
    blocks = [math.log2(b) if b > 0 else float("nan") for b in profile.blocks]
    cum = [math.log2(c) if c > 0 else float("nan") for c in profile.cumulative]
    ax.plot(ns, blocks, "s-", ms=3, lw=1.0, label="log2 block count")
    ax.plot(ns, cum, "o-", ms=3, lw=1.0, label="log2 cumulative count")
    ax.set_xlabel("dyadic scale n")
    ax.set_ylabel("log2 count")
    if title:
        ax.set_title(title)
    ax.legend(fontsize=8, loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_grid(grid, path: str, title: Optional[str] = None) -> None:
    """Occupancy image of a two-dimensional substitution stage."""
    if grid.ndim != 2:
        raise TypeError("grid rendering is limited to two dimensions")
    fig, ax = plt.subplots(figsize=(5.5, 5.5))
    # transpose + origin so index (x, y) displays with x rightward, y upward
    ax.imshow(grid.T, origin="lower", cmap="binary", interpolation="nearest")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
