"""Figure rendering for the report-producing CLI paths.

Plots are written next to the delimited output; the toolkit is headless,
so the Agg backend is forced before pyplot loads.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg", force=True)

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

from .experiments import RateSeries
from .units import unit_label


def save_rate_figure(series: RateSeries, path, *, title: str | None = None) -> Path:
    """Rate trajectory against block length with its convergence band."""
    path = Path(path)
    ns = [e.n for e in series.entries]
    values = [e.value_per_n for e in series.entries]
    lower = series.entries[0].lower
    upper = series.entries[0].upper

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.fill_between(
        [min(ns), max(ns)], lower, upper, color="tab:blue", alpha=0.15,
        label="convergence band",
    )
    ax.axhline(series.h, color="tab:gray", ls="--", lw=1, label="entropy rate h")
    ax.plot(ns, values, marker="o", color="tab:blue", lw=1.5,
            label=f"order {series.order}, eps={series.epsilon:g} ({series.ball.value})")
    if len(ns) > 1:
        ax.set_xscale("log", base=2)
    ax.set_xlabel("block length n")
    ax.set_ylabel(f"smooth entropy per symbol ({unit_label()})")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_aep_figure(rows, epsilon: float, path, *, title: str | None = None) -> Path:
    """Typical-set mass (exact and sampled) against block length.

    ``rows`` are (n, mass or None, mc_fraction or None) triples.
    """
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    exact = [(n, m) for n, m, _ in rows if m is not None]
    sampled = [(n, f) for n, _, f in rows if f is not None]
    if exact:
        ax.plot(*zip(*exact), marker="o", color="tab:blue", lw=1.5, label="exact mass")
    if sampled:
        ax.plot(*zip(*sampled), marker="s", color="tab:orange", lw=1.2, ls="--",
                label="sampled fraction")
    ax.axhline(1.0 - epsilon, color="tab:gray", ls=":", lw=1, label="1 - eps")
    ns = [n for n, _, _ in rows]
    if len(set(ns)) > 1:
        ax.set_xscale("log", base=2)
    ax.set_xlabel("block length n")
    ax.set_ylabel("typical-set probability")
    ax.set_ylim(-0.02, 1.02)
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
