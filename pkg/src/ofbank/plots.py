"""Figure rendering for the CLI report paths.

Each function takes the tabular output of the matching experiment and
writes one figure (format chosen by the file suffix, .svg in the CLI).
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_CURVE_STYLE = {
    "mv_N": dict(color="tab:green", marker="^", label="necessary"),
    "mv_C": dict(color="tab:orange", marker="s", label="counting"),
    "mv_S": dict(color="tab:blue", marker="o", label="sufficient"),
    "mv_U": dict(color="tab:red", marker="x", label="upper bound"),
}


def save_length_curves(header, rows, path) -> None:
    """One panel per (D, m_h) pair, lengths as functions of C."""
    idx = {name: k for k, name in enumerate(header)}
    panels = sorted({(r[idx["D"]], r[idx["m_h"]]) for r in rows})
    ncol = min(2, len(panels))
    nrow = (len(panels) + ncol - 1) // ncol
    fig, axes = plt.subplots(nrow, ncol, figsize=(6 * ncol, 4 * nrow),
                             squeeze=False)
    for ax, (D, m_h) in zip(axes.flat, panels):
        sub = [r for r in rows if (r[idx["D"]], r[idx["m_h"]]) == (D, m_h)]
        for name, style in _CURVE_STYLE.items():
            pts = [(r[idx["C"]], r[idx[name]]) for r in sub
                   if r[idx[name]] is not None]
            if pts:
                ax.plot(*zip(*pts), markersize=4, linewidth=1, **style)
        ax.axhline(m_h, color="gray", linestyle="--", linewidth=1,
                   label="analysis length")
        ax.set_title(f"D={D}, analysis length {m_h}")
        ax.set_xlabel("channels C")
        ax.set_ylabel("synthesis length")
        ax.legend(fontsize=8)
    for ax in axes.flat[len(panels):]:
        ax.set_visible(False)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_mc_heatmap(grid, path) -> None:
    """Success-count heatmap over (C, m_v) with the two length overlays."""
    from .errors import DomainError, InfeasibleConfigError
    from .lengths import counting_length, sufficient_length

    counts = np.array(grid.counts, dtype=float)
    counts[counts < 0] = np.nan
    fig, ax = plt.subplots(figsize=(8, 5))
    im = ax.imshow(
        counts.T, origin="lower", aspect="auto", cmap="viridis",
        extent=(grid.C_values[0] - 0.5, grid.C_values[-1] + 0.5,
                grid.mv_values[0] - 0.5, grid.mv_values[-1] + 0.5),
    )
    fig.colorbar(im, ax=ax, label=f"PR-feasible runs (of {grid.trials})")
    mvC, mvS = [], []
    for C in grid.C_values:
        try:
            mvC.append((C, counting_length(C, grid.D, grid.m_h)))
        except DomainError:
            pass
        try:
            mvS.append((C, sufficient_length(C, grid.D, grid.m_h)))
        except (DomainError, InfeasibleConfigError):
            pass
    if mvC:
        ax.plot(*zip(*mvC), "w-o", markersize=3, linewidth=1, label="counting")
    if mvS:
        ax.plot(*zip(*mvS), "r-s", markersize=3, linewidth=1, label="sufficient")
    ax.set_xlabel("channels C")
    ax.set_ylabel("synthesis length $m_v$")
    ax.set_title(f"PR feasibility, D={grid.D}, analysis length {grid.m_h}")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_distortion_sweep(header, rows, path, knee: int | None = None) -> None:
    idx = {name: k for k, name in enumerate(header)}
    mv = [r[idx["m_v"]] for r in rows]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    floor = 1e-12
    rand = [max(r[idx["distortion_random_pct"]], floor) for r in rows]
    puls = [max(r[idx["distortion_pulse_pct"]], floor) for r in rows]
    ax.semilogy(mv, rand, "b-o", markersize=4, label="random input")
    ax.semilogy(mv, puls, "k--s", markersize=4, label="unit pulse")
    if knee is not None:
        ax.axvline(knee, color="tab:orange", linestyle=":",
                   label=f"counting length = {knee}")
    ax.set_xlabel("synthesis length $m_v$")
    ax.set_ylabel("distortion (%)")
    ax.legend(fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def save_distortion_boxplot(header, rows, path) -> None:
    idx = {name: k for k, name in enumerate(header)}
    stats = [
        dict(
            med=r[idx["median_pct"]], q1=r[idx["q1_pct"]], q3=r[idx["q3_pct"]],
            whislo=r[idx["whisker_lo_pct"]], whishi=r[idx["whisker_hi_pct"]],
            label=str(r[idx["C"]]), fliers=[],
        )
        for r in rows
    ]
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.bxp(stats, showfliers=False)
    ax.set_xlabel("channels C")
    ax.set_ylabel("distortion (%)")
    ax.set_title("distortion with synthesis length ~10% below the counting length")
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
