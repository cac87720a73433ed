"""Matplotlib rendering of figure series produced by :mod:`qthreat.forecast`."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

SCENARIO_STYLE = {"optimistic": "-", "pessimistic": "--"}

RC = {
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "savefig.dpi": 150,
    "figure.figsize": (6.4, 4.2),
}


def _scenarios(rows: list[dict], prefix: str) -> list[str]:
    return [k[len(prefix):] for k in rows[0] if k.startswith(prefix)]


def _series(rows, key):
    values = [r[key] if r[key] is not None and math.isfinite(r[key]) else math.nan for r in rows]
    return [r["year"] for r in rows], values


def _by(rows, key):
    groups: dict = {}
    for r in rows:
        groups.setdefault(r[key], []).append(r)
    return groups


def _fig1(fig, rows):
    ax1, ax2 = fig.subplots(1, 2)
    for D, group in _by(rows, "difficulty").items():
        p = [r["p_g"] for r in group]
        ax1.loglog(p, [r["h_qc"] for r in group], label=f"D = {D:.0e}")
        ax2.loglog(p, [r["n_Q"] for r in group], label=f"D = {D:.0e}")
    ax1.set(xlabel="physical gate error rate", ylabel="effective hash rate (H/s)")
    ax2.set(xlabel="physical gate error rate", ylabel="physical qubits")
    ax1.legend(fontsize=7)


def _fig2(fig, rows):
    ax = fig.subplots()
    for name in _scenarios(rows, "network_rate_"):
        style = SCENARIO_STYLE.get(name, "-")
        ax.semilogy(*_series(rows, f"network_rate_{name}"), "b" + style, label=f"network ({name})")
        years, rate = _series(rows, f"qc_hash_rate_{name}")
        ax.semilogy(years, [v if v > 0 else float("nan") for v in rate], "r" + style, label=f"quantum ({name})")
    ax.semilogy(*_series(rows, "asic_reference"), "k:", label="single ASIC")
    ax.set(xlabel="year", ylabel="hash rate (H/s)")
    ax.legend(fontsize=7)


def _fig3(fig, rows):
    ax1, ax2 = fig.subplots(1, 2)
    p = [r["p_g"] for r in rows]
    ax1.loglog(p, [r["crack_minutes"] for r in rows])
    ax2.loglog(p, [r["n_Q"] for r in rows])
    ax1.set(xlabel="physical gate error rate", ylabel="time to break signature (min)")
    ax2.set(xlabel="physical gate error rate", ylabel="physical qubits")


def _fig5(fig, rows):
    ax = fig.subplots()
    for name in _scenarios(rows, "crack_time_"):
        years, t = _series(rows, f"crack_time_{name}")
        ax.semilogy(years, t, "r" + SCENARIO_STYLE.get(name, "-"), label=name)
    ax.semilogy(*_series(rows, "block_time_reference"), "k:", label="600 s")
    ax.set(xlabel="year", ylabel="time to break signature (s)")
    ax.legend(fontsize=7)


def _appB(fig, rows):
    ax1, ax2 = fig.subplots(1, 2)
    for name in _scenarios(rows, "rate_"):
        style = SCENARIO_STYLE.get(name, "-")
        ax1.semilogy(*_series(rows, f"rate_{name}"), style, label=name)
        ax2.semilogy(*_series(rows, f"difficulty_{name}"), style, label=name)
    ax1.set(xlabel="year", ylabel="network hash rate (H/s)")
    ax2.set(xlabel="year", ylabel="difficulty")
    ax1.legend(fontsize=7)


def _appC(fig, rows):
    axes = fig.subplots(2, 2).ravel()
    labels = [("qubits_", "qubits"), ("gate_speed_", "gate speed (1/s)"),
              ("infidelity_", "gate infidelity"), ("overhead_factor_", "overhead factor")]
    for ax, (prefix, label) in zip(axes, labels):
        for name in _scenarios(rows, prefix):
            ax.semilogy(*_series(rows, prefix + name), SCENARIO_STYLE.get(name, "-"), label=name)
        ax.set(xlabel="year", ylabel=label)
    axes[0].legend(fontsize=7)


_RENDERERS = {"fig1": _fig1, "fig2": _fig2, "fig3": _fig3, "fig5": _fig5, "appB": _appB, "appC": _appC}


def render_figure(figure: str, rows: list[dict], path: str | Path) -> Path:
    """Draw one figure's series to ``path`` (format from its suffix)."""
    if figure not in _RENDERERS:
        raise ValueError(f"unknown figure {figure!r}")
    if not rows:
        raise ValueError("no rows to plot")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with plt.rc_context(RC):
        fig = plt.figure(figsize=(10, 7) if figure == "appC" else None, constrained_layout=True)
        try:
            _RENDERERS[figure](fig, rows)
            fig.savefig(path)
        finally:
            plt.close(fig)
    return path
