"""Static figures drawn from the emitted CSV files."""

from __future__ import annotations

import logging
from collections import defaultdict
from pathlib import Path

from .output import read_csv

log = logging.getLogger(__name__)


def _by_scenario(rows):
    groups = defaultdict(list)
    for row in rows:
        groups[row["scenario"]].append(row)
    return groups


def _generation_means(rows, column):
    acc = defaultdict(list)
    for row in rows:
        acc[int(row["generation"])].append(float(row[column]))
    gens = sorted(acc)
    return gens, [sum(acc[g]) / len(acc[g]) for g in gens]


def emit_plots(out_dir) -> list[Path]:
    """Fitness, alpha+/alpha-, phi/beta and learning-curve figures per scenario.

    Returns the written paths; returns [] with a warning when matplotlib
    is missing.
    """
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        log.warning("matplotlib not available; skipping plots")
        return []

    out = Path(out_dir)
    telemetry = out / "telemetry.csv"
    if not telemetry.exists():
        raise FileNotFoundError(f"no telemetry in {out}; plots are drawn from telemetry.csv")
    written = []
    curves_path = out / "learning_curves.csv"
    curves = _by_scenario(read_csv(curves_path)) if curves_path.exists() else {}

    for scenario, rows in _by_scenario(read_csv(telemetry)).items():
        fig, ax = plt.subplots(figsize=(5, 4))
        for col, colour, label in (("fitness_top5", "tab:blue", "top 5%"),
                                   ("fitness_mean", "black", "mean"),
                                   ("fitness_bottom5", "gold", "bottom 5%")):
            ax.plot(*_generation_means(rows, col), color=colour, label=label)
        ax.set(xlabel="generation", ylabel="accuracy", ylim=(0, 1), title=scenario)
        ax.legend(frameon=False)
        written.append(_save(fig, out / f"{scenario}_fitness.png", plt))

        gens, a_plus = _generation_means(rows, "mean_alpha_plus")
        _, a_minus = _generation_means(rows, "mean_alpha_minus")
        fig, ax = plt.subplots(figsize=(4.5, 4))
        ax.plot([0, 1], [0, 1], color="grey", lw=0.8)
        sc = ax.scatter(a_minus, a_plus, c=gens, cmap="coolwarm", s=8)
        ax.set(xlabel="alpha-", ylabel="alpha+", xlim=(0, 1), ylim=(0, 1), title=scenario)
        fig.colorbar(sc, label="generation")
        written.append(_save(fig, out / f"{scenario}_alpha.png", plt))

        _, beta = _generation_means(rows, "mean_beta")
        _, phi = _generation_means(rows, "mean_phi")
        fig, ax = plt.subplots(figsize=(4.5, 4))
        ax.axhline(0, color="grey", lw=0.8)
        sc = ax.scatter(beta, phi, c=gens, cmap="coolwarm", s=8)
        ax.set(xlabel="beta", ylabel="phi", xlim=(0, 20), ylim=(-20, 20), title=scenario)
        fig.colorbar(sc, label="generation")
        written.append(_save(fig, out / f"{scenario}_phi_beta.png", plt))

        if scenario in curves:
            fig, ax = plt.subplots(figsize=(6, 4))
            envs = defaultdict(list)
            for row in curves[scenario]:
                envs[row["environment"]].append((int(row["trial"]), float(row["p_correct"])))
            for env, pts in envs.items():
                pts.sort()
                ax.plot([t for t, _ in pts], [p for _, p in pts], lw=1, label=env)
            ax.set(xlabel="trial", ylabel="p(correct)", ylim=(0, 1), title=scenario)
            ax.legend(frameon=False, fontsize=7)
            written.append(_save(fig, out / f"{scenario}_learning_curves.png", plt))
        else:
            log.warning("no learning curves for %s; skipping that figure", scenario)
    return written


def _save(fig, path, plt):
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return path
