"""CSV/JSON emission of telemetry, summaries, learning curves and the run manifest."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

TELEMETRY_COLUMNS = [
    "scenario", "reboot", "generation", "fitness_mean", "fitness_top5", "fitness_bottom5",
    "mean_alpha_plus", "mean_alpha_minus", "mean_beta", "mean_tau", "mean_phi",
]
SUMMARY_COLUMNS = [
    "scenario", "n_reboots", "pct_positivity", "pct_perseveration",
    "mean_dalpha", "sem_dalpha", "t_dalpha", "p_dalpha",
    "mean_phi", "sem_phi", "t_phi", "p_phi",
    "mean_alpha", "mean_beta", "mean_tau", "spread",
]
CURVE_COLUMNS = ["scenario", "environment", "trial", "p_correct"]
FINAL_COLUMNS = [
    "scenario", "reboot", "alpha_plus", "alpha_minus", "beta", "tau", "phi", "delta_alpha",
]


def code_version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "unknown"


def fmt(value) -> str:
    """6 significant digits for floats; ints and strings unchanged."""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return f"{value:.6g}"
    return str(value)


@dataclass
class RunManifest:
    configs: list
    master_seed: int
    code_version: str
    duration_s: float
    files: dict = field(default_factory=dict)  # file name -> data row count
    plots: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "configs": self.configs,
            "master_seed": self.master_seed,
            "code_version": self.code_version,
            "duration_s": self.duration_s,
            "files": self.files,
            "plots": self.plots,
        }


def telemetry_rows(results_by_scenario: dict):
    for scenario, results in results_by_scenario.items():
        for r in results:
            for s in r.stats:
                yield [scenario, r.reboot, s.generation, s.fitness_mean, s.fitness_top5_mean,
                       s.fitness_bottom5_mean, s.mean_alpha_plus, s.mean_alpha_minus,
                       s.mean_beta, s.mean_tau, s.mean_phi]


def final_rows(results_by_scenario: dict):
    for scenario, results in results_by_scenario.items():
        for r in results:
            m = r.final_means
            yield [scenario, r.reboot, m["alpha_plus"], m["alpha_minus"], m["beta"], m["tau"],
                   m["phi"], r.final_delta_alpha]


def curve_rows(curves_by_scenario: dict):
    for scenario, curves in curves_by_scenario.items():
        for env, curve in curves.items():
            for t, p in enumerate(curve):
                yield [scenario, env, t, float(p)]


def _write(path: Path, columns, rows, fmt_name: str) -> int:
    rows = [[fmt(v) for v in row] for row in rows]
    try:
        if fmt_name == "json":
            records = [dict(zip(columns, row)) for row in rows]
            path.write_text(json.dumps(records, indent=1) + "\n")
        else:
            with open(path, "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(columns)
                w.writerows(rows)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc
    return len(rows)


def emit_outputs(results_by_scenario: dict, summaries, out_dir, fmt_name: str = "csv",
                 curves_by_scenario: dict | None = None, configs=(), master_seed: int = 0,
                 duration_s: float = 0.0) -> RunManifest:
    """Write telemetry, summary, final parameters, optional learning curves and the manifest."""
    if fmt_name not in ("csv", "json"):
        raise ValueError(f"format must be 'csv' or 'json', got {fmt_name!r}")
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc.strerror}") from exc
    ext = fmt_name
    manifest = RunManifest(list(configs), master_seed, code_version(), round(duration_s, 3))
    manifest.files[f"telemetry.{ext}"] = _write(
        out / f"telemetry.{ext}", TELEMETRY_COLUMNS, telemetry_rows(results_by_scenario), fmt_name)
    manifest.files[f"summary.{ext}"] = _write(
        out / f"summary.{ext}", SUMMARY_COLUMNS,
        ([getattr(s, c) for c in SUMMARY_COLUMNS] for s in summaries), fmt_name)
    manifest.files[f"final_parameters.{ext}"] = _write(
        out / f"final_parameters.{ext}", FINAL_COLUMNS, final_rows(results_by_scenario), fmt_name)
    if curves_by_scenario:
        manifest.files[f"learning_curves.{ext}"] = _write(
            out / f"learning_curves.{ext}", CURVE_COLUMNS, curve_rows(curves_by_scenario), fmt_name)
    write_manifest(manifest, out)
    return manifest


def write_manifest(manifest: RunManifest, out_dir) -> Path:
    path = Path(out_dir) / "manifest.json"
    try:
        path.write_text(json.dumps(manifest.to_dict(), indent=2) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc
    return path


def read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
