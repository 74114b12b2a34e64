"""Command-line entry point.

    biasevo run --scenario baseline --reboots 25 --seed 42 --out results/
    biasevo list
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time

from .analysis import learning_curve, summarize_scenario
from .config import ConfigError, config_to_dict, parse_config
from .experiments import run_scenario, scenario_grid, scenario_views
from .output import emit_outputs, write_manifest

OUT_DIR_ENV = "BIASEVO_OUT_DIR"
log = logging.getLogger("biasevo")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="biasevo", description="Evolve biased RL agents in bandit tasks.")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario or a scenario group")
    run.add_argument("--scenario", help="scenario name or group (stable, volatile, initialization, macro, all)")
    run.add_argument("--config", help="JSON config file (ScenarioConfig fields)")
    run.add_argument("--agents", type=int, dest="n_agents")
    run.add_argument("--generations", type=int, dest="n_generations")
    run.add_argument("--reboots", type=int, dest="n_reboots")
    run.add_argument("--seed", type=int, dest="master_seed")
    run.add_argument("--mutation-target", choices=["five_percent_of_survivors", "all_descendants"])
    run.add_argument("--threads", type=int, default=1, help="worker threads; 1 is the reference mode")
    run.add_argument("--out", default=None, help=f"output directory (default ${OUT_DIR_ENV} or ./results)")
    run.add_argument("--format", choices=["csv", "json"], default="csv")
    run.add_argument("--spread", choices=["sem", "sd"], default="sem",
                     help="what the +/- columns of summary hold")
    run.add_argument("--learning-curves", action="store_true", help="record final-generation learning curves")
    run.add_argument("--plots", action="store_true", help="write PNG figures (implies --learning-curves)")
    run.add_argument("-v", "--verbose", action="store_true")

    sub.add_parser("list", help="list scenario names and groups")
    return p


def cmd_list() -> int:
    for name, cfg in scenario_grid().items():
        envs = ", ".join(e.label for e in cfg.environments)
        print(f"{name:16s} init={cfg.init_mode.kind:8s} envs=[{envs}]")
    for group, names in scenario_views().items():
        print(f"group {group}: {' '.join(names)}")
    return 0


def cmd_run(args) -> int:
    record = args.learning_curves or args.plots
    configs = parse_config(
        args.scenario, args.config,
        n_agents=args.n_agents, n_generations=args.n_generations, n_reboots=args.n_reboots,
        master_seed=args.master_seed, mutation_target=args.mutation_target,
        record_learning_curves=True if record else None,
    )
    if args.format == "json" and args.plots:
        raise ConfigError("plots: --plots reads the CSV outputs; use --format csv")
    out_dir = args.out or os.environ.get(OUT_DIR_ENV) or "results"

    start = time.perf_counter()
    results, summaries, curves = {}, [], {}
    for cfg in configs:
        t0 = time.perf_counter()
        res = run_scenario(cfg, threads=args.threads)
        results[cfg.name] = res
        if len(res) >= 2:
            summaries.append(summarize_scenario(res, cfg.name, spread=args.spread))
        else:
            log.warning("%s: fewer than 2 reboots, no summary row", cfg.name)
        if cfg.record_learning_curves:
            curves[cfg.name] = {e.label: learning_curve(res, e.label) for e in cfg.environments}
        log.info("%s done in %.1fs", cfg.name, time.perf_counter() - t0)

    manifest = emit_outputs(
        results, summaries, out_dir, args.format, curves,
        configs=[config_to_dict(c) for c in configs],
        master_seed=configs[0].master_seed, duration_s=time.perf_counter() - start,
    )
    if args.plots:
        from .plots import emit_plots

        manifest.plots = [p.name for p in emit_plots(out_dir)]
        write_manifest(manifest, out_dir)
    for s in summaries:
        print(f"{s.scenario:16s} dalpha>0 {s.pct_positivity:5.1f}%  dalpha {s.mean_dalpha:+.3f} "
              f"+/- {s.sem_dalpha:.3f} (p={s.p_dalpha:.2g})  phi>0 {s.pct_perseveration:5.1f}%  "
              f"phi {s.mean_phi:+.2f} +/- {s.sem_phi:.2f} (p={s.p_phi:.2g})")
    print(f"outputs written to {out_dir}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "list":
            return cmd_list()
        return cmd_run(args)
    except ConfigError as exc:
        print(f"biasevo: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"biasevo: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
