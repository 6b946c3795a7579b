"""Command-line entry point: sim-abstraction, sim-modality, and fit experiments.

Exit codes: 0 success, 1 configuration/validation problem, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys

from . import config as cfgmod
from .agents import Theta
from .convention import aggregate_lengths, run_simulation1
from .errors import ConfigParseError, ConfigValidationError, TowertalkError
from .fitting import fit_modality_target
from .modality import KIND_ORDER, entropy, simulate_modality_preferences
from .results import OutputRow, write_results

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="towertalk",
        description="Simulate multimodal convention formation in a block-assembly task.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("sim-abstraction", "program-length trajectories across repetitions"),
        ("sim-modality", "redundant/language-only/complementary shares across repetitions"),
        ("fit", "fit cost weights and semantics to observed modality shares"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON config file (defaults are built in)")
        p.add_argument("--seed", type=int, help="master seed for all random streams")
        p.add_argument("--runs", type=int, help="number of independent runs")
        p.add_argument("--workers", type=int, help="parallel worker processes")
        p.add_argument("--beta-u", type=float, help="override utterance-cost weight everywhere")
        p.add_argument("--beta-h", type=float, help="override gesture-cost weight everywhere")
        p.add_argument("--beta-i", type=float, help="override informativeness weight everywhere")
        p.add_argument("--gamma", type=float, help="override modality mixture weight everywhere")
        p.add_argument("--out", help="output file path")
        p.add_argument("--format", choices=cfgmod.FORMATS, help="output format")
    return parser


def _override_theta(theta: Theta, args) -> Theta:
    fields = {}
    for name, hi in (("beta_u", cfgmod.BETA_MAX), ("beta_h", cfgmod.BETA_MAX),
                     ("beta_i", cfgmod.BETA_MAX), ("gamma", 1.0)):
        value = getattr(args, name)
        if value is not None:
            if not 0.0 <= value <= hi:
                raise ConfigValidationError(f"--{name.replace('_', '-')}={value:g} outside [0, {hi:g}]")
            fields[name] = value
    return dataclasses.replace(theta, **fields) if fields else theta


def _apply_overrides(cfg: cfgmod.SimConfig, args) -> cfgmod.SimConfig:
    if args.seed is not None:
        cfg.seed = args.seed
    if args.runs is not None:
        cfg.n_runs = args.runs
    if args.workers is not None:
        cfg.workers = args.workers
    if args.out is not None:
        cfg.output_path = args.out
    if args.format is not None:
        cfg.format = args.format

    if cfg.experiment == "sim-abstraction":
        if args.beta_u is not None:
            # A single cost weight collapses the sweep to one condition.
            base = cfg.abstraction_conditions[0].theta
            cfg.abstraction_conditions = [cfgmod.AbstractionCondition(
                label=f"beta_u={args.beta_u:g}",
                theta=dataclasses.replace(base, beta_u=args.beta_u),
            )]
        cfg.abstraction_conditions = [
            cfgmod.AbstractionCondition(c.label, _override_theta(c.theta, args))
            for c in cfg.abstraction_conditions
        ]
    elif cfg.experiment == "sim-modality":
        cfg.modality_conditions = [
            cfgmod.ModalityCondition(
                c.label, _override_theta(c.theta_r1, args), _override_theta(c.theta_r4, args)
            )
            for c in cfg.modality_conditions
        ]
    elif args.beta_i is not None:
        if not 0.0 <= args.beta_i <= cfgmod.BETA_MAX:
            raise ConfigValidationError(f"--beta-i={args.beta_i:g} outside [0, {cfgmod.BETA_MAX:g}]")
        cfg.beta_i = args.beta_i
    return cfg


def _run_abstraction(cfg: cfgmod.SimConfig) -> list[OutputRow]:
    rows = []
    for cond in cfg.abstraction_conditions:
        results = run_simulation1(
            cond.theta, cfg.n_runs, seed=cfg.seed, kinds=cfg.message_kinds,
            unlock_policy=cfg.unlock_policy, workers=cfg.workers,
        )
        summary = aggregate_lengths(results)
        for rep, mean, sd, n in zip(summary.repetitions, summary.mean, summary.sd, summary.n):
            rows.append(OutputRow(cfg.experiment, cond.label, int(rep), "program_length",
                                  float(mean), int(n), float(sd)))
        final = summary.mean[-1]
        print(f"{cond.label}: mean program length {summary.mean[0]:.2f} -> {final:.2f} "
              f"over {len(summary.repetitions)} repetitions ({cfg.n_runs} runs)")
    return rows


def _run_modality(cfg: cfgmod.SimConfig) -> list[OutputRow]:
    rows = []
    for cond in cfg.modality_conditions:
        traj = simulate_modality_preferences(
            cond.theta_r1, cond.theta_r4, cfg.n_runs, seed=cfg.seed,
            samples_per_repetition=cfg.samples_per_repetition, workers=cfg.workers,
        )
        for rep_idx in range(traj.mean.shape[0]):
            for kind_idx, kind in enumerate(KIND_ORDER):
                rows.append(OutputRow(
                    cfg.experiment, cond.label, rep_idx + 1, f"p_{kind}",
                    float(traj.mean[rep_idx, kind_idx]), cfg.n_runs,
                    float(traj.sd[rep_idx, kind_idx]),
                ))
        first, last = traj.mean[0], traj.mean[-1]
        print(f"{cond.label}: language-only {first[1]:.3f} -> {last[1]:.3f}, "
              f"complementary {first[2]:.3f} -> {last[2]:.3f} ({cfg.n_runs} runs)")
    return rows


def _run_fit(cfg: cfgmod.SimConfig) -> list[OutputRow]:
    rows = []
    fitted: dict[str, Theta] = {}
    for spec in cfg.fit_targets:
        fixed_x = None
        if spec.fix_x_from is not None:
            ref = fitted[spec.fix_x_from]
            fixed_x = (ref.x_u, ref.x_h)
        result = fit_modality_target(
            spec.target, n_init=cfg.n_init, n_iter=cfg.n_iter, seed=cfg.seed,
            beta_i=cfg.beta_i, fixed_x=fixed_x,
        )
        fitted[spec.label] = result.theta
        n_evals = len(result.record.evaluations)
        theta = result.theta
        for metric, value in (
            ("best_beta_u", theta.beta_u), ("best_beta_h", theta.beta_h),
            ("best_x_u", theta.x_u), ("best_x_h", theta.x_h),
            ("best_loss", result.record.best_loss),
            ("target_entropy", entropy(spec.target.observed)),
        ):
            rows.append(OutputRow(cfg.experiment, spec.label, 0, metric, float(value), n_evals))
        print(f"{spec.label}: best loss {result.record.best_loss:.4f} "
              f"(target entropy {entropy(spec.target.observed):.4f}) at "
              f"beta_u={theta.beta_u:.2f}, beta_h={theta.beta_h:.2f}, "
              f"x_u={theta.x_u:.3f}, x_h={theta.x_h:.3f}")
    return rows


def run_command(cfg: cfgmod.SimConfig) -> list[OutputRow]:
    """Dispatch one experiment and write its results file."""
    runner = {
        "sim-abstraction": _run_abstraction,
        "sim-modality": _run_modality,
        "fit": _run_fit,
    }[cfg.experiment]
    rows = runner(cfg)
    write_results(rows, cfg.output_path, cfg.format)
    print(f"wrote {len(rows)} rows to {cfg.output_path}")
    return rows


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = cfgmod.load_config(args.config) if args.config else cfgmod.default_config(args.command)
        if cfg.experiment != args.command:
            raise ConfigValidationError(
                f"config is for {cfg.experiment!r} but the {args.command!r} command was invoked"
            )
        cfg = _apply_overrides(cfg, args)
    except (ConfigParseError, ConfigValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        run_command(cfg)
    except TowertalkError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
