"""Experiment configuration: JSON schema, validation, and built-in defaults.

Keys beginning with an underscore are ignored everywhere, so example files can
carry inline notes. Documented bounds: beta weights in [0, 40], gamma in
[0, 1], soft truth values in [0, 1], n_runs >= 1.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np

from .agents import ALL_KINDS, MessageKind, Theta
from .convention import DEFAULT_SIM1_KINDS, UNLOCK_POLICIES
from .errors import ConfigParseError, ConfigValidationError
from .modality import FitTarget, ModalityDistribution

logger = logging.getLogger(__name__)

EXPERIMENTS = ("sim-abstraction", "sim-modality", "fit")
FORMATS = ("csv", "json")

BETA_MAX = 40.0

# Fitted cost/semantics endpoints for the first repetition and for the two
# participant groups in the final repetition.
R1_THETA = Theta(beta_i=10.0, beta_u=20.25, beta_h=9.23, x_u=0.87, x_h=0.62)
PREFER_U_R4_THETA = Theta(beta_i=10.0, beta_u=6.17, beta_h=10.15, x_u=0.87, x_h=0.62)
PREFER_H_R4_THETA = Theta(beta_i=10.0, beta_u=21.01, beta_h=3.09, x_u=0.87, x_h=0.62)

# Observed first-repetition block-position shares (redundant, language-only,
# complementary); renormalized on load.
R1_OBSERVED = (0.81, 0.12, 0.06)
# The final-repetition group targets were never measured; these are directional
# placeholders only.
PLACEHOLDER_R4_PREFER_U = (0.50, 0.40, 0.10)
PLACEHOLDER_R4_PREFER_H = (0.45, 0.10, 0.45)

ABSTRACTION_BETA_U_GRID = (0.1, 0.5, 1.0)
ABSTRACTION_BETA_I = 0.3


@dataclass
class AbstractionCondition:
    label: str
    theta: Theta


@dataclass
class ModalityCondition:
    label: str
    theta_r1: Theta
    theta_r4: Theta


@dataclass
class FitTargetSpec:
    label: str
    target: FitTarget
    fix_x_from: str | None = None


@dataclass
class SimConfig:
    experiment: str
    seed: int = 0
    n_runs: int = 100
    workers: int = 1
    output_path: str = "results.csv"
    format: str = "csv"
    # sim-abstraction
    abstraction_conditions: list[AbstractionCondition] = field(default_factory=list)
    message_kinds: tuple[MessageKind, ...] = DEFAULT_SIM1_KINDS
    unlock_policy: str = "improvement"
    # sim-modality
    modality_conditions: list[ModalityCondition] = field(default_factory=list)
    samples_per_repetition: int = 9
    # fit
    fit_targets: list[FitTargetSpec] = field(default_factory=list)
    n_init: int = 40
    n_iter: int = 200
    beta_i: float = 10.0


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigValidationError(message)


def _check_range(value: float, lo: float, hi: float, where: str) -> float:
    _require(
        isinstance(value, (int, float)) and lo <= float(value) <= hi,
        f"{where}={value!r} outside [{lo:g}, {hi:g}]",
    )
    return float(value)


def theta_from_dict(d: dict, where: str) -> Theta:
    known = {"beta_i", "beta_u", "beta_h", "gamma", "x_u", "x_h"}
    for key in d:
        if not key.startswith("_") and key not in known:
            raise ConfigValidationError(f"{where}.{key}: unknown theta field")
    return Theta(
        beta_i=_check_range(d.get("beta_i", 10.0), 0.0, BETA_MAX, f"{where}.beta_i"),
        beta_u=_check_range(d.get("beta_u", 0.0), 0.0, BETA_MAX, f"{where}.beta_u"),
        beta_h=_check_range(d.get("beta_h", 0.0), 0.0, BETA_MAX, f"{where}.beta_h"),
        gamma=_check_range(d.get("gamma", 0.5), 0.0, 1.0, f"{where}.gamma"),
        x_u=_check_range(d.get("x_u", 1.0), 0.0, 1.0, f"{where}.x_u"),
        x_h=_check_range(d.get("x_h", 1.0), 0.0, 1.0, f"{where}.x_h"),
    )


def _theta_dict(theta: Theta) -> dict:
    return {
        "beta_i": theta.beta_i, "beta_u": theta.beta_u, "beta_h": theta.beta_h,
        "gamma": theta.gamma, "x_u": theta.x_u, "x_h": theta.x_h,
    }


def load_observed(values, where: str) -> ModalityDistribution:
    """Validate and renormalize an observed (p_r, p_u, p_c) triple."""
    arr = np.asarray(values, dtype=float)
    _require(arr.shape == (3,), f"{where}: expected 3 proportions, got {values!r}")
    _require(bool(np.all(arr >= 0.0)) and arr.sum() > 0.0, f"{where}: proportions must be >= 0")
    total = arr.sum()
    if abs(total - 1.0) > 1e-9:
        logger.warning("%s: observed proportions sum to %.4f; renormalizing", where, total)
        arr = arr / total
    return ModalityDistribution.from_array(arr)


def _parse_kinds(values, where: str) -> tuple[MessageKind, ...]:
    out = []
    for v in values:
        try:
            out.append(MessageKind(v))
        except ValueError:
            raise ConfigValidationError(
                f"{where}: unknown message kind {v!r} (choose from "
                f"{[k.value for k in ALL_KINDS]})"
            ) from None
    return tuple(out)


def config_from_dict(raw: dict) -> SimConfig:
    """Build and validate a SimConfig from parsed JSON."""
    raw = {k: v for k, v in raw.items() if not k.startswith("_")}
    experiment = raw.get("experiment")
    _require(experiment in EXPERIMENTS, f"experiment={experiment!r} not in {EXPERIMENTS}")

    cfg = SimConfig(experiment=experiment)
    cfg.seed = int(raw.get("seed", cfg.seed))
    _require(cfg.seed >= 0, f"seed={cfg.seed} must be >= 0")
    cfg.n_runs = int(raw.get("n_runs", cfg.n_runs))
    _require(cfg.n_runs >= 1, f"n_runs={cfg.n_runs} must be >= 1")
    cfg.workers = int(raw.get("workers", cfg.workers))
    _require(cfg.workers >= 1, f"workers={cfg.workers} must be >= 1")
    cfg.output_path = str(raw.get("output_path", cfg.output_path))
    cfg.format = str(raw.get("format", cfg.format))
    _require(cfg.format in FORMATS, f"format={cfg.format!r} not in {FORMATS}")

    if experiment == "sim-abstraction":
        if "message_kinds" in raw:
            cfg.message_kinds = _parse_kinds(raw["message_kinds"], "message_kinds")
        cfg.unlock_policy = str(raw.get("unlock_policy", cfg.unlock_policy))
        _require(cfg.unlock_policy in UNLOCK_POLICIES,
                 f"unlock_policy={cfg.unlock_policy!r} not in {UNLOCK_POLICIES}")
        conditions = raw.get("conditions", _default_abstraction_conditions())
        _require(bool(conditions), "sim-abstraction needs at least one condition")
        cfg.abstraction_conditions = [
            AbstractionCondition(
                label=str(c.get("label", f"condition{i}")),
                theta=theta_from_dict(c.get("theta", {}), f"conditions[{i}].theta"),
            )
            for i, c in enumerate(conditions)
        ]
    elif experiment == "sim-modality":
        cfg.samples_per_repetition = int(raw.get("samples_per_repetition", cfg.samples_per_repetition))
        _require(cfg.samples_per_repetition >= 1,
                 f"samples_per_repetition={cfg.samples_per_repetition} must be >= 1")
        conditions = raw.get("conditions", _default_modality_conditions())
        _require(bool(conditions), "sim-modality needs at least one condition")
        cfg.modality_conditions = [
            ModalityCondition(
                label=str(c.get("label", f"condition{i}")),
                theta_r1=theta_from_dict(c.get("theta_r1", {}), f"conditions[{i}].theta_r1"),
                theta_r4=theta_from_dict(c.get("theta_r4", {}), f"conditions[{i}].theta_r4"),
            )
            for i, c in enumerate(conditions)
        ]
    else:
        cfg.n_init = int(raw.get("n_init", cfg.n_init))
        cfg.n_iter = int(raw.get("n_iter", cfg.n_iter))
        _require(cfg.n_init >= 1, f"n_init={cfg.n_init} must be >= 1")
        _require(cfg.n_iter >= cfg.n_init, f"n_iter={cfg.n_iter} must be >= n_init={cfg.n_init}")
        cfg.beta_i = _check_range(raw.get("beta_i", cfg.beta_i), 0.0, BETA_MAX, "beta_i")
        targets = raw.get("targets", _default_fit_targets())
        _require(bool(targets), "fit needs at least one target")
        cfg.fit_targets = []
        labels = set()
        for i, t in enumerate(targets):
            label = str(t.get("label", f"target{i}"))
            observed = load_observed(t.get("observed"), f"targets[{i}].observed")
            fix_from = t.get("fix_x_from")
            if fix_from is not None:
                _require(fix_from in labels,
                         f"targets[{i}].fix_x_from={fix_from!r} must name an earlier target")
            cfg.fit_targets.append(FitTargetSpec(label, FitTarget(label, observed), fix_from))
            labels.add(label)
    return cfg


def load_config(path: str) -> SimConfig:
    """Parse and validate a JSON experiment configuration file."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigParseError(f"{path}: top level must be an object")
    return config_from_dict(raw)


def _default_abstraction_conditions() -> list[dict]:
    return [
        {"label": f"beta_u={bu:g}",
         "theta": {"beta_i": ABSTRACTION_BETA_I, "beta_u": bu, "beta_h": 0.0,
                   "gamma": 0.5, "x_u": 1.0, "x_h": 1.0}}
        for bu in ABSTRACTION_BETA_U_GRID
    ]


def _default_modality_conditions() -> list[dict]:
    return [
        {"label": "prefer_u", "theta_r1": _theta_dict(R1_THETA),
         "theta_r4": _theta_dict(PREFER_U_R4_THETA)},
        {"label": "prefer_h", "theta_r1": _theta_dict(R1_THETA),
         "theta_r4": _theta_dict(PREFER_H_R4_THETA)},
    ]


def _default_fit_targets() -> list[dict]:
    return [
        {"label": "r1", "observed": list(R1_OBSERVED)},
        {"label": "r4_prefer_u", "observed": list(PLACEHOLDER_R4_PREFER_U), "fix_x_from": "r1",
         "_note": "placeholder target, not a measured distribution"},
        {"label": "r4_prefer_h", "observed": list(PLACEHOLDER_R4_PREFER_H), "fix_x_from": "r1",
         "_note": "placeholder target, not a measured distribution"},
    ]


def default_config(experiment: str) -> SimConfig:
    """Built-in configuration reproducing the default simulations and fits."""
    defaults = {
        "sim-abstraction": {"experiment": "sim-abstraction", "n_runs": 100},
        "sim-modality": {"experiment": "sim-modality", "n_runs": 200},
        "fit": {"experiment": "fit"},
    }
    if experiment not in defaults:
        raise ConfigValidationError(f"experiment={experiment!r} not in {EXPERIMENTS}")
    return config_from_dict(defaults[experiment])
