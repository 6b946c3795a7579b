"""Per-repetition choice among redundant / language-only / complementary messages.

Utilities for the three kinds of block-position instruction come from the same
informativeness-minus-cost tradeoff as full messages, evaluated on one
representative position step; kind shares follow by softmax. Cost weights are
interpolated between fitted first- and final-repetition endpoints.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np

from .agents import Theta
from .convention import N_REPETITIONS
from .seeding import run_rng

KIND_ORDER = ("redundant", "language_only", "complementary")

# Representative single-step costs: the modal clear-position phrase, the
# ambiguous "here", and a pointing gesture.
CLEAR_COST = 0.7
HERE_COST = 0.1
POINT_COST = 0.6

CE_FLOOR = 1e-12


@dataclass(frozen=True)
class ModalityDistribution:
    """Shares of redundant, language-only, and complementary instructions."""

    p_r: float
    p_u: float
    p_c: float

    def __post_init__(self):
        a = self.as_array()
        if np.any(a < 0.0) or abs(a.sum() - 1.0) > 1e-9:
            raise ValueError(f"not a distribution: {tuple(a)}")

    def as_array(self) -> np.ndarray:
        return np.array([self.p_r, self.p_u, self.p_c])

    @classmethod
    def from_array(cls, a) -> "ModalityDistribution":
        a = np.asarray(a, dtype=float)
        return cls(float(a[0]), float(a[1]), float(a[2]))


@dataclass(frozen=True)
class FitTarget:
    label: str
    observed: ModalityDistribution


def _decode_probability(x_first: float, x_second: float | None, n: int) -> float:
    """Literal decode probability of the intended symbol among n alternatives."""
    hit = x_first * (x_second if x_second is not None else 1.0)
    miss = (1.0 - x_first) * ((1.0 - x_second) if x_second is not None else 1.0)
    return hit / (hit + (n - 1) * miss)


def kind_utilities(
    theta: Theta,
    clear_cost: float = CLEAR_COST,
    here_cost: float = HERE_COST,
    gesture_cost: float = POINT_COST,
    n_positions: int = 9,
) -> np.ndarray:
    """Utilities (redundant, language-only, complementary) of one position step.

    The complementary decode pairs the position-uniform "here" with a gesture,
    so its hit probability depends on x_h alone.
    """
    p_redundant = _decode_probability(theta.x_u, theta.x_h, n_positions)
    p_language = _decode_probability(theta.x_u, None, n_positions)
    p_complementary = _decode_probability(theta.x_h, None, n_positions)
    if theta.beta_i == 0.0:
        info = np.zeros(3)
    else:
        with np.errstate(divide="ignore"):
            info = theta.beta_i * np.log([p_redundant, p_language, p_complementary])
    cost_u = theta.beta_u * np.array([clear_cost, clear_cost, here_cost])
    cost_h = theta.beta_h * np.array([gesture_cost, 0.0, gesture_cost])
    return info - cost_u - cost_h


def predicted_modality_distribution(theta: Theta, utility_fn=kind_utilities, **kwargs) -> ModalityDistribution:
    """Softmax kind shares under `theta`. `utility_fn` is the pluggable utility hook."""
    u = np.asarray(utility_fn(theta, **kwargs), dtype=float)
    w = np.exp(u - u.max())
    return ModalityDistribution.from_array(w / w.sum())


def cross_entropy(obs, pred, floor: float = CE_FLOOR) -> float:
    """H(obs, pred) = -sum obs * ln(pred), with pred floored away from zero."""
    o = obs.as_array() if isinstance(obs, ModalityDistribution) else np.asarray(obs, dtype=float)
    p = pred.as_array() if isinstance(pred, ModalityDistribution) else np.asarray(pred, dtype=float)
    p = np.clip(p, floor, None)
    terms = np.where(o > 0.0, o * np.log(p), 0.0)
    return float(-terms.sum())


def entropy(dist) -> float:
    """Shannon entropy, the lower bound of cross_entropy against `dist`."""
    return cross_entropy(dist, dist)


def interpolate_theta(theta_r1: Theta, theta_r4: Theta, repetition: int) -> Theta:
    """Cost weights move linearly from the R1 to the R4 endpoint; semantics and
    the informativeness weight stay at their R1 values."""
    w = (repetition - 1) / (N_REPETITIONS - 1)
    return Theta(
        beta_i=theta_r1.beta_i,
        beta_u=theta_r1.beta_u + w * (theta_r4.beta_u - theta_r1.beta_u),
        beta_h=theta_r1.beta_h + w * (theta_r4.beta_h - theta_r1.beta_h),
        gamma=theta_r1.gamma,
        x_u=theta_r1.x_u,
        x_h=theta_r1.x_h,
    )


def expected_modality_trajectory(theta_r1: Theta, theta_r4: Theta, **kwargs) -> np.ndarray:
    """Exact per-repetition kind shares, shape (N_REPETITIONS, 3) in KIND_ORDER."""
    return np.stack([
        predicted_modality_distribution(interpolate_theta(theta_r1, theta_r4, r), **kwargs).as_array()
        for r in range(1, N_REPETITIONS + 1)
    ])


@dataclass(frozen=True)
class ModalityTrajectory:
    """Sampled mean/sd kind shares per repetition plus the exact softmax shares."""

    mean: np.ndarray      # (N_REPETITIONS, 3)
    sd: np.ndarray        # (N_REPETITIONS, 3)
    expected: np.ndarray  # (N_REPETITIONS, 3)
    n_runs: int

    def mean_distribution(self, repetition: int) -> ModalityDistribution:
        return ModalityDistribution.from_array(self.mean[repetition - 1])


def _single_trajectory(
    run_index: int,
    theta_r1: Theta,
    theta_r4: Theta,
    master_seed: int,
    samples_per_repetition: int,
) -> np.ndarray:
    rng = run_rng(master_seed, run_index)
    rows = []
    for r in range(1, N_REPETITIONS + 1):
        probs = predicted_modality_distribution(interpolate_theta(theta_r1, theta_r4, r)).as_array()
        counts = rng.multinomial(samples_per_repetition, probs)
        rows.append(counts / samples_per_repetition)
    return np.stack(rows)


def simulate_modality_preferences(
    theta_r1: Theta,
    theta_r4: Theta,
    n_runs: int,
    seed: int = 0,
    samples_per_repetition: int = 9,
    workers: int = 1,
) -> ModalityTrajectory:
    """Sample message kinds per run and repetition; average shares across runs.

    Each run draws `samples_per_repetition` kinds per repetition (default 9,
    one per block-position step across the three towers of a repetition).
    Deterministic given `seed`, regardless of `workers`.
    """
    if n_runs < 1:
        raise ValueError("n_runs must be >= 1")
    fn = partial(
        _single_trajectory, theta_r1=theta_r1, theta_r4=theta_r4,
        master_seed=seed, samples_per_repetition=samples_per_repetition,
    )
    if workers <= 1:
        per_run = [fn(i) for i in range(n_runs)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_run = list(pool.map(fn, range(n_runs)))
    stacked = np.stack(per_run)
    return ModalityTrajectory(
        mean=stacked.mean(axis=0),
        sd=stacked.std(axis=0),
        expected=expected_modality_trajectory(theta_r1, theta_r4),
        n_runs=n_runs,
    )
