"""Bounded derivative-free minimization and modality-target fitting.

The default backend draws a Latin-hypercube batch of initial points, then
spends the remaining budget on bounded Nelder-Mead refinement restarted from
the best starts. Everything is deterministic given the seed, evaluations are
cached, and the best-so-far trace is monotone by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .agents import Theta
from .errors import NonFiniteLossError
from .modality import cross_entropy, predicted_modality_distribution

# Search box used when fitting modality targets. The informativeness weight is
# held fixed so cost weights alone explain behavioral change.
BETA_BOUNDS = (0.0, 40.0)
X_BOUNDS = (0.5, 1.0)
FIXED_BETA_I = 10.0

CACHE_RESOLUTION = 1e-9


@dataclass(frozen=True)
class OptRecord:
    best_x: tuple[float, ...]
    best_loss: float
    evaluations: tuple[tuple[tuple[float, ...], float], ...]
    seed: int

    def best_so_far(self) -> np.ndarray:
        return np.minimum.accumulate([loss for _, loss in self.evaluations])


class _Budget(Exception):
    pass


class _Recorder:
    """Caches loss evaluations and enforces the evaluation budget."""

    def __init__(self, loss, bounds, max_evals):
        self.loss = loss
        self.lo = np.array([b[0] for b in bounds], dtype=float)
        self.hi = np.array([b[1] for b in bounds], dtype=float)
        self.max_evals = max_evals
        self.cache: dict[tuple[float, ...], float] = {}
        self.evaluations: list[tuple[tuple[float, ...], float]] = []

    def __call__(self, x) -> float:
        x = np.clip(np.asarray(x, dtype=float), self.lo, self.hi)
        key = tuple(np.round(x / CACHE_RESOLUTION) * CACHE_RESOLUTION)
        if key in self.cache:
            return self.cache[key]
        if len(self.evaluations) >= self.max_evals:
            raise _Budget()
        value = float(self.loss(x))
        if not np.isfinite(value):
            raise NonFiniteLossError(f"loss({tuple(x)}) = {value}")
        self.cache[key] = value
        self.evaluations.append((tuple(x), value))
        return value


def _latin_hypercube(rng: np.random.Generator, n: int, bounds) -> np.ndarray:
    """n points stratified per dimension across the box."""
    d = len(bounds)
    u = np.empty((n, d))
    for j in range(d):
        u[:, j] = (rng.permutation(n) + rng.random(n)) / n
    lo = np.array([b[0] for b in bounds])
    hi = np.array([b[1] for b in bounds])
    return lo + u * (hi - lo)


def minimize(loss, bounds, n_init: int = 40, n_iter: int = 200, seed: int = 0) -> OptRecord:
    """Minimize `loss` over the box `bounds` with at most `n_iter` evaluations.

    `n_init` Latin-hypercube points are scored first; the remaining budget goes
    to Nelder-Mead restarts from the best initial points. With n_iter == n_init
    this degenerates to pure random search.
    """
    bounds = [(float(lo), float(hi)) for lo, hi in bounds]
    if n_init < 1:
        raise ValueError("n_init must be >= 1")
    if n_iter < n_init:
        raise ValueError("n_iter must be >= n_init")
    for lo, hi in bounds:
        if not lo < hi:
            raise ValueError(f"empty bound ({lo}, {hi})")

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    recorder = _Recorder(loss, bounds, n_iter)

    inits = _latin_hypercube(rng, n_init, bounds)
    init_losses = np.array([recorder(x) for x in inits])

    d = len(bounds)
    for start_idx in np.argsort(init_losses, kind="stable"):
        remaining = n_iter - len(recorder.evaluations)
        if remaining < d + 2:  # not enough budget for a useful simplex
            break
        try:
            optimize.minimize(
                recorder,
                inits[start_idx],
                method="Nelder-Mead",
                bounds=bounds,
                options={"maxfev": remaining, "xatol": 1e-6, "fatol": 1e-10},
            )
        except _Budget:
            pass

    evaluations = tuple(recorder.evaluations)
    best_x, best_loss = min(evaluations, key=lambda e: e[1])
    return OptRecord(best_x, best_loss, evaluations, seed)


@dataclass(frozen=True)
class FitResult:
    theta: Theta
    record: OptRecord


def fit_modality_target(
    target,
    n_init: int = 40,
    n_iter: int = 200,
    seed: int = 0,
    beta_i: float = FIXED_BETA_I,
    fixed_x: tuple[float, float] | None = None,
    gamma: float = 0.5,
    utility_fn=None,
) -> FitResult:
    """Fit cost weights (and semantics, unless `fixed_x` pins them) to an
    observed modality distribution by minimizing cross-entropy."""
    observed = target.observed if hasattr(target, "observed") else target
    free_x = fixed_x is None
    bounds = [BETA_BOUNDS, BETA_BOUNDS] + ([X_BOUNDS, X_BOUNDS] if free_x else [])

    def unpack(x) -> Theta:
        x_u, x_h = (x[2], x[3]) if free_x else fixed_x
        return Theta(beta_i=beta_i, beta_u=x[0], beta_h=x[1], gamma=gamma, x_u=x_u, x_h=x_h)

    extra = {} if utility_fn is None else {"utility_fn": utility_fn}

    def loss(x) -> float:
        return cross_entropy(observed, predicted_modality_distribution(unpack(x), **extra))

    record = minimize(loss, bounds, n_init=n_init, n_iter=n_iter, seed=seed)
    return FitResult(unpack(np.asarray(record.best_x)), record)
