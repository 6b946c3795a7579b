"""Repeated-trial convention formation: program choice, decoding, teaching.

Each run walks the study schedule (four repetitions, every tower once per
repetition in random order). Per trial the Instructor softmax-chooses jointly
over (unlocked program, candidate message), the Builder MAP-decodes every
sub-message, and on success both sides Bayes-update their lexicon beliefs; a
more abstract program is then unlocked and taught when abstraction pays off.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np

from . import dsl
from . import lexicon as lx
from .agents import (
    ALL_KINDS,
    AgentState,
    Message,
    MessageKind,
    SubMessage,
    Theta,
    belief_marginal_utility,
    choose_message,
    map_decode,
    message_candidates,
    message_utility,
    pragmatic_builder_distribution,
    update_belief,
)
from .errors import EmptyInputError
from .seeding import run_rng

N_REPETITIONS = 4

# Gestures are not modeled in the abstraction simulation; instructions are
# utterance-only and beta_h plays no role.
DEFAULT_SIM1_KINDS = (MessageKind.LANGUAGE_ONLY,)

UNLOCK_POLICIES = ("improvement", "always")


@dataclass(frozen=True)
class TrialRecord:
    repetition: int
    tower_id: str
    program_used: dsl.TowerProgram
    message_kinds: tuple[str, ...]
    success: bool
    program_length: int


@dataclass(frozen=True)
class RunResult:
    trials: tuple[TrialRecord, ...]
    master_seed: int
    run_index: int
    theta: Theta


def _best_utility(program, theta, lex, kinds):
    return max(
        message_utility(msg, program, theta, lex)
        for msg in message_candidates(program, lex, kinds)
    )


def _should_unlock(library, next_index, theta, lex, kinds, policy) -> bool:
    """Abstraction proposal gate.

    "improvement": propose only if the next program, once its convention is
    established, offers strictly higher best-message utility than fully
    primitive communication. "always": propose after any success.
    """
    if policy == "always":
        return True
    if policy != "improvement":
        raise ValueError(f"unknown unlock policy {policy!r}")
    return _best_utility(library[next_index], theta, lex, kinds) > _best_utility(
        library[0], theta, lex, kinds
    )


def _teaching_pairs(program: dsl.TowerProgram, lex: lx.Lexicon) -> list[tuple[SubMessage, dsl.Symbol]]:
    """Redundant chunk signals paired with their meanings, one per chunk step."""
    pairs = []
    for step in program.steps:
        if step.thing.kind is dsl.Kind.CHUNK:
            lexeme = lex.lexeme_for(step.thing)
            sub = SubMessage(lx.chunk_utterance(lexeme), lx.shape_gesture(lexeme), step.thing)
            pairs.append((sub, step.thing))
    return pairs


def _apply_updates(instructor: AgentState, builder: AgentState, pairs, theta: Theta) -> None:
    if not pairs:
        return
    builder.belief = update_belief(builder.belief, pairs, theta, about="instructor")
    instructor.belief = update_belief(instructor.belief, pairs, theta, about="builder")


def run_trial(
    instructor: AgentState,
    builder: AgentState,
    tower_id: str,
    unlocked: int,
    theta: Theta,
    rng: np.random.Generator,
    kinds: tuple[MessageKind, ...] = DEFAULT_SIM1_KINDS,
    unlock_policy: str = "improvement",
    repetition: int = 0,
) -> tuple[TrialRecord, int]:
    """One Instructor->Builder exchange for one tower; returns the record and
    the (possibly advanced) unlocked program index."""
    library = dsl.programs_for_tower(tower_id)
    if not 0 <= unlocked < len(library):
        raise ValueError(f"unlocked index {unlocked} outside library of size {len(library)}")

    candidates = [
        (program, message)
        for program in library[: unlocked + 1]
        for message in message_candidates(program, instructor.own_lexicon, kinds)
    ]
    utilities = [
        belief_marginal_utility(message, program, theta, instructor.belief)
        for program, message in candidates
    ]
    program, message = choose_message(candidates, utilities, rng)

    decoded = []
    for sub in message.subs:
        space = dsl.category_space(sub.utterance.category)
        dist = pragmatic_builder_distribution(sub, space, builder.belief, theta)
        decoded.append(map_decode(dist, space))
    success = all(d == sub.intended for d, sub in zip(decoded, message.subs))

    if success:
        chunk_pairs = [(sub, sub.intended) for sub in message.subs
                       if sub.intended.kind is dsl.Kind.CHUNK]
        _apply_updates(instructor, builder, chunk_pairs, theta)
        if unlocked + 1 < len(library) and _should_unlock(
            library, unlocked + 1, theta, instructor.own_lexicon, kinds, unlock_policy
        ):
            unlocked += 1
            _apply_updates(
                instructor, builder,
                _teaching_pairs(library[unlocked], instructor.own_lexicon), theta,
            )

    record = TrialRecord(
        repetition=repetition,
        tower_id=tower_id,
        program_used=program,
        message_kinds=message.kinds(),
        success=success,
        program_length=dsl.program_length(program),
    )
    return record, unlocked


def _single_run(
    run_index: int,
    theta: Theta,
    master_seed: int,
    kinds: tuple[MessageKind, ...],
    unlock_policy: str,
) -> RunResult:
    rng = run_rng(master_seed, run_index)
    true_lexicon = lx.LEXICONS[int(rng.integers(lx.N_LEXICONS))]
    instructor = AgentState("instructor", lx.uniform_prior(), true_lexicon)
    builder = AgentState("builder", lx.uniform_prior(), true_lexicon)
    unlocked = {tower_id: 0 for tower_id in dsl.TOWER_IDS}
    trials = []
    for repetition in range(1, N_REPETITIONS + 1):
        order = [dsl.TOWER_IDS[i] for i in rng.permutation(len(dsl.TOWER_IDS))]
        for tower_id in order:
            record, unlocked[tower_id] = run_trial(
                instructor, builder, tower_id, unlocked[tower_id], theta, rng,
                kinds=kinds, unlock_policy=unlock_policy, repetition=repetition,
            )
            trials.append(record)
    return RunResult(tuple(trials), master_seed, run_index, theta)


def run_simulation1(
    theta: Theta,
    n_runs: int,
    seed: int = 0,
    kinds: tuple[MessageKind, ...] = DEFAULT_SIM1_KINDS,
    unlock_policy: str = "improvement",
    workers: int = 1,
) -> list[RunResult]:
    """Independent convention-formation runs with per-run random streams.

    Deterministic given `seed`, regardless of `workers`.
    """
    if n_runs < 1:
        raise ValueError("n_runs must be >= 1")
    fn = partial(
        _single_run, theta=theta, master_seed=seed, kinds=tuple(kinds),
        unlock_policy=unlock_policy,
    )
    if workers <= 1:
        return [fn(i) for i in range(n_runs)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n_runs)))


@dataclass(frozen=True)
class LengthSummary:
    repetitions: tuple[int, ...]
    mean: np.ndarray
    sd: np.ndarray
    n: tuple[int, ...]


def aggregate_lengths(results) -> LengthSummary:
    """Mean and standard deviation of program length per repetition, pooling towers and runs."""
    trials = [t for r in results for t in r.trials]
    if not trials:
        raise EmptyInputError("no trials to aggregate")
    repetitions = sorted({t.repetition for t in trials})
    means, sds, ns = [], [], []
    for rep in repetitions:
        lengths = np.array([t.program_length for t in trials if t.repetition == rep], dtype=float)
        means.append(lengths.mean())
        sds.append(lengths.std())
        ns.append(len(lengths))
    return LengthSummary(tuple(repetitions), np.array(means), np.array(sds), tuple(ns))
