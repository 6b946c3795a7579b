"""Instructor utilities, literal and pragmatic Builder inference, belief updates.

The Instructor scores a candidate multimodal message by how well a literal
Builder would decode each sub-message, minus weighted utterance and gesture
costs, and picks softmax-proportionally to exp(utility). The pragmatic Builder
inverts a single-step softmax speaker and marginalizes over its belief about
which lexicon the Instructor is using.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import product

import numpy as np

from . import dsl
from . import lexicon as lx
from .errors import (
    CategoryMismatchError,
    MisalignedMessageError,
    NoFiniteCandidateError,
    ZeroMassError,
)

logger = logging.getLogger(__name__)


class MessageKind(str, Enum):
    REDUNDANT = "redundant"            # clear utterance + matching gesture
    COMPLEMENTARY = "complementary"    # ambiguous utterance disambiguated by gesture
    LANGUAGE_ONLY = "language_only"    # clear utterance alone


ALL_KINDS = (MessageKind.REDUNDANT, MessageKind.COMPLEMENTARY, MessageKind.LANGUAGE_ONLY)


@dataclass(frozen=True)
class Theta:
    """Agent parameter bundle.

    beta_i weighs informativeness, beta_u/beta_h weigh utterance/gesture cost,
    gamma mixes the two modalities during pragmatic inference, and x_u/x_h are
    the soft truth values of clear utterances/gestures (1.0 = binary semantics).
    """

    beta_i: float
    beta_u: float
    beta_h: float
    gamma: float = 0.5
    x_u: float = 1.0
    x_h: float = 1.0

    def __post_init__(self):
        for name in ("beta_i", "beta_u", "beta_h"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise ValueError(f"{name} must be finite and >= 0, got {v}")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma}")
        for name in ("x_u", "x_h"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")


@dataclass(frozen=True)
class SubMessage:
    """One signal pair (utterance, optional gesture) for one program symbol."""

    utterance: lx.Signal
    gesture: lx.Signal | None
    intended: dsl.Symbol

    def __post_init__(self):
        if self.utterance.modality is not lx.Modality.UTTERANCE:
            raise ValueError("utterance slot must carry an utterance signal")
        if self.gesture is not None and self.gesture.modality is not lx.Modality.GESTURE:
            raise ValueError("gesture slot must carry a gesture signal")
        if self.utterance.ambiguous and self.gesture is None:
            raise ValueError("an ambiguous utterance requires a gesture")
        if self.gesture is not None and self.gesture.category is not self.utterance.category:
            raise ValueError("utterance and gesture must address the same category")

    @property
    def kind(self) -> MessageKind:
        if self.gesture is None:
            return MessageKind.LANGUAGE_ONLY
        if self.utterance.ambiguous:
            return MessageKind.COMPLEMENTARY
        return MessageKind.REDUNDANT


@dataclass(frozen=True)
class Message:
    subs: tuple[SubMessage, ...]

    def kinds(self) -> tuple[str, ...]:
        return tuple(sub.kind.value for sub in self.subs)


@dataclass
class AgentState:
    """One agent's lexicon knowledge: its own mapping plus a belief over the partner's."""

    role: str
    belief: np.ndarray
    own_lexicon: lx.Lexicon


def _index_in(space: tuple[dsl.Symbol, ...], symbol: dsl.Symbol) -> int:
    return space.index(symbol)


def _literal_row(signal: lx.Signal, space, x_u: float, x_h: float, lex) -> np.ndarray:
    """Unnormalized literal weights of one signal across `space`."""
    if signal.ambiguous:
        return np.full(len(space), lx.AMBIGUOUS_POSITION_WEIGHT)
    return np.array(
        [lx.literal_semantics(signal, t, x_u, x_h, lex) for t in space], dtype=float
    )


def literal_builder_distribution(
    sub: SubMessage,
    space: tuple[dsl.Symbol, ...],
    theta: Theta,
    lex: lx.Lexicon | None = None,
) -> np.ndarray:
    """Literal Builder posterior over `space`: product of literal weights, normalized."""
    weights = _literal_row(sub.utterance, space, theta.x_u, theta.x_h, lex)
    if sub.gesture is not None:
        weights = weights * _literal_row(sub.gesture, space, theta.x_u, theta.x_h, lex)
    total = weights.sum()
    if total <= 0.0:
        raise ZeroMassError(f"contradictory signals leave no mass over {len(space)} symbols")
    return weights / total


def classic_speaker_utility(
    utterance: lx.Signal,
    target: dsl.Symbol,
    space: tuple[dsl.Symbol, ...],
    theta: Theta,
) -> float:
    """Single-utterance speaker utility: log literal-listener probability minus cost."""
    row = _literal_row(utterance, space, theta.x_u, theta.x_h, None)
    total = row.sum()
    if total <= 0.0:
        raise ZeroMassError("utterance is literally false of every symbol in the space")
    p = row[_index_in(space, target)] / total
    return (math.log(p) if p > 0.0 else -math.inf) - utterance.cost


def _check_alignment(message: Message, program: dsl.TowerProgram) -> None:
    symbols = program.symbols()
    if len(message.subs) != len(symbols):
        raise MisalignedMessageError(
            f"message has {len(message.subs)} sub-messages for {len(symbols)} symbols"
        )
    for sub, symbol in zip(message.subs, symbols):
        if sub.intended != symbol:
            raise MisalignedMessageError(f"sub-message targets {sub.intended}, program has {symbol}")


def _utility_from_terms(log_p_sum: float, cost_u: float, cost_h: float, theta: Theta) -> float:
    # beta_i == 0 switches informativeness off entirely, even when log_p_sum is -inf.
    info = 0.0 if theta.beta_i == 0.0 else theta.beta_i * log_p_sum
    return info - theta.beta_u * cost_u - theta.beta_h * cost_h


def message_utility(
    message: Message,
    program: dsl.TowerProgram,
    theta: Theta,
    lex: lx.Lexicon | None = None,
) -> float:
    """Instructor utility of a full message under one fixed lexicon.

    Sums per-sub-message log literal-Builder probabilities of the intended
    symbols, minus weighted utterance and gesture costs (absent gestures cost
    nothing). Zero-mass decodes propagate as -inf.
    """
    _check_alignment(message, program)
    log_p_sum, cost_u, cost_h = 0.0, 0.0, 0.0
    for sub in message.subs:
        space = dsl.category_space(sub.utterance.category)
        try:
            p = literal_builder_distribution(sub, space, theta, lex)[_index_in(space, sub.intended)]
        except ZeroMassError:
            p = 0.0
        log_p_sum += math.log(p) if p > 0.0 else -math.inf
        cost_u += sub.utterance.cost
        if sub.gesture is not None:
            cost_h += sub.gesture.cost
    return _utility_from_terms(log_p_sum, cost_u, cost_h, theta)


def _chunk_literal_cube(sub: SubMessage, theta: Theta) -> np.ndarray:
    """Literal Builder posteriors for a chunk sub-message under every lexicon.

    Returns (n_lexicons, n_chunks); row l is the literal decode under lexicon l.
    """
    match = lx.PERM_TABLE[:, sub.utterance.lexeme, None] == np.arange(len(dsl.CHUNKS))[None, :]
    weights = np.where(match, theta.x_u, 1.0 - theta.x_u)
    if sub.gesture is not None:
        g_match = lx.PERM_TABLE[:, sub.gesture.lexeme, None] == np.arange(len(dsl.CHUNKS))[None, :]
        weights = weights * np.where(g_match, theta.x_h, 1.0 - theta.x_h)
    totals = weights.sum(axis=1, keepdims=True)
    if np.any(totals <= 0.0):
        raise ZeroMassError("contradictory chunk signals under some lexicon")
    return weights / totals


def expected_literal_decode(
    sub: SubMessage,
    space: tuple[dsl.Symbol, ...],
    belief: np.ndarray,
    theta: Theta,
) -> np.ndarray:
    """Literal Builder posterior marginalized over a lexicon belief."""
    if sub.utterance.category is dsl.Kind.CHUNK:
        return belief @ _chunk_literal_cube(sub, theta)
    return literal_builder_distribution(sub, space, theta)


def belief_marginal_utility(
    message: Message,
    program: dsl.TowerProgram,
    theta: Theta,
    belief: np.ndarray,
) -> float:
    """Message utility with convention-dependent decodes marginalized over `belief`.

    Equals message_utility at a degenerate belief; with an uncertain belief the
    informativeness of chunk signals is discounted accordingly.
    """
    _check_alignment(message, program)
    log_p_sum, cost_u, cost_h = 0.0, 0.0, 0.0
    for sub in message.subs:
        space = dsl.category_space(sub.utterance.category)
        try:
            p = expected_literal_decode(sub, space, belief, theta)[_index_in(space, sub.intended)]
        except ZeroMassError:
            p = 0.0
        log_p_sum += math.log(p) if p > 0.0 else -math.inf
        cost_u += sub.utterance.cost
        if sub.gesture is not None:
            cost_h += sub.gesture.cost
    return _utility_from_terms(log_p_sum, cost_u, cost_h, theta)


def _options_for_symbol(
    symbol: dsl.Symbol,
    lex: lx.Lexicon | None,
    kinds: tuple[MessageKind, ...],
) -> list[SubMessage]:
    options: dict[MessageKind, SubMessage] = {}
    if symbol.kind is dsl.Kind.BLOCK:
        options[MessageKind.LANGUAGE_ONLY] = SubMessage(lx.block_utterance(symbol), None, symbol)
    elif symbol.kind is dsl.Kind.POSITION:
        clear = lx.clear_position_utterance(symbol)
        point = lx.point_gesture(symbol)
        options[MessageKind.REDUNDANT] = SubMessage(clear, point, symbol)
        options[MessageKind.COMPLEMENTARY] = SubMessage(lx.HERE, point, symbol)
        options[MessageKind.LANGUAGE_ONLY] = SubMessage(clear, None, symbol)
    else:
        if lex is None:
            raise ValueError(f"a lexicon is required to signal chunk {symbol}")
        lexeme = lex.lexeme_for(symbol)
        utterance = lx.chunk_utterance(lexeme)
        options[MessageKind.REDUNDANT] = SubMessage(utterance, lx.shape_gesture(lexeme), symbol)
        options[MessageKind.LANGUAGE_ONLY] = SubMessage(utterance, None, symbol)
    picked = [options[k] for k in ALL_KINDS if k in options and k in kinds]
    if not picked:
        raise ValueError(f"no message option for {symbol} under kinds {kinds}")
    return picked


def message_candidates(
    program: dsl.TowerProgram,
    lex: lx.Lexicon | None = None,
    kinds: tuple[MessageKind, ...] = ALL_KINDS,
) -> list[Message]:
    """All messages for a program: cartesian product of per-symbol signal options.

    Positions offer redundant/complementary/language-only, blocks language-only
    (no block gesture exists), chunks redundant/language-only (no ambiguous
    chunk utterance exists). `kinds` restricts the option set per symbol.
    """
    per_symbol = [_options_for_symbol(s, lex, kinds) for s in program.symbols()]
    return [Message(tuple(combo)) for combo in product(*per_symbol)]


def softmax_probabilities(utilities) -> np.ndarray:
    """Softmax at temperature 1; -inf utilities get probability 0."""
    u = np.asarray(utilities, dtype=float)
    if u.size == 0 or not np.any(u > -np.inf):
        raise NoFiniteCandidateError("no candidate has finite utility")
    shifted = u - u[u > -np.inf].max()
    with np.errstate(over="ignore"):
        w = np.exp(shifted)
    w[~np.isfinite(shifted)] = 0.0
    return w / w.sum()


def choose_message(candidates, utilities, rng: np.random.Generator):
    """Sample one candidate with probability proportional to exp(utility)."""
    probs = softmax_probabilities(utilities)
    return candidates[int(rng.choice(len(candidates), p=probs))]


# ---------------------------------------------------------------------------
# Pragmatic Builder
# ---------------------------------------------------------------------------

def _softmax_cols(util: np.ndarray, axis: int) -> np.ndarray:
    shifted = util - util.max(axis=axis, keepdims=True)
    with np.errstate(invalid="ignore"):
        w = np.exp(shifted)
    w = np.nan_to_num(w, nan=0.0)
    return w / w.sum(axis=axis, keepdims=True)


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@lru_cache(maxsize=512)
def _speaker_table(category: dsl.Kind, modality: lx.Modality, x: float, beta_i: float, beta_cost: float):
    """Single-step softmax speaker restricted to one modality and category.

    Lexicon-free categories return S[s, t] = P(signal s | target t). Chunks
    return S[l, s, t] with one slice per candidate lexicon.
    """
    inventory = (lx.UTTERANCE_INVENTORY if modality is lx.Modality.UTTERANCE else lx.GESTURE_INVENTORY)[category]
    costs = np.array([s.cost for s in inventory])
    if category is dsl.Kind.CHUNK:
        match = lx.PERM_TABLE[:, :, None] == np.arange(len(dsl.CHUNKS))[None, None, :]
        lit = np.where(match, x, 1.0 - x)
        p0 = lit / lit.sum(axis=2, keepdims=True)
        with np.errstate(divide="ignore"):
            util = beta_i * np.log(p0) - beta_cost * costs[None, :, None]
        return _readonly(_softmax_cols(util, axis=1))
    space = dsl.category_space(category)
    lit = np.stack([_literal_row(s, space, x, x, None) for s in inventory])
    p0 = lit / lit.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore"):
        util = beta_i * np.log(p0) - beta_cost * costs[:, None]
    return _readonly(_softmax_cols(util, axis=0))


def _production_mix(sub: SubMessage, theta: Theta) -> np.ndarray:
    """P(sub-message | target, lexicon) as an (n_lexicons, n_space) array.

    Gamma-weighted mixture of the per-modality speakers. For redundant messages
    the gesture term equals the utterance term (aligned modalities); for
    language-only messages the gesture term is a vacuous uniform.
    """
    category = sub.utterance.category
    space = dsl.category_space(category)
    gamma = theta.gamma
    if category is dsl.Kind.CHUNK:
        s_u = _speaker_table(category, lx.Modality.UTTERANCE, theta.x_u, theta.beta_i, theta.beta_u)
        p_u = s_u[:, sub.utterance.lexeme, :]
        if sub.kind is MessageKind.REDUNDANT:
            return p_u
        return gamma * p_u + (1.0 - gamma) / len(space)
    inventory = lx.UTTERANCE_INVENTORY[category]
    s_u = _speaker_table(category, lx.Modality.UTTERANCE, theta.x_u, theta.beta_i, theta.beta_u)
    p_u = s_u[inventory.index(sub.utterance)]
    if sub.kind is MessageKind.REDUNDANT:
        mix = p_u
    elif sub.kind is MessageKind.COMPLEMENTARY:
        s_h = _speaker_table(category, lx.Modality.GESTURE, theta.x_h, theta.beta_i, theta.beta_h)
        p_h = s_h[lx.GESTURE_INVENTORY[category].index(sub.gesture)]
        mix = gamma * p_u + (1.0 - gamma) * p_h
    else:
        mix = gamma * p_u + (1.0 - gamma) / len(space)
    return np.broadcast_to(mix, (lx.N_LEXICONS, len(space)))


def pragmatic_builder_distribution(
    sub: SubMessage,
    space: tuple[dsl.Symbol, ...],
    belief: np.ndarray,
    theta: Theta,
) -> np.ndarray:
    """Pragmatic Builder posterior: speaker likelihood marginalized over the belief."""
    if space != dsl.category_space(sub.utterance.category):
        raise CategoryMismatchError(
            f"decode space must be the canonical {sub.utterance.category.value} space"
        )
    scores = belief @ _production_mix(sub, theta)
    total = scores.sum()
    if not (total > 0.0) or not np.isfinite(total):
        raise ZeroMassError("pragmatic decode has no probability mass")
    return scores / total


def map_decode(dist: np.ndarray, space: tuple[dsl.Symbol, ...]) -> dsl.Symbol:
    """Most probable symbol; ties resolve to the canonically first and are logged."""
    best = int(np.argmax(dist))
    if np.count_nonzero(dist >= dist[best] - 1e-12) > 1:
        logger.debug("degenerate MAP decode: %s candidates tie at p=%.6f",
                     int(np.count_nonzero(dist >= dist[best] - 1e-12)), dist[best])
    return space[best]


# ---------------------------------------------------------------------------
# Belief updates
# ---------------------------------------------------------------------------

def production_likelihoods(sub: SubMessage, target: dsl.Symbol, theta: Theta) -> np.ndarray:
    """Per-lexicon probability that a speaker produces `sub` for `target`."""
    space = dsl.category_space(sub.utterance.category)
    return _production_mix(sub, theta)[:, _index_in(space, target)].copy()


def comprehension_likelihoods(sub: SubMessage, target: dsl.Symbol, theta: Theta) -> np.ndarray:
    """Per-lexicon probability that a listener decodes `target` from `sub`."""
    space = dsl.category_space(sub.utterance.category)
    mix = _production_mix(sub, theta)
    totals = mix.sum(axis=1)
    out = np.zeros(lx.N_LEXICONS)
    ok = totals > 0.0
    out[ok] = mix[ok, _index_in(space, target)] / totals[ok]
    return out


def update_belief(
    belief: np.ndarray,
    pairs,
    theta: Theta,
    about: str = "instructor",
) -> np.ndarray:
    """Bayes-update a lexicon belief on observed (sub-message, symbol) pairings.

    `about="instructor"` scores each lexicon by the probability of producing
    the observed sub-message for the symbol; `about="builder"` by the
    probability of decoding the symbol from the sub-message. The result is
    renormalized; an empty pair list returns the belief unchanged.
    """
    if about not in ("instructor", "builder"):
        raise ValueError(f"unknown update direction {about!r}")
    with np.errstate(divide="ignore"):
        log_post = np.log(np.asarray(belief, dtype=float))
        for sub, target in pairs:
            like = (production_likelihoods if about == "instructor" else comprehension_likelihoods)(
                sub, target, theta
            )
            log_post = log_post + np.log(like)
    if not np.any(log_post > -np.inf):
        raise ZeroMassError("all lexicons have zero posterior probability")
    w = np.exp(log_post - log_post[log_post > -np.inf].max())
    w[~np.isfinite(log_post)] = 0.0
    return w / w.sum()
