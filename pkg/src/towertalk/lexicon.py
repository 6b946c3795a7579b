"""Multimodal signal inventory, soft literal semantics, and candidate chunk lexicons.

Block and position signals are common ground: each clear signal has a fixed
referent. The five chunk signals (alpha..epsilon, one utterance and one shape
gesture each) acquire meaning only through a lexicon, a bijection onto the five
chunk symbols; agents entertain all 120 bijections.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .dsl import BLOCKS, CHUNKS, POSITIONS, Kind, Symbol
from .errors import CategoryMismatchError


class Modality(Enum):
    UTTERANCE = "utterance"
    GESTURE = "gesture"


@dataclass(frozen=True)
class Signal:
    modality: Modality
    surface: str
    cost: float
    category: Kind
    denotes: Symbol | None = None  # fixed referent (common-ground signals)
    lexeme: int | None = None      # index into GREEK (convention-dependent signals)

    @property
    def ambiguous(self) -> bool:
        return self.denotes is None and self.lexeme is None

    def __repr__(self):
        return f"<{self.modality.value} {self.surface!r}>"


GREEK = ("alpha", "beta", "gamma", "delta", "epsilon")

_COLOR = dict(zip(BLOCKS, ("red", "green", "blue")))
_POSITION_PHRASE = {
    (1, 1): "top left", (1, 2): "top half", (1, 3): "top right",
    (2, 1): "left half", (2, 2): "middle", (2, 3): "right half",
    (3, 1): "bottom left", (3, 2): "bottom half", (3, 3): "bottom right",
}

BLOCK_UTTERANCES = tuple(
    Signal(Modality.UTTERANCE, f"place a {_COLOR[b]} block", 0.4, Kind.BLOCK, denotes=b)
    for b in BLOCKS
)

# "middle" is one word shorter than the other position phrases, hence cheaper.
CLEAR_POSITION_UTTERANCES = tuple(
    Signal(
        Modality.UTTERANCE,
        f"on the {_POSITION_PHRASE[(p.row, p.col)]} of the grid",
        0.6 if (p.row, p.col) == (2, 2) else 0.7,
        Kind.POSITION,
        denotes=p,
    )
    for p in POSITIONS
)

HERE = Signal(Modality.UTTERANCE, "here", 0.1, Kind.POSITION)

POINT_GESTURES = tuple(
    Signal(Modality.GESTURE, f"point: {_POSITION_PHRASE[(p.row, p.col)]}", 0.6, Kind.POSITION, denotes=p)
    for p in POSITIONS
)

CHUNK_UTTERANCES = tuple(
    Signal(Modality.UTTERANCE, f"place a {name} tower", 0.4, Kind.CHUNK, lexeme=i)
    for i, name in enumerate(GREEK)
)

SHAPE_GESTURES = tuple(
    Signal(Modality.GESTURE, f"shape: {name}", 0.6, Kind.CHUNK, lexeme=i)
    for i, name in enumerate(GREEK)
)

UTTERANCE_INVENTORY: dict[Kind, tuple[Signal, ...]] = {
    Kind.BLOCK: BLOCK_UTTERANCES,
    Kind.POSITION: CLEAR_POSITION_UTTERANCES + (HERE,),
    Kind.CHUNK: CHUNK_UTTERANCES,
}
GESTURE_INVENTORY: dict[Kind, tuple[Signal, ...]] = {
    Kind.BLOCK: (),
    Kind.POSITION: POINT_GESTURES,
    Kind.CHUNK: SHAPE_GESTURES,
}

# Unnormalized literal weight the ambiguous "here" assigns to every position.
AMBIGUOUS_POSITION_WEIGHT = 1.0 / len(POSITIONS)

_BLOCK_UTT_BY_SYMBOL = {s.denotes: s for s in BLOCK_UTTERANCES}
_POS_UTT_BY_SYMBOL = {s.denotes: s for s in CLEAR_POSITION_UTTERANCES}
_POINT_BY_SYMBOL = {s.denotes: s for s in POINT_GESTURES}


def block_utterance(block: Symbol) -> Signal:
    return _BLOCK_UTT_BY_SYMBOL[block]


def clear_position_utterance(pos: Symbol) -> Signal:
    return _POS_UTT_BY_SYMBOL[pos]


def point_gesture(pos: Symbol) -> Signal:
    return _POINT_BY_SYMBOL[pos]


def chunk_utterance(lexeme: int) -> Signal:
    return CHUNK_UTTERANCES[lexeme]


def shape_gesture(lexeme: int) -> Signal:
    return SHAPE_GESTURES[lexeme]


@dataclass(frozen=True)
class Lexicon:
    """Bijection from the five chunk lexemes to the five chunk symbols.

    perm[i] is the index into CHUNKS that lexeme i (GREEK[i]) stands for.
    """

    perm: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(CHUNKS))):
            raise ValueError(f"not a bijection over chunks: {self.perm}")

    def meaning_of(self, lexeme: int) -> Symbol:
        return CHUNKS[self.perm[lexeme]]

    def lexeme_for(self, chunk: Symbol) -> int:
        return self.perm.index(CHUNKS.index(chunk))


def enumerate_lexicons() -> list[Lexicon]:
    """All 5! bijections, lexicographic over lexeme images in canonical chunk order."""
    return [Lexicon(p) for p in itertools.permutations(range(len(CHUNKS)))]


LEXICONS = tuple(enumerate_lexicons())
N_LEXICONS = len(LEXICONS)
# PERM_TABLE[l, i] = chunk index that lexeme i denotes under lexicon l.
PERM_TABLE = np.array([lex.perm for lex in LEXICONS], dtype=np.intp)
PERM_TABLE.setflags(write=False)


def uniform_prior() -> np.ndarray:
    """Uniform belief over the candidate lexicons."""
    return np.full(N_LEXICONS, 1.0 / N_LEXICONS)


def literal_semantics(
    signal: Signal,
    target: Symbol,
    x_u: float,
    x_h: float,
    lex: Lexicon | None = None,
) -> float:
    """Soft literal truth value of `signal` applied to `target`.

    Clear signals score x (utterance: x_u, gesture: x_h) when they denote the
    target and 1 - x otherwise; at x = 1 this is classical binary semantics.
    The ambiguous "here" puts the same weight on every grid position.
    """
    if signal.category is not target.kind:
        raise CategoryMismatchError(f"{signal} cannot refer to {target}")
    if signal.ambiguous:
        return AMBIGUOUS_POSITION_WEIGHT
    if signal.denotes is not None:
        denoted = signal.denotes
    else:
        if lex is None:
            raise ValueError(f"{signal} needs a lexicon to resolve its referent")
        denoted = lex.meaning_of(signal.lexeme)
    x = x_u if signal.modality is Modality.UTTERANCE else x_h
    return x if denoted == target else 1.0 - x
