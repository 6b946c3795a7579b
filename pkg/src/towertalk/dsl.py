"""Assembly DSL: colored blocks, grid positions, chunk symbols, and tower programs.

A tower program is an ordered list of (thing, anchor-position) steps. Things are
either primitive blocks or chunk symbols standing for multi-block sub-structures;
chunks expand to blocks at fixed row/column offsets from their anchor.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import OutOfGridError, UnknownTowerError

GRID_ROWS = 3
GRID_COLS = 3


class Kind(Enum):
    BLOCK = "block"
    POSITION = "position"
    CHUNK = "chunk"


@dataclass(frozen=True)
class Symbol:
    kind: Kind
    name: str
    row: int = 0  # positions only
    col: int = 0

    def __repr__(self):
        return self.name


R = Symbol(Kind.BLOCK, "R")
G = Symbol(Kind.BLOCK, "G")
B = Symbol(Kind.BLOCK, "B")
BLOCKS = (R, G, B)

POSITIONS = tuple(
    Symbol(Kind.POSITION, f"P{r}{c}", row=r, col=c)
    for r in range(1, GRID_ROWS + 1)
    for c in range(1, GRID_COLS + 1)
)
_POSITION_BY_CELL = {(p.row, p.col): p for p in POSITIONS}


def position(row: int, col: int) -> Symbol:
    """Grid position symbol at 1-based (row, col)."""
    try:
        return _POSITION_BY_CELL[(row, col)]
    except KeyError:
        raise OutOfGridError(f"no grid cell at ({row}, {col})") from None


C_CHUNK = Symbol(Kind.CHUNK, "C_chunk")
L_CHUNK = Symbol(Kind.CHUNK, "L_chunk")
TR_CHUNK = Symbol(Kind.CHUNK, "TR_chunk")
T_CHUNK = Symbol(Kind.CHUNK, "T_chunk")
PL_CHUNK = Symbol(Kind.CHUNK, "PL_chunk")
CHUNKS = (C_CHUNK, L_CHUNK, TR_CHUNK, T_CHUNK, PL_CHUNK)
TOWER_CHUNKS = (C_CHUNK, L_CHUNK, TR_CHUNK)
SUBTOWER_CHUNKS = (T_CHUNK, PL_CHUNK)


def category_space(kind: Kind) -> tuple[Symbol, ...]:
    """Canonical, ordered referent space for a symbol category."""
    if kind is Kind.BLOCK:
        return BLOCKS
    if kind is Kind.POSITION:
        return POSITIONS
    return CHUNKS


@dataclass(frozen=True)
class Step:
    thing: Symbol
    anchor: Symbol

    def __post_init__(self):
        if self.thing.kind is Kind.POSITION:
            raise ValueError(f"step thing may not be a position: {self.thing}")
        if self.anchor.kind is not Kind.POSITION:
            raise ValueError(f"step anchor must be a position: {self.anchor}")


@dataclass(frozen=True)
class TowerProgram:
    steps: tuple[Step, ...]
    tower_id: str | None = None

    def symbols(self) -> tuple[Symbol, ...]:
        """Flattened symbol sequence, alternating thing/anchor."""
        out = []
        for step in self.steps:
            out.append(step.thing)
            out.append(step.anchor)
        return tuple(out)


# Block make-up of each chunk as (block, row offset, col offset) from the anchor.
CHUNK_TEMPLATES: dict[Symbol, tuple[tuple[Symbol, int, int], ...]] = {
    C_CHUNK: ((G, 0, 0), (R, +1, 0), (G, 0, 0)),
    L_CHUNK: ((B, 0, 0), (R, 0, -1), (R, 0, -1)),
    TR_CHUNK: ((R, 0, 0), (G, 0, 0), (B, 0, 0)),
    T_CHUNK: ((R, 0, 0), (G, 0, 0)),
    PL_CHUNK: ((G, 0, 0), (B, 0, 0)),
}


def program_length(program: TowerProgram) -> int:
    """Number of symbols in the program (two per step)."""
    return 2 * len(program.steps)


def expand_program(program: TowerProgram) -> TowerProgram:
    """Replace every chunk step by its template blocks at anchor + offset.

    Primitive steps pass through unchanged; the result is fully primitive and
    expansion is idempotent. Raises OutOfGridError if an offset leaves the grid.
    """
    steps: list[Step] = []
    for step in program.steps:
        if step.thing.kind is Kind.BLOCK:
            steps.append(step)
            continue
        for block, d_row, d_col in CHUNK_TEMPLATES[step.thing]:
            row, col = step.anchor.row + d_row, step.anchor.col + d_col
            if not (1 <= row <= GRID_ROWS and 1 <= col <= GRID_COLS):
                raise OutOfGridError(
                    f"{step.thing} anchored at {step.anchor} places {block} at ({row}, {col})"
                )
            steps.append(Step(block, position(row, col)))
    return TowerProgram(tuple(steps), program.tower_id)


def _prog(tower_id: str, *pairs: tuple[Symbol, Symbol]) -> TowerProgram:
    return TowerProgram(tuple(Step(thing, anchor) for thing, anchor in pairs), tower_id)


# Per tower, programs ordered least to most abstract. Each entry expands to the
# same primitive step sequence as the first.
PROGRAM_LIBRARY: dict[str, tuple[TowerProgram, ...]] = {
    "C": (
        _prog("C", (G, position(2, 1)), (R, position(3, 1)), (G, position(2, 1))),
        _prog("C", (C_CHUNK, position(2, 1))),
    ),
    "L": (
        _prog("L", (B, position(1, 2)), (R, position(1, 1)), (R, position(1, 1))),
        _prog("L", (L_CHUNK, position(1, 2))),
    ),
    "TREE": (
        _prog("TREE", (R, position(3, 3)), (G, position(3, 3)), (B, position(3, 3))),
        _prog("TREE", (T_CHUNK, position(3, 3)), (B, position(3, 3))),
        _prog("TREE", (R, position(3, 3)), (PL_CHUNK, position(3, 3))),
        _prog("TREE", (TR_CHUNK, position(3, 3))),
    ),
}
TOWER_IDS = tuple(PROGRAM_LIBRARY)


def programs_for_tower(tower_id: str) -> tuple[TowerProgram, ...]:
    """Program library entry for one tower, least to most abstract."""
    try:
        return PROGRAM_LIBRARY[tower_id]
    except KeyError:
        raise UnknownTowerError(tower_id) from None
