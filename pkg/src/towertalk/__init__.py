"""towertalk: multimodal convention formation between Instructor and Builder agents.

An Instructor and a Builder coordinate on assembling block towers on a 3x3
grid. The Instructor chooses among redundant, complementary, and language-only
multimodal messages by softmax over informativeness-minus-cost utilities; the
Builder decodes pragmatically under uncertainty over 120 candidate chunk
lexicons; successful exchanges drive Bayesian belief updates and progressively
more abstract (chunked) tower programs.
"""

from .agents import (
    ALL_KINDS,
    AgentState,
    Message,
    MessageKind,
    SubMessage,
    Theta,
    belief_marginal_utility,
    choose_message,
    classic_speaker_utility,
    expected_literal_decode,
    literal_builder_distribution,
    map_decode,
    message_candidates,
    message_utility,
    pragmatic_builder_distribution,
    softmax_probabilities,
    update_belief,
)
from .convention import (
    DEFAULT_SIM1_KINDS,
    LengthSummary,
    RunResult,
    TrialRecord,
    aggregate_lengths,
    run_simulation1,
    run_trial,
)
from .dsl import (
    BLOCKS,
    CHUNKS,
    POSITIONS,
    PROGRAM_LIBRARY,
    TOWER_IDS,
    Kind,
    Step,
    Symbol,
    TowerProgram,
    category_space,
    expand_program,
    position,
    program_length,
    programs_for_tower,
)
from .fitting import FitResult, OptRecord, fit_modality_target, minimize
from .lexicon import (
    HERE,
    LEXICONS,
    N_LEXICONS,
    Lexicon,
    Signal,
    enumerate_lexicons,
    literal_semantics,
    uniform_prior,
)
from .modality import (
    KIND_ORDER,
    FitTarget,
    ModalityDistribution,
    ModalityTrajectory,
    cross_entropy,
    entropy,
    expected_modality_trajectory,
    interpolate_theta,
    kind_utilities,
    predicted_modality_distribution,
    simulate_modality_preferences,
)
from .results import OutputRow, read_results, write_results
from .seeding import run_rng

__version__ = "0.1.0"
