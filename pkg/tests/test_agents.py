import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import joint_literal_posterior, naive_pragmatic_posterior
from towertalk import dsl
from towertalk import lexicon as lx
from towertalk.agents import (
    ALL_KINDS,
    Message,
    MessageKind,
    SubMessage,
    Theta,
    belief_marginal_utility,
    choose_message,
    classic_speaker_utility,
    literal_builder_distribution,
    message_candidates,
    message_utility,
    pragmatic_builder_distribution,
    softmax_probabilities,
    update_belief,
)
from towertalk.errors import (
    MisalignedMessageError,
    NoFiniteCandidateError,
    ZeroMassError,
)

P11 = dsl.position(1, 1)
P22 = dsl.position(2, 2)
SOFT = Theta(beta_i=10.0, beta_u=20.25, beta_h=9.23, x_u=0.87, x_h=0.62)
BINARY = Theta(beta_i=1.0, beta_u=1.0, beta_h=1.0)


def lo(pos):
    return SubMessage(lx.clear_position_utterance(pos), None, pos)


def redundant(pos):
    return SubMessage(lx.clear_position_utterance(pos), lx.point_gesture(pos), pos)


def complementary(pos):
    return SubMessage(lx.HERE, lx.point_gesture(pos), pos)


def test_submessage_kinds():
    assert lo(P11).kind is MessageKind.LANGUAGE_ONLY
    assert redundant(P11).kind is MessageKind.REDUNDANT
    assert complementary(P11).kind is MessageKind.COMPLEMENTARY
    with pytest.raises(ValueError):
        SubMessage(lx.HERE, None, P11)  # ambiguous needs a gesture


def test_literal_builder_matches_enumeration_oracle():
    for sub in (complementary(P11), redundant(dsl.position(3, 3)), lo(P22)):
        got = literal_builder_distribution(sub, dsl.POSITIONS, SOFT)
        want = joint_literal_posterior(sub, dsl.POSITIONS, SOFT.x_u, SOFT.x_h)
        assert np.allclose(got, want, atol=1e-14)
        assert abs(got.sum() - 1.0) < 1e-9
        assert np.all(got >= 0.0)


def test_literal_builder_spot_values():
    got = literal_builder_distribution(complementary(P11), dsl.POSITIONS, SOFT)
    assert got[dsl.POSITIONS.index(P11)] == pytest.approx(0.62 / (0.62 + 8 * 0.38))
    got = literal_builder_distribution(redundant(dsl.position(3, 3)), dsl.POSITIONS, SOFT)
    expected = (0.87 * 0.62) / (0.87 * 0.62 + 8 * 0.13 * 0.38)
    assert got[dsl.POSITIONS.index(dsl.position(3, 3))] == pytest.approx(expected)


def test_literal_builder_binary_one_hot():
    got = literal_builder_distribution(lo(P22), dsl.POSITIONS, BINARY)
    want = np.zeros(9)
    want[dsl.POSITIONS.index(P22)] = 1.0
    assert np.array_equal(got, want)


def test_literal_builder_zero_mass():
    contradiction = SubMessage(lx.clear_position_utterance(P11), lx.point_gesture(P22), P11)
    with pytest.raises(ZeroMassError):
        literal_builder_distribution(contradiction, dsl.POSITIONS, BINARY)


def test_classic_speaker_utility_values():
    u = classic_speaker_utility(lx.clear_position_utterance(P22), P22, dsl.POSITIONS, BINARY)
    assert u == pytest.approx(-0.6)
    u = classic_speaker_utility(
        lx.clear_position_utterance(dsl.position(3, 1)), dsl.position(3, 1), dsl.POSITIONS, SOFT
    )
    assert u == pytest.approx(math.log(0.87 / 1.91) - 0.7)
    u = classic_speaker_utility(lx.HERE, P11, dsl.POSITIONS, BINARY)
    assert u == pytest.approx(math.log(1 / 9) - 0.1)


def one_step_program(pos):
    return dsl.TowerProgram((dsl.Step(dsl.G, pos),))


def position_message(sub, block_pos):
    block_sub = SubMessage(lx.block_utterance(dsl.G), None, dsl.G)
    return Message((block_sub, sub))


def test_message_utility_single_position_step():
    # Score just the position sub-message via a single-symbol pseudo-program.
    program = dsl.TowerProgram((dsl.Step(dsl.C_CHUNK, P11),))
    lex = lx.LEXICONS[0]
    chunk_sub = SubMessage(lx.chunk_utterance(0), None, dsl.C_CHUNK)

    msg = Message((chunk_sub, lo(P11)))
    theta = Theta(beta_i=10.0, beta_u=20.25, beta_h=9.23, x_u=0.87, x_h=0.62)
    got = message_utility(msg, program, theta, lex)
    p_chunk = 0.87 / (0.87 + 4 * 0.13)
    p_lo = 0.87 / 1.91
    want = 10 * (math.log(p_chunk) + math.log(p_lo)) - 20.25 * (0.4 + 0.7)
    assert got == pytest.approx(want, abs=1e-10)

    msg_r = Message((chunk_sub, redundant(P11)))
    got_r = message_utility(msg_r, program, theta, lex)
    p_red = (0.87 * 0.62) / (0.87 * 0.62 + 8 * 0.13 * 0.38)
    want_r = 10 * (math.log(p_chunk) + math.log(p_red)) - 20.25 * 1.1 - 9.23 * 0.6
    assert got_r == pytest.approx(want_r, abs=1e-10)


def test_message_utility_zero_theta_is_zero():
    program = one_step_program(P11)
    theta = Theta(beta_i=0.0, beta_u=0.0, beta_h=0.0, x_u=0.87, x_h=0.62)
    for msg in message_candidates(program):
        assert message_utility(msg, program, theta) == 0.0


def test_message_utility_misaligned():
    program = one_step_program(P11)
    wrong = Message((SubMessage(lx.block_utterance(dsl.R), None, dsl.R), lo(P11)))
    with pytest.raises(MisalignedMessageError):
        message_utility(wrong, program, BINARY)
    with pytest.raises(MisalignedMessageError):
        message_utility(Message((lo(P11),)), program, BINARY)


def test_message_candidate_counts():
    lex = lx.LEXICONS[0]
    chunked = dsl.TowerProgram((dsl.Step(dsl.C_CHUNK, dsl.position(2, 1)),))
    assert len(message_candidates(chunked, lex)) == 2 * 3
    primitive = dsl.programs_for_tower("C")[0]
    assert len(message_candidates(primitive, lex)) == 27
    assert len(message_candidates(dsl.TowerProgram(()))) == 1
    assert len(message_candidates(primitive, lex, (MessageKind.LANGUAGE_ONLY,))) == 1


def test_softmax_shift_invariance():
    utilities = np.array([-22.04, -25.21, -25.32])
    base = softmax_probabilities(utilities)
    shifted = softmax_probabilities(utilities + 100.0)
    assert np.max(np.abs(base - shifted)) < 1e-12
    assert base[0] == pytest.approx(0.926, abs=1e-3)
    assert base[1] == pytest.approx(0.039, abs=1e-3)
    assert base[2] == pytest.approx(0.035, abs=1e-3)


def test_softmax_equal_utilities():
    assert np.allclose(softmax_probabilities([1.5, 1.5]), [0.5, 0.5])


def test_choose_message_deterministic_and_no_finite():
    rng1 = np.random.default_rng(3)
    rng2 = np.random.default_rng(3)
    candidates = ["a", "b", "c"]
    utilities = [-1.0, -2.0, -np.inf]
    picks1 = [choose_message(candidates, utilities, rng1) for _ in range(20)]
    picks2 = [choose_message(candidates, utilities, rng2) for _ in range(20)]
    assert picks1 == picks2
    assert "c" not in picks1
    with pytest.raises(NoFiniteCandidateError):
        choose_message(candidates, [-np.inf] * 3, np.random.default_rng(0))


def chunk_sub(lexeme, chunk, redundant_signal=True):
    gesture = lx.shape_gesture(lexeme) if redundant_signal else None
    return SubMessage(lx.chunk_utterance(lexeme), gesture, chunk)


def test_pragmatic_uniform_belief_symmetry():
    dist = pragmatic_builder_distribution(
        chunk_sub(0, dsl.C_CHUNK), dsl.CHUNKS, lx.uniform_prior(), SOFT
    )
    assert np.allclose(dist, 0.2, atol=1e-12)


def test_pragmatic_degenerate_belief_matches_single_lexicon():
    lex_idx = 37
    belief = np.zeros(120)
    belief[lex_idx] = 1.0
    sub = chunk_sub(2, lx.LEXICONS[lex_idx].meaning_of(2))
    got = pragmatic_builder_distribution(sub, dsl.CHUNKS, belief, SOFT)
    want = naive_pragmatic_posterior(sub, dsl.CHUNKS, belief, SOFT)
    assert np.allclose(got, want, atol=1e-13)


def test_pragmatic_conditioned_belief_binary():
    sub = chunk_sub(0, dsl.C_CHUNK)
    posterior = update_belief(lx.uniform_prior(), [(sub, dsl.C_CHUNK)], BINARY)
    dist = pragmatic_builder_distribution(sub, dsl.CHUNKS, posterior, BINARY)
    want = np.zeros(5)
    want[0] = 1.0
    assert np.allclose(dist, want, atol=1e-12)


def test_pragmatic_matches_naive_reference_sample():
    rng = np.random.default_rng(11)
    for _ in range(40):
        theta = Theta(
            beta_i=float(rng.uniform(0, 15)),
            beta_u=float(rng.uniform(0, 40)),
            beta_h=float(rng.uniform(0, 40)),
            gamma=float(rng.uniform(0, 1)),
            x_u=float(rng.uniform(0.5, 0.98)),
            x_h=float(rng.uniform(0.5, 0.98)),
        )
        belief = rng.dirichlet(np.ones(120))
        kind = rng.integers(3)
        if kind == 0:
            sub = chunk_sub(int(rng.integers(5)), dsl.CHUNKS[int(rng.integers(5))],
                            redundant_signal=bool(rng.integers(2)))
            space = dsl.CHUNKS
        elif kind == 1:
            pos = dsl.POSITIONS[int(rng.integers(9))]
            sub = (redundant(pos), complementary(pos), lo(pos))[int(rng.integers(3))]
            space = dsl.POSITIONS
        else:
            block = dsl.BLOCKS[int(rng.integers(3))]
            sub = SubMessage(lx.block_utterance(block), None, block)
            space = dsl.BLOCKS
        got = pragmatic_builder_distribution(sub, space, belief, theta)
        want = naive_pragmatic_posterior(sub, space, belief, theta)
        assert np.max(np.abs(got - np.array(want))) < 1e-12
        assert abs(got.sum() - 1.0) < 1e-9
        assert np.all(got >= 0.0)


def test_update_belief_consistent_support():
    sub = chunk_sub(0, dsl.C_CHUNK)
    posterior = update_belief(lx.uniform_prior(), [(sub, dsl.C_CHUNK)], BINARY)
    consistent = np.array([lex.perm[0] == 0 for lex in lx.LEXICONS])
    assert np.allclose(posterior[consistent], 1 / 24, atol=1e-15)
    assert np.all(posterior[~consistent] == 0.0)


def test_update_belief_empty_pairs_identity():
    belief = np.linspace(1, 5, 120)
    belief = belief / belief.sum()
    assert np.allclose(update_belief(belief, [], BINARY), belief, atol=1e-15)


def test_update_belief_idempotent_support():
    sub = chunk_sub(1, dsl.L_CHUNK)
    once = update_belief(lx.uniform_prior(), [(sub, dsl.L_CHUNK)], BINARY)
    twice = update_belief(once, [(sub, dsl.L_CHUNK)], BINARY)
    assert np.array_equal(once > 0, twice > 0)
    assert abs(twice.sum() - 1.0) < 1e-9


def test_update_belief_commutes():
    a = (chunk_sub(0, dsl.C_CHUNK), dsl.C_CHUNK)
    b = (chunk_sub(1, dsl.TR_CHUNK), dsl.TR_CHUNK)
    ab = update_belief(lx.uniform_prior(), [a, b], BINARY)
    ba = update_belief(lx.uniform_prior(), [b, a], BINARY)
    assert np.allclose(ab, ba, atol=1e-15)


def test_update_belief_zero_mass():
    sub = chunk_sub(0, dsl.C_CHUNK)
    conditioned = update_belief(lx.uniform_prior(), [(sub, dsl.C_CHUNK)], BINARY)
    with pytest.raises(ZeroMassError):
        update_belief(conditioned, [(sub, dsl.L_CHUNK)], BINARY)


def test_rsa_reduction_single_case():
    # gesture-free single step at unit weights and binary semantics
    theta = Theta(beta_i=1.0, beta_u=1.0, beta_h=5.0)
    program = dsl.TowerProgram((dsl.Step(dsl.G, P22),))

    block_sub = SubMessage(lx.block_utterance(dsl.G), None, dsl.G)
    msg = Message((block_sub, lo(P22)))
    whole = message_utility(msg, program, theta)
    parts = classic_speaker_utility(block_sub.utterance, dsl.G, dsl.BLOCKS, theta) + \
        classic_speaker_utility(lo(P22).utterance, P22, dsl.POSITIONS, theta)
    assert whole == pytest.approx(parts, abs=1e-12)


def test_belief_marginal_utility_reduces_at_degenerate_belief():
    program = dsl.TowerProgram((dsl.Step(dsl.C_CHUNK, P11),))
    lex_idx = 0
    belief = np.zeros(120)
    belief[lex_idx] = 1.0
    for msg in message_candidates(program, lx.LEXICONS[lex_idx]):
        a = belief_marginal_utility(msg, program, SOFT, belief)
        b = message_utility(msg, program, SOFT, lx.LEXICONS[lex_idx])
        assert a == pytest.approx(b, abs=1e-10)


def test_belief_marginal_chunk_is_uniform_fifth_under_uniform_belief():
    program = dsl.TowerProgram((dsl.Step(dsl.C_CHUNK, P11),))
    theta = Theta(beta_i=1.0, beta_u=0.0, beta_h=0.0, x_u=0.87, x_h=0.62)
    msg = Message((chunk_sub(0, dsl.C_CHUNK, redundant_signal=False), lo(P11)))
    got = belief_marginal_utility(msg, program, theta, lx.uniform_prior())
    want = math.log(1 / 5) + math.log(0.87 / 1.91)
    assert got == pytest.approx(want, abs=1e-12)


@given(st.lists(st.floats(min_value=-50, max_value=50), min_size=2, max_size=6),
       st.floats(min_value=-100, max_value=100))
def test_softmax_shift_property(utilities, shift):
    base = softmax_probabilities(utilities)
    moved = softmax_probabilities([u + shift for u in utilities])
    assert np.max(np.abs(base - moved)) < 1e-9
    assert abs(base.sum() - 1.0) < 1e-9
