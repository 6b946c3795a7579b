"""
Literal decoding and message utilities
======================================

Shows how the three kinds of position instruction decode under soft semantics,
and how informativeness and costs trade off in the Instructor's utility. With
the first-repetition parameter fit, the precise phrase alone already carries
most of the information, so language-only wins the softmax.
"""

import numpy as np

from towertalk import (
    SubMessage,
    Theta,
    literal_builder_distribution,
    kind_utilities,
    predicted_modality_distribution,
    softmax_probabilities,
)
from towertalk import dsl
from towertalk import lexicon as lx

theta = Theta(beta_i=10.0, beta_u=20.25, beta_h=9.23, x_u=0.87, x_h=0.62)
target = dsl.position(1, 1)

messages = {
    "redundant    (phrase + point)": SubMessage(
        lx.clear_position_utterance(target), lx.point_gesture(target), target
    ),
    "language-only (phrase alone)": SubMessage(
        lx.clear_position_utterance(target), None, target
    ),
    "complementary ('here' + point)": SubMessage(
        lx.HERE, lx.point_gesture(target), target
    ),
}

print(f"literal decode probability of {target} (x_u={theta.x_u}, x_h={theta.x_h}):")
for label, sub in messages.items():
    dist = literal_builder_distribution(sub, dsl.POSITIONS, theta)
    print(f"  {label:32s} {dist[dsl.POSITIONS.index(target)]:.4f}")

print()
utilities = kind_utilities(theta)
for label, u in zip(("redundant", "language-only", "complementary"), utilities):
    print(f"utility {label:14s} {u:8.3f}")

probs = softmax_probabilities(utilities)
print(f"softmax shares: redundant {probs[0]:.3f}, language-only {probs[1]:.3f}, "
      f"complementary {probs[2]:.3f}")

dist = predicted_modality_distribution(theta)
assert np.allclose(dist.as_array(), probs)
print(f"\npredicted_modality_distribution agrees: p_u = {dist.p_u:.3f}")
