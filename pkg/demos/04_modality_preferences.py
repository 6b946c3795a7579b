"""
Diverging modality preferences
==============================

Interpolates the cost weights between the first-repetition fit and each
group's final-repetition fit, then samples message kinds per run. The group
whose utterance-cost weight falls drifts into language-only instructions; the
group whose gesture-cost weight falls drifts into complementary ones.
"""

from towertalk import simulate_modality_preferences
from towertalk.config import PREFER_H_R4_THETA, PREFER_U_R4_THETA, R1_THETA

N_RUNS = 200

for label, theta_r4 in (("prefer language", PREFER_U_R4_THETA),
                        ("prefer gestures", PREFER_H_R4_THETA)):
    traj = simulate_modality_preferences(R1_THETA, theta_r4, N_RUNS, seed=0)
    print(f"{label}  (beta_u {R1_THETA.beta_u} -> {theta_r4.beta_u}, "
          f"beta_h {R1_THETA.beta_h} -> {theta_r4.beta_h})")
    print("  rep   redundant   language-only   complementary")
    for rep_idx, row in enumerate(traj.mean, start=1):
        print(f"   R{rep_idx}      {row[0]:.3f}         {row[1]:.3f}           {row[2]:.3f}")
    du = traj.expected[3, 1] - traj.expected[0, 1]
    dc = traj.expected[3, 2] - traj.expected[0, 2]
    print(f"  exact shift: language-only {du:+.3f}, complementary {dc:+.3f}\n")
