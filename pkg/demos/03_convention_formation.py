"""
Convention formation and program abstraction
============================================

Runs the repeated-trial loop at three utterance-cost weights. Higher cost
pressure makes the Instructor adopt chunked programs sooner, so the mean
program length falls faster across the four repetitions; at zero cost there is
no incentive to abstract and programs stay fully primitive.
"""

import numpy as np

from towertalk import Theta, aggregate_lengths, run_simulation1

N_RUNS = 100

print(f"mean program length per repetition ({N_RUNS} runs, beta_i=0.3, no gestures)\n")
print("beta_u     R1     R2     R3     R4")
for beta_u in (0.1, 0.5, 1.0):
    theta = Theta(beta_i=0.3, beta_u=beta_u, beta_h=0.0)
    summary = aggregate_lengths(run_simulation1(theta, N_RUNS, seed=0))
    cells = "  ".join(f"{m:5.2f}" for m in summary.mean)
    print(f"{beta_u:5.1f}   {cells}")

print("\nzero utterance cost: abstraction never pays, lengths stay at 6")
theta = Theta(beta_i=0.3, beta_u=0.0, beta_h=0.0)
summary = aggregate_lengths(run_simulation1(theta, 5, seed=0))
print("  ", np.round(summary.mean, 2))

# Peek inside one run: which program the Instructor picked per trial.
result = run_simulation1(Theta(beta_i=0.3, beta_u=1.0, beta_h=0.0), 1, seed=1)[0]
print("\none run at beta_u=1.0, trial by trial:")
for t in result.trials:
    print(f"  R{t.repetition} {t.tower_id:5s} length {t.program_length} "
          f"({'ok' if t.success else 'failed'})")
