"""
Entanglement swapping on labels versus a dense state vector
===========================================================

The protocols never need the full state when nobody attacks: a Bell
measurement between a Bell pair and a cat particle only rewrites marks.
This compares that bookkeeping with a brute-force simulation.
"""
import numpy as np

from ampqc.qudit import BellLabel, CatLabel
from ampqc.swap import dense_swap_oracle, run_swap_check, swap_distribution

d = 3
cat, bell, k = CatLabel((2, 0, 1)), BellLabel(1, 2), 2

label = swap_distribution(d, cat, bell, k)
dense = dense_swap_oracle(d, cat, bell, k)

print("outcome  new cat      coefficient (label)   coefficient (dense)")
for e in label.entries:
    o = dense.by_outcome()[(e.v0, e.v1)]
    print(f"({e.v0},{e.v1})    {e.new_cat.marks}    {e.coefficient:.4f}    {o.coefficient:.4f}")

# %% Every outcome has probability 1/d^2, so the measured marks alone look uniform
print("total probability:", round(label.total_probability(), 12))

# %% Exhaustive and sampled checks
print(run_swap_check(2, 2, exhaustive=True)["failures"], "failures over the 16 two-particle cases")
print(run_swap_check(3, 3, exhaustive=False, samples=50, rng=np.random.default_rng(7))["failures"],
      "failures over 50 sampled three-particle cases")
