"""
One value per participant, shuffled by a singlet state
======================================================

A shared singlet hands every participant a private slot.  Each writes its
value into its own slot, so the third party sees the values in a random
order nobody controls.
"""
from collections import Counter

import numpy as np

from ampqc.functions import MAX, SORTED_LIST
from ampqc.protocol_two import ProtocolTwoConfig, run_protocol_two, singlet_round

res = run_protocol_two(ProtocolTwoConfig(3, seed=7), [2, 0, 5], SORTED_LIST)
print("slots (private to each participant):", res.transcript.slots)
print("values in slot order:", res.values, " sorted:", res.value)

# %% Slot assignments are uniform over permutations
rng = np.random.default_rng(0)
tally = Counter(singlet_round(3, 1, None, rng)[0].slots for _ in range(3000))
for perm, count in sorted(tally.items()):
    print(perm, count)

# %% Any symmetric function can be evaluated on the recovered list
print("max:", run_protocol_two(ProtocolTwoConfig(4, seed=3), [6, 1, 7, 7], MAX).value)
