"""
What the third party can see
============================

Exact enumeration of the third party's view for two participants and d=2.
Exchanging the inputs leaves the distribution unchanged; changing the
multiset does not.
"""
from ampqc.protocol_one import enumerate_tp_view as view_one
from ampqc.protocol_two import enumerate_tp_view as view_two

a, b = view_one([[0], [1]], 2, 1), view_one([[1], [0]], 2, 1)
print("protocol one, inputs exchanged, same view:", a == b, f"({len(a)} outcomes)")
print("protocol one, different multiset, same view:", a == view_one([[1], [1]], 2, 1))

a, b = view_two([0, 1], 2), view_two([1, 0], 2)
print("protocol two, inputs exchanged, same view:", a == b, f"({len(a)} outcomes)")
print("probabilities are exact fractions summing to", sum(a.values()))
