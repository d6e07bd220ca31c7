"""
Counting values held in private lists
=====================================

Two participants hold lists of small integers.  The third party learns how
often each value occurs, not who holds what.
"""
from ampqc.functions import HISTOGRAM, SUM
from ampqc.protocol_one import ProtocolOneConfig, run_protocol_one, verify_transcript

secrets = [[1, 1, 3], [3]]
res = run_protocol_one(ProtocolOneConfig(n=2, xi=3, d=4, seed=1), secrets, SUM)
print("counts per value 0..3:", res.counts)
print("sum of all data:", res.value)

# %% Each round r carries the number of times value r was contributed
for rec in res.transcript.rounds:
    print(f"round {rec.r}: announcement={rec.announcement} recovered={rec.recovered}")
print("transcript consistent:", verify_transcript(res.transcript).consistent)

# %% With the smallest allowed d, counts are only known modulo d
wrapped = run_protocol_one(ProtocolOneConfig(3, 2, d=2, seed=2), [[2], [2], [2]], HISTOGRAM)
exact = run_protocol_one(ProtocolOneConfig(3, 2, strict_d=True, seed=2), [[2], [2], [2]], HISTOGRAM)
print("d=2 counts:", wrapped.counts, "  strict counts:", exact.counts)
