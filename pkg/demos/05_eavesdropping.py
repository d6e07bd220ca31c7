"""
Decoy photons against intercept-resend
======================================

An eavesdropper who measures each qudit in a random basis disturbs a decoy
with probability (1/2)(1 - 1/d).  Fifty decoys are enough to catch her.
"""
import numpy as np

from ampqc.analysis import detection_experiment
from ampqc.channel import EveModel
from ampqc.protocol_one import ProtocolOneConfig, run_protocol_one, verify_transcript

report = detection_experiment([2, 3, 5, 7], 5000, seed=1)
for key, stat in report.statistics.items():
    print(f"{key}: measured {stat.mean:.4f} +- {stat.stderr:.4f}   expected {report.expected[key]:.4f}")

# %% A full protocol run aborts before anything is announced
res = run_protocol_one(ProtocolOneConfig(2, 1, decoys=50, seed=4), [[1], [0]], eve=EveModel.intercept_resend())
print("aborted:", res.aborted, "-", res.transcript.abort_reason)

# %% Without decoys the attack slips through but leaves the swap bookkeeping inconsistent
rng = np.random.default_rng(5)
config = ProtocolOneConfig(2, 1, d=3, decoys=0)
flagged = 0
for _ in range(20):
    res = run_protocol_one(config, [[1, 0], [1]], eve=EveModel.intercept_resend(), rng=rng)
    flagged += not verify_transcript(res.transcript).consistent
print(f"undetected attacks leaving inconsistent rounds: {flagged}/20")
