"""Anonymous multi-party computation over one value per participant (protocol II).

Participants first measure a shared ``n``-level singlet state; its outcomes
form a random permutation, so each participant obtains a private slot in
``1..n`` that no other party knows.  Participant ``i`` then writes ``x_i``
into round ``slot_i`` of the cat/Bell rounds and zero elsewhere.  The third
party recovers the value list in slot order, which is the inputs in a
uniformly random, unknown order.
"""
from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from ampqc import channel
from ampqc.channel import EveModel, RegisterQudit, SharedRegister, TransmissionReport
from ampqc.errors import DomainError
from ampqc.functions import SUM, SymmetricFunction
from ampqc.protocol_one import product_distribution, recover_count, round_view_distribution, tp_recover_counts
from ampqc.qudit import SINGLET_CAP, BellLabel, StateVector, check_dimension, measure_computational, singlet_state
from ampqc.rounds import run_rounds
from ampqc.transcript import RoundRecord, Transcript


@dataclass(frozen=True)
class SlotAssignment:
    """Singlet outcomes ``M_i`` in ``0..n-1``; participant ``i`` uses slot ``M_i + 1``."""

    outcomes: tuple[int, ...]

    @property
    def slots(self) -> tuple[int, ...]:
        return tuple(m + 1 for m in self.outcomes)


@dataclass(frozen=True)
class SingletReport:
    pool_size: int
    tested: tuple[int, ...]
    test_outcomes: tuple[tuple[int, ...], ...]
    passed: bool
    failed_index: int | None = None
    channel_reports: tuple[TransmissionReport, ...] = ()

    def to_dict(self) -> dict:
        return {
            "pool_size": self.pool_size,
            "tested": list(self.tested),
            "test_outcomes": [list(o) for o in self.test_outcomes],
            "passed": self.passed,
            "failed_index": self.failed_index,
        }


@dataclass(frozen=True)
class ProtocolTwoConfig:
    n: int
    d: int | None = None
    tau: int = 2
    decoys: int | None = None
    threshold: int = 0
    engine: str = "auto"
    seed: int | None = None

    def resolve_d(self, values: Sequence[int]) -> int:
        bound = max(values, default=0)
        if self.d is None:
            return max(bound + 1, 2)
        d = check_dimension(self.d)
        if d <= bound:
            raise DomainError(f"d={d} must exceed the largest value ({bound}); raise d")
        return d

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class ProtocolTwoResult:
    transcript: Transcript
    values: tuple[int, ...] | None
    value: Any
    d: int

    @property
    def aborted(self) -> bool:
        return self.transcript.aborted


def singlet_round(
    n: int,
    tau: int,
    eve: EveModel | None,
    rng: np.random.Generator,
    *,
    decoys: int | None = None,
    threshold: int = 0,
    pool: Sequence[StateVector] | None = None,
    test_indices: Sequence[int] | None = None,
) -> tuple[SlotAssignment | None, SingletReport]:
    """Distribute ``n*tau + 1`` singlets, test ``n*tau`` of them, measure the last.

    A test passes iff its ``n`` computational outcomes are all distinct.
    ``pool`` and ``test_indices`` override TP's preparation and random choice,
    which lets callers plant a forged state.  Returns ``None`` for the
    assignment on abort.
    """
    eve = eve or EveModel.none()
    if not 1 <= n <= SINGLET_CAP:
        raise DomainError(f"singlet slot assignment supports 1..{SINGLET_CAP} participants, got {n}")
    if tau < 0:
        raise DomainError("tau must be non-negative")
    size = n * tau + 1
    if n == 1:
        # a one-particle "singlet" is |0>; the only slot is 1
        return SlotAssignment((0,)), SingletReport(size, (), (), True)
    states = list(pool) if pool is not None else [singlet_state(n)] * size
    if len(states) != size:
        raise DomainError(f"pool must hold n*tau+1 = {size} states")
    registers = [SharedRegister(s) for s in states]

    reports = []
    for i in range(n):
        _, rep = channel.send(
            [RegisterQudit(reg, i) for reg in registers], n, eve, rng,
            n_decoys=decoys, threshold=threshold, channel=f"TP->P{i + 1} (singlets)",
        )
        reports.append(rep)
    if any(rep.aborted for rep in reports):
        return None, SingletReport(size, (), (), False, None, tuple(reports))

    if test_indices is None:
        tested = tuple(sorted(int(t) for t in rng.choice(size, size=size - 1, replace=False)))
    else:
        tested = tuple(sorted(int(t) for t in test_indices))
        if len(tested) != size - 1 or len(set(tested)) != len(tested) or not all(0 <= t < size for t in tested):
            raise DomainError(f"test_indices must name {size - 1} distinct singlets out of {size}")

    outcomes = []
    for t in tested:
        values = measure_computational(registers[t].state, range(n), rng).values
        outcomes.append(values)
        if len(set(values)) != n:
            return None, SingletReport(size, tested, tuple(outcomes), False, t, tuple(reports))
    (survivor,) = set(range(size)) - set(tested)
    m = measure_computational(registers[survivor].state, range(n), rng).values
    return SlotAssignment(m), SingletReport(size, tested, tuple(outcomes), True, None, tuple(reports))


def encode_slot(slot: int, x: int, n: int, d: int, rng: np.random.Generator) -> list[BellLabel]:
    """Bell labels for rounds ``1..n``: shift ``x`` in round ``slot``, zero elsewhere."""
    d = check_dimension(d)
    if not 1 <= slot <= n:
        raise DomainError(f"slot {slot} outside 1..{n}")
    if not 0 <= x < d:
        raise DomainError(f"value {x} outside 0..{d - 1}")
    return [BellLabel(int(rng.integers(d)), x if r == slot else 0) for r in range(1, n + 1)]


def run_protocol_two(
    config: ProtocolTwoConfig,
    values: Sequence[int],
    f: SymmetricFunction = SUM,
    eve: EveModel | None = None,
    rng: np.random.Generator | None = None,
) -> ProtocolTwoResult:
    """Run protocol II end to end; ``values[i]`` is participant ``i``'s datum."""
    eve = eve or EveModel.none()
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    n = config.n
    if len(values) != n:
        raise DomainError(f"config.n={n} but {len(values)} values supplied")
    if any(x < 0 for x in values):
        raise DomainError("values must be non-negative")
    d = config.resolve_d(values)
    tconf = config.to_dict() | {"d": d, "eve": eve.describe(), "f": f.name}
    transcript = Transcript("two", tconf)

    assignment, singlet = singlet_round(
        n, config.tau, eve, rng, decoys=config.decoys, threshold=config.threshold
    )
    transcript.singlet = singlet.to_dict()
    transcript.channel_reports = list(singlet.channel_reports)
    if assignment is None:
        transcript.aborted = True
        transcript.abort_reason = (
            f"singlet verification failed at index {singlet.failed_index}"
            if singlet.failed_index is not None
            else "eavesdropping detected during singlet distribution"
        )
        return ProtocolTwoResult(transcript, None, None, d)
    transcript.slots = list(assignment.slots)

    per_participant = [encode_slot(s, x, n, d, rng) for s, x in zip(assignment.slots, values)]
    round_ids = list(range(1, n + 1))
    bells = [[per_participant[i][k] for i in range(n)] for k in range(n)]
    run = run_rounds(
        d, n, round_ids, bells, eve, rng,
        engine=config.engine, n_decoys=config.decoys, threshold=config.threshold,
    )
    transcript.channel_reports += run.reports
    if run.aborted:
        transcript.aborted, transcript.abort_reason = True, run.abort_reason
        return ProtocolTwoResult(transcript, None, None, d)

    recovered = tp_recover_counts(
        [rec.measured_label for rec in run.records],
        [rec.tp_label for rec in run.records],
        [rec.announcement for rec in run.records],
        d,
    )
    transcript.rounds = [
        RoundRecord(rec.r, rec.tp_label, rec.participants, rec.announcement, rec.measured_label, c)
        for rec, c in zip(run.records, recovered)
    ]
    value = f.evaluate(recovered, rng)
    transcript.result = {"values": recovered, "f": value}
    return ProtocolTwoResult(transcript, tuple(recovered), value, d)


def enumerate_tp_view(values: Sequence[int], d: int) -> dict[tuple, Fraction]:
    """Exact distribution of TP's view of protocol II.

    Slot assignments are uniform over permutations (the singlet statistics);
    given the slots, rounds are independent and enumerated exhaustively.
    """
    n = len(values)
    perms = list(itertools.permutations(range(n)))
    total: dict[tuple, Fraction] = {}
    for perm in perms:
        slots = [m + 1 for m in perm]
        columns = [[x if s == r else 0 for s, x in zip(slots, values)] for r in range(1, n + 1)]
        joint = product_distribution([round_view_distribution(d, col) for col in columns])
        for key, p in joint.items():
            total[key] = total.get(key, 0) + p / len(perms)
    return total


__all__ = [
    "SlotAssignment",
    "SingletReport",
    "ProtocolTwoConfig",
    "ProtocolTwoResult",
    "singlet_round",
    "encode_slot",
    "run_protocol_two",
    "enumerate_tp_view",
    "recover_count",
]
