"""Anonymous multi-party computation over multi-valued data (protocol I).

Each participant holds a multiset of integers in ``0..xi``.  Round ``r``
carries, for every participant, the multiplicity of ``r`` in their data as the
shift mark of an encoded Bell state.  After swapping and the aggregate
announcement, the third party learns ``R[r]``, the total number of data equal
to ``r``, without learning who contributed them.

Counts are recovered modulo ``d``.  The minimal dimension ``d > max l_i``
does not stop ``sum_i w_i`` from reaching ``d``; pass ``strict_d=True`` to
require ``d > sum_i l_i`` and get exact counts.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from ampqc.channel import EveModel
from ampqc.errors import DomainError, ProtocolError
from ampqc.functions import SUM, SymmetricFunction, expand_counts
from ampqc.qudit import BellLabel, CatLabel, check_dimension
from ampqc.rounds import announce, label_round, run_rounds
from ampqc.transcript import RoundRecord, Transcript


@dataclass(frozen=True)
class ValueCounts:
    """Distinct values ``y`` (descending), their multiplicities ``eta``, and
    the per-value count vector ``w`` over ``0..xi``."""

    y: tuple[int, ...]
    eta: tuple[int, ...]
    w: tuple[int, ...]


def derive_value_counts(data: Sequence[int], xi: int) -> ValueCounts:
    if xi < 0:
        raise DomainError(f"xi must be non-negative, got {xi}")
    for x in data:
        if not 0 <= x <= xi:
            raise DomainError(f"datum {x} outside 0..{xi}")
    counts = Counter(int(x) for x in data)
    y = tuple(sorted(counts, reverse=True))
    return ValueCounts(y, tuple(counts[v] for v in y), tuple(counts.get(r, 0) for r in range(xi + 1)))


@dataclass(frozen=True)
class ProtocolOneConfig:
    n: int
    xi: int
    d: int | None = None
    strict_d: bool = False
    decoys: int | None = None
    threshold: int = 0
    engine: str = "auto"
    seed: int | None = None

    def resolve_d(self, lengths: Sequence[int]) -> int:
        """Dimension to use for secrets of the given lengths (validated)."""
        bound = sum(lengths) if self.strict_d else max(lengths, default=0)
        if self.d is None:
            return max(bound + 1, 2)
        d = check_dimension(self.d)
        if d <= bound:
            rule = "sum of list lengths" if self.strict_d else "longest list length"
            raise DomainError(f"d={d} must exceed the {rule} ({bound})")
        return d

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class ProtocolOneResult:
    transcript: Transcript
    counts: tuple[int, ...] | None
    value: Any
    d: int

    @property
    def aborted(self) -> bool:
        return self.transcript.aborted


def recover_count(measured: CatLabel, original: CatLabel, announcement: int, d: int) -> int:
    """``sum_i m_i - sum_i u_i + A  (mod d)`` over the shift marks of one round."""
    return (sum(measured.marks[1:]) - sum(original.marks[1:]) + announcement) % d


def tp_recover_counts(
    measured: Sequence[CatLabel],
    original: Sequence[CatLabel],
    announcements: Sequence[int | None],
    d: int,
) -> list[int]:
    """Per-round counts from TP's measured labels, its own labels and the announcements."""
    if len(measured) != len(original):
        raise ProtocolError(f"{len(measured)} measured cats for {len(original)} prepared")
    if len(announcements) != len(measured) or any(a is None for a in announcements):
        raise ProtocolError("an announcement is missing for at least one round")
    return [recover_count(m, o, a, d) for m, o, a in zip(measured, original, announcements)]


def _random_bells(w_rows: Sequence[Sequence[int]], d: int, rng: np.random.Generator) -> list[list[BellLabel]]:
    return [[BellLabel(int(rng.integers(d)), int(w)) for w in row] for row in w_rows]


def run_protocol_one(
    config: ProtocolOneConfig,
    secrets: Sequence[Sequence[int]],
    f: SymmetricFunction = SUM,
    eve: EveModel | None = None,
    rng: np.random.Generator | None = None,
) -> ProtocolOneResult:
    """Run protocol I end to end.

    ``secrets[i]`` is participant ``i``'s data list.  On abort no counts are
    produced and ``counts``/``value`` are ``None``.
    """
    eve = eve or EveModel.none()
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    if len(secrets) != config.n:
        raise DomainError(f"config.n={config.n} but {len(secrets)} participants supplied")
    if config.n < 1:
        raise DomainError("at least one participant is required")
    d = config.resolve_d([len(s) for s in secrets])
    w_by_participant = [derive_value_counts(s, config.xi).w for s in secrets]
    round_ids = list(range(config.xi + 1))
    w_rows = [[w[r] for w in w_by_participant] for r in round_ids]

    bells = _random_bells(w_rows, d, rng)
    run = run_rounds(
        d, config.n, round_ids, bells, eve, rng,
        engine=config.engine, n_decoys=config.decoys, threshold=config.threshold,
    )
    tconf = config.to_dict() | {"d": d, "eve": eve.describe(), "f": f.name}
    transcript = Transcript("one", tconf, channel_reports=run.reports)
    if run.aborted:
        transcript.aborted, transcript.abort_reason = True, run.abort_reason
        return ProtocolOneResult(transcript, None, None, d)

    counts = tp_recover_counts(
        [rec.measured_label for rec in run.records],
        [rec.tp_label for rec in run.records],
        [rec.announcement for rec in run.records],
        d,
    )
    transcript.rounds = [_with_recovered(rec, c) for rec, c in zip(run.records, counts)]
    value = f.evaluate(expand_counts(counts), rng)
    transcript.result = {"counts": counts, "f": value}
    return ProtocolOneResult(transcript, tuple(counts), value, d)


def _with_recovered(rec: RoundRecord, count: int) -> RoundRecord:
    return RoundRecord(rec.r, rec.tp_label, rec.participants, rec.announcement, rec.measured_label, count)


@dataclass
class ConsistencyReport:
    issues: list[tuple[int, str]]

    @property
    def consistent(self) -> bool:
        return not self.issues

    def rounds_flagged(self) -> set[int]:
        return {r for r, _ in self.issues}


def check_round(rec: RoundRecord, d: int) -> list[str]:
    """Swap-identity checks for one round; shared by both protocols."""
    problems = []
    u, m = rec.tp_label.marks, rec.measured_label.marks
    if len(u) != len(rec.participants) + 1 or len(m) != len(u):
        return [f"label length mismatch for {len(rec.participants)} participants"]
    for i, p in enumerate(rec.participants, start=1):
        expect = (u[i] + p.w - p.gamma) % d
        if m[i] != expect:
            problems.append(f"mark {i}: measured {m[i]}, swap identity gives {expect}")
    phase = (u[0] + sum(p.v for p in rec.participants) - sum(p.lam for p in rec.participants)) % d
    if m[0] != phase:
        problems.append(f"phase mark: measured {m[0]}, swap identity gives {phase}")
    if rec.announcement != announce(rec.participants, d):
        problems.append(f"announcement {rec.announcement} != sum of gammas mod d")
    if rec.recovered is not None and rec.recovered != recover_count(rec.measured_label, rec.tp_label, rec.announcement, d):
        problems.append("recovered count does not follow from TP's labels and the announcement")
    return problems


def verify_transcript(transcript: Transcript, config: ProtocolOneConfig | None = None) -> ConsistencyReport:
    """Re-derive every round from the swap identities; never raises."""
    issues: list[tuple[int, str]] = []
    try:
        d = int(transcript.config["d"])
        if transcript.aborted:
            return ConsistencyReport([(-1, "transcript is from an aborted run")])
        for rec in transcript.rounds:
            issues += [(rec.r, msg) for msg in check_round(rec, d)]
            true = sum(p.w for p in rec.participants) % d
            if rec.recovered is not None and rec.recovered != true:
                issues.append((rec.r, f"recovered {rec.recovered} but encoded total is {true} mod {d}"))
        if config is not None and len(transcript.rounds) != config.xi + 1:
            issues.append((-1, f"{len(transcript.rounds)} rounds recorded, expected {config.xi + 1}"))
    except (KeyError, TypeError, ValueError) as exc:
        issues.append((-1, f"malformed transcript: {exc}"))
    return ConsistencyReport(issues)


# -- exact enumeration of what TP sees ---------------------------------------


def round_view_distribution(d: int, w_column: Sequence[int]) -> dict[tuple, Fraction]:
    """Exact distribution of TP's view of one round for the given shift marks.

    Enumerates TP's cat label, every participant's phase mark ``v``, and every
    swap outcome, all uniform.
    """
    n = len(w_column)
    dist: dict[tuple, Fraction] = {}
    weight = Fraction(1, d ** (n + 1) * d ** n * d ** (2 * n))
    outcomes_space = list(itertools.product(range(d), repeat=2))
    for tp in itertools.product(range(d), repeat=n + 1):
        tp_label = CatLabel(tp)
        for vs in itertools.product(range(d), repeat=n):
            bells = [BellLabel(v, w) for v, w in zip(vs, w_column)]
            for outcomes in itertools.product(outcomes_space, repeat=n):
                parts, measured = label_round(d, tp_label, bells, outcomes)
                key = (tp, measured.marks, announce(parts, d))
                dist[key] = dist.get(key, 0) + weight
    return dist


def product_distribution(per_round: Sequence[dict[tuple, Fraction]]) -> dict[tuple, Fraction]:
    joint: dict[tuple, Fraction] = {(): Fraction(1)}
    for dist in per_round:
        joint = {k + (kk,): p * pp for k, p in joint.items() for kk, pp in dist.items()}
    return joint


def enumerate_tp_view(secrets: Sequence[Sequence[int]], d: int, xi: int) -> dict[tuple, Fraction]:
    """Exact joint distribution of TP's view over all rounds of protocol I."""
    ws = [derive_value_counts(s, xi).w for s in secrets]
    return product_distribution([round_view_distribution(d, [w[r] for w in ws]) for r in range(xi + 1)])
