"""Anonymous voting, ranking and surveying on top of the two protocols.

Single values per participant go through protocol II (slot assignment caps
it at six participants; larger groups fall back to protocol I with one-element
lists).  Multiple values per participant go through protocol I with exact
counts (``strict_d``).  Outputs never carry participant identities.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ampqc.channel import EveModel
from ampqc.errors import DomainError, ProtocolAborted
from ampqc.functions import SORTED_LIST, expand_counts
from ampqc.protocol_one import ProtocolOneConfig, run_protocol_one
from ampqc.protocol_two import ProtocolTwoConfig, run_protocol_two
from ampqc.qudit import SINGLET_CAP


@dataclass(frozen=True)
class AppConfig:
    """Protocol knobs shared by the applications; ``d=None`` picks the minimum."""

    d: int | None = None
    tau: int = 2
    decoys: int | None = None
    threshold: int = 0
    eve: EveModel | None = None
    seed: int | None = None


@dataclass(frozen=True)
class RankingResult:
    values: tuple[int, ...]
    multiplicities: tuple[tuple[int, int], ...]


def _rng(config: AppConfig, rng):
    return rng if rng is not None else np.random.default_rng(config.seed)


def _single_values(values: Sequence[int], config: AppConfig, rng, d: int | None = None) -> list[int]:
    """Recover an anonymised list of single values; order carries no identity."""
    if len(values) <= SINGLET_CAP:
        cfg = ProtocolTwoConfig(len(values), d or config.d, config.tau, config.decoys, config.threshold)
        res = run_protocol_two(cfg, values, SORTED_LIST, config.eve, rng)
        if res.aborted:
            raise ProtocolAborted(res.transcript.abort_reason, res.transcript)
        return sorted(res.values)
    return _multi_values([[x] for x in values], config, rng)


def _multi_values(lists: Sequence[Sequence[int]], config: AppConfig, rng, xi: int | None = None) -> list[int]:
    xi = max((max(s) for s in lists if s), default=0) if xi is None else xi
    cfg = ProtocolOneConfig(len(lists), xi, config.d, True, config.decoys, config.threshold)
    res = run_protocol_one(cfg, lists, SORTED_LIST, config.eve, rng)
    if res.aborted:
        raise ProtocolAborted(res.transcript.abort_reason, res.transcript)
    return expand_counts(res.counts)


def anonymous_vote(
    ballots: Sequence,
    m: int,
    mode: str = "one-vote",
    config: AppConfig | None = None,
    rng: np.random.Generator | None = None,
) -> tuple[int, ...]:
    """Tally per candidate ``1..m``.

    ``one-vote``: each ballot is a single candidate index.  ``multi-vote``:
    each ballot is a list of candidate indices, repeats allowed.  Ballots are
    validated before anything runs.
    """
    config = config or AppConfig()
    if m < 1:
        raise DomainError("need at least one candidate")
    if mode == "one-vote":
        for b in ballots:
            if isinstance(b, (list, tuple)) or not 1 <= b <= m:
                raise DomainError(f"invalid one-vote ballot {b!r} for {m} candidates")
        if not ballots:
            return (0,) * m
        d = config.d or max(m, 2)
        got = _single_values([b - 1 for b in ballots], config, _rng(config, rng), d)
    elif mode == "multi-vote":
        for b in ballots:
            if not isinstance(b, (list, tuple)) or any(not 1 <= c <= m for c in b):
                raise DomainError(f"invalid multi-vote ballot {b!r} for {m} candidates")
        if not ballots:
            return (0,) * m
        got = _multi_values([[c - 1 for c in b] for b in ballots], config, _rng(config, rng), xi=m - 1)
    else:
        raise DomainError(f"mode must be 'one-vote' or 'multi-vote', got {mode!r}")
    tally = Counter(got)
    return tuple(tally.get(c - 1, 0) for c in range(1, m + 1))


def anonymous_rank(
    values: Sequence, config: AppConfig | None = None, rng: np.random.Generator | None = None
) -> RankingResult:
    """Ascending ranking of all data with multiplicities, owners hidden.

    ``values`` holds one integer per participant, or one list per participant.
    """
    config = config or AppConfig()
    if len(values) < 2:
        raise DomainError("ranking needs at least two participants")
    if all(isinstance(v, (list, tuple)) for v in values):
        got = _multi_values(values, config, _rng(config, rng))
    else:
        got = _single_values(list(values), config, _rng(config, rng))
    counts = Counter(got)
    return RankingResult(tuple(got), tuple(sorted(counts.items())))


def anonymous_survey(
    values: Sequence, config: AppConfig | None = None, rng: np.random.Generator | None = None
) -> int:
    """Anonymous sum of non-negative integers (one per respondent or lists)."""
    config = config or AppConfig()
    if not values:
        raise DomainError("survey needs at least one respondent")
    if all(isinstance(v, (list, tuple)) for v in values):
        if any(x < 0 for v in values for x in v):
            raise DomainError("survey values must be non-negative")
        return sum(_multi_values(values, config, _rng(config, rng)))
    if any(x < 0 for x in values):
        raise DomainError("survey values must be non-negative")
    if config.d is not None and max(values) >= config.d:
        raise DomainError(f"value {max(values)} does not fit d={config.d}; raise d above {max(values)}")
    return sum(_single_values(list(values), config, _rng(config, rng)))
