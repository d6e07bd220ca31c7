"""Success-probability formulas, dimension choice and Monte Carlo drivers.

The success-probability products are evaluated exactly as stated, with
rational arithmetic.  What event "success" refers to is not defined by the
protocols simulated here: honest runs recover their counts deterministically.
The formula value is therefore reported next to the empirical statistics and
never used as a pass/fail criterion.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from ampqc import channel
from ampqc.channel import EveModel
from ampqc.errors import DomainError
from ampqc.functions import SUM, SymmetricFunction
from ampqc.protocol_one import ProtocolOneConfig, derive_value_counts, run_protocol_one
from ampqc.protocol_two import ProtocolTwoConfig, run_protocol_two
from ampqc.qudit import check_dimension
from ampqc.transcript import Transcript


@dataclass(frozen=True)
class SuccessProbInput:
    """Grid of ``(u, w)`` marks indexed ``[round, participant]``."""

    d: int
    u: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        check_dimension(self.d)
        u = np.asarray(self.u, dtype=int)
        w = np.asarray(self.w, dtype=int)
        if u.ndim != 2 or u.shape != w.shape:
            raise DomainError(f"u and w must be matching 2-D grids, got {u.shape} and {w.shape}")
        if u.size and (u.min() < 0 or u.max() >= self.d or w.min() < 0 or w.max() >= self.d):
            raise DomainError(f"grid entries must lie in 0..{self.d - 1}")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "w", w)

    @classmethod
    def from_transcript(cls, transcript: Transcript) -> "SuccessProbInput":
        d = int(transcript.config["d"])
        u = [rec.tp_label.marks[1:] for rec in transcript.rounds]
        w = [[p.w for p in rec.participants] for rec in transcript.rounds]
        return cls(d, np.array(u, dtype=int), np.array(w, dtype=int))


@dataclass(frozen=True)
class SuccessProbability:
    value: Fraction
    in_unit_interval: bool

    def __float__(self) -> float:
        return float(self.value)


def _product(inp: SuccessProbInput, rounds: int, n: int) -> SuccessProbability:
    if inp.u.shape != (rounds, n):
        raise DomainError(f"grid has shape {inp.u.shape}, expected ({rounds}, {n})")
    d = inp.d
    value = Fraction(1)
    for u, w in zip(inp.u.ravel(), inp.w.ravel()):
        value *= Fraction((d - int(u)) * (int(u) + int(w)), d * d)
    return SuccessProbability(value, 0 <= value <= 1)


def success_prob_one(inp: SuccessProbInput, xi: int, n: int) -> SuccessProbability:
    """``prod_{r=0..xi} prod_{i=1..n} (d - u_i^r)(u_i^r + w_i^r) / d^2``."""
    return _product(inp, xi + 1, n)


def success_prob_two(inp: SuccessProbInput, n: int) -> SuccessProbability:
    """``prod_{r=1..n} prod_{i=1..n} (d - u_i^r)(u_i^r + w_i^r) / d^2``."""
    return _product(inp, n, n)


class MinimalDimension(NamedTuple):
    d: int
    clamped: bool


def _minimal(values: Sequence[int]) -> MinimalDimension:
    if len(values) == 0:
        raise DomainError("need at least one participant")
    raw = max(values) + 1
    return MinimalDimension(max(raw, 2), raw < 2)


def minimal_d_one(lengths: Sequence[int]) -> MinimalDimension:
    """``max l_i + 1``, clamped to 2."""
    return _minimal(lengths)


def minimal_d_two(values: Sequence[int]) -> MinimalDimension:
    """``max x_i + 1``, clamped to 2."""
    return _minimal(values)


def mod_sum_identity_check(values: Sequence[int], d: int) -> bool:
    """Iterated addition mod ``d`` agrees with summing first and reducing once."""
    acc = 0
    for x in values:
        if x < 0:
            raise DomainError("values must be non-negative")
        acc = (acc + x) % d
    return acc == sum(values) % d


# -- experiments -----------------------------------------------------------------


@dataclass(frozen=True)
class Statistic:
    mean: float
    stderr: float

    @classmethod
    def of(cls, samples: Sequence[float]) -> "Statistic":
        arr = np.asarray(samples, dtype=float)
        if arr.size == 0:
            return cls(float("nan"), float("nan"))
        stderr = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else 0.0
        return cls(float(arr.mean()), stderr)

    def to_dict(self) -> dict:
        return {"mean": self.mean, "stderr": self.stderr}


@dataclass
class ExperimentReport:
    protocol: str
    trials: int
    seed: int | None
    statistics: dict[str, Statistic] = field(default_factory=dict)
    count_errors: dict[int, int] = field(default_factory=dict)
    formula: Statistic | None = None
    expected: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "protocol": self.protocol,
            "trials": self.trials,
            "seed": self.seed,
            "statistics": {k: v.to_dict() for k, v in self.statistics.items()},
            "count_errors": {str(k): v for k, v in sorted(self.count_errors.items())},
            "formula": None if self.formula is None else self.formula.to_dict(),
            "expected": self.expected,
        }


def trial_generators(seed: int | None, trials: int) -> list[np.random.Generator]:
    """One independent generator per trial, derived from the master seed."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(trials)]


def _random_secrets_one(config: ProtocolOneConfig, rng) -> list[list[int]]:
    if config.d is None:
        cap = 4
    elif config.strict_d:
        cap = (config.d - 1) // config.n
    else:
        cap = config.d - 1
    return [list(rng.integers(0, config.xi + 1, size=int(rng.integers(0, cap + 1)))) for _ in range(config.n)]


def _random_values_two(config: ProtocolTwoConfig, rng) -> list[int]:
    top = 7 if config.d is None else config.d - 1
    return [int(x) for x in rng.integers(0, top + 1, size=config.n)]


def run_experiment(
    protocol: str,
    config: ProtocolOneConfig | ProtocolTwoConfig,
    trials: int,
    seed: int | None = None,
    *,
    inputs=None,
    eve: EveModel | None = None,
    f: SymmetricFunction = SUM,
) -> ExperimentReport:
    """Repeat seeded runs and summarise correctness, aborts and the formula value.

    ``inputs`` fixes the secrets for every trial; otherwise each trial draws
    fresh random inputs within the configuration's bounds.
    """
    if protocol not in ("one", "two"):
        raise DomainError(f"unknown protocol selector {protocol!r}")
    if trials <= 0:
        raise DomainError("trials must be positive")
    aborted, exact, modular, formula = [], [], [], []
    errors: Counter[int] = Counter()
    for rng in trial_generators(seed, trials):
        if protocol == "one":
            secrets = inputs if inputs is not None else _random_secrets_one(config, rng)
            res = run_protocol_one(config, secrets, f, eve, rng)
            aborted.append(res.aborted)
            if res.aborted:
                continue
            truth = [sum(derive_value_counts(s, config.xi).w[r] for s in secrets) for r in range(config.xi + 1)]
            got = list(res.counts)
            errors.update(g - t for g, t in zip(got, truth))
            exact.append(got == truth)
            modular.append(all((g - t) % res.d == 0 for g, t in zip(got, truth)))
            formula.append(float(success_prob_one(SuccessProbInput.from_transcript(res.transcript), config.xi, config.n)))
        else:
            values = inputs if inputs is not None else _random_values_two(config, rng)
            res = run_protocol_two(config, values, f, eve, rng)
            aborted.append(res.aborted)
            if res.aborted:
                continue
            ok = sorted(res.values) == sorted(values)
            exact.append(ok)
            modular.append(ok)
            errors.update(g - t for g, t in zip(sorted(res.values), sorted(values)))
            formula.append(float(success_prob_two(SuccessProbInput.from_transcript(res.transcript), config.n)))
    report = ExperimentReport(protocol, trials, seed, count_errors=dict(errors))
    report.statistics["abort_rate"] = Statistic.of(aborted)
    report.statistics["correct_exact"] = Statistic.of(exact)
    report.statistics["correct_mod_d"] = Statistic.of(modular)
    report.formula = Statistic.of(formula) if formula else None
    return report


def detection_experiment(
    dims: Sequence[int],
    n_decoys: int,
    seed: int | None = None,
    eve: EveModel | None = None,
) -> ExperimentReport:
    """Per-decoy mismatch rate on a decoy-only channel for each ``d`` in ``dims``.

    For uniform-basis intercept-resend the expected rate is ``(1/2)(1 - 1/d)``.
    """
    if n_decoys <= 0:
        raise DomainError("n_decoys must be positive")
    eve = eve or EveModel.intercept_resend()
    rngs = trial_generators(seed, len(dims))
    report = ExperimentReport("detection", n_decoys, seed)
    for d, rng in zip(dims, rngs):
        rep = channel.send([], d, eve, rng, n_decoys=n_decoys)[1]
        p = rep.mismatches / n_decoys
        report.statistics[f"d={d}"] = Statistic(p, math.sqrt(p * (1 - p) / n_decoys))
        report.expected[f"d={d}"] = 0.5 * (1 - 1 / d) if eve.kind is channel.EveKind.INTERCEPT_RESEND else float("nan")
    return report
