"""Label-level entanglement swapping between a cat state and a Bell state.

A Bell measurement on particle ``k`` of ``|phi(u0, ..., um)>`` together with
the first particle of ``|phi(a, b)>`` leaves the second Bell particle in slot
``k`` of a new cat state.  For Bell outcome ``(v0, v1)``::

    new phase mark  = u0 + a - v0          (mod d)
    new mark k      = b + uk - v1          (mod d)
    branch weight   = (1/d) * zeta^((uk - v1) * (a - v0))

Every branch has magnitude ``1/d``, so sampling is a uniform draw of
``(v0, v1)`` followed by integer arithmetic.  :func:`dense_swap_oracle`
recomputes the same table from state vectors for verification.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ampqc.errors import CapabilityError, DomainError
from ampqc.qudit import (
    ATOL,
    DENSE_CAP,
    BellLabel,
    CatLabel,
    bell_basis_matrix,
    bell_state,
    cat_state,
    check_dimension,
)


@dataclass(frozen=True)
class SwapOutcome:
    v0: int
    v1: int
    new_cat: CatLabel
    phase_exponent: int

    @property
    def bell_result(self) -> BellLabel:
        """The measured Bell label ``(lambda, gamma)``."""
        return BellLabel(self.v0, self.v1)


@dataclass(frozen=True)
class SwapEntry:
    v0: int
    v1: int
    new_cat: CatLabel
    coefficient: complex


@dataclass(frozen=True)
class SwapDistribution:
    d: int
    entries: tuple[SwapEntry, ...]

    def by_outcome(self) -> dict[tuple[int, int], SwapEntry]:
        return {(e.v0, e.v1): e for e in self.entries}

    def total_probability(self) -> float:
        return float(sum(abs(e.coefficient) ** 2 for e in self.entries))


def _validate(d: int, cat: CatLabel, bell: BellLabel, k: int) -> tuple[CatLabel, BellLabel]:
    d = check_dimension(d)
    cat = cat if isinstance(cat, CatLabel) else CatLabel(cat)
    cat.validate(d)
    bell = BellLabel(*bell).validate(d)
    if not 1 <= k <= cat.m:
        raise DomainError(f"swap position k={k} outside 1..{cat.m}")
    return cat, bell


def swap_apply(d: int, cat: CatLabel, bell: BellLabel, k: int, v0: int, v1: int) -> SwapOutcome:
    """Deterministic branch of the swap for a given Bell outcome ``(v0, v1)``."""
    cat, bell = _validate(d, cat, bell, k)
    if not (0 <= v0 < d and 0 <= v1 < d):
        raise DomainError(f"Bell outcome ({v0}, {v1}) outside 0..{d - 1}")
    a, b = bell
    uk = cat[k]
    new_cat = cat.with_marks({0: (cat.phase + a - v0) % d, k: (b + uk - v1) % d})
    phase = ((uk - v1) % d) * ((a - v0) % d) % d
    return SwapOutcome(int(v0), int(v1), new_cat, phase)


def swap_sample(d: int, cat: CatLabel, bell: BellLabel, k: int, rng: np.random.Generator) -> SwapOutcome:
    """Sample one branch; ``(v0, v1)`` is uniform over ``d**2`` outcomes."""
    _validate(d, cat, bell, k)
    v0, v1 = (int(x) for x in rng.integers(0, d, size=2))
    return swap_apply(d, cat, bell, k, v0, v1)


def swap_distribution(d: int, cat: CatLabel, bell: BellLabel, k: int) -> SwapDistribution:
    """All ``d**2`` branches with coefficients ``(1/d) zeta^phase``."""
    cat, bell = _validate(d, cat, bell, k)
    entries = []
    for v0 in range(d):
        for v1 in range(d):
            out = swap_apply(d, cat, bell, k, v0, v1)
            coeff = np.exp(2j * np.pi * out.phase_exponent / d) / d
            entries.append(SwapEntry(v0, v1, out.new_cat, complex(coeff)))
    return SwapDistribution(d, tuple(entries))


def dense_swap_oracle(d: int, cat: CatLabel, bell: BellLabel, k: int) -> SwapDistribution:
    """Same table as :func:`swap_distribution`, computed from state vectors.

    Builds ``|cat> (x) |bell>``, moves the second Bell particle into slot ``k``
    and expands the result in the product basis (cat states on the surviving
    qudits) (x) (Bell states on the measured pair).  Nonzero coefficients form
    the table.
    """
    cat, bell = _validate(d, cat, bell, k)
    m = cat.m
    total = d ** (m + 3)
    if total > DENSE_CAP or d ** (2 * (m + 1)) > DENSE_CAP:
        raise CapabilityError(f"oracle for d={d}, m={m} exceeds dense cap {DENSE_CAP}")
    joint = cat_state(d, cat).kron(bell_state(d, bell))
    # subsystems: cat 0..m, Bell first particle m+1, Bell second particle m+2
    survivors = [i for i in range(m + 1)]
    survivors[k] = m + 2
    order = survivors + [m + 1, k]
    psi = joint.permute(order).amps.reshape(d ** (m + 1), d * d)

    cat_labels = [CatLabel(np.unravel_index(i, (d,) * (m + 1))) for i in range(d ** (m + 1))]
    cat_basis = np.column_stack([cat_state(d, lab).amps for lab in cat_labels])
    coeffs = cat_basis.conj().T @ psi @ bell_basis_matrix(d).conj()

    entries = []
    for ci, bi in zip(*np.nonzero(np.abs(coeffs) > ATOL)):
        v0, v1 = divmod(int(bi), d)
        entries.append(SwapEntry(v0, v1, cat_labels[ci], complex(coeffs[ci, bi])))
    entries.sort(key=lambda e: (e.v0, e.v1))
    return SwapDistribution(d, tuple(entries))


def compare_distributions(label: SwapDistribution, oracle: SwapDistribution, atol: float = ATOL) -> list[str]:
    """Differences between two swap tables; an empty list means they agree."""
    problems = []
    if len(oracle.entries) != len(label.entries):
        problems.append(f"branch count {len(label.entries)} vs oracle {len(oracle.entries)}")
    dense = oracle.by_outcome()
    for entry in label.entries:
        other = dense.get((entry.v0, entry.v1))
        if other is None:
            problems.append(f"outcome {(entry.v0, entry.v1)} missing from oracle")
        elif other.new_cat != entry.new_cat:
            problems.append(f"outcome {(entry.v0, entry.v1)}: cat {entry.new_cat.marks} vs {other.new_cat.marks}")
        elif abs(other.coefficient - entry.coefficient) > atol:
            problems.append(
                f"outcome {(entry.v0, entry.v1)}: coefficient {entry.coefficient:.6g} vs {other.coefficient:.6g}"
            )
    return problems


def swap_check_cases(d: int, m: int, *, exhaustive: bool, samples: int = 20, rng=None):
    """Yield ``(cat, bell, k)`` inputs for cat labels with ``m`` shift marks."""
    if exhaustive:
        for ci in range(d ** (m + 1)):
            cat = CatLabel(np.unravel_index(ci, (d,) * (m + 1)))
            for a in range(d):
                for b in range(d):
                    for k in range(1, m + 1):
                        yield cat, BellLabel(a, b), k
        return
    if rng is None:
        raise DomainError("sampled swap checks need a random generator")
    for _ in range(samples):
        cat = CatLabel(rng.integers(0, d, size=m + 1))
        bell = BellLabel(*(int(x) for x in rng.integers(0, d, size=2)))
        yield cat, bell, int(rng.integers(1, m + 1))


def run_swap_check(d: int, m: int, *, exhaustive: bool, samples: int = 20, rng=None) -> dict:
    """Compare label engine and dense oracle for ``m``-particle cat states.

    ``m`` counts cat particles, so labels carry ``m - 1`` shift marks.
    Returns a summary dictionary.
    """
    check_dimension(d)
    if m < 2:
        raise DomainError("a cat state needs at least 2 particles")
    if d ** (2 * m) > DENSE_CAP:
        raise CapabilityError(f"swap check for d={d}, m={m} exceeds dense cap {DENSE_CAP}")
    cases = failures = 0
    details = []
    for cat, bell, k in swap_check_cases(d, m - 1, exhaustive=exhaustive, samples=samples, rng=rng):
        cases += 1
        problems = compare_distributions(swap_distribution(d, cat, bell, k), dense_swap_oracle(d, cat, bell, k))
        if problems:
            failures += 1
            details.append({"cat": list(cat.marks), "bell": list(bell), "k": k, "problems": problems})
    return {"d": d, "m": m, "cases": cases, "failures": failures, "details": details}


__all__ = [
    "SwapOutcome",
    "SwapEntry",
    "SwapDistribution",
    "swap_apply",
    "swap_sample",
    "swap_distribution",
    "dense_swap_oracle",
    "compare_distributions",
    "run_swap_check",
]
