"""Permutation-invariant public functions evaluated by the third party."""
from __future__ import annotations

from collections import Counter
from typing import Any, Callable, Sequence

import numpy as np

from ampqc.errors import DomainError


def _histogram(values: Sequence[int]) -> list[list[int]]:
    return [[v, c] for v, c in sorted(Counter(values).items())]


def _mean(values: Sequence[int]) -> float | None:
    return float(sum(values)) / len(values) if values else None


_BUILTINS: dict[str, Callable[[Sequence[int]], Any]] = {
    "sum": lambda xs: int(sum(xs)),
    "max": lambda xs: max(xs) if xs else None,
    "min": lambda xs: min(xs) if xs else None,
    "sorted": lambda xs: sorted(xs),
    "histogram": _histogram,
    "mean": _mean,
}


class SymmetricFunction:
    """A public function ``f`` whose value ignores the order of its inputs.

    Built-ins are ``SUM``, ``MAX``, ``MIN``, ``SORTED_LIST``, ``HISTOGRAM`` and
    ``MEAN``.  A custom reducer is accepted as-is but is spot-checked for
    permutation invariance before its value is trusted.
    """

    def __init__(self, name: str, reducer: Callable[[Sequence[int]], Any], builtin: bool = False):
        self.name = name
        self.reducer = reducer
        self.builtin = builtin

    @classmethod
    def custom(cls, name: str, reducer: Callable[[Sequence[int]], Any]) -> "SymmetricFunction":
        return cls(name, reducer)

    @classmethod
    def parse(cls, name: str) -> "SymmetricFunction":
        key = name.strip().lower().replace("_", "").replace("-", "")
        key = {"sortedlist": "sorted", "sort": "sorted", "hist": "histogram", "avg": "mean"}.get(key, key)
        try:
            return _NAMED[key]
        except KeyError:
            raise DomainError(f"unknown symmetric function {name!r}; choose from {sorted(_NAMED)}") from None

    def __call__(self, values: Sequence[int]) -> Any:
        return self.reducer([int(v) for v in values])

    def is_permutation_invariant(self, values: Sequence[int], rng: np.random.Generator, trials: int = 10) -> bool:
        reference = self(values)
        for _ in range(trials):
            if self([values[i] for i in rng.permutation(len(values))]) != reference:
                return False
        return True

    def evaluate(self, values: Sequence[int], rng: np.random.Generator | None = None) -> Any:
        """Apply ``f``; custom reducers must pass a 10-permutation spot check first."""
        if not self.builtin:
            rng = rng if rng is not None else np.random.default_rng(0)
            if not self.is_permutation_invariant(list(values), rng):
                raise DomainError(f"function {self.name!r} is not invariant under permutation of its inputs")
        return self(values)

    def __repr__(self) -> str:
        return f"SymmetricFunction({self.name!r})"


_NAMED = {name: SymmetricFunction(name, fn, builtin=True) for name, fn in _BUILTINS.items()}

SUM = _NAMED["sum"]
MAX = _NAMED["max"]
MIN = _NAMED["min"]
SORTED_LIST = _NAMED["sorted"]
HISTOGRAM = _NAMED["histogram"]
MEAN = _NAMED["mean"]
BUILTINS = tuple(_NAMED.values())


def expand_counts(counts: Sequence[int], start: int = 0) -> list[int]:
    """Multiset with value ``start + r`` repeated ``counts[r]`` times."""
    return [start + r for r, c in enumerate(counts) for _ in range(int(c))]
