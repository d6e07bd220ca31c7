"""Dense state vectors for multi-qudit systems.

Everything here is exact linear algebra on small Hilbert spaces and is used as
the ground-truth oracle for the label-level engine in :mod:`ampqc.swap`.

Conventions:
    * Basis ordering is row-major with subsystem 0 most significant, so the
      amplitude of ``|a, b, c>`` sits at flat index ``(a * d1 + b) * d2 + c``.
    * ``zeta(d) = exp(2 pi i / d)``.
    * A Bell label ``(u, v)`` names ``(1/sqrt d) sum_j zeta^(j u) |j, j+v>``.
    * A cat label ``(u0, u1, ..., um)`` names
      ``(1/sqrt d) sum_j zeta^(j u0) |j, j+u1, ..., j+um>``; ``u0`` is the
      phase mark and ``u1..um`` are the shift marks.

States are immutable; measurements return new values and draw randomness only
from the ``numpy.random.Generator`` they are handed.
"""
from __future__ import annotations

import enum
import functools
import itertools
import json
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from ampqc.errors import CapabilityError, DomainError

#: Largest total Hilbert dimension the dense engine will allocate.
DENSE_CAP = 10**6
#: Absolute amplitude tolerance used throughout.
ATOL = 1e-9
#: Largest singlet order; the state has kappa! terms over kappa**kappa amplitudes.
SINGLET_CAP = 6


def zeta(d: int) -> complex:
    """Primitive ``d``-th root of unity ``exp(2 pi i / d)``."""
    return complex(np.exp(2j * np.pi / d))


def check_dimension(d: int) -> int:
    if not isinstance(d, (int, np.integer)) or isinstance(d, bool) or d < 2:
        raise DomainError(f"qudit dimension must be an integer >= 2, got {d!r}")
    return int(d)


def _check_mark(value: int, d: int, what: str) -> int:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise DomainError(f"{what} must be an integer, got {value!r}")
    if not 0 <= value < d:
        raise DomainError(f"{what}={value} outside 0..{d - 1}")
    return int(value)


class BasisKind(enum.Enum):
    """The two mutually unbiased single-qudit bases used for decoys."""

    COMPUTATIONAL = "computational"
    FOURIER = "fourier"


class BellLabel(NamedTuple):
    """Marks ``(u, v)`` of the Bell state ``|phi(u, v)>``: ``u`` phase, ``v`` shift."""

    u: int
    v: int

    def validate(self, d: int) -> "BellLabel":
        return BellLabel(_check_mark(self.u, d, "Bell phase mark"), _check_mark(self.v, d, "Bell shift mark"))


@dataclass(frozen=True)
class CatLabel:
    """Marks ``(u0, u1, ..., um)`` of a cat state; ``u0`` is the phase mark."""

    marks: tuple[int, ...]

    def __init__(self, marks: Iterable[int]):
        marks = tuple(int(m) for m in marks)
        if len(marks) < 2:
            raise DomainError("a cat label needs a phase mark and at least one shift mark")
        object.__setattr__(self, "marks", marks)

    @property
    def m(self) -> int:
        """Number of shift marks (the state has ``m + 1`` particles)."""
        return len(self.marks) - 1

    @property
    def phase(self) -> int:
        return self.marks[0]

    def __getitem__(self, k: int) -> int:
        return self.marks[k]

    def __iter__(self):
        return iter(self.marks)

    def __len__(self) -> int:
        return len(self.marks)

    def validate(self, d: int) -> "CatLabel":
        for pos, mark in enumerate(self.marks):
            _check_mark(mark, d, f"cat mark u{pos}")
        return self

    def with_marks(self, updates: dict[int, int]) -> "CatLabel":
        marks = list(self.marks)
        for pos, value in updates.items():
            marks[pos] = value
        return CatLabel(marks)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalised pure state on subsystems of dimensions ``dims``."""

    dims: tuple[int, ...]
    amps: np.ndarray

    def __post_init__(self):
        dims = tuple(int(x) for x in self.dims)
        size = math.prod(dims)
        if size > DENSE_CAP:
            raise CapabilityError(
                f"dense state of dimension {size} exceeds cap {DENSE_CAP}; use the label engine"
            )
        amps = np.array(self.amps, dtype=complex).reshape(-1)
        if amps.size != size:
            raise DomainError(f"{amps.size} amplitudes do not match dims {dims}")
        norm = np.vdot(amps, amps).real
        if abs(norm - 1.0) > ATOL:
            raise DomainError(f"state is not normalised (norm^2 = {norm:.12g})")
        amps.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amps", amps)

    @classmethod
    def normalized(cls, dims: Sequence[int], amps) -> "StateVector":
        amps = np.asarray(amps, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise DomainError("cannot normalise the zero vector")
        return cls(tuple(dims), amps / norm)

    @property
    def num_subsystems(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return self.amps.size

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per subsystem."""
        return self.amps.reshape(self.dims) if self.dims else self.amps.reshape(())

    def inner(self, other: "StateVector") -> complex:
        """``<self|other>``."""
        if self.dims != other.dims:
            raise DomainError(f"dims differ: {self.dims} vs {other.dims}")
        return complex(np.vdot(self.amps, other.amps))

    def fidelity(self, other: "StateVector") -> float:
        return abs(self.inner(other)) ** 2

    def allclose(self, other: "StateVector", atol: float = ATOL) -> bool:
        return self.dims == other.dims and bool(np.allclose(self.amps, other.amps, atol=atol, rtol=0))

    def kron(self, other: "StateVector") -> "StateVector":
        if math.prod(self.dims + other.dims) > DENSE_CAP:
            raise CapabilityError("tensor product exceeds the dense cap")
        return StateVector(self.dims + other.dims, np.kron(self.amps, other.amps))

    def permute(self, order: Sequence[int]) -> "StateVector":
        """Reorder subsystems; new subsystem ``p`` is old subsystem ``order[p]``."""
        order = tuple(order)
        if sorted(order) != list(range(self.num_subsystems)):
            raise DomainError(f"{order} is not a permutation of the subsystems")
        t = np.transpose(self.tensor(), order)
        return StateVector(tuple(self.dims[i] for i in order), t.reshape(-1))

    def to_text(self) -> str:
        """Serialise as JSON: ``{"dims": [...], "amps": [[re, im], ...]}``."""
        pairs = [[float(a.real), float(a.imag)] for a in self.amps]
        return json.dumps({"dims": list(self.dims), "amps": pairs})

    @classmethod
    def from_text(cls, text: str) -> "StateVector":
        payload = json.loads(text)
        amps = [complex(re, im) for re, im in payload["amps"]]
        return cls(tuple(payload["dims"]), np.array(amps, dtype=complex))

    def __repr__(self) -> str:
        return f"StateVector(dims={self.dims})"


def tensor_all(states: Iterable[StateVector]) -> StateVector:
    states = list(states)
    out = states[0]
    for s in states[1:]:
        out = out.kron(s)
    return out


# -- named states and operators ----------------------------------------------


def basis_state(d: int, k: int) -> StateVector:
    d = check_dimension(d)
    k = _check_mark(k, d, "basis index")
    amps = np.zeros(d, dtype=complex)
    amps[k] = 1.0
    return StateVector((d,), amps)


def fourier_matrix(d: int) -> np.ndarray:
    """Unitary whose column ``k`` is ``F|k> = (1/sqrt d) sum_r zeta^(k r) |r>``.

    The returned array is cached and read-only.
    """
    return _fourier_matrix(check_dimension(d))


@functools.lru_cache(maxsize=None)
def _fourier_matrix(d: int) -> np.ndarray:
    r = np.arange(d)
    out = np.exp(2j * np.pi * np.outer(r, r) / d) / np.sqrt(d)
    out.setflags(write=False)
    return out


def fourier_state(d: int, k: int) -> StateVector:
    d = check_dimension(d)
    k = _check_mark(k, d, "Fourier index")
    return StateVector((d,), fourier_matrix(d)[:, k])


def basis_vector(d: int, basis: BasisKind, value: int) -> StateVector:
    """``|value>`` in the computational basis or ``F|value>`` in the Fourier basis."""
    if basis is BasisKind.COMPUTATIONAL:
        return basis_state(d, value)
    return fourier_state(d, value)


def bell_state(d: int, label: BellLabel | tuple[int, int]) -> StateVector:
    d = check_dimension(d)
    u, v = BellLabel(*label).validate(d)
    amps = np.zeros((d, d), dtype=complex)
    j = np.arange(d)
    amps[j, (j + v) % d] = np.exp(2j * np.pi * j * u / d) / np.sqrt(d)
    return StateVector((d, d), amps)


def weyl_operator(d: int, label: BellLabel | tuple[int, int]) -> np.ndarray:
    """Encoding unitary ``U(u, v) = sum_j zeta^(j u) |j+v><j|``.

    Acting on the second particle of ``|phi(0, 0)>`` it produces ``|phi(u, v)>``.
    There is no ``1/sqrt d`` prefactor: with one the map would not be unitary.
    """
    d = check_dimension(d)
    u, v = BellLabel(*label).validate(d)
    op = np.zeros((d, d), dtype=complex)
    j = np.arange(d)
    op[(j + v) % d, j] = np.exp(2j * np.pi * j * u / d)
    return op


def cat_state(d: int, label: CatLabel | Sequence[int]) -> StateVector:
    d = check_dimension(d)
    label = label if isinstance(label, CatLabel) else CatLabel(label)
    label.validate(d)
    dims = (d,) * len(label)
    if math.prod(dims) > DENSE_CAP:
        raise CapabilityError(f"cat state on {len(label)} qudits of dimension {d} exceeds dense cap")
    amps = np.zeros(dims, dtype=complex)
    j = np.arange(d)
    index = (j,) + tuple((j + s) % d for s in label.marks[1:])
    amps[index] = np.exp(2j * np.pi * j * label.phase / d) / np.sqrt(d)
    return StateVector(dims, amps)


def inversions(perm: Sequence[int]) -> int:
    """Number of out-of-order pairs in ``perm``."""
    return sum(1 for a, b in itertools.combinations(perm, 2) if a > b)


def singlet_state(kappa: int) -> StateVector:
    """Totally antisymmetric ``kappa``-particle ``kappa``-level state."""
    if not isinstance(kappa, (int, np.integer)) or kappa < 2:
        raise DomainError(f"singlet order must be an integer >= 2, got {kappa!r}")
    if kappa > SINGLET_CAP:
        raise CapabilityError(f"singlet order {kappa} above cap {SINGLET_CAP}")
    dims = (kappa,) * kappa
    amps = np.zeros(dims, dtype=complex)
    scale = 1.0 / math.sqrt(math.factorial(kappa))
    for perm in itertools.permutations(range(kappa)):
        amps[perm] = (-1) ** inversions(perm) * scale
    return StateVector(dims, amps)


def apply_local(state: StateVector, op: np.ndarray, subsystem: int) -> StateVector:
    """Apply a single-qudit operator to one subsystem."""
    d = state.dims[subsystem]
    if op.shape != (d, d):
        raise DomainError(f"operator shape {op.shape} does not fit subsystem of dimension {d}")
    t = np.tensordot(op, state.tensor(), axes=([1], [subsystem]))
    t = np.moveaxis(t, 0, subsystem)
    return StateVector(state.dims, t.reshape(-1))


def insert_subsystem(state: StateVector, single: StateVector, position: int) -> StateVector:
    """Tensor ``single`` into ``state`` so that it becomes subsystem ``position``."""
    joined = state.kron(single)
    n = state.num_subsystems
    order = list(range(n))
    order.insert(position, n)
    return joined.permute(order)


# -- measurement ---------------------------------------------------------------


@dataclass(frozen=True)
class MeasurementOutcome:
    values: tuple[int, ...]
    post_state: StateVector
    probability: float


def _sample_index(probs: np.ndarray, rng: np.random.Generator) -> int:
    cdf = np.cumsum(probs)
    idx = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
    idx = min(idx, probs.size - 1)
    # never land on a (numerically) empty branch
    while probs[idx] <= 0.0:
        idx -= 1
    return idx


def _check_axes(state: StateVector, axes: tuple[int, ...]) -> None:
    if len(set(axes)) != len(axes) or any(not 0 <= a < state.num_subsystems for a in axes):
        raise DomainError(f"invalid subsystem indices {axes} for {state.num_subsystems} subsystems")


def _project(state: StateVector, axes: Sequence[int], basis: np.ndarray | None):
    """Expand ``state`` in ``basis`` (columns; ``None`` is computational) over ``axes``.

    Returns ``(coeffs, rest_dims)`` where ``coeffs[k]`` is the unnormalised
    post-measurement vector on the remaining subsystems for outcome ``k``.
    """
    axes = tuple(axes)
    _check_axes(state, axes)
    rest = [i for i in range(state.num_subsystems) if i not in axes]
    t = np.transpose(state.tensor(), axes + tuple(rest))
    block = math.prod(state.dims[a] for a in axes)
    psi = t.reshape(block, -1)
    coeffs = psi if basis is None else basis.conj().T @ psi
    return coeffs, tuple(state.dims[i] for i in rest)


def _collapse(coeffs: np.ndarray, rest_dims, rng) -> tuple[int, StateVector, float]:
    probs = np.sum(np.abs(coeffs) ** 2, axis=1)
    probs[probs < 1e-15] = 0.0
    idx = _sample_index(probs, rng)
    p = float(probs[idx] / probs.sum())
    post = StateVector.normalized(rest_dims, coeffs[idx])
    return idx, post, p


def measure_computational(
    state: StateVector, subsystems: Sequence[int], rng: np.random.Generator
) -> MeasurementOutcome:
    """Measure ``subsystems`` in the computational basis with Born-rule sampling."""
    subsystems = tuple(subsystems)
    _check_axes(state, subsystems)
    coeffs, rest = _project(state, subsystems, None)
    idx, post, p = _collapse(coeffs, rest, rng)
    values = np.unravel_index(idx, tuple(state.dims[a] for a in subsystems)) if subsystems else ()
    return MeasurementOutcome(tuple(int(v) for v in values), post, p)


def fourier_basis_measure(
    state: StateVector, subsystem: int, rng: np.random.Generator
) -> MeasurementOutcome:
    """Measure one subsystem in the basis ``{F|k>}``; the outcome is ``k``."""
    _check_axes(state, (subsystem,))
    d = state.dims[subsystem]
    coeffs, rest = _project(state, (subsystem,), fourier_matrix(d))
    idx, post, p = _collapse(coeffs, rest, rng)
    return MeasurementOutcome((idx,), post, p)


def measure_in_basis(
    state: StateVector, subsystem: int, basis: BasisKind, rng: np.random.Generator
) -> MeasurementOutcome:
    if basis is BasisKind.COMPUTATIONAL:
        return measure_computational(state, (subsystem,), rng)
    return fourier_basis_measure(state, subsystem, rng)


def bell_basis_matrix(d: int) -> np.ndarray:
    """Columns are ``|phi(u, v)>`` with column index ``u * d + v`` (cached, read-only)."""
    return _bell_basis_matrix(check_dimension(d))


@functools.lru_cache(maxsize=None)
def _bell_basis_matrix(d: int) -> np.ndarray:
    out = np.column_stack([bell_state(d, (u, v)).amps for u in range(d) for v in range(d)])
    out.setflags(write=False)
    return out


def measure_generalized_bell(
    state: StateVector, pair: tuple[int, int], rng: np.random.Generator
) -> tuple[BellLabel, StateVector]:
    """Project subsystems ``pair = (a, b)`` onto ``{|phi(u, v)>}``.

    Subsystem ``a`` plays the first particle of the Bell state and ``b`` the
    second.  Returns the sampled label and the collapsed state on the remaining
    subsystems, which keep their original relative order.
    """
    a, b = pair
    _check_axes(state, (a, b))
    if state.dims[a] != state.dims[b]:
        raise DomainError(f"Bell measurement needs equal dimensions, got {state.dims[a]} and {state.dims[b]}")
    d = state.dims[a]
    coeffs, rest = _project(state, (a, b), bell_basis_matrix(d))
    idx, post, _ = _collapse(coeffs, rest, rng)
    return BellLabel(*divmod(idx, d)), post


def cat_coefficients(state: StateVector) -> np.ndarray:
    """Overlaps ``<phi(u0, ..., um)|state>`` as an array indexed by the label.

    Uses a gather along the diagonal followed by an FFT over the phase mark, so
    the cost is linear in the state size.
    """
    d = state.dims[0]
    if any(x != d for x in state.dims) or state.num_subsystems < 2:
        raise DomainError(f"cat-basis measurement needs >= 2 equal-dimension qudits, got {state.dims}")
    m = state.num_subsystems - 1
    t = state.tensor()
    j = np.arange(d).reshape((d,) + (1,) * m)
    shifts = np.indices((d,) * m)
    index = (np.broadcast_to(j, (d,) + (d,) * m),) + tuple((j + s) % d for s in shifts)
    gathered = t[index]
    # sum_j zeta^(-j u0) g_j is exactly numpy's forward FFT
    return np.fft.fft(gathered, axis=0) / np.sqrt(d)


def measure_cat_basis(state: StateVector, rng: np.random.Generator) -> tuple[CatLabel, float]:
    """Measure every subsystem jointly in the cat basis; returns label and probability."""
    coeffs = cat_coefficients(state)
    probs = (np.abs(coeffs) ** 2).reshape(-1)
    probs[probs < 1e-15] = 0.0
    idx = _sample_index(probs, rng)
    label = CatLabel(int(x) for x in np.unravel_index(idx, coeffs.shape))
    return label, float(probs[idx] / probs.sum())
