"""Quantum channel with decoy photons and intercept-resend eavesdroppers.

A transmitted sequence is a list of items:

* :class:`~ampqc.qudit.StateVector` -- a standalone single qudit (decoys);
* :class:`RegisterQudit` -- one subsystem of a dense, possibly entangled
  state held in a :class:`SharedRegister`;
* :class:`LabelQudit` -- an opaque placeholder used by the label engine.  It
  can travel through an honest channel but cannot be attacked, since its
  global state is only known symbolically.

Eve cannot tell decoys from payload and attacks every item.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from ampqc.errors import DomainError, ProtocolError
from ampqc.qudit import (
    BasisKind,
    StateVector,
    basis_vector,
    check_dimension,
    insert_subsystem,
    measure_in_basis,
)


class EveKind(enum.Enum):
    NONE = "none"
    INTERCEPT_RESEND = "intercept"
    FIXED_BASIS = "fixed"


@dataclass(frozen=True)
class EveModel:
    """Adversary on the quantum channel.

    ``INTERCEPT_RESEND`` picks a basis uniformly per qudit; ``FIXED_BASIS``
    always uses ``basis``.  Either way the qudit is measured and re-prepared
    in the basis state matching the outcome.
    """

    kind: EveKind = EveKind.NONE
    basis: BasisKind | None = None

    def __post_init__(self):
        if (self.kind is EveKind.FIXED_BASIS) != (self.basis is not None):
            raise DomainError("a basis is required exactly for the fixed-basis model")

    @classmethod
    def none(cls) -> "EveModel":
        return cls()

    @classmethod
    def intercept_resend(cls) -> "EveModel":
        return cls(EveKind.INTERCEPT_RESEND)

    @classmethod
    def fixed_basis(cls, basis: BasisKind) -> "EveModel":
        return cls(EveKind.FIXED_BASIS, basis)

    @classmethod
    def parse(cls, text: str) -> "EveModel":
        """``none`` | ``intercept`` | ``fixed-computational`` | ``fixed-fourier``."""
        text = text.strip().lower()
        if text == "none":
            return cls.none()
        if text in ("intercept", "intercept-resend"):
            return cls.intercept_resend()
        if text.startswith("fixed-"):
            try:
                return cls.fixed_basis(BasisKind(text[len("fixed-"):]))
            except ValueError:
                pass
        raise DomainError(f"unknown eavesdropper model {text!r}")

    @property
    def active(self) -> bool:
        return self.kind is not EveKind.NONE

    def choose_basis(self, rng: np.random.Generator) -> BasisKind:
        if self.kind is EveKind.FIXED_BASIS:
            return self.basis
        return BasisKind.COMPUTATIONAL if rng.random() < 0.5 else BasisKind.FOURIER

    def describe(self) -> str:
        if self.kind is EveKind.FIXED_BASIS:
            return f"fixed-{self.basis.value}"
        return self.kind.value


class SharedRegister:
    """Mutable holder of a dense state whose qudits travel separately.

    Every :class:`RegisterQudit` pointing here sees the same global state, so
    an interception on one qudit collapses its entangled partners.
    """

    def __init__(self, state: StateVector):
        self.state = state

    def intercept_resend(self, subsystem: int, basis: BasisKind, rng: np.random.Generator) -> int:
        d = self.state.dims[subsystem]
        out = measure_in_basis(self.state, subsystem, basis, rng)
        k = out.values[0]
        self.state = insert_subsystem(out.post_state, basis_vector(d, basis, k), subsystem)
        return k


@dataclass(frozen=True, eq=False)
class RegisterQudit:
    register: SharedRegister
    subsystem: int


@dataclass(frozen=True)
class LabelQudit:
    tag: tuple


Item = Union[StateVector, RegisterQudit, LabelQudit]


@dataclass(frozen=True)
class DecoyPhoton:
    basis: BasisKind
    value: int
    position: int

    def prepare(self, d: int) -> StateVector:
        return basis_vector(d, self.basis, self.value)


@dataclass(frozen=True)
class TransmissionReport:
    decoys_checked: int
    mismatches: int
    aborted: bool
    channel: str = ""

    def to_dict(self) -> dict:
        return {
            "channel": self.channel,
            "decoys_checked": self.decoys_checked,
            "mismatches": self.mismatches,
            "aborted": self.aborted,
        }


def insert_decoys(
    payload: Sequence[Item], n_decoys: int, d: int, rng: np.random.Generator
) -> tuple[list[Item], list[DecoyPhoton]]:
    """Scatter ``n_decoys`` random decoys among ``payload`` at random positions.

    The returned records are the sender's private bookkeeping; positions refer
    to the augmented sequence and are sorted.
    """
    d = check_dimension(d)
    if n_decoys < 0:
        raise DomainError("number of decoys must be non-negative")
    total = len(payload) + n_decoys
    positions = np.sort(rng.choice(total, size=n_decoys, replace=False)) if n_decoys else np.array([], int)
    records = []
    for pos in positions:
        basis = BasisKind.COMPUTATIONAL if rng.random() < 0.5 else BasisKind.FOURIER
        records.append(DecoyPhoton(basis, int(rng.integers(d)), int(pos)))
    by_pos = {rec.position: rec for rec in records}
    it = iter(payload)
    out: list[Item] = [by_pos[i].prepare(d) if i in by_pos else next(it) for i in range(total)]
    return out, records


def transmit(sequence: Sequence[Item], eve: EveModel, rng: np.random.Generator) -> list[Item]:
    """Send ``sequence`` through the channel, letting ``eve`` act on every item."""
    if not eve.active:
        return list(sequence)
    received: list[Item] = []
    for item in sequence:
        basis = eve.choose_basis(rng)
        if isinstance(item, StateVector):
            out = measure_in_basis(item, 0, basis, rng)
            received.append(basis_vector(item.dims[0], basis, out.values[0]))
        elif isinstance(item, RegisterQudit):
            item.register.intercept_resend(item.subsystem, basis, rng)
            received.append(item)
        else:
            raise ProtocolError("label-engine payload cannot be intercepted; run the protocol in dense mode")
    return received


def check_decoys(
    received: Sequence[Item],
    records: Sequence[DecoyPhoton],
    rng: np.random.Generator,
    threshold: int = 0,
    channel: str = "",
) -> TransmissionReport:
    """Measure every decoy in its preparation basis and count mismatches.

    The channel is aborted iff the mismatch count exceeds ``threshold``.
    """
    mismatches = 0
    for rec in records:
        if rec.position >= len(received):
            raise ProtocolError(f"decoy position {rec.position} beyond received length {len(received)}")
        item = received[rec.position]
        if not isinstance(item, StateVector) or item.num_subsystems != 1:
            raise ProtocolError(f"item at decoy position {rec.position} is not a single qudit")
        if measure_in_basis(item, 0, rec.basis, rng).values[0] != rec.value:
            mismatches += 1
    return TransmissionReport(len(records), mismatches, mismatches > threshold, channel)


def remove_decoys(received: Sequence[Item], records: Sequence[DecoyPhoton]) -> list[Item]:
    """Drop decoy positions, restoring the payload in its original order."""
    skip = {rec.position for rec in records}
    return [item for i, item in enumerate(received) if i not in skip]


def send(
    payload: Sequence[Item],
    d: int,
    eve: EveModel,
    rng: np.random.Generator,
    *,
    n_decoys: int | None = None,
    threshold: int = 0,
    channel: str = "",
) -> tuple[list[Item], TransmissionReport]:
    """Full channel session: insert decoys, transmit, check, strip decoys.

    ``n_decoys`` defaults to the payload length.
    """
    n_decoys = len(payload) if n_decoys is None else n_decoys
    sequence, records = insert_decoys(payload, n_decoys, d, rng)
    received = transmit(sequence, eve, rng)
    report = check_decoys(received, records, rng, threshold, channel)
    return remove_decoys(received, records), report
