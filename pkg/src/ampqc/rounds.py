"""Cat/Bell swapping rounds shared by both protocols.

In every round the third party (TP) prepares an ``(n+1)``-particle cat state
and ships particle ``i`` to participant ``i``.  Each participant swaps it with
the first particle of an encoded Bell state ``|phi(v, w)>``, keeps the Bell
result ``(lambda, gamma)``, and returns the other Bell particle.  TP then
measures the cat in the cat basis.

Two engines implement this:

* label engine -- exact label arithmetic from :mod:`ampqc.swap`; used for
  honest channels;
* dense engine -- state vectors from :mod:`ampqc.qudit`; needed when an
  eavesdropper collapses payload qudits, bounded by the dense cap.

Order of execution is fixed (rounds outer, participants inner) so a seeded
generator reproduces a run exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ampqc import channel
from ampqc.channel import EveModel, LabelQudit, RegisterQudit, SharedRegister, TransmissionReport
from ampqc.errors import CapabilityError, DomainError
from ampqc.qudit import (
    DENSE_CAP,
    BellLabel,
    CatLabel,
    apply_local,
    bell_state,
    cat_state,
    measure_cat_basis,
    measure_generalized_bell,
    weyl_operator,
)
from ampqc.swap import swap_apply
from ampqc.transcript import ParticipantRound, RoundRecord

ENGINES = ("auto", "label", "dense")


@dataclass
class RoundsResult:
    records: list[RoundRecord]
    reports: list[TransmissionReport]
    aborted: bool
    abort_reason: str | None = None


def label_round(
    d: int,
    tp_label: CatLabel,
    bells: Sequence[BellLabel],
    outcomes: Sequence[tuple[int, int]],
) -> tuple[tuple[ParticipantRound, ...], CatLabel]:
    """One round in the label engine with every Bell outcome fixed.

    Participant ``i`` (0-based) swaps cat slot ``i + 1``.  Returns the
    participants' records and the cat label TP will measure.
    """
    cat = tp_label
    parts = []
    for i, (bell, (v0, v1)) in enumerate(zip(bells, outcomes)):
        out = swap_apply(d, cat, bell, i + 1, v0, v1)
        cat = out.new_cat
        parts.append(ParticipantRound(bell.u, bell.v, v0, v1))
    return tuple(parts), cat


def announce(parts: Sequence[ParticipantRound], d: int) -> int:
    """Trusted aggregation of the Bell shift results; reveals only the sum mod ``d``."""
    return sum(p.gamma for p in parts) % d


def encoded_bell(d: int, label: BellLabel):
    """Dense ``|phi(v, w)>`` produced by the encoding unitary on ``|phi(0, 0)>``."""
    return apply_local(bell_state(d, (0, 0)), weyl_operator(d, label), 1)


def _dense_swap(register: SharedRegister, bell: BellLabel, slot: int, d: int, rng) -> BellLabel:
    n_plus_1 = register.state.num_subsystems
    joint = register.state.kron(encoded_bell(d, bell))
    result, post = measure_generalized_bell(joint, (n_plus_1, slot), rng)
    # post holds cat slots other than `slot` in order, then the returned Bell particle
    order = [p if p < slot else p - 1 for p in range(n_plus_1)]
    order[slot] = n_plus_1 - 1
    register.state = post.permute(order)
    return result


def choose_engine(engine: str, eve: EveModel, d: int, n: int) -> str:
    if engine not in ENGINES:
        raise DomainError(f"engine must be one of {ENGINES}, got {engine!r}")
    if engine == "auto":
        engine = "dense" if eve.active else "label"
    if engine == "label" and eve.active:
        raise DomainError("an active eavesdropper requires the dense engine")
    if engine == "dense" and d ** (n + 3) > DENSE_CAP:
        raise CapabilityError(
            f"dense simulation of n={n} participants at d={d} needs {d ** (n + 3)} amplitudes (cap {DENSE_CAP})"
        )
    return engine


def run_rounds(
    d: int,
    n: int,
    round_ids: Sequence[int],
    bells: Sequence[Sequence[BellLabel]],
    eve: EveModel,
    rng: np.random.Generator,
    *,
    engine: str = "auto",
    n_decoys: int | None = None,
    threshold: int = 0,
) -> RoundsResult:
    """Run every round; ``bells[k][i]`` is participant ``i``'s label in round ``round_ids[k]``."""
    engine = choose_engine(engine, eve, d, n)
    tp_labels = [CatLabel(rng.integers(0, d, size=n + 1)) for _ in round_ids]
    registers = [SharedRegister(cat_state(d, lab)) for lab in tp_labels] if engine == "dense" else None

    def payload(i: int, tag: str):
        if registers is None:
            return [LabelQudit((tag, r, i)) for r in round_ids]
        return [RegisterQudit(reg, i + 1) for reg in registers]

    reports: list[TransmissionReport] = []

    def session(direction: str, tag: str) -> str | None:
        failed = None
        for i in range(n):
            name = f"TP->P{i + 1}" if direction == "out" else f"P{i + 1}->TP"
            _, rep = channel.send(payload(i, tag), d, eve, rng, n_decoys=n_decoys, threshold=threshold, channel=name)
            reports.append(rep)
            if rep.aborted and failed is None:
                failed = f"eavesdropping detected on channel {name}"
        return failed

    failed = session("out", "cat")
    if failed:
        return RoundsResult([], reports, True, failed)

    per_round: list[tuple[tuple[ParticipantRound, ...], CatLabel | None]] = []
    for k, lab in enumerate(tp_labels):
        if registers is None:
            outcomes = [tuple(int(x) for x in rng.integers(0, d, size=2)) for _ in range(n)]
            per_round.append(label_round(d, lab, bells[k], outcomes))
        else:
            parts = []
            for i, bell in enumerate(bells[k]):
                lam, gamma = _dense_swap(registers[k], bell, i + 1, d, rng)
                parts.append(ParticipantRound(bell.u, bell.v, lam, gamma))
            per_round.append((tuple(parts), None))

    failed = session("back", "half")
    if failed:
        return RoundsResult([], reports, True, failed)

    records = []
    for k, (r, lab) in enumerate(zip(round_ids, tp_labels)):
        parts, measured = per_round[k]
        if measured is None:
            measured, _ = measure_cat_basis(registers[k].state, rng)
        records.append(RoundRecord(r, lab, parts, announce(parts, d), measured))
    return RoundsResult(records, reports, False)
