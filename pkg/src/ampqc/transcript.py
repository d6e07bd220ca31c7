"""Run transcripts and their JSON serialisation.

The JSON layout is documented in ``docs/transcript_schema.md``.  Field order
is fixed so that identical runs produce byte-identical files.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from ampqc.channel import TransmissionReport
from ampqc.qudit import CatLabel

SCHEMA_VERSION = "1.0"


@dataclass(frozen=True)
class ParticipantRound:
    """One participant's private view of one round: Bell label and Bell result."""

    v: int
    w: int
    lam: int
    gamma: int


@dataclass(frozen=True)
class RoundRecord:
    r: int
    tp_label: CatLabel
    participants: tuple[ParticipantRound, ...]
    announcement: int
    measured_label: CatLabel
    recovered: int | None = None

    def tp_view(self) -> tuple:
        """What the third party sees: its own label, its measurement, the announcement."""
        return (self.tp_label.marks, self.measured_label.marks, self.announcement)

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "tp_label": list(self.tp_label.marks),
            "participants": [
                {"v": p.v, "w": p.w, "lambda": p.lam, "gamma": p.gamma} for p in self.participants
            ],
            "announcement": self.announcement,
            "measured_label": list(self.measured_label.marks),
            "recovered": self.recovered,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RoundRecord":
        return cls(
            r=data["r"],
            tp_label=CatLabel(data["tp_label"]),
            participants=tuple(
                ParticipantRound(p["v"], p["w"], p["lambda"], p["gamma"]) for p in data["participants"]
            ),
            announcement=data["announcement"],
            measured_label=CatLabel(data["measured_label"]),
            recovered=data["recovered"],
        )


@dataclass
class Transcript:
    """Complete record of one protocol run.

    This is the simulator's audit log and includes participants' private
    values.  Use :meth:`tp_view` for what the third party actually observes.
    """

    protocol: str
    config: dict
    rounds: list[RoundRecord] = field(default_factory=list)
    channel_reports: list[TransmissionReport] = field(default_factory=list)
    aborted: bool = False
    abort_reason: str | None = None
    result: dict = field(default_factory=dict)
    singlet: dict | None = None
    slots: list[int] | None = None

    def tp_view(self) -> dict:
        view = {
            "rounds": [rec.tp_view() for rec in self.rounds],
            "channel_reports": [rep.to_dict() for rep in self.channel_reports],
        }
        if self.singlet is not None:
            view["singlet_tests"] = self.singlet.get("test_outcomes")
        return view

    def to_dict(self) -> dict[str, Any]:
        out = {
            "schema_version": SCHEMA_VERSION,
            "protocol": self.protocol,
            "config": self.config,
            "aborted": self.aborted,
            "abort_reason": self.abort_reason,
            "channel_reports": [rep.to_dict() for rep in self.channel_reports],
        }
        if self.singlet is not None:
            out["singlet"] = self.singlet
        if self.slots is not None:
            out["slots"] = self.slots
        out["rounds"] = [rec.to_dict() for rec in self.rounds]
        out["result"] = self.result
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "Transcript":
        return cls(
            protocol=data["protocol"],
            config=data["config"],
            rounds=[RoundRecord.from_dict(r) for r in data["rounds"]],
            channel_reports=[
                TransmissionReport(c["decoys_checked"], c["mismatches"], c["aborted"], c["channel"])
                for c in data["channel_reports"]
            ],
            aborted=data["aborted"],
            abort_reason=data["abort_reason"],
            result=data["result"],
            singlet=data.get("singlet"),
            slots=data.get("slots"),
        )

    @classmethod
    def from_json(cls, text: str) -> "Transcript":
        return cls.from_dict(json.loads(text))
