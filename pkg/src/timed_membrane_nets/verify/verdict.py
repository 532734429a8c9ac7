"""Verdicts of the bounded property checks."""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import Field, model_validator

from ..schemas import Document, PConfigurationDocument, PNStateDocument


class Counterexample(Document):
    """A replayable witness: where the two sides disagree.

    ``states`` lists the state(s) at ``depth`` the mismatch was found at,
    ``choice`` the step leading out of them when the mismatch is on an edge.
    ``missing`` holds items only the reference side has, ``extra`` items only
    the checked side has.

    ``side`` names the model the witness lives on: ``source`` is the model
    given to the check, ``target`` the one derived from it. Firing the
    choices of ``path`` from that model's initial state reaches ``state``;
    ``step`` is the choice taken from there when the mismatch is on an edge.
    """

    depth: int = Field(ge=0)
    reason: str
    states: list[str] = Field(default_factory=list)
    choice: Optional[str] = None
    missing: list[str] = Field(default_factory=list)
    extra: list[str] = Field(default_factory=list)
    side: Literal["source", "target"] = "source"
    path: list[dict[str, int]] = Field(default_factory=list)
    step: Optional[dict[str, int]] = None
    state: Optional[Union[PConfigurationDocument, PNStateDocument]] = None


class Verdict(Document):
    """Outcome of one bounded check."""

    check: str
    ok: bool
    depth: int = Field(ge=0)
    explored: int = Field(0, ge=0)
    counterexample: Optional[Counterexample] = None

    @model_validator(mode="after")
    def _witness_required(self) -> "Verdict":
        if not self.ok and self.counterexample is None:
            raise ValueError("A failed verdict needs a counterexample")
        if self.ok and self.counterexample is not None:
            raise ValueError("A passing verdict carries no counterexample")
        return self

    @classmethod
    def passed(cls, check: str, depth: int, explored: int) -> "Verdict":
        """Return a passing verdict."""
        return cls(check=check, ok=True, depth=depth, explored=explored)

    @classmethod
    def failed(
        cls, check: str, depth: int, explored: int, witness: Counterexample
    ) -> "Verdict":
        """Return a failing verdict with its witness."""
        return cls(
            check=check,
            ok=False,
            depth=depth,
            explored=explored,
            counterexample=witness,
        )
