"""Define Pydantic models for JSON documents and parameter bundles."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .const import DEFAULT_STATE_BUDGET

CountMap = dict[str, int]


def _positive_counts(value: CountMap) -> CountMap:
    for name, count in value.items():
        if count < 0:
            raise ValueError(f"Negative multiplicity {count} for '{name}'")
    return {name: count for name, count in value.items() if count}


def _delay(value: int) -> int:
    if value < 0:
        raise ValueError(f"Negative remaining delay {value}")
    return value


class Document(BaseModel):
    """Base for documents: unknown fields are rejected."""

    model_config = ConfigDict(extra="forbid")


class ExplorationLimits(Document):
    """Depth and node budget shared by run and verify."""

    depth: int = Field(3, ge=0, le=10_000)
    budget: int = Field(DEFAULT_STATE_BUDGET, ge=1)


class MessageDocument(Document):
    """Objects produced towards one target."""

    target: Literal["here", "out", "in"]
    child: Optional[int] = None
    objects: CountMap

    @field_validator("objects")
    def _check_objects(cls, value: CountMap) -> CountMap:
        return _positive_counts(value)


class RuleDocument(Document):
    """One evolution rule."""

    name: str
    home: int
    lhs: CountMap
    rhs: list[MessageDocument] = Field(default_factory=list)
    delay: int = Field(0, ge=0)

    @field_validator("lhs")
    def _check_lhs(cls, value: CountMap) -> CountMap:
        return _positive_counts(value)


class PSystemDocument(Document):
    """A timed membrane system; ``structure`` maps label to parent label."""

    kind: Literal["psystem"] = "psystem"
    alphabet: list[str]
    structure: dict[int, Optional[int]]
    initial: dict[int, CountMap] = Field(default_factory=dict)
    rules: list[RuleDocument] = Field(default_factory=list)


class PetriNetDocument(Document):
    """A timed Petri net with localities, keyed by names."""

    kind: Literal["petri"] = "petri"
    places: list[str]
    transitions: list[str] = Field(default_factory=list)
    weights_in: dict[str, CountMap] = Field(default_factory=dict)
    weights_out: dict[str, CountMap] = Field(default_factory=dict)
    locality: dict[str, int] = Field(default_factory=dict)
    delay: dict[str, int] = Field(default_factory=dict)
    initial_marking: CountMap = Field(default_factory=dict)

    @field_validator("weights_in", "weights_out")
    def _check_weights(cls, value: dict[str, CountMap]) -> dict[str, CountMap]:
        return {name: _positive_counts(column) for name, column in value.items()}

    @field_validator("initial_marking")
    def _check_marking(cls, value: CountMap) -> CountMap:
        return _positive_counts(value)

    @field_validator("locality", "delay")
    def _non_negative(cls, value: dict[str, int]) -> dict[str, int]:
        for name, number in value.items():
            if number < 0:
                raise ValueError(f"Negative value {number} for '{name}'")
        return value


class PConfigurationDocument(Document):
    """Membrane contents, pending deliveries (label -> delay -> objects)."""

    contents: dict[int, CountMap]
    pending: dict[int, dict[int, CountMap]] = Field(default_factory=dict)
    clock: int = Field(0, ge=0)
    environment: CountMap = Field(default_factory=dict)

    @field_validator("contents")
    def _check_contents(cls, value: dict[int, CountMap]) -> dict[int, CountMap]:
        return {
            label: _positive_counts(objects) for label, objects in value.items()
        }

    @field_validator("pending")
    def _check_pending(
        cls, value: dict[int, dict[int, CountMap]]
    ) -> dict[int, dict[int, CountMap]]:
        return {
            label: {
                _delay(delay): _positive_counts(objects)
                for delay, objects in slots.items()
            }
            for label, slots in value.items()
        }

    @field_validator("environment")
    def _check_environment(cls, value: CountMap) -> CountMap:
        return _positive_counts(value)


class PNStateDocument(Document):
    """Marking, tokens in transit (place -> delay -> count) and ``gc``."""

    marking: CountMap
    pending: dict[str, dict[int, int]] = Field(default_factory=dict)
    gc: int = Field(0, ge=0)

    @field_validator("marking")
    def _check_marking(cls, value: CountMap) -> CountMap:
        return _positive_counts(value)

    @field_validator("pending")
    def _check_pending(
        cls, value: dict[str, dict[int, int]]
    ) -> dict[str, dict[int, int]]:
        checked: dict[str, dict[int, int]] = {}
        for name, slots in value.items():
            for delay, count in slots.items():
                _delay(delay)
                if count < 0:
                    raise ValueError(f"Negative count {count} for '{name}'")
                if count:
                    checked.setdefault(name, {})[delay] = count
        return checked


class StagedSymbolDocument(Document):
    """A staged copy of an object with its remaining stage."""

    name: str
    base: str
    stage: int


class ChainPlaceDocument(Document):
    """A delay-chain place for one output place of one transition."""

    name: str
    place: str
    transition: str
    stage: int


class ChainTransitionDocument(Document):
    """A delay-chain transition shared by all outputs of a transition."""

    name: str
    transition: str
    stage: int


class SizesDocument(Document):
    """Element counts before and after a translation."""

    source: dict[str, int]
    target: dict[str, int]


class DetimedPSystemMap(Document):
    """Correspondence of a detimed membrane system."""

    direction: Literal["tps->ps"] = "tps->ps"
    staged: list[StagedSymbolDocument]
    stagers: list[str]
    sizes: SizesDocument


class DetimedNetMap(Document):
    """Correspondence of a detimed Petri net."""

    direction: Literal["tpn->pn"] = "tpn->pn"
    chain_places: list[ChainPlaceDocument]
    chain_transitions: list[ChainTransitionDocument]
    sizes: SizesDocument


class PlaceOrigin(Document):
    """The (object, membrane) pair behind a place."""

    place: str
    symbol: str
    membrane: int


class TransitionOrigin(Document):
    """The rule behind a transition."""

    transition: str
    rule: str
    membrane: int


class TranslationMap(Document):
    """Correspondence of a membrane system and its Petri net."""

    direction: Literal["tps->tpn"] = "tps->tpn"
    places: list[PlaceOrigin]
    transitions: list[TransitionOrigin]


class StepRecord(Document):
    """One step of a trace: the choice taken and the state reached."""

    choice: str
    state: str


class RunReport(Document):
    """Replayable summary of a run.

    ``layers`` is filled for exhaustive runs, ``trace`` otherwise.
    """

    model_hash: str
    kind: Literal["psystem", "petri"]
    policy: str
    steps: int
    initial: str
    trace: list[StepRecord] = Field(default_factory=list)
    halted: Optional[bool] = None
    layers: list[list[str]] = Field(default_factory=list)
    final: Optional[dict] = None
    elapsed_ms: Optional[float] = None
