"""Questionnaire scoring: Big Five profiles and motivation samples.

Implements reverse-keyed Likert scoring for the bundled instruments
(ten-item Big Five, seven-item interest/enjoyment, nineteen-item work
motivation scale), trait standardization against a norm table, and
normalization of motivation scores to the unit interval.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Final, Mapping, NamedTuple, Sequence

from ._data import load_bundled, load_file
from .errors import (
    ConfigError,
    DuplicateItemError,
    MissingItemError,
    OutOfScaleError,
    UnknownInstrumentError,
    ValidationFailureError,
    ZeroVarianceError,
)

TRAITS: Final[tuple[str, ...]] = (
    "openness",
    "conscientiousness",
    "extraversion",
    "agreeableness",
    "neuroticism",
)

BFI10: Final = "bfi10"
IMI_IE: Final = "imi_ie"
MWMS: Final = "mwms"


class TraitVector(NamedTuple):
    """Five trait values in canonical order (raw scores or z-scores)."""

    openness: float
    conscientiousness: float
    extraversion: float
    agreeableness: float
    neuroticism: float


@dataclass(frozen=True)
class ItemResponse:
    """One answered questionnaire item."""

    item_id: int
    value: int


@dataclass(frozen=True)
class InstrumentItem:
    """Definition of one questionnaire item."""

    item_id: int
    scale: str
    reversed: bool
    text: str


@dataclass(frozen=True)
class InstrumentDefinition:
    """A scored instrument: its items, scale bounds, and subscale layout."""

    kind: str
    title: str
    scale_min: int
    scale_max: int
    items: tuple[InstrumentItem, ...]
    subscale_order: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.scale_min >= self.scale_max:
            raise ConfigError(f"{self.kind}: scale_min must be below scale_max")
        ids = [i.item_id for i in self.items]
        if len(set(ids)) != len(ids):
            raise ConfigError(f"{self.kind}: duplicate item ids in definition")

    def with_scale(self, scale_min: int, scale_max: int) -> "InstrumentDefinition":
        """Derive a variant administered on different scale bounds."""
        return InstrumentDefinition(
            kind=self.kind,
            title=self.title,
            scale_min=scale_min,
            scale_max=scale_max,
            items=self.items,
            subscale_order=self.subscale_order,
        )


@dataclass(frozen=True)
class TraitNorms:
    """Reference means and standard deviations for z-scoring traits."""

    name: str
    sample_size: int
    means: TraitVector
    sds: TraitVector

    def __post_init__(self) -> None:
        for trait, sd in zip(TRAITS, self.sds):
            if sd <= 0:
                raise ZeroVarianceError(f"norm set {self.name!r}: sd for {trait} must be positive")


@dataclass(frozen=True)
class PersonalityProfile:
    """Scored Big Five profile on the instrument's raw scale."""

    openness: float
    conscientiousness: float
    extraversion: float
    agreeableness: float
    neuroticism: float
    source: str = BFI10
    assessed_at: str = ""

    def traits(self) -> TraitVector:
        return TraitVector(
            self.openness,
            self.conscientiousness,
            self.extraversion,
            self.agreeableness,
            self.neuroticism,
        )


@dataclass(frozen=True)
class MotivationSample:
    """One normalized motivation measurement tied to a member and session."""

    member_id: str
    session_id: str
    role_context: str
    instrument: str
    raw_score: float
    normalized: float
    taken_at: str
    subscales: Mapping[str, float] = field(default_factory=dict)


def reverse_value(value: int, scale_min: int, scale_max: int) -> int:
    """Reverse-key a Likert response: low answers count high and vice versa."""
    return scale_min + scale_max - value


def normalize_motivation(raw: float, scale_min: float, scale_max: float) -> float:
    """Map a raw scale score onto [0, 1] for cross-instrument comparison."""
    if scale_max <= scale_min:
        raise ConfigError("scale_max must exceed scale_min")
    return (raw - scale_min) / (scale_max - scale_min)


def load_instruments(path: str | None = None) -> dict[str, InstrumentDefinition]:
    """Load instrument definitions from the bundled (or an external) file."""
    payload = load_bundled("instruments.json") if path is None else load_file(path)
    out: dict[str, InstrumentDefinition] = {}
    for kind, raw in payload["instruments"].items():
        items = tuple(
            InstrumentItem(
                item_id=int(i["id"]),
                scale=str(i["scale"]),
                reversed=bool(i["reversed"]),
                text=str(i["text"]),
            )
            for i in raw["items"]
        )
        out[kind] = InstrumentDefinition(
            kind=str(raw["kind"]),
            title=str(raw["title"]),
            scale_min=int(raw["scale_min"]),
            scale_max=int(raw["scale_max"]),
            items=items,
            subscale_order=tuple(raw.get("subscale_order", ())),
        )
    return out


def load_norms(path: str | None = None, set_name: str | None = None) -> TraitNorms:
    """Load a named norm table (defaults to the bundled reference cohort)."""
    payload = load_bundled("trait_norms.json") if path is None else load_file(path)
    name = set_name or payload["default_set"]
    try:
        raw = payload["sets"][name]
    except KeyError:
        raise ConfigError(f"norm set {name!r} not found") from None
    means = TraitVector(*(float(raw["traits"][t]["mean"]) for t in TRAITS))
    sds = TraitVector(*(float(raw["traits"][t]["sd"]) for t in TRAITS))
    return TraitNorms(name=name, sample_size=int(raw["sample_size"]), means=means, sds=sds)


def _keyed_values(
    responses: Sequence[ItemResponse], definition: InstrumentDefinition
) -> dict[int, int]:
    """Validate responses against the definition and apply reverse keying."""
    known = {item.item_id: item for item in definition.items}
    seen: dict[int, int] = {}
    for r in responses:
        if r.item_id not in known:
            raise ValidationFailureError(
                f"{definition.kind}: item {r.item_id} is not part of this instrument"
            )
        if r.item_id in seen:
            raise DuplicateItemError(f"{definition.kind}: item {r.item_id} answered twice")
        if not (definition.scale_min <= r.value <= definition.scale_max):
            raise OutOfScaleError(
                f"{definition.kind}: item {r.item_id} value {r.value} outside "
                f"[{definition.scale_min}, {definition.scale_max}]"
            )
        item = known[r.item_id]
        seen[r.item_id] = (
            reverse_value(r.value, definition.scale_min, definition.scale_max)
            if item.reversed
            else r.value
        )
    missing = sorted(set(known) - set(seen))
    if missing:
        raise MissingItemError(f"{definition.kind}: missing items {missing}")
    return seen


def _subscale_means(
    responses: Sequence[ItemResponse], definition: InstrumentDefinition
) -> dict[str, float]:
    """Mean keyed value per subscale, in the definition's declared order."""
    keyed = _keyed_values(responses, definition)
    order = definition.subscale_order or tuple(
        dict.fromkeys(item.scale for item in definition.items)
    )
    sums: dict[str, list[int]] = {scale: [] for scale in order}
    for item in definition.items:
        sums[item.scale].append(keyed[item.item_id])
    return {scale: sum(vals) / len(vals) for scale, vals in sums.items()}


def score_bfi10(
    responses: Sequence[ItemResponse],
    definition: InstrumentDefinition,
    assessed_at: str = "",
) -> PersonalityProfile:
    """Score a Big Five questionnaire into a personality profile."""
    if definition.kind != BFI10:
        raise UnknownInstrumentError(f"expected a {BFI10} definition, got {definition.kind}")
    means = _subscale_means(responses, definition)
    return PersonalityProfile(
        openness=means["openness"],
        conscientiousness=means["conscientiousness"],
        extraversion=means["extraversion"],
        agreeableness=means["agreeableness"],
        neuroticism=means["neuroticism"],
        source=definition.kind,
        assessed_at=assessed_at,
    )


def score_imi(responses: Sequence[ItemResponse], definition: InstrumentDefinition) -> float:
    """Score the interest/enjoyment subscale to a single raw mean."""
    if definition.kind != IMI_IE:
        raise UnknownInstrumentError(f"expected an {IMI_IE} definition, got {definition.kind}")
    means = _subscale_means(responses, definition)
    return means["interest_enjoyment"]


def score_mwms(
    responses: Sequence[ItemResponse], definition: InstrumentDefinition
) -> dict[str, float]:
    """Score work-motivation subscales, ordered along the autonomy continuum."""
    if definition.kind != MWMS:
        raise UnknownInstrumentError(f"expected a {MWMS} definition, got {definition.kind}")
    return _subscale_means(responses, definition)


def zscore_profile(profile: PersonalityProfile, norms: TraitNorms) -> TraitVector:
    """Standardize a profile against a norm table: z = (raw - mean) / sd."""
    raw = profile.traits()
    return TraitVector(*((r - m) / s for r, m, s in zip(raw, norms.means, norms.sds)))
