"""Motivation baselines, pulse aggregation, and adaptation triggers.

Establishes a personal baseline from the first founding pulses, aggregates
later pulses into ISO-week (and calendar-month) buckets, fires a trigger
when the two most recent non-empty aggregates sit below the baseline by
more than a configurable margin, and proposes interventions in a fixed
order: role adjustment, pair reconfiguration, then skill development.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime, timezone as dt_timezone
from typing import Literal, Mapping, Sequence
from zoneinfo import ZoneInfo

from .errors import InsufficientSamplesError, NoBaselineError, ValidationFailureError
from .instruments import IMI_IE, MWMS, MotivationSample, TraitVector
from .roles import Role, RoleEffectModel, load_effect_model, score_roles

TriggerKind = Literal[
    "ImiBelowBaseline2Weeks",
    "MwmsBelowBaseline2Months",
    "VelocityDecline",
    "PhaseTransition",
]

EXTERNAL_SIGNAL_KINDS: tuple[str, ...] = ("VelocityDecline", "PhaseTransition")


@dataclass(frozen=True)
class MonitorConfig:
    """Tunable monitoring parameters."""

    founding_k: int = 6
    delta_factor: float = 0.5
    delta_override: float | None = None
    timezone: str = "UTC"

    def delta(self, founding_sd: float) -> float:
        """Margin below baseline that counts as a decline."""
        if self.delta_override is not None:
            return self.delta_override
        return self.delta_factor * founding_sd


@dataclass(frozen=True)
class Baseline:
    """Personal reference level established from founding pulses."""

    member_id: str
    imi_baseline: float
    imi_founding_sd: float
    mwms_baseline: Mapping[str, float]
    mwms_founding_sd: float
    established_from: int
    established_at: str


@dataclass(frozen=True)
class TriggerEvent:
    """A fired adaptation trigger with the evidence that fired it."""

    member_id: str
    kind: str
    fired_at: str
    evidence: Mapping[str, object]


@dataclass(frozen=True)
class Intervention:
    """One proposed adaptation step."""

    kind: Literal["RoleAdjustment", "PairReconfiguration", "SkillDevelopment"]
    detail: str


@dataclass(frozen=True)
class MemberContext:
    """What the monitor needs to know about a member to propose changes."""

    member_id: str
    z: TraitVector
    current_role: Role | None = None
    partner_id: str | None = None
    pair_flags: frozenset[str] = field(default_factory=frozenset)


def _parse_when(taken_at: str, tz: str) -> datetime:
    try:
        stamp = datetime.fromisoformat(taken_at)
    except ValueError as exc:
        raise ValidationFailureError(f"bad timestamp {taken_at!r}: {exc}") from exc
    if stamp.tzinfo is None:
        stamp = stamp.replace(tzinfo=dt_timezone.utc)
    return stamp.astimezone(ZoneInfo(tz))


def week_of(taken_at: str, tz: str = "UTC") -> tuple[int, int]:
    """ISO calendar (year, week) of a timestamp in the configured timezone."""
    iso = _parse_when(taken_at, tz).isocalendar()
    return (iso.year, iso.week)


def month_of(taken_at: str, tz: str = "UTC") -> tuple[int, int]:
    """Calendar (year, month) of a timestamp in the configured timezone."""
    stamp = _parse_when(taken_at, tz)
    return (stamp.year, stamp.month)


def weekly_aggregate(
    samples: Sequence[MotivationSample], week: tuple[int, int], tz: str = "UTC"
) -> float | None:
    """Mean normalized pulse of one ISO week; None when the week is empty."""
    values = [
        s.normalized
        for s in samples
        if s.instrument == IMI_IE and week_of(s.taken_at, tz) == week
    ]
    if not values:
        return None
    return sum(values) / len(values)


def _ordered_buckets(
    samples: Sequence[MotivationSample],
    instrument: str,
    keyer,
) -> list[tuple[tuple[int, int], float]]:
    """Mean normalized value per non-empty bucket, in chronological order."""
    buckets: dict[tuple[int, int], list[float]] = {}
    for s in samples:
        if s.instrument != instrument:
            continue
        buckets.setdefault(keyer(s.taken_at), []).append(s.normalized)
    return [(key, sum(v) / len(v)) for key, v in sorted(buckets.items())]


def establish_baseline(
    samples: Sequence[MotivationSample],
    config: MonitorConfig = MonitorConfig(),
) -> Baseline:
    """Baseline = mean of the first founding_k normalized pulses.

    The interest/enjoyment pulses are required; work-motivation samples, when
    at least founding_k exist, contribute a per-subscale baseline as well.
    """
    imi = sorted(
        (s for s in samples if s.instrument == IMI_IE),
        key=lambda s: _parse_when(s.taken_at, config.timezone),
    )
    if len(imi) < config.founding_k:
        raise InsufficientSamplesError(
            f"need {config.founding_k} founding pulses, have {len(imi)}"
        )
    founding = imi[: config.founding_k]
    values = [s.normalized for s in founding]
    mean = sum(values) / len(values)
    sd = _sample_sd(values)

    mwms = sorted(
        (s for s in samples if s.instrument == MWMS),
        key=lambda s: _parse_when(s.taken_at, config.timezone),
    )
    mwms_baseline: dict[str, float] = {}
    mwms_sd = 0.0
    if len(mwms) >= config.founding_k:
        founding_m = mwms[: config.founding_k]
        keys = sorted({k for s in founding_m for k in s.subscales})
        for key in keys:
            vals = [s.subscales[key] for s in founding_m if key in s.subscales]
            mwms_baseline[key] = sum(vals) / len(vals)
        mwms_sd = _sample_sd([s.normalized for s in founding_m])

    return Baseline(
        member_id=founding[0].member_id,
        imi_baseline=mean,
        imi_founding_sd=sd,
        mwms_baseline=mwms_baseline,
        mwms_founding_sd=mwms_sd,
        established_from=len(founding),
        established_at=founding[-1].taken_at,
    )


def _sample_sd(values: Sequence[float]) -> float:
    if len(values) < 2:
        return 0.0
    mean = sum(values) / len(values)
    return math.sqrt(sum((v - mean) ** 2 for v in values) / (len(values) - 1))


def _below_run_events(
    member_id: str,
    kind: str,
    buckets: Sequence[tuple[tuple[int, int], float]],
    baseline: float,
    delta: float,
) -> list[TriggerEvent]:
    """One event per maximal run of two-plus consecutive below-threshold buckets.

    Anchoring each event at the second bucket of its run makes evaluation a
    pure function of history: re-runs yield the same events, and a new event
    needs an intervening non-declining bucket first.
    """
    threshold = baseline - delta
    events: list[TriggerEvent] = []
    run: list[tuple[tuple[int, int], float]] = []
    for key, value in buckets:
        if value < threshold:
            run.append((key, value))
            if len(run) == 2:
                events.append(
                    TriggerEvent(
                        member_id=member_id,
                        kind=kind,
                        fired_at=f"{key[0]:04d}-{key[1]:02d}",
                        evidence={
                            "baseline": baseline,
                            "delta": delta,
                            "threshold": threshold,
                            "window": [
                                {"bucket": list(b), "aggregate": v} for b, v in run
                            ],
                        },
                    )
                )
        else:
            run = []
    return events


def evaluate_triggers(
    member_id: str,
    baseline: Baseline | None,
    samples: Sequence[MotivationSample],
    config: MonitorConfig = MonitorConfig(),
    external_signals: Sequence[TriggerEvent] = (),
) -> list[TriggerEvent]:
    """All triggers supported by the sample history, plus external signals.

    Pure function: identical inputs always produce identical events.
    """
    if baseline is None:
        raise NoBaselineError(f"member {member_id} has no established baseline")
    events: list[TriggerEvent] = []

    weekly = _ordered_buckets(samples, IMI_IE, lambda t: week_of(t, config.timezone))
    events.extend(
        _below_run_events(
            member_id,
            "ImiBelowBaseline2Weeks",
            weekly,
            baseline.imi_baseline,
            config.delta(baseline.imi_founding_sd),
        )
    )

    monthly = _ordered_buckets(samples, MWMS, lambda t: month_of(t, config.timezone))
    if baseline.mwms_baseline:
        # The pulse-level normalized value for this instrument tracks the
        # intrinsic subscale, the same construct the weekly pulses measure.
        intrinsic = baseline.mwms_baseline.get("intrinsic")
        if intrinsic is not None:
            events.extend(
                _below_run_events(
                    member_id,
                    "MwmsBelowBaseline2Months",
                    monthly,
                    intrinsic,
                    config.delta(baseline.mwms_founding_sd),
                )
            )

    for signal in external_signals:
        if signal.kind not in EXTERNAL_SIGNAL_KINDS:
            raise ValidationFailureError(f"unsupported external signal {signal.kind!r}")
        if signal.member_id != member_id:
            raise ValidationFailureError("external signal belongs to another member")
        events.append(signal)
    return events


def propose_interventions(
    trigger: TriggerEvent | None,
    context: MemberContext,
    model: RoleEffectModel | None = None,
) -> tuple[Intervention, ...]:
    """Ordered interventions for a fired trigger; empty when nothing fired."""
    if trigger is None:
        return ()
    effect_model = model if model is not None else load_effect_model()
    recommendation = score_roles(context.z, effect_model)
    proposals: list[Intervention] = []

    next_best = next(
        (r for r in recommendation.ranking if r != context.current_role),
        recommendation.top_role,
    )
    current = context.current_role.value if context.current_role else "unassigned"
    proposals.append(
        Intervention(
            kind="RoleAdjustment",
            detail=f"switch role context from {current} to {next_best.value} for variety",
        )
    )
    if context.partner_id is not None:
        proposals.append(
            Intervention(
                kind="PairReconfiguration",
                detail=(
                    f"re-run team matching excluding the current pair "
                    f"({context.member_id}, {context.partner_id})"
                ),
            )
        )
    proposals.append(
        Intervention(
            kind="SkillDevelopment",
            detail="schedule focused skill development in the member's strongest context",
        )
    )
    return tuple(proposals)
