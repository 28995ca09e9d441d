"""Role recommendation from standardized personality traits.

Maps trait z-scores to one of five collaboration archetypes, scores the
three pairing roles (driver at the keyboard, guiding partner, independent
worker) with a linear effect model, recommends an AI interaction mode with
psychological-need annotations, and plans role rotation schedules by
largest-remainder apportionment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Final, Mapping

from ._data import load_bundled, load_file
from .errors import ConfigError
from .instruments import TRAITS, TraitVector

HIGH_TRAIT_Z: Final = 0.675  # 75th percentile of a standard normal


class Role(str, Enum):
    PILOT = "pilot"
    NAVIGATOR = "navigator"
    SOLO = "solo"


class Archetype(str, Enum):
    EXPLORER = "explorer"
    ORCHESTRATOR = "orchestrator"
    CRAFTSPERSON = "craftsperson"
    ARCHITECT = "architect"
    ADAPTER = "adapter"


class AiMode(str, Enum):
    COPILOT = "copilot"
    CONAVIGATOR = "conavigator"
    AGENT = "agent"
    MINIMAL = "minimal"


ROLE_ORDER: Final[tuple[Role, ...]] = (Role.PILOT, Role.NAVIGATOR, Role.SOLO)

AI_SPECIALIZATIONS: Final[Mapping[Archetype, str]] = {
    Archetype.EXPLORER: "Promethean",
    Archetype.ORCHESTRATOR: "Conductor",
    Archetype.CRAFTSPERSON: "Hermit",
    Archetype.ARCHITECT: "Cartographer",
    Archetype.ADAPTER: "Shapeshifter",
}

# Natural AI mode of each role context: hands-on work pairs with inline
# suggestions, guiding work with conversation, independent work with
# delegation to an agent.
ROLE_NATURAL_MODE: Final[Mapping[Role, AiMode]] = {
    Role.PILOT: AiMode.COPILOT,
    Role.NAVIGATOR: AiMode.CONAVIGATOR,
    Role.SOLO: AiMode.AGENT,
}

NEED_IMPACTS: Final[Mapping[AiMode, Mapping[str, str]]] = {
    AiMode.COPILOT: {
        "autonomy": "preserved agency: suggestions stay suggestions, not impositions",
        "competence": "enhanced execution speed; watch for a competence illusion",
        "relatedness": "minimal: a pure tool relationship",
    },
    AiMode.CONAVIGATOR: {
        "autonomy": "dialogical control: direction is kept through conversation",
        "competence": "deep understanding built through explanatory dialogue",
        "relatedness": "strongest synthetic rapport; non-judgmental space",
    },
    AiMode.AGENT: {
        "autonomy": "meta-autonomy: control expressed through delegation decisions",
        "competence": "system-level mastery beyond individual throughput",
        "relatedness": "paradoxically limited: command, not companionship",
    },
    AiMode.MINIMAL: {
        "autonomy": "preserved through direct, predictable control of the work",
        "competence": "maintained via established skills and methods",
        "relatedness": "human collaboration preferred over synthetic partners",
    },
}


@dataclass(frozen=True)
class RotationPolicy:
    """Long-run share of sessions per role for one archetype."""

    shares: Mapping[Role, float]
    invented: bool

    def __post_init__(self) -> None:
        total = sum(self.shares.values())
        if not math.isclose(total, 1.0, rel_tol=0, abs_tol=1e-9):
            raise ConfigError(f"rotation shares must sum to 1, got {total}")


@dataclass(frozen=True)
class RoleEffectModel:
    """Linear motivation model: score(role) = base(role) + sum_t z_t * m(t, role)."""

    model_version: str
    base_effects: Mapping[Role, float]
    moderation: Mapping[str, Mapping[Role, float]]
    residual_sd: float
    motivation_scale: tuple[float, float]
    rotation_policies: Mapping[Archetype, RotationPolicy]


@dataclass(frozen=True)
class RoleRecommendation:
    """Scored and ranked role contexts for one member."""

    scores: Mapping[Role, float]
    ranking: tuple[Role, ...]
    breakdown: Mapping[Role, Mapping[str, float]]

    @property
    def top_role(self) -> Role:
        return self.ranking[0]


@dataclass(frozen=True)
class AiModeRecommendation:
    """AI interaction mode with rationale and need-impact annotations."""

    mode: AiMode
    specialization: str
    mode_flexible: bool
    tags: tuple[str, ...]
    rationale: str
    need_impacts: Mapping[str, str]


def load_effect_model(path: str | None = None) -> RoleEffectModel:
    """Load the effect model from the bundled (or an external) data file."""
    payload = load_bundled("effect_model.json") if path is None else load_file(path)
    base = {Role(r): float(v) for r, v in payload["base_effects"].items()}
    moderation = {
        trait: {Role(r): float(v) for r, v in row.items()}
        for trait, row in payload["moderation"].items()
    }
    if set(moderation) != set(TRAITS):
        raise ConfigError("moderation table must cover exactly the five traits")
    policies = {
        Archetype(a): RotationPolicy(
            shares={Role(r): float(v) for r, v in p["shares"].items()},
            invented=bool(p["invented"]),
        )
        for a, p in payload["rotation_policies"].items()
    }
    scale = (float(payload["motivation_scale"]["min"]), float(payload["motivation_scale"]["max"]))
    return RoleEffectModel(
        model_version=str(payload["model_version"]),
        base_effects=base,
        moderation=moderation,
        residual_sd=float(payload["residual_sd"]),
        motivation_scale=scale,
        rotation_policies=policies,
    )


def classify_archetype(z: TraitVector, high: float = HIGH_TRAIT_Z) -> Archetype:
    """Assign an archetype from trait z-scores.

    Precedence handles profiles matching several rules: the stress-sensitive
    independent pattern wins over the social coordinator, which wins over
    the idea-driven explorer, then the structured architect; everything else
    is the adaptable generalist.
    """
    if z.neuroticism >= high and z.extraversion <= -high:
        return Archetype.CRAFTSPERSON
    if z.extraversion >= high and z.agreeableness >= high:
        return Archetype.ORCHESTRATOR
    if z.openness >= high:
        return Archetype.EXPLORER
    if z.conscientiousness >= high:
        return Archetype.ARCHITECT
    return Archetype.ADAPTER


def score_roles(z: TraitVector, model: RoleEffectModel) -> RoleRecommendation:
    """Score each role for a member; ties rank hands-on roles first."""
    scores: dict[Role, float] = {}
    breakdown: dict[Role, dict[str, float]] = {}
    for role in ROLE_ORDER:
        contributions = {
            trait: z[idx] * model.moderation[trait][role] for idx, trait in enumerate(TRAITS)
        }
        contributions["base"] = model.base_effects[role]
        scores[role] = model.base_effects[role] + sum(
            contributions[t] for t in TRAITS
        )
        breakdown[role] = contributions
    priority = {role: i for i, role in enumerate(ROLE_ORDER)}
    ranking = tuple(sorted(ROLE_ORDER, key=lambda r: (-scores[r], priority[r])))
    return RoleRecommendation(scores=scores, ranking=ranking, breakdown=breakdown)


def recommend_ai_mode(
    z: TraitVector,
    archetype: Archetype,
    model: RoleEffectModel | None = None,
    high: float = HIGH_TRAIT_Z,
) -> AiModeRecommendation:
    """Choose an AI interaction mode for a member.

    The low-openness, low-stress-reactivity pattern prefers minimal AI and
    is checked before the archetype mapping because it is a categorical
    trait rule rather than an archetype default.
    """
    specialization = AI_SPECIALIZATIONS[archetype]
    if z.openness <= -high and z.neuroticism <= -high:
        return AiModeRecommendation(
            mode=AiMode.MINIMAL,
            specialization=specialization,
            mode_flexible=False,
            tags=("minimal_ai", "predictable_workflow"),
            rationale=(
                "prefers predictable workflows and direct control; "
                "AI assistance stays out of the way by default"
            ),
            need_impacts=NEED_IMPACTS[AiMode.MINIMAL],
        )
    if archetype is Archetype.EXPLORER:
        return AiModeRecommendation(
            mode=AiMode.COPILOT,
            specialization=specialization,
            mode_flexible=False,
            tags=("inline_suggestions", "divergent_ideation"),
            rationale="rapid idea generation suits inline, dismissible suggestions",
            need_impacts=NEED_IMPACTS[AiMode.COPILOT],
        )
    if archetype is Archetype.ORCHESTRATOR:
        return AiModeRecommendation(
            mode=AiMode.CONAVIGATOR,
            specialization=specialization,
            mode_flexible=False,
            tags=("conversational_planning", "dialogue_first"),
            rationale="dialogue-driven work suits a conversational navigator",
            need_impacts=NEED_IMPACTS[AiMode.CONAVIGATOR],
        )
    if archetype is Archetype.CRAFTSPERSON:
        return AiModeRecommendation(
            mode=AiMode.AGENT,
            specialization=specialization,
            mode_flexible=False,
            tags=("stress_delegation", "solo_work_preserved"),
            rationale=(
                "stressful tasks can be delegated to an agent while focused "
                "independent work stays fully manual"
            ),
            need_impacts=NEED_IMPACTS[AiMode.AGENT],
        )
    if archetype is Archetype.ARCHITECT:
        return AiModeRecommendation(
            mode=AiMode.COPILOT,
            specialization=specialization,
            mode_flexible=True,
            tags=("verification_required", "task_dependent_mode"),
            rationale=(
                "systematic workers switch modes per task; every AI output "
                "passes an explicit verification step"
            ),
            need_impacts=NEED_IMPACTS[AiMode.COPILOT],
        )
    # Adapter: follow the natural mode of the member's strongest role context.
    effect_model = model if model is not None else load_effect_model()
    top = score_roles(z, effect_model).top_role
    mode = ROLE_NATURAL_MODE[top]
    return AiModeRecommendation(
        mode=mode,
        specialization=specialization,
        mode_flexible=True,
        tags=("follows_role_context", f"natural_mode_of_{top.value}"),
        rationale=f"adaptable profile mirrors the natural mode of its strongest role ({top.value})",
        need_impacts=NEED_IMPACTS[mode],
    )


def rotation_schedule(
    archetype: Archetype, horizon: int, model: RoleEffectModel
) -> tuple[Role, ...]:
    """Plan `horizon` sessions matching the archetype's rotation shares.

    Session counts come from largest-remainder apportionment (ties toward
    the larger share, then hands-on roles first). The sequence interleaves
    by always emitting the role with the largest remaining deficit so
    minority roles are spaced out instead of bunched at the end.
    """
    if horizon < 1:
        raise ConfigError("horizon must be at least 1")
    policy = model.rotation_policies[archetype]
    priority = {role: i for i, role in enumerate(ROLE_ORDER)}

    quotas = {role: policy.shares[role] * horizon for role in ROLE_ORDER}
    counts = {role: int(math.floor(quotas[role])) for role in ROLE_ORDER}
    leftover = horizon - sum(counts.values())
    by_remainder = sorted(
        ROLE_ORDER,
        key=lambda r: (-(quotas[r] - counts[r]), -policy.shares[r], priority[r]),
    )
    for role in by_remainder[:leftover]:
        counts[role] += 1

    emitted = {role: 0 for role in ROLE_ORDER}
    schedule: list[Role] = []
    for step in range(1, horizon + 1):
        candidates = [r for r in ROLE_ORDER if emitted[r] < counts[r]]
        role = max(
            candidates,
            key=lambda r: (
                counts[r] / horizon * step - emitted[r],
                counts[r],
                -priority[r],
            ),
        )
        emitted[role] += 1
        schedule.append(role)
    return tuple(schedule)
