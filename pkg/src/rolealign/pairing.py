"""Pair compatibility scoring and optimal team matching.

Scores pairs from archetype synergies and trait-based risk rules, excludes
hard-blocked combinations, and finds the maximum-total-score set of pairs
for a team. Exhaustive search guarantees optimality for teams of up to ten
members; larger teams fall back to greedy construction with 2-opt
improvement, which is documented as a heuristic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Final, Iterable, Mapping, Sequence

from .errors import InfeasibleMatchingError, UnclassifiedMemberError, ValidationFailureError
from .instruments import TraitVector
from .roles import HIGH_TRAIT_Z, Archetype, Role, RoleEffectModel, load_effect_model, score_roles

EXHAUSTIVE_LIMIT: Final = 10

SYNERGY_PAIRS: Final[frozenset[frozenset[Archetype]]] = frozenset(
    {
        frozenset({Archetype.EXPLORER, Archetype.ARCHITECT}),
        frozenset({Archetype.ORCHESTRATOR, Archetype.CRAFTSPERSON}),
        frozenset({Archetype.EXPLORER, Archetype.ORCHESTRATOR}),
        frozenset({Archetype.ARCHITECT, Archetype.CRAFTSPERSON}),
    }
)

CAUTION_PAIRS: Final[frozenset[frozenset[Archetype]]] = frozenset(
    {
        frozenset({Archetype.EXPLORER}),
        frozenset({Archetype.CRAFTSPERSON}),
    }
)


@dataclass(frozen=True)
class PairingWeights:
    """Numeric weights for the qualitative pairing principles."""

    synergy: int = 2
    caution: int = -2
    forbidden_penalty: int = -10
    forbidden_as_penalty: bool = False


@dataclass(frozen=True)
class MemberClassification:
    """A member's archetype and trait z-scores, as used for pairing."""

    member_id: str
    archetype: Archetype | None
    z: TraitVector


@dataclass(frozen=True)
class PairScore:
    """Compatibility verdict for one unordered pair."""

    member_a: str
    member_b: str
    score: int
    flags: frozenset[str]
    rationale_tags: tuple[str, ...]

    @property
    def forbidden(self) -> bool:
        return "Forbidden" in self.flags


@dataclass(frozen=True)
class TeamAssignment:
    """A set of pairs plus any member left to work independently."""

    pairs: tuple[tuple[str, str], ...]
    unpaired: tuple[str, ...]
    total_score: int
    pair_scores: Mapping[tuple[str, str], PairScore] = field(default_factory=dict)


def pair_score(
    a: MemberClassification,
    b: MemberClassification,
    weights: PairingWeights = PairingWeights(),
    high: float = HIGH_TRAIT_Z,
) -> PairScore:
    """Score one pair; symmetric in its arguments."""
    for member in (a, b):
        if member.archetype is None:
            raise UnclassifiedMemberError(f"member {member.member_id} has no archetype")
    score = 0
    flags: set[str] = set()
    tags: list[str] = []

    kinds = frozenset({a.archetype, b.archetype})
    if kinds in SYNERGY_PAIRS:
        score += weights.synergy
        flags.add("Synergy")
        names = sorted(k.value for k in kinds)
        tags.append(f"synergy:{names[0]}+{names[1]}")
    if Archetype.ADAPTER in kinds:
        score += weights.synergy
        flags.add("Synergy")
        tags.append("synergy:adapter+any")
    if kinds in CAUTION_PAIRS:
        score += weights.caution
        flags.add("Caution")
        tags.append(f"caution:{a.archetype.value}+{b.archetype.value}")

    both_high_n = a.z.neuroticism >= high and b.z.neuroticism >= high
    cross_risk = (a.z.agreeableness <= -high and b.z.neuroticism >= high) or (
        b.z.agreeableness <= -high and a.z.neuroticism >= high
    )
    if both_high_n or cross_risk:
        flags.add("Forbidden")
        if both_high_n:
            tags.append("forbidden:both_high_stress_reactivity")
        if cross_risk:
            tags.append("forbidden:low_agreeableness_with_high_stress_reactivity")
        if weights.forbidden_as_penalty:
            score += weights.forbidden_penalty

    return PairScore(
        member_a=a.member_id,
        member_b=b.member_id,
        score=score,
        flags=frozenset(flags),
        rationale_tags=tuple(tags),
    )


def pair_key(a: str, b: str) -> tuple[str, str]:
    """Canonical dict key for an unordered pair of member ids."""
    return (a, b) if a <= b else (b, a)


def score_all_pairs(
    members: Sequence[MemberClassification],
    weights: PairingWeights = PairingWeights(),
    high: float = HIGH_TRAIT_Z,
) -> dict[tuple[str, str], PairScore]:
    """PairScore for every unordered pair, keyed lexicographically."""
    out: dict[tuple[str, str], PairScore] = {}
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            key = pair_key(members[i].member_id, members[j].member_id)
            out[key] = pair_score(members[i], members[j], weights, high)
    return out


def _exhaustive_match(
    order: list[int],
    allowed: dict[tuple[int, int], int],
) -> tuple[int, list[tuple[int, int]]] | None:
    """Best perfect matching by recursive enumeration; None if impossible.

    Ties keep the first matching found, which is the lexicographically
    earliest in member order, so results are deterministic.
    """
    best: tuple[int, list[tuple[int, int]]] | None = None

    def recurse(remaining: list[int], total: int, chosen: list[tuple[int, int]]) -> None:
        nonlocal best
        if not remaining:
            if best is None or total > best[0]:
                best = (total, list(chosen))
            return
        first = remaining[0]
        rest = remaining[1:]
        for idx, partner in enumerate(rest):
            key = (first, partner)
            if key not in allowed:
                continue
            chosen.append(key)
            recurse(rest[:idx] + rest[idx + 1 :], total + allowed[key], chosen)
            chosen.pop()

    recurse(order, 0, [])
    return best


def _greedy_match(
    order: list[int],
    allowed: dict[tuple[int, int], int],
) -> tuple[int, list[tuple[int, int]]] | None:
    """Greedy highest-score pairing followed by 2-opt partner swaps."""
    unmatched = set(order)
    pairs: list[tuple[int, int]] = []
    for key, _score in sorted(allowed.items(), key=lambda kv: (-kv[1], kv[0])):
        i, j = key
        if i in unmatched and j in unmatched:
            pairs.append(key)
            unmatched -= {i, j}
    if unmatched:
        return None

    def score_of(i: int, j: int) -> int | None:
        return allowed.get((min(i, j), max(i, j)))

    improved = True
    while improved:
        improved = False
        for pi in range(len(pairs)):
            for pj in range(pi + 1, len(pairs)):
                a, b = pairs[pi]
                c, d = pairs[pj]
                current = allowed[pairs[pi]] + allowed[pairs[pj]]
                for x, y, u, v in ((a, c, b, d), (a, d, b, c)):
                    s1 = score_of(x, y)
                    s2 = score_of(u, v)
                    if s1 is not None and s2 is not None and s1 + s2 > current:
                        pairs[pi] = (min(x, y), max(x, y))
                        pairs[pj] = (min(u, v), max(u, v))
                        improved = True
                        break
                if improved:
                    break
            if improved:
                break
    total = sum(allowed[p] for p in pairs)
    return total, pairs


def match_team(
    members: Sequence[MemberClassification],
    scores: Mapping[tuple[str, str], PairScore] | None = None,
    weights: PairingWeights = PairingWeights(),
    model: RoleEffectModel | None = None,
    high: float = HIGH_TRAIT_Z,
) -> TeamAssignment:
    """Maximum-total-score pairing of a team.

    Hard-blocked pairs never appear. For odd team sizes the member with the
    highest independent-work role score sits out (ties toward the earlier
    member in input order), honoring the preference of members whose best
    context is working alone.
    """
    if len(members) < 2:
        raise ValidationFailureError("matching needs at least two members")
    ids = [m.member_id for m in members]
    if len(set(ids)) != len(ids):
        raise ValidationFailureError("duplicate member ids in matching pool")
    if scores is None:
        scores = score_all_pairs(members, weights, high)

    pool = list(range(len(members)))
    unpaired: list[str] = []
    if len(pool) % 2 == 1:
        effect_model = model if model is not None else load_effect_model()
        solo_scores = [
            score_roles(m.z, effect_model).scores[Role.SOLO] for m in members
        ]
        solo_idx = max(pool, key=lambda i: (solo_scores[i], -i))
        pool.remove(solo_idx)
        unpaired.append(members[solo_idx].member_id)

    allowed: dict[tuple[int, int], int] = {}
    for i in pool:
        for j in pool:
            if i >= j:
                continue
            ps = scores[pair_key(ids[i], ids[j])]
            if ps.forbidden and not weights.forbidden_as_penalty:
                continue
            allowed[(i, j)] = ps.score

    result = (
        _exhaustive_match(pool, allowed)
        if len(pool) <= EXHAUSTIVE_LIMIT
        else _greedy_match(pool, allowed)
    )
    if result is None:
        raise InfeasibleMatchingError(
            "hard pairing constraints leave some members impossible to pair"
        )
    total, index_pairs = result
    pairs = tuple(sorted(pair_key(ids[i], ids[j]) for i, j in index_pairs))
    return TeamAssignment(
        pairs=pairs,
        unpaired=tuple(unpaired),
        total_score=total,
        pair_scores={k: v for k, v in scores.items()},
    )


_TAG_TEXT: Final[Mapping[str, str]] = {
    "synergy:architect+explorer": (
        "creative divergence meets systematic convergence: one partner explores "
        "options while the other evaluates feasibility"
    ),
    "synergy:craftsperson+orchestrator": (
        "social coordination complements deep independent focus"
    ),
    "synergy:explorer+orchestrator": (
        "idea generation flows directly into team-wide coordination"
    ),
    "synergy:architect+craftsperson": (
        "shared rigor: structured planning with methodical execution"
    ),
    "synergy:adapter+any": "a flexible catalyst adapts to any partner's style",
    "caution:explorer+explorer": (
        "two idea generators can diverge without converging; approach with care"
    ),
    "caution:craftsperson+craftsperson": (
        "two deep-focus workers may under-communicate; approach with care"
    ),
    "forbidden:both_high_stress_reactivity": (
        "both partners show high stress reactivity; pairing is not recommended"
    ),
    "forbidden:low_agreeableness_with_high_stress_reactivity": (
        "a low-agreeableness partner together with a high-stress-reactivity "
        "partner is not recommended"
    ),
}


def explain_pair(pair: PairScore) -> str:
    """Human-readable rationale naming the principle behind each flag."""
    if not pair.rationale_tags:
        return f"{pair.member_a} + {pair.member_b}: no listed synergy or caution."
    lines = [f"{pair.member_a} + {pair.member_b} (score {pair.score:+d}):"]
    for tag in pair.rationale_tags:
        lines.append(f"- {_TAG_TEXT.get(tag, tag)}")
    return "\n".join(lines)


def forbidden_pairs(
    scores: Mapping[tuple[str, str], PairScore]
) -> Iterable[tuple[str, str]]:
    """Keys of all hard-blocked pairs in a score table."""
    return tuple(sorted(k for k, v in scores.items() if v.forbidden))
