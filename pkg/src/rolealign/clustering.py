"""Agglomerative clustering of personality profiles.

Complete-linkage hierarchical clustering over Euclidean trait distance,
cluster-count selection by the Dunn validity index (minimum inter-cluster
distance divided by maximum intra-cluster diameter), centroid extraction,
and nearest-centroid classification of new profiles.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EmptyModelError,
    InvalidKError,
    TooFewProfilesError,
    ValidationFailureError,
)
from .instruments import TRAITS, PersonalityProfile, TraitNorms, TraitVector, zscore_profile

DEGENERATE_DIAMETER_EPS = 1e-9


@dataclass(frozen=True)
class Dendrogram:
    """Merge history of complete-linkage clustering.

    Each merge is (left_node, right_node, height, size). Leaves are numbered
    0..n-1 in input order; merge i creates node n+i. Heights never decrease,
    a property of complete linkage that is asserted at construction time.
    """

    n_leaves: int
    merges: tuple[tuple[int, int, float, int], ...]
    distances: np.ndarray
    points: np.ndarray | None = None


@dataclass(frozen=True)
class ClusterModel:
    """Flat clustering with centroids and validity diagnostics."""

    k: int
    centroids: tuple[TraitVector, ...]
    sds: tuple[TraitVector, ...]
    assignments: tuple[int, ...]
    sizes: tuple[int, ...]
    dunn_index: float
    degenerate_dunn: bool


def pairwise_distances(profiles: Sequence[PersonalityProfile]) -> np.ndarray:
    """Symmetric Euclidean distance matrix over the five traits.

    Summation runs in fixed trait order so results are bit-stable across
    runs and platforms regardless of caller-side parallelism.
    """
    if len(profiles) < 2:
        raise TooFewProfilesError("need at least two profiles")
    pts = np.array([p.traits() for p in profiles], dtype=float)
    diff = pts[:, None, :] - pts[None, :, :]
    return np.sqrt((diff**2).sum(axis=2))


def agglomerate(distances: np.ndarray, points: np.ndarray | None = None) -> Dendrogram:
    """Complete-linkage agglomeration of a distance matrix.

    Ties on merge distance break toward the lexicographically smallest pair
    of cluster representatives, which makes the dendrogram deterministic.
    """
    d = np.asarray(distances, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValidationFailureError("distance matrix must be square")
    n = d.shape[0]
    if n < 2:
        raise TooFewProfilesError("need at least two profiles")
    if not np.allclose(d, d.T):
        raise ValidationFailureError("distance matrix must be symmetric")

    # Active clusters keyed by their smallest original index.
    cluster_dist = {
        (i, j): float(d[i, j]) for i in range(n) for j in range(i + 1, n)
    }
    members: dict[int, list[int]] = {i: [i] for i in range(n)}
    node_of: dict[int, int] = {i: i for i in range(n)}
    active = list(range(n))
    merges: list[tuple[int, int, float, int]] = []
    next_node = n
    last_height = 0.0

    while len(active) > 1:
        best_pair = None
        best_dist = None
        for ai in range(len(active)):
            for aj in range(ai + 1, len(active)):
                a, b = active[ai], active[aj]
                dist = cluster_dist[(a, b)]
                if best_dist is None or dist < best_dist:
                    best_dist = dist
                    best_pair = (a, b)
        a, b = best_pair
        assert best_dist is not None and best_dist >= last_height - 1e-12
        last_height = best_dist
        merges.append((node_of[a], node_of[b], best_dist, len(members[a]) + len(members[b])))
        # Complete linkage: distance to the merged cluster is the max leg.
        for c in active:
            if c in (a, b):
                continue
            key_ac = (min(a, c), max(a, c))
            key_bc = (min(b, c), max(b, c))
            cluster_dist[(min(a, c), max(a, c))] = max(cluster_dist[key_ac], cluster_dist[key_bc])
        active.remove(b)
        members[a] = members[a] + members[b]
        node_of[a] = next_node
        next_node += 1

    return Dendrogram(
        n_leaves=n,
        merges=tuple(merges),
        distances=d,
        points=None if points is None else np.asarray(points, dtype=float),
    )


def build_dendrogram(profiles: Sequence[PersonalityProfile]) -> Dendrogram:
    """Distance computation plus agglomeration, retaining the trait matrix."""
    pts = np.array([p.traits() for p in profiles], dtype=float)
    return agglomerate(pairwise_distances(profiles), points=pts)


def cut_labels(dendrogram: Dendrogram, k: int) -> tuple[int, ...]:
    """Labels 0..k-1 from undoing the last k-1 merges; ids follow input order."""
    n = dendrogram.n_leaves
    if not 1 <= k <= n:
        raise InvalidKError(f"k={k} outside 1..{n}")
    parent = list(range(2 * n - 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, (left, right, _height, _size) in enumerate(dendrogram.merges[: n - k]):
        node = n + i
        parent[find(left)] = node
        parent[find(right)] = node

    label_of_root: dict[int, int] = {}
    labels = []
    for leaf in range(n):
        root = find(leaf)
        if root not in label_of_root:
            label_of_root[root] = len(label_of_root)
        labels.append(label_of_root[root])
    return tuple(labels)


def _dunn(distances: np.ndarray, labels: Sequence[int], k: int) -> tuple[float, bool]:
    """Min inter-cluster distance over max intra-cluster diameter."""
    min_inter = float("inf")
    max_diam = 0.0
    index_sets = [np.flatnonzero(np.array(labels) == c) for c in range(k)]
    for a in range(k):
        ia = index_sets[a]
        if len(ia) > 1:
            max_diam = max(max_diam, float(distances[np.ix_(ia, ia)].max()))
        for b in range(a + 1, k):
            ib = index_sets[b]
            min_inter = min(min_inter, float(distances[np.ix_(ia, ib)].min()))
    degenerate = max_diam == 0.0
    if degenerate:
        max_diam = DEGENERATE_DIAMETER_EPS
    return min_inter / max_diam, degenerate


def cut_and_score(dendrogram: Dendrogram, k: int) -> ClusterModel:
    """Cut the dendrogram into k clusters and compute centroids and Dunn index."""
    if k < 2:
        raise InvalidKError("scoring requires k >= 2")
    labels = cut_labels(dendrogram, k)
    if dendrogram.points is None:
        raise ValidationFailureError(
            "dendrogram carries no trait matrix; build it with build_dendrogram"
        )
    pts = dendrogram.points
    centroids = []
    sds = []
    sizes = []
    for c in range(k):
        rows = pts[np.flatnonzero(np.array(labels) == c)]
        sizes.append(len(rows))
        centroids.append(TraitVector(*(float(v) for v in rows.mean(axis=0))))
        if len(rows) > 1:
            sds.append(TraitVector(*(float(v) for v in rows.std(axis=0, ddof=1))))
        else:
            sds.append(TraitVector(0.0, 0.0, 0.0, 0.0, 0.0))
    dunn, degenerate = _dunn(dendrogram.distances, labels, k)
    return ClusterModel(
        k=k,
        centroids=tuple(centroids),
        sds=tuple(sds),
        assignments=labels,
        sizes=tuple(sizes),
        dunn_index=dunn,
        degenerate_dunn=degenerate,
    )


def select_k(dendrogram: Dendrogram, k_range: Iterable[int]) -> ClusterModel:
    """Model with the highest Dunn index; ties break toward smaller k."""
    ks = sorted(set(k_range))
    if not ks:
        raise InvalidKError("empty k range")
    best: ClusterModel | None = None
    for k in ks:
        model = cut_and_score(dendrogram, k)
        if best is None or model.dunn_index > best.dunn_index + 1e-12:
            best = model
    assert best is not None
    return best


def classify(
    profile: PersonalityProfile, model: ClusterModel, norms: TraitNorms
) -> tuple[int, str]:
    """Nearest-centroid cluster id plus its archetype label.

    Distance ties break toward the lowest cluster id. The archetype label is
    derived by z-scoring the winning centroid against the norm table and
    applying the trait-threshold rules of the role model.
    """
    from .roles import classify_archetype

    if model.k == 0 or not model.centroids:
        raise EmptyModelError("model has no clusters")
    traits = np.array(profile.traits(), dtype=float)
    best_id = 0
    best_dist = None
    for cid, centroid in enumerate(model.centroids):
        dist = float(np.sqrt(((traits - np.array(centroid)) ** 2).sum()))
        if best_dist is None or dist < best_dist - 1e-12:
            best_dist = dist
            best_id = cid
    centroid = model.centroids[best_id]
    centroid_profile = PersonalityProfile(*centroid)
    z = zscore_profile(centroid_profile, norms)
    return best_id, classify_archetype(z).value


def load_cohort_csv(path: str | Path) -> tuple[list[str], list[PersonalityProfile]]:
    """Read a cohort file: member_id plus five trait columns per row."""
    ids: list[str] = []
    profiles: list[PersonalityProfile] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"member_id", *TRAITS}
        if reader.fieldnames is None or not required.issubset(set(reader.fieldnames)):
            raise ValidationFailureError(
                f"cohort file needs columns member_id plus {', '.join(TRAITS)}"
            )
        for row in reader:
            ids.append(row["member_id"])
            profiles.append(PersonalityProfile(*(float(row[t]) for t in TRAITS)))
    if len(profiles) < 2:
        raise TooFewProfilesError("cohort file has fewer than two rows")
    return ids, profiles


def model_to_json(model: ClusterModel, member_ids: Sequence[str] | None = None) -> str:
    """Serialize a ClusterModel as structured text for export."""
    doc = {
        "k": model.k,
        "dunn_index": model.dunn_index,
        "degenerate_dunn": model.degenerate_dunn,
        "clusters": [
            {
                "id": cid,
                "size": model.sizes[cid],
                "centroid": dict(zip(TRAITS, model.centroids[cid])),
                "sd": dict(zip(TRAITS, model.sds[cid])),
            }
            for cid in range(model.k)
        ],
        "assignments": [
            {"member_id": member_ids[i] if member_ids else str(i), "cluster": c}
            for i, c in enumerate(model.assignments)
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True)
