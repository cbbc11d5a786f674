"""Euclidean distances, single-linkage dendrograms and seeded k-means over UF features."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .core_types import Basis, Sex, UfLifeTable
from .errors import DomainError

FEATURE_SETS = ("birth", "after60", "after65")
COLUMN_SETS = {"total": (None,), "sex": (Sex.MALE, Sex.FEMALE), "all": (None, Sex.MALE, Sex.FEMALE)}
MAX_ITER = 300


@dataclass(frozen=True)
class FeatureMatrix:
    ufs: tuple[int, ...]
    columns: tuple[str, ...]
    values: np.ndarray


def life_features(table: UfLifeTable, which: str = "birth", columns: str = "total",
                  standardize: bool = False) -> FeatureMatrix:
    """Life-expectancy features per UF, in years unless ``standardize``."""
    if which not in FEATURE_SETS:
        raise DomainError(f"features must be one of {FEATURE_SETS}")
    if columns not in COLUMN_SETS:
        raise DomainError(f"columns must be one of {tuple(COLUMN_SETS)}")
    sexes = COLUMN_SETS[columns]
    values = np.column_stack([table.column(Basis(which), s) for s in sexes])
    if standardize:
        sd = values.std(axis=0)
        values = (values - values.mean(axis=0)) / np.where(sd > 0, sd, 1.0)
    names = tuple(f"{which}_{'total' if s is None else s.name.lower()}" for s in sexes)
    return FeatureMatrix(tuple(u.number for u in table.ufs), names, values)


def _as_array(features) -> np.ndarray:
    x = features.values if isinstance(features, FeatureMatrix) else features
    x = np.asarray(x, dtype=float)
    return x[:, None] if x.ndim == 1 else x


def distance_matrix(features) -> np.ndarray:
    x = _as_array(features)
    if len(x) < 2:
        raise DomainError("distance matrix needs at least two rows")
    diff = x[:, None, :] - x[None, :, :]
    d = np.sqrt(np.sum(diff**2, axis=-1))
    np.fill_diagonal(d, 0.0)
    return d


@dataclass(frozen=True)
class Merge:
    a: int
    b: int
    height: float
    size: int


@dataclass(frozen=True)
class Dendrogram:
    """Merge list in the usual agglomerative numbering.

    Leaves are ``0..n-1``; the cluster created by merge ``t`` gets id ``n + t``.
    """

    n: int
    merges: tuple[Merge, ...]

    @property
    def heights(self) -> np.ndarray:
        return np.array([m.height for m in self.merges])


def single_linkage(dist) -> Dendrogram:
    """Agglomerate by minimum inter-cluster point distance.

    Ties go to the pair whose smaller-then-larger active cluster index is
    lexicographically lowest, where a cluster is indexed by its lowest leaf.
    """
    d = np.array(dist, dtype=float)
    n = len(d)
    if d.shape != (n, n) or not np.allclose(d, d.T) or np.any(np.diag(d) != 0):
        raise DomainError("expected a symmetric distance matrix with zero diagonal")
    active = list(range(n))  # representative leaf per live cluster
    ids = {i: i for i in range(n)}
    sizes = {i: 1 for i in range(n)}
    dd = d.copy()
    merges = []
    for t in range(n - 1):
        best = None
        for i, j in combinations(active, 2):
            if best is None or dd[i, j] < best[0]:
                best = (dd[i, j], i, j)
        h, i, j = best
        a, b = sorted((ids[i], ids[j]))
        size = sizes[i] + sizes[j]
        merges.append(Merge(a, b, float(h), size))
        # keep the lower representative, lance-williams update for single linkage
        dd[i, :] = np.minimum(dd[i, :], dd[j, :])
        dd[:, i] = dd[i, :]
        dd[i, i] = 0.0
        active.remove(j)
        ids[i] = n + t
        sizes[i] = size
    return Dendrogram(n, tuple(merges))


@dataclass(frozen=True)
class Partition:
    labels: np.ndarray
    k: int
    method: str
    centroids: np.ndarray | None = None
    objective: float | None = None
    history: tuple[float, ...] = field(default_factory=tuple)
    iterations: int = 0


def _canonical(labels: Sequence[int]) -> np.ndarray:
    """Relabel so clusters are numbered by first appearance."""
    mapping: dict[int, int] = {}
    return np.array([mapping.setdefault(int(l), len(mapping)) for l in labels], dtype=int)


def cut_dendrogram(dend: Dendrogram, k: int) -> Partition:
    """Partition after the first ``n - k`` merges."""
    n = dend.n
    if not 1 <= k <= n:
        raise DomainError(f"k must lie in [1, {n}], got {k}")
    parent = list(range(2 * n - 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for t, m in enumerate(dend.merges[: n - k]):
        parent[find(m.a)] = n + t
        parent[find(m.b)] = n + t
    return Partition(_canonical([find(i) for i in range(n)]), k, "single")


def _sq_dist(x: np.ndarray, c: np.ndarray) -> np.ndarray:
    return np.sum((x[:, None, :] - c[None, :, :]) ** 2, axis=-1)


def _kmeanspp(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = len(x)
    centers = [x[rng.integers(n)]]
    for _ in range(1, k):
        d2 = _sq_dist(x, np.array(centers)).min(axis=1)
        total = d2.sum()
        if total == 0:
            idx = rng.integers(n)
        else:
            idx = rng.choice(n, p=d2 / total)
        centers.append(x[idx])
    return np.array(centers, dtype=float)


def _update_centers(x: np.ndarray, labels: np.ndarray, old: np.ndarray) -> np.ndarray:
    centers = old.copy()
    empty = []
    for c in range(len(old)):
        mask = labels == c
        if mask.any():
            centers[c] = x[mask].mean(axis=0)
        else:
            empty.append(c)
    if empty:
        # an empty cluster restarts at the point worst served by its centre
        own = np.sum((x - centers[labels]) ** 2, axis=1)
        for c, i in zip(empty, np.argsort(-own, kind="stable")):
            centers[c] = x[i]
    return centers


def kmeans(features, k: int, seed: int = 0, max_iter: int = MAX_ITER) -> Partition:
    """Lloyd's algorithm from k-means++ seeding.

    Stops when assignments stop changing or after ``max_iter`` rounds.
    ``history`` holds the within-cluster sum of squares after each
    assignment step; it never increases.
    """
    x = _as_array(features)
    n = len(x)
    if not 1 <= k <= n:
        raise DomainError(f"k must lie in [1, {n}], got {k}")
    rng = np.random.default_rng(seed)
    centers = _kmeanspp(x, k, rng)
    labels = None
    history = []
    it = 0
    for it in range(1, max_iter + 1):
        new = np.argmin(_sq_dist(x, centers), axis=1)
        history.append(float(np.sum((x - centers[new]) ** 2)))
        if labels is not None and np.array_equal(new, labels):
            break
        labels = new
        centers = _update_centers(x, labels, centers)
    objective = float(np.sum((x - centers[labels]) ** 2))
    canon = _canonical(labels)
    seen = list(dict.fromkeys(labels.tolist()))
    order = seen + [c for c in range(k) if c not in seen]
    return Partition(canon, k, "kmeans", centers[order], objective, tuple(history), it)


def rand_index(a: Sequence[int], b: Sequence[int]) -> float:
    """Share of point pairs on which two partitions agree about co-membership."""
    a, b = np.asarray(a), np.asarray(b)
    if len(a) != len(b):
        raise DomainError("partitions cover different numbers of points")
    n = len(a)
    if n < 2:
        return 1.0
    same_a = a[:, None] == a[None, :]
    same_b = b[:, None] == b[None, :]
    iu = np.triu_indices(n, 1)
    return float(np.mean(same_a[iu] == same_b[iu]))


@dataclass(frozen=True)
class ClusterReport:
    ufs: tuple[int, ...]
    labels: np.ndarray
    k: int
    method: str
    members: dict[int, tuple[int, ...]]
    other_labels: np.ndarray | None = None
    rand: float | None = None


def cluster_report(partition: Partition, ufs: Sequence[int], other: Partition | None = None) -> ClusterReport:
    """Per-UF labels, members of each cluster and agreement with a second partition."""
    ufs = tuple(int(u) for u in ufs)
    if len(ufs) != len(partition.labels):
        raise DomainError("partition and UF list differ in length")
    members = {c: tuple(u for u, l in zip(ufs, partition.labels) if l == c) for c in range(partition.k)}
    rand = rand_index(partition.labels, other.labels) if other is not None else None
    return ClusterReport(ufs, partition.labels, partition.k, partition.method, members,
                         None if other is None else other.labels, rand)
