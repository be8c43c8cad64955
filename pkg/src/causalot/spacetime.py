"""Finite spacetime models.

Two kinds of model are supported:

* :class:`MinkowskiModel` -- a point cloud in flat ``1+d`` dimensional
  Minkowski space with the closed future cone as causal relation.
* :class:`CausalGraphModel` -- a weighted directed graph whose edges are
  labelled ``timelike`` (positive proper time) or ``null`` (zero proper time);
  the causal relation is the reflexive-transitive closure of the edges.

Both expose the causal relation ``p ⪯ q`` and the chronological relation
``p ≪ q`` as dense boolean matrices, plus the Lorentzian distance.
"""

from __future__ import annotations

import enum
import heapq
import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .exceptions import InputError, UnsupportedModelError

__all__ = [
    "INF",
    "Event",
    "LadderClass",
    "SpacetimeModel",
    "MinkowskiModel",
    "CausalGraphModel",
    "to_fraction",
    "causally_precedes",
    "chronologically_precedes",
    "horismos",
    "lorentz_distance",
    "future_of",
    "past_of",
    "classify_ladder",
    "topological_order",
    "time_reverse",
]

#: The distinguished value ``+∞`` of the extended half-line. Python floats
#: already saturate (``inf + x == inf``), so no wrapper type is needed.
INF = math.inf

ExtendedReal = Union[Fraction, float]

TIMELIKE = "timelike"
NULL = "null"

# relative band around the light cone in which float decisions are re-done exactly
_CONE_BAND = 1e-9


def to_fraction(value) -> Fraction:
    """Convert ``value`` to an exact :class:`~fractions.Fraction`.

    Strings are parsed exactly (``"0.25"`` and ``"1/4"`` both give ``1/4``);
    floats are converted through their shortest repr, so ``0.1`` becomes
    ``1/10`` rather than the nearest binary fraction.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"not a number: {value!r}")
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise InputError(f"non-finite number: {value!r}")
        return Fraction(repr(float(value)))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"cannot parse number {value!r}") from exc
    raise InputError(f"not a number: {value!r}")


@dataclass(frozen=True)
class Event:
    id: int
    coords: Optional[tuple] = None


class LadderClass(str, enum.Enum):
    NON_CHRONOLOGICAL = "non_chronological"
    NON_CAUSAL_CHRONOLOGICAL = "non_causal_chronological"
    CAUSAL = "causal"


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class SpacetimeModel:
    """Common interface of the finite models.

    Subclasses set ``n`` and implement ``causal`` / ``chrono`` (boolean
    ``n x n`` matrices, ``causal[p, q]`` meaning ``p ⪯ q``) and
    ``distance_table`` (the Lorentzian distance as an ``n x n`` object array).
    """

    n: int

    def check_id(self, p) -> int:
        try:
            p = operator.index(p)
        except TypeError as exc:
            raise InputError(f"event id must be an integer, got {p!r}") from exc
        if not 0 <= p < self.n:
            raise InputError(f"event id {p} out of range for a model with {self.n} events")
        return p

    @property
    def causal(self) -> np.ndarray:
        raise NotImplementedError

    @property
    def chrono(self) -> np.ndarray:
        raise NotImplementedError

    @property
    def distance_table(self) -> np.ndarray:
        raise NotImplementedError

    @property
    def events(self) -> tuple:
        return tuple(Event(i) for i in range(self.n))

    def precedes(self, p, q) -> bool:
        return bool(self.causal[self.check_id(p), self.check_id(q)])

    def chronologically_precedes(self, p, q) -> bool:
        return bool(self.chrono[self.check_id(p), self.check_id(q)])

    def horismos(self, p, q) -> bool:
        p, q = self.check_id(p), self.check_id(q)
        return bool(self.causal[p, q] and not self.chrono[p, q])

    def distance(self, p, q) -> ExtendedReal:
        return self.distance_table[self.check_id(p), self.check_id(q)]

    @cached_property
    def distance_matrix(self) -> np.ndarray:
        """Float copy of the distance table (``inf`` kept as ``inf``)."""
        return _frozen(self.distance_table.astype(float))

    def future_of(self, events: Iterable[int]) -> frozenset:
        idx = [self.check_id(p) for p in events]
        if not idx:
            return frozenset()
        return frozenset(np.flatnonzero(self.causal[idx].any(axis=0)).tolist())

    def past_of(self, events: Iterable[int]) -> frozenset:
        idx = [self.check_id(p) for p in events]
        if not idx:
            return frozenset()
        return frozenset(np.flatnonzero(self.causal[:, idx].any(axis=1)).tolist())

    def classify_ladder(self) -> LadderClass:
        raise NotImplementedError

    def topological_order(self) -> dict:
        raise NotImplementedError

    def time_reverse(self) -> "SpacetimeModel":
        raise NotImplementedError


class MinkowskiModel(SpacetimeModel):
    """Finite set of events in ``1+d`` dimensional Minkowski space.

    ``p ⪯ q`` iff ``Δt >= 0`` and ``Δt² >= |Δx|²`` (closed cone, reflexive);
    ``p ≪ q`` iff ``Δt > 0`` and ``Δt² > |Δx|²``. Relation decisions are
    exact: a float pass classifies most pairs and pairs near the cone are
    re-decided in rational arithmetic.
    """

    def __init__(self, events: Sequence[Sequence], spatial_dim: Optional[int] = None):
        rows = [tuple(to_fraction(c) for c in ev) for ev in events]
        if spatial_dim is None:
            spatial_dim = len(rows[0]) - 1 if rows else 1
        if spatial_dim < 1:
            raise InputError("spatial_dim must be a positive integer")
        for i, row in enumerate(rows):
            if len(row) != spatial_dim + 1:
                raise InputError(
                    f"event {i} has {len(row)} coordinates, expected {spatial_dim + 1}"
                )
        self.spatial_dim = int(spatial_dim)
        self.coords = tuple(rows)
        self.n = len(rows)
        self.points = _frozen(
            np.array([[float(c) for c in row] for row in rows], dtype=float).reshape(
                self.n, spatial_dim + 1
            )
        )
        self._build()

    def _build(self) -> None:
        pts = self.points
        dt = pts[None, :, 0] - pts[:, None, 0]
        dx2 = ((pts[None, :, 1:] - pts[:, None, 1:]) ** 2).sum(axis=2)
        gap = dt * dt - dx2
        scale = dt * dt + dx2
        causal = (dt >= 0) & (gap >= 0)
        chrono = (dt > 0) & (gap > 0)
        near = (np.abs(gap) <= _CONE_BAND * scale) | (np.abs(dt) <= _CONE_BAND * np.sqrt(scale))
        for p, q in zip(*np.nonzero(near)):
            c, k = self._exact_relation(p, q)
            causal[p, q] = c
            chrono[p, q] = k
        self._causal = _frozen(causal)
        self._chrono = _frozen(chrono)
        dist = np.where(causal, np.sqrt(np.clip(gap, 0.0, None)), 0.0)
        dist[~chrono] = 0.0
        table = np.empty((self.n, self.n), dtype=object)
        table[:] = dist
        self._table = _frozen(table)

    def _exact_relation(self, p: int, q: int) -> tuple:
        a, b = self.coords[p], self.coords[q]
        dt = b[0] - a[0]
        dx2 = sum((y - x) ** 2 for x, y in zip(a[1:], b[1:]))
        return (dt >= 0 and dt * dt >= dx2), (dt > 0 and dt * dt > dx2)

    @property
    def causal(self) -> np.ndarray:
        return self._causal

    @property
    def chrono(self) -> np.ndarray:
        return self._chrono

    @property
    def distance_table(self) -> np.ndarray:
        return self._table

    @property
    def events(self) -> tuple:
        return tuple(Event(i, self.coords[i]) for i in range(self.n))

    @cached_property
    def coincident_pairs(self) -> list:
        """Pairs of distinct events sharing identical coordinates.

        Such pairs are related both ways by ``⪯``, which breaks antisymmetry.
        """
        seen: dict = {}
        pairs = []
        for i, row in enumerate(self.coords):
            if row in seen:
                pairs.append((seen[row], i))
            else:
                seen[row] = i
        return pairs

    def classify_ladder(self) -> LadderClass:
        return LadderClass.CAUSAL

    def topological_order(self) -> dict:
        if self.coincident_pairs:
            p, q = self.coincident_pairs[0]
            raise UnsupportedModelError(f"events {p} and {q} have identical coordinates")
        order = sorted(range(self.n), key=lambda i: (self.coords[i][0], i))
        return {p: rank for rank, p in enumerate(order)}

    def time_reverse(self) -> "MinkowskiModel":
        return MinkowskiModel([(-row[0],) + row[1:] for row in self.coords], self.spatial_dim)

    def __repr__(self) -> str:
        return f"MinkowskiModel(n={self.n}, spatial_dim={self.spatial_dim})"


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    weight: Fraction
    kind: str


class CausalGraphModel(SpacetimeModel):
    """Causal structure given by a directed graph.

    Edge weights are exact rationals: ``timelike`` edges carry a positive
    proper time, ``null`` edges carry zero. The Lorentzian distance is the
    longest path weight, and ``+∞`` when the route passes through a timelike
    loop.
    """

    def __init__(self, n: int, edges: Iterable = ()):
        n = operator.index(n)
        if n < 0:
            raise InputError("event count must be non-negative")
        self.n = n
        parsed = []
        for e in edges:
            src, dst, weight, kind = e
            src, dst = self.check_id(src), self.check_id(dst)
            weight = to_fraction(weight)
            if kind not in (TIMELIKE, NULL):
                raise InputError(f"edge kind must be 'timelike' or 'null', got {kind!r}")
            if kind == TIMELIKE and weight <= 0:
                raise InputError(f"timelike edge {src}->{dst} needs a positive weight")
            if kind == NULL and weight != 0:
                raise InputError(f"null edge {src}->{dst} must have weight 0")
            parsed.append(Edge(src, dst, weight, kind))
        self.edges = tuple(parsed)
        self._build()

    def _build(self) -> None:
        n = self.n
        adj = np.zeros((n, n), dtype=bool)
        timelike = np.zeros((n, n), dtype=bool)
        for e in self.edges:
            adj[e.src, e.dst] = True
            if e.kind == TIMELIKE:
                timelike[e.src, e.dst] = True
        reach = adj | np.eye(n, dtype=bool)
        for k in range(n):
            reach |= reach[:, k : k + 1] & reach[k : k + 1, :]
        chrono = (reach.astype(np.int64) @ timelike.astype(np.int64) @ reach.astype(np.int64)) > 0
        self._adj = adj
        self._causal = _frozen(reach)
        self._chrono = _frozen(chrono)

    @property
    def causal(self) -> np.ndarray:
        return self._causal

    @property
    def chrono(self) -> np.ndarray:
        return self._chrono

    @cached_property
    def _components(self) -> tuple:
        if self.n == 0:
            return 0, np.zeros(0, dtype=int)
        ncomp, labels = connected_components(
            csr_matrix(self._adj.astype(np.int8)), directed=True, connection="strong"
        )
        return ncomp, labels

    @cached_property
    def distance_table(self) -> np.ndarray:
        n = self.n
        ncomp, labels = self._components
        loop = np.diag(self._chrono)
        # weight of the heaviest edge between two distinct components
        cross: dict = {}
        for e in self.edges:
            a, b = labels[e.src], labels[e.dst]
            if a != b and (b not in cross.setdefault(a, {}) or cross[a][b] < e.weight):
                cross[a][b] = e.weight
        indeg = [0] * ncomp
        for a, outs in cross.items():
            for b in outs:
                indeg[b] += 1
        order, ready = [], [c for c in range(ncomp) if indeg[c] == 0]
        while ready:
            c = ready.pop()
            order.append(c)
            for b in cross.get(c, {}):
                indeg[b] -= 1
                if indeg[b] == 0:
                    ready.append(b)
        rank = {c: i for i, c in enumerate(order)}

        table = np.empty((n, n), dtype=object)
        table[:] = Fraction(0)
        # p -> q is infinite iff a timelike loop node u has p ⪯ u ⪯ q
        through_loop = (
            self._causal[:, loop].astype(np.int64) @ self._causal[loop, :].astype(np.int64)
        ) > 0
        for p in range(n):
            start = labels[p]
            best = {start: Fraction(0)}
            for c in order[rank[start] :]:
                if c not in best:
                    continue
                for b, w in cross.get(c, {}).items():
                    cand = best[c] + w
                    if b not in best or best[b] < cand:
                        best[b] = cand
            for q in np.flatnonzero(self._causal[p]):
                table[p, q] = INF if through_loop[p, q] else best[labels[q]]
        return _frozen(table)

    def classify_ladder(self) -> LadderClass:
        if np.diag(self._chrono).any():
            return LadderClass.NON_CHRONOLOGICAL
        ncomp, _ = self._components
        if ncomp < self.n or np.diag(self._adj).any():
            return LadderClass.NON_CAUSAL_CHRONOLOGICAL
        return LadderClass.CAUSAL

    def topological_order(self) -> dict:
        if self.classify_ladder() is not LadderClass.CAUSAL:
            raise UnsupportedModelError("topological order needs an acyclic causal graph")
        indeg = self._adj.sum(axis=0).tolist()
        heap = [p for p in range(self.n) if indeg[p] == 0]
        heapq.heapify(heap)
        tau = {}
        while heap:
            p = heapq.heappop(heap)
            tau[p] = len(tau)
            for q in np.flatnonzero(self._adj[p]).tolist():
                indeg[q] -= 1
                if indeg[q] == 0:
                    heapq.heappush(heap, q)
        return tau

    def time_reverse(self) -> "CausalGraphModel":
        return CausalGraphModel(self.n, [(e.dst, e.src, e.weight, e.kind) for e in self.edges])

    def __repr__(self) -> str:
        return f"CausalGraphModel(n={self.n}, edges={len(self.edges)})"


def causally_precedes(model: SpacetimeModel, p: int, q: int) -> bool:
    """``p ⪯ q``: ``q`` lies in the closed causal future of ``p``."""
    return model.precedes(p, q)


def chronologically_precedes(model: SpacetimeModel, p: int, q: int) -> bool:
    """``p ≪ q``: ``q`` lies in the chronological (timelike) future of ``p``."""
    return model.chronologically_precedes(p, q)


def horismos(model: SpacetimeModel, p: int, q: int) -> bool:
    """``p ⪯ q`` but not ``p ≪ q``."""
    return model.horismos(p, q)


def lorentz_distance(model: SpacetimeModel, p: int, q: int) -> ExtendedReal:
    """Lorentzian distance ``d(p, q)``; ``0`` unless ``p ⪯ q``.

    Exact :class:`~fractions.Fraction` on graph models, float on Minkowski
    models, :data:`INF` when a timelike loop lies on a route from p to q.
    """
    return model.distance(p, q)


def future_of(model: SpacetimeModel, events: Iterable[int]) -> frozenset:
    return model.future_of(events)


def past_of(model: SpacetimeModel, events: Iterable[int]) -> frozenset:
    return model.past_of(events)


def classify_ladder(model: SpacetimeModel) -> LadderClass:
    return model.classify_ladder()


def topological_order(model: SpacetimeModel) -> dict:
    """Map event ids to distinct integers increasing along ``⪯``.

    Ties are broken by lowest event id first.
    """
    return model.topological_order()


def time_reverse(model: SpacetimeModel) -> SpacetimeModel:
    return model.time_reverse()
