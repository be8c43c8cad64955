"""Finitely supported probability measures with exact rational weights.

Measures live on event ids of a model; they do not hold a reference to the
model itself, so the same measure can be tested on a model and on its time
reversal.
"""

from __future__ import annotations

import operator
from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .exceptions import InputError
from .spacetime import SpacetimeModel, to_fraction

__all__ = [
    "DiscreteMeasure",
    "Coupling",
    "TripleMeasure",
    "dirac",
    "pushforward",
    "product",
    "marginals",
    "diagonal",
    "glue",
]


def _clean(weights: Mapping, what: str) -> dict:
    out = {}
    for key, w in weights.items():
        w = to_fraction(w)
        if w < 0:
            raise InputError(f"negative {what} weight {w} at {key!r}")
        if w:
            out[key] = w
    total = sum(out.values(), Fraction(0))
    if total != 1:
        raise InputError(f"{what} weights sum to {total}, expected exactly 1")
    return out


class DiscreteMeasure:
    """Probability measure ``{event id: weight}`` with weights summing to 1.

    Zero weights are dropped on construction; negative weights or a total
    other than exactly 1 raise :class:`InputError`.
    """

    __slots__ = ("_w",)

    def __init__(self, weights: Mapping[int, object] | Iterable = ()):
        if not isinstance(weights, Mapping):
            items = list(weights)
            ids = [p for p, _ in items]
            if len(set(ids)) != len(ids):
                raise InputError("duplicate event id in measure atoms")
            weights = dict(items)
        keyed = {}
        for p, w in weights.items():
            if isinstance(p, bool):
                raise InputError(f"event id must be a non-negative integer, got {p!r}")
            try:
                p = operator.index(p)
            except TypeError as exc:
                raise InputError(f"event id must be a non-negative integer, got {p!r}") from exc
            if p < 0:
                raise InputError(f"event id must be a non-negative integer, got {p!r}")
            keyed[p] = w
        weights = keyed
        self._w = dict(sorted(_clean(weights, "measure").items()))

    @property
    def weights(self) -> dict:
        return dict(self._w)

    @property
    def support(self) -> tuple:
        return tuple(self._w)

    def atoms(self) -> list:
        return list(self._w.items())

    def __getitem__(self, p: int) -> Fraction:
        return self._w.get(p, Fraction(0))

    def __len__(self) -> int:
        return len(self._w)

    def __iter__(self):
        return iter(self._w)

    def mass(self, events: Iterable[int]) -> Fraction:
        return sum((self._w.get(p, 0) for p in set(events)), Fraction(0))

    def integrate(self, f) -> object:
        """``∫ f dμ`` for ``f`` indexable by event id."""
        return sum(w * f[p] for p, w in self._w.items())

    def validate(self, model: SpacetimeModel) -> "DiscreteMeasure":
        for p in self._w:
            model.check_id(p)
        return self

    def __eq__(self, other) -> bool:
        return isinstance(other, DiscreteMeasure) and self._w == other._w

    def __hash__(self) -> int:
        return hash(tuple(self._w.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{p}: {w}" for p, w in self._w.items())
        return f"DiscreteMeasure({{{body}}})"


class Coupling:
    """Joint probability measure on pairs of events, stored sparsely."""

    __slots__ = ("_w",)

    def __init__(self, entries: Mapping[tuple, object] | Iterable = ()):
        if not isinstance(entries, Mapping):
            acc: dict = {}
            for p, q, w in entries:
                if (p, q) in acc:
                    raise InputError(f"duplicate coupling entry ({p}, {q})")
                acc[(p, q)] = w
            entries = acc
        entries = {(operator.index(p), operator.index(q)): w for (p, q), w in entries.items()}
        self._w = dict(sorted(_clean(entries, "coupling").items()))

    @property
    def entries(self) -> dict:
        return dict(self._w)

    def items(self):
        return self._w.items()

    def __getitem__(self, pq: tuple) -> Fraction:
        return self._w.get(pq, Fraction(0))

    def __len__(self) -> int:
        return len(self._w)

    def mass(self, pairs) -> Fraction:
        """Mass of the set of pairs accepted by the predicate ``pairs``."""
        return sum((w for pq, w in self._w.items() if pairs(*pq)), Fraction(0))

    def marginals(self) -> tuple:
        first: dict = defaultdict(Fraction)
        second: dict = defaultdict(Fraction)
        for (p, q), w in self._w.items():
            first[p] += w
            second[q] += w
        return DiscreteMeasure(first), DiscreteMeasure(second)

    def __eq__(self, other) -> bool:
        return isinstance(other, Coupling) and self._w == other._w

    def __hash__(self) -> int:
        return hash(tuple(self._w.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{pq}: {w}" for pq, w in self._w.items())
        return f"Coupling({{{body}}})"


class TripleMeasure:
    """Probability measure on event triples, produced by :func:`glue`."""

    __slots__ = ("_w",)

    def __init__(self, entries: Mapping[tuple, object]):
        self._w = dict(sorted(_clean(entries, "triple measure").items()))

    @property
    def entries(self) -> dict:
        return dict(self._w)

    def project(self, i: int, j: int) -> Coupling:
        """Pushforward along the projection onto coordinates ``i`` and ``j``."""
        acc: dict = defaultdict(Fraction)
        for key, w in self._w.items():
            acc[(key[i], key[j])] += w
        return Coupling(acc)

    def __repr__(self) -> str:
        return f"TripleMeasure({self._w!r})"


def dirac(p: int, model: Optional[SpacetimeModel] = None) -> DiscreteMeasure:
    if model is not None:
        p = model.check_id(p)
    return DiscreteMeasure({p: 1})


def pushforward(f, mu: DiscreteMeasure) -> DiscreteMeasure:
    """Image measure ``f_* μ``; ``f`` is a mapping or a callable on event ids."""
    acc: dict = defaultdict(Fraction)
    for p, w in mu.atoms():
        try:
            image = f[p] if isinstance(f, Mapping) else f(p)
        except (KeyError, IndexError) as exc:
            raise InputError(f"map undefined on atom {p}") from exc
        acc[image] += w
    return DiscreteMeasure(acc)


def product(mu: DiscreteMeasure, nu: DiscreteMeasure) -> Coupling:
    return Coupling({(p, q): a * b for p, a in mu.atoms() for q, b in nu.atoms()})


def marginals(omega: Coupling) -> tuple:
    return omega.marginals()


def diagonal(mu: DiscreteMeasure) -> Coupling:
    """Pushforward of ``μ`` along ``p ↦ (p, p)``."""
    return Coupling({(p, p): w for p, w in mu.atoms()})


def glue(omega12: Coupling, omega23: Coupling) -> tuple:
    """Compose two couplings that share their middle marginal.

    Uses the conditional product
    ``ω123(p, q, r) = ω12(p, q) · ω23(q, r) / m(q)`` where ``m`` is the shared
    marginal. Returns ``(ω123, ω13)`` with ``ω13`` the outer projection.
    """
    _, middle = omega12.marginals()
    middle2, _ = omega23.marginals()
    if middle != middle2:
        for q in sorted(set(middle.support) | set(middle2.support)):
            if middle[q] != middle2[q]:
                raise InputError(
                    f"marginal mismatch at atom {q}: {middle[q]} vs {middle2[q]}"
                )
    outgoing: dict = defaultdict(list)
    for (q, r), w in omega23.items():
        outgoing[q].append((r, w))
    triple = {}
    for (p, q), w in omega12.items():
        m = middle[q]
        for r, v in outgoing[q]:
            triple[(p, q, r)] = w * v / m
    t = TripleMeasure(triple)
    return t, t.project(0, 2)
