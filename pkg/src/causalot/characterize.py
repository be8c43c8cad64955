"""Independent oracles for the causal order on measures.

These routines re-derive ``μ ⪯ ν`` through characterizations other than the
coupling one: brute force over future sets (up-sets), over generators of
future sets, randomized causal test functions, and Minkowski time slices.
They exist to validate :func:`causalot.transport.check_precedence` and are
deliberately exhaustive rather than fast.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .exceptions import CapacityError, InputError, UnsupportedModelError
from .measure import DiscreteMeasure, glue
from .spacetime import MinkowskiModel, SpacetimeModel
from .transport import check_precedence, verify_coupling

__all__ = [
    "MAX_GROUND",
    "UpSetFamily",
    "ConditionResult",
    "VolumeFunctions",
    "PropertyReport",
    "enumerate_future_sets",
    "check_condition_5",
    "check_condition_4",
    "monotone_closure",
    "is_causal_function",
    "falsify_condition_2",
    "check_condition_8_slices",
    "volume_functions",
    "property_suite",
]

#: largest ground set handed to the exponential enumerations
MAX_GROUND = 20


@dataclass(frozen=True)
class UpSetFamily:
    """All up-sets of the causal order restricted to ``ground``.

    Member sets are bitmasks over ``ground`` (bit ``i`` is ``ground[i]``).
    """

    ground: tuple
    sets: tuple

    def as_sets(self) -> list:
        return [self.decode(mask) for mask in self.sets]

    def decode(self, mask: int) -> frozenset:
        return frozenset(p for i, p in enumerate(self.ground) if mask >> i & 1)

    def __len__(self) -> int:
        return len(self.sets)


@dataclass(frozen=True)
class ConditionResult:
    """Verdict of one characterization; ``witness`` is set when it is violated."""

    holds: bool
    witness: object = None

    @property
    def verdict(self) -> str:
        return "holds" if self.holds else "violated"

    def __bool__(self) -> bool:
        return self.holds


def _ground(model: SpacetimeModel, events: Iterable[int]) -> tuple:
    ground = tuple(sorted({model.check_id(p) for p in events}))
    if len(ground) > MAX_GROUND:
        raise CapacityError(
            f"ground set has {len(ground)} events; brute force is limited to {MAX_GROUND}"
        )
    return ground


def _order_masks(model: SpacetimeModel, ground: tuple) -> tuple:
    """Up- and down-closure masks of each ground element within ``ground``."""
    sub = model.causal[np.ix_(ground, ground)]
    weights = 1 << np.arange(len(ground), dtype=object)
    up = [int((sub[i] * weights).sum()) for i in range(len(ground))]
    down = [int((sub[:, i] * weights).sum()) for i in range(len(ground))]
    return up, down


def enumerate_future_sets(model: SpacetimeModel, ground: Iterable[int]) -> UpSetFamily:
    """Every up-set of the induced order on ``ground`` (at most 20 events).

    Backtracks over the elements, propagating "in ⇒ successors in" and
    "out ⇒ predecessors out", so only up-sets are ever produced.
    """
    ground = _ground(model, ground)
    up, down = _order_masks(model, ground)
    n = len(ground)
    found = []

    def walk(i: int, inside: int, outside: int) -> None:
        while i < n and (inside | outside) >> i & 1:
            i += 1
        if i == n:
            found.append(inside)
            return
        if not up[i] & outside:
            walk(i + 1, inside | up[i], outside)
        if not down[i] & inside:
            walk(i + 1, inside, outside | down[i])

    walk(0, 0, 0)
    return UpSetFamily(ground, tuple(sorted(found)))


def _integer_weights(mu: DiscreteMeasure, nu: DiscreteMeasure, ground: tuple) -> tuple:
    """Weights on ``ground`` scaled to integers over a common denominator."""
    den = 1
    for w in list(mu.weights.values()) + list(nu.weights.values()):
        den = den * w.denominator // math.gcd(den, w.denominator)
    a = [int(mu[p] * den) for p in ground]
    b = [int(nu[p] * den) for p in ground]
    return a, b


def _mask_sum(values: list, mask: int) -> int:
    total, i = 0, 0
    while mask:
        if mask & 1:
            total += values[i]
        mask >>= 1
        i += 1
    return total


def check_condition_5(
    model: SpacetimeModel, mu: DiscreteMeasure, nu: DiscreteMeasure
) -> ConditionResult:
    """``μ(F) <= ν(F)`` for every future set ``F`` (brute force).

    Only the trace of ``F`` on ``supp μ ∪ supp ν`` matters, so the up-sets of
    that ground set are enumerated. The witness is the full future set
    ``J⁺(F)`` of the first violating up-set.
    """
    ground = _ground(model, set(mu.support) | set(nu.support))
    a, b = _integer_weights(mu, nu, ground)
    family = enumerate_future_sets(model, ground)
    for mask in family.sets:
        if _mask_sum(a, mask) > _mask_sum(b, mask):
            return ConditionResult(False, model.future_of(family.decode(mask)))
    return ConditionResult(True)


def check_condition_4(
    model: SpacetimeModel, mu: DiscreteMeasure, nu: DiscreteMeasure
) -> ConditionResult:
    """``μ(J⁺(K)) <= ν(J⁺(K))`` for every ``K ⊆ supp μ`` (brute force).

    The witness is the generator ``K``.
    """
    ground = _ground(model, set(mu.support) | set(nu.support))
    a, b = _integer_weights(mu, nu, ground)
    up, _ = _order_masks(model, ground)
    index = {p: i for i, p in enumerate(ground)}
    atoms = [index[p] for p in mu.support]
    k = len(atoms)
    closure = [0] * (1 << k)
    for subset in range(1, 1 << k):
        low = subset & -subset
        closure[subset] = closure[subset ^ low] | up[atoms[low.bit_length() - 1]]
        if _mask_sum(a, closure[subset]) > _mask_sum(b, closure[subset]):
            gen = frozenset(mu.support[i] for i in range(k) if subset >> i & 1)
            return ConditionResult(False, gen)
    return ConditionResult(True)


def monotone_closure(model: SpacetimeModel, g) -> np.ndarray:
    """Smallest causal function above ``g``: ``ĝ(p) = max_{x ⪯ p} g(x)``."""
    g = np.asarray(g, dtype=float)
    if g.shape != (model.n,):
        raise InputError(f"function must have one value per event ({model.n})")
    return np.where(model.causal, g[:, None], -np.inf).max(axis=0)


def is_causal_function(model: SpacetimeModel, f) -> bool:
    """``p ⪯ q ⇒ f(p) <= f(q)``."""
    f = np.asarray(f)
    return bool(np.all(~model.causal | (f[:, None] <= f[None, :])))


def _exact_integral(mu: DiscreteMeasure, f) -> Fraction:
    return sum((w * Fraction(float(f[p])) for p, w in mu.atoms()), Fraction(0))


def falsify_condition_2(
    model: SpacetimeModel,
    mu: DiscreteMeasure,
    nu: DiscreteMeasure,
    trials: int = 1000,
    seed: int = 0,
    functions: Sequence = (),
) -> ConditionResult:
    """Search for a causal function ``f`` with ``∫f dμ > ∫f dν``.

    Candidate functions in ``functions`` are tried first (after monotone
    closure); then ``trials`` random ones, each drawn uniformly on ``[0, 1]``
    from its own stream spawned off ``seed`` and monotone-closed. Integrals
    are compared exactly, so a reported violation is a genuine disproof of
    ``μ ⪯ ν``. Finding none proves nothing.
    """
    streams = np.random.SeedSequence(seed).spawn(trials)

    def candidates():
        yield from functions
        for ss in streams:
            yield np.random.default_rng(ss).random(model.n)

    for g in candidates():
        f = monotone_closure(model, g)
        if _exact_integral(mu, f) > _exact_integral(nu, f):
            return ConditionResult(False, f)
    return ConditionResult(True)


def check_condition_8_slices(
    model: SpacetimeModel, mu: DiscreteMeasure, nu: DiscreteMeasure
) -> ConditionResult:
    """Necessary condition on Minkowski models: ``μ(t >= c) <= ν(t >= c)``.

    The causal future of the slice ``{t = c}`` is the half-space ``{t >= c}``;
    ``c`` ranges over the time coordinates of all atoms. The witness is the
    first violating ``c``.
    """
    if not isinstance(model, MinkowskiModel):
        raise UnsupportedModelError("slice screen needs a Minkowski model")
    mu.validate(model)
    nu.validate(model)
    times = {p: model.coords[p][0] for p in set(mu.support) | set(nu.support)}
    for c in sorted(set(times.values())):
        later = [p for p, t in times.items() if t >= c]
        if mu.mass(later) > nu.mass(later):
            return ConditionResult(False, c)
    return ConditionResult(True)


@dataclass(frozen=True)
class VolumeFunctions:
    """Past and future volume functions of an admissible measure ``eta``.

    ``t_minus[p] = eta(I⁻(p))`` and ``t_plus[p] = -eta(I⁺(p))``.
    """

    eta: DiscreteMeasure
    t_minus: dict
    t_plus: dict


def volume_functions(model: SpacetimeModel, eta: DiscreteMeasure) -> VolumeFunctions:
    eta.validate(model)
    if len(eta) != model.n:
        missing = sorted(set(range(model.n)) - set(eta.support))
        raise InputError(f"eta must charge every event; missing {missing[:5]}")
    chrono = model.chrono
    t_minus = {p: eta.mass(np.flatnonzero(chrono[:, p]).tolist()) for p in range(model.n)}
    t_plus = {p: -eta.mass(np.flatnonzero(chrono[p]).tolist()) for p in range(model.n)}
    for f in (t_minus, t_plus):
        if not is_causal_function(model, [f[p] for p in range(model.n)]):
            raise ArithmeticError("volume function is not causal")  # cannot happen by push-up
    return VolumeFunctions(eta, t_minus, t_plus)


@dataclass
class PropertyReport:
    """Outcome of :func:`property_suite`; each failure is a JSON-ready dict."""

    checked: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        props = {}
        for name, count in self.checked.items():
            bad = [f for f in self.failures if f["property"] == name]
            props[name] = {"checked": count, "pass": not bad}
        return {"properties": props, "counterexamples": self.failures}


def property_suite(
    model: SpacetimeModel, measures: Sequence[DiscreteMeasure]
) -> PropertyReport:
    """Reflexivity, transitivity, antisymmetry and time-reversal duality.

    Transitivity is checked constructively by gluing the two witnesses;
    antisymmetry failures on cyclic models are reported with the cycle
    classification of the model.
    """
    report = PropertyReport()
    if not measures:
        return report
    labels = list(range(len(measures)))
    reverse = model.time_reverse()
    ladder = model.classify_ladder()
    results = {
        (i, j): check_precedence(model, measures[i], measures[j]) for i in labels for j in labels
    }
    report.checked = {"reflexivity": 0, "transitivity": 0, "antisymmetry": 0, "time_reversal": 0}

    for i in labels:
        report.checked["reflexivity"] += 1
        if not results[(i, i)]:
            report.failures.append({"property": "reflexivity", "measures": [i]})

    for i, j in results:
        report.checked["time_reversal"] += 1
        if bool(check_precedence(reverse, measures[j], measures[i])) != bool(results[(i, j)]):
            report.failures.append({"property": "time_reversal", "measures": [i, j]})

    for i, j in combinations(labels, 2):
        report.checked["antisymmetry"] += 1
        if results[(i, j)] and results[(j, i)] and measures[i] != measures[j]:
            report.failures.append(
                {"property": "antisymmetry", "measures": [i, j], "ladder": ladder.value}
            )

    for i in labels:
        for j in labels:
            if not results[(i, j)]:
                continue
            for k in labels:
                if not results[(j, k)]:
                    continue
                report.checked["transitivity"] += 1
                _, omega13 = glue(results[(i, j)].coupling, results[(j, k)].coupling)
                if not verify_coupling(model, omega13, measures[i], measures[k]):
                    report.failures.append({"property": "transitivity", "measures": [i, j, k]})
    return report
