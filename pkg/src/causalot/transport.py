"""Causal couplings, infeasibility certificates and Lorentz-Wasserstein distance.

``μ ⪯ ν`` holds iff some coupling of ``μ`` and ``ν`` is carried by the causal
relation. On finite supports this is a bipartite max-flow question::

    source --μ(p)--> p --(p ⪯ q)--> q --ν(q)--> sink

The relation holds iff the max flow equals 1; otherwise the source side of a
minimum cut yields a set ``K`` of μ-atoms whose causal future ``F = J⁺(K)``
satisfies ``μ(F) > ν(F)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exceptions import InputError
from .flow import FlowNetwork
from .measure import Coupling, DiscreteMeasure
from .simplex import TransportSimplex
from .spacetime import INF, SpacetimeModel

__all__ = [
    "Certificate",
    "PrecedenceResult",
    "LWResult",
    "check_precedence",
    "verify_coupling",
    "verify_certificate",
    "minimize_certificate",
    "lorentz_wasserstein",
    "max_violation",
]

#: residual tolerance on the marginals of a float LP solution
FEASIBILITY_TOL = 1e-9


@dataclass(frozen=True)
class Certificate:
    """Witness that ``μ ⪯ ν`` fails: a future set ``F = J⁺(K)`` with ``μ(F) > ν(F)``.

    The indicator ``𝟙_F`` is a causal function with ``∫𝟙_F dμ > ∫𝟙_F dν``.
    """

    generator: frozenset
    violating_set: frozenset
    mu_mass: Fraction
    nu_mass: Fraction

    def indicator(self, n: int) -> list:
        return [1 if p in self.violating_set else 0 for p in range(n)]


@dataclass(frozen=True)
class PrecedenceResult:
    feasible: bool
    coupling: Optional[Coupling] = None
    certificate: Optional[Certificate] = None

    @property
    def status(self) -> str:
        return "feasible" if self.feasible else "infeasible"

    def __bool__(self) -> bool:
        return self.feasible


@dataclass(frozen=True)
class LWResult:
    """Value of ``LW_s`` with the coupling attaining it (if finite and positive)."""

    value: float
    s: float
    coupling: Optional[dict] = None

    def __float__(self) -> float:
        return float(self.value)


class _PrecedenceFlow:
    """The bipartite network for one ``(μ, ν)`` pair, solved exactly."""

    def __init__(self, model: SpacetimeModel, mu: DiscreteMeasure, nu: DiscreteMeasure):
        mu.validate(model)
        nu.validate(model)
        self.model, self.mu, self.nu = model, mu, nu
        self.left = list(mu.support)
        self.right = list(nu.support)
        m = len(self.left)
        self.source, self.sink = m + len(self.right), m + len(self.right) + 1
        net = FlowNetwork(m + len(self.right) + 2)
        for i, p in enumerate(self.left):
            net.add_edge(self.source, i, mu[p])
        self.arcs = {}
        causal = model.causal
        for i, p in enumerate(self.left):
            for j, q in enumerate(self.right):
                if causal[p, q]:
                    # total mass is 1, so capacity 1 never binds
                    self.arcs[(i, j)] = net.add_edge(i, m + j, Fraction(1))
        for j, q in enumerate(self.right):
            net.add_edge(m + j, self.sink, nu[q])
        self.net = net
        self.value = net.max_flow(self.source, self.sink)

    @property
    def feasible(self) -> bool:
        return self.value == 1

    def coupling(self) -> Coupling:
        entries = {}
        for (i, j), e in self.arcs.items():
            f = self.net.flow(e)
            if f:
                entries[(self.left[i], self.right[j])] = f
        return Coupling(entries)

    def certificate(self) -> Certificate:
        reach = self.net.residual_reachable(self.source)
        k = frozenset(p for i, p in enumerate(self.left) if i in reach)
        return _certificate(self.model, self.mu, self.nu, k)

    def arc_can_carry_mass(self, i: int, j: int) -> bool:
        """Whether some causal coupling puts positive mass on cell ``(i, j)``.

        True iff the arc already carries flow, or the residual network has a
        path from its head back to its tail (a cycle through the arc along
        which mass can be rerouted).
        """
        e = self.arcs[(i, j)]
        if self.net.flow(e):
            return True
        return i in self.net.residual_reachable(len(self.left) + j)


def _certificate(model, mu, nu, k) -> Certificate:
    f = model.future_of(k)
    return Certificate(frozenset(k), f, mu.mass(f), nu.mass(f))


def check_precedence(
    model: SpacetimeModel, mu: DiscreteMeasure, nu: DiscreteMeasure
) -> PrecedenceResult:
    """Decide ``μ ⪯ ν`` exactly.

    Returns the flow coupling when feasible. Otherwise returns the min-cut
    certificate: ``K`` is the set of μ-atoms on the source side of the
    canonical (residual-reachable) minimum cut.
    """
    flow = _PrecedenceFlow(model, mu, nu)
    if flow.feasible:
        return PrecedenceResult(True, coupling=flow.coupling())
    return PrecedenceResult(False, certificate=flow.certificate())


def verify_coupling(
    model: SpacetimeModel, omega: Coupling, mu: DiscreteMeasure, nu: DiscreteMeasure
) -> bool:
    """Exact check that ``ω`` couples ``μ`` and ``ν`` and lives on ``J⁺``."""
    first, second = omega.marginals()
    if first != mu or second != nu:
        return False
    causal = model.causal
    for (p, q), _ in omega.items():
        if not (0 <= p < model.n and 0 <= q < model.n) or not causal[p, q]:
            return False
    return True


def verify_certificate(
    model: SpacetimeModel, cert: Certificate, mu: DiscreteMeasure, nu: DiscreteMeasure
) -> bool:
    """Re-check a certificate from scratch against the model and measures."""
    f = cert.violating_set
    return (
        model.future_of(cert.generator) == f
        and model.future_of(f) == f
        and mu.mass(f) == cert.mu_mass
        and nu.mass(f) == cert.nu_mass
        and cert.mu_mass > cert.nu_mass
    )


def minimize_certificate(
    model: SpacetimeModel, cert: Certificate, mu: DiscreteMeasure, nu: DiscreteMeasure
) -> Certificate:
    """Greedily drop generator atoms while the violation persists.

    Best effort: the result is minimal under single-atom removal, not
    necessarily of minimum size.
    """
    k = set(cert.generator)
    for p in sorted(cert.generator, reverse=True):
        trial = k - {p}
        f = model.future_of(trial)
        if mu.mass(f) > nu.mass(f):
            k = trial
    return _certificate(model, mu, nu, frozenset(k))


def _check_s(s) -> float:
    s = float(s)
    if not 0 < s <= 1:
        raise InputError(f"exponent s must lie in (0, 1], got {s}")
    return s


def _power(d: float, s: float) -> float:
    return 0.0 if d == 0 else d if s == 1 else d**s


def lorentz_wasserstein(
    model: SpacetimeModel, mu: DiscreteMeasure, nu: DiscreteMeasure, s: float = 1.0
) -> LWResult:
    """``LW_s(μ, ν)``: the largest ``(∫ d^s dω)^{1/s}`` over causal couplings ``ω``.

    Zero when no causal coupling exists. ``+∞`` when some causal coupling can
    put positive mass on a pair at infinite distance; this is decided on the
    exact flow before any LP is set up. Otherwise the maximum-cost
    transportation LP is solved by :class:`TransportSimplex`, warm-started from
    the exact feasibility flow.
    """
    s = _check_s(s)
    flow = _PrecedenceFlow(model, mu, nu)
    if not flow.feasible:
        return LWResult(0.0, s)
    left, right = flow.left, flow.right
    dist = model.distance_matrix
    for (i, j) in flow.arcs:
        if math.isinf(dist[left[i], right[j]]) and flow.arc_can_carry_mass(i, j):
            return LWResult(INF, s)

    allowed = [[(i, j) in flow.arcs for j in range(len(right))] for i in range(len(left))]
    cost = [
        [
            _power(dist[p, q], s) if allowed[i][j] and not math.isinf(dist[p, q]) else 0.0
            for j, q in enumerate(right)
        ]
        for i, p in enumerate(left)
    ]
    # infinite-distance cells that cannot carry mass are closed off
    for (i, j) in flow.arcs:
        if math.isinf(dist[left[i], right[j]]):
            allowed[i][j] = False
    start = {ij: float(flow.net.flow(e)) for ij, e in flow.arcs.items() if flow.net.flow(e)}
    lp = TransportSimplex(cost, allowed, start).solve()
    plan = lp.flow()
    _check_marginals(plan, [float(mu[p]) for p in left], [float(nu[q]) for q in right])
    optimum = max(lp.objective, 0.0)
    coupling = {(left[i], right[j]): x for (i, j), x in plan.items()}
    return LWResult(optimum ** (1.0 / s), s, coupling)


def _check_marginals(plan: dict, supply: list, demand: list) -> None:
    rows = [0.0] * len(supply)
    cols = [0.0] * len(demand)
    for (i, j), x in plan.items():
        rows[i] += x
        cols[j] += x
    worst = max(
        max((abs(a - b) for a, b in zip(rows, supply)), default=0.0),
        max((abs(a - b) for a, b in zip(cols, demand)), default=0.0),
    )
    if worst > FEASIBILITY_TOL:
        raise ArithmeticError(f"LP solution violates marginals by {worst:.3g}")


def max_violation(model: SpacetimeModel, mu: DiscreteMeasure) -> Fraction:
    """Largest off-diagonal mass of a causal coupling of ``μ`` with itself.

    Solved exactly in rational arithmetic. Zero on causal models, where the
    diagonal coupling is the only causal coupling of ``μ`` with itself.
    """
    flow = _PrecedenceFlow(model, mu, mu)
    atoms = flow.left
    m = len(atoms)
    allowed = [[(i, j) in flow.arcs for j in range(m)] for i in range(m)]
    cost = [[Fraction(int(i != j)) for j in range(m)] for i in range(m)]
    start = {(i, i): mu[p] for i, p in enumerate(atoms)}
    lp = TransportSimplex(cost, allowed, start, tol=0).solve()
    return lp.objective
