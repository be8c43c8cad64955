import math
from fractions import Fraction as F
from itertools import product as pairs

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from causalot import (
    INF,
    CausalGraphModel,
    DiscreteMeasure,
    InputError,
    MinkowskiModel,
    check_condition_5,
    check_precedence,
    diagonal,
    dirac,
    glue,
    lorentz_wasserstein,
    max_violation,
    minimize_certificate,
    product,
    verify_certificate,
    verify_coupling,
)
from causalot.demos import geometric, hegerfeldt

from _instances import dags, digraphs, future_measure, measures, random_dag, random_graph, random_measure, random_minkowski

TWO_CYCLE = CausalGraphModel(2, [(0, 1, 1, "timelike"), (1, 0, 1, "timelike")])
HALF = DiscreteMeasure({0: F(1, 2), 1: F(1, 2)})


def lw_reference(model, mu, nu, s=1.0):
    """LW_s via scipy's HiGHS on the dense LP; +inf detected by a mass LP."""
    left, right = list(mu.support), list(nu.support)
    m, n = len(left), len(right)
    J = model.causal
    D = model.distance_matrix
    a_eq = np.zeros((m + n, m * n))
    for i in range(m):
        a_eq[i, i * n : (i + 1) * n] = 1
    for j in range(n):
        a_eq[m + j, j::n] = 1
    b_eq = [float(mu[p]) for p in left] + [float(nu[q]) for q in right]
    bounds = [(0, None) if J[p, q] else (0, 0) for p in left for q in right]
    infinite = np.array([1.0 if J[p, q] and math.isinf(D[p, q]) else 0.0 for p in left for q in right])
    res = linprog(-infinite, A_eq=a_eq, b_eq=b_eq, bounds=bounds, method="highs")
    if res.status == 2:
        return 0.0
    assert res.status == 0
    if -res.fun > 1e-9:
        return INF
    bounds = [(0, None) if J[p, q] and not math.isinf(D[p, q]) else (0, 0) for p in left for q in right]
    cost = np.array([D[p, q] ** s if J[p, q] and not math.isinf(D[p, q]) else 0.0 for p in left for q in right])
    res = linprog(-cost, A_eq=a_eq, b_eq=b_eq, bounds=bounds, method="highs")
    assert res.status == 0
    return max(-res.fun, 0.0) ** (1 / s)


class TestCheckPrecedence:
    def test_dirac_pair(self):
        m = MinkowskiModel([(0, 0), (2, 1)])
        r = check_precedence(m, dirac(0), dirac(1))
        assert r.feasible and r.status == "feasible"
        assert r.coupling.entries == {(0, 1): 1}
        assert not check_precedence(m, dirac(1), dirac(0))

    def test_reflexive(self, rng):
        for _ in range(20):
            g = random_graph(rng, 8)
            mu = random_measure(rng, 8)
            r = check_precedence(g, mu, mu)
            assert r.feasible
            assert verify_coupling(g, diagonal(mu), mu, mu)

    def test_minkowski_infeasible_certificate(self):
        m = MinkowskiModel([(0, 0), (1, 0), (1, 5)])
        nu = DiscreteMeasure({1: F(1, 2), 2: F(1, 2)})
        r = check_precedence(m, dirac(0), nu)
        assert not r.feasible and r.status == "infeasible"
        cert = r.certificate
        assert cert.generator == {0}
        assert cert.violating_set == m.future_of([0]) == {0, 1}
        assert (cert.mu_mass, cert.nu_mass) == (1, F(1, 2))
        assert verify_certificate(m, cert, dirac(0), nu)
        assert check_condition_5(m, dirac(0), nu).witness == cert.violating_set

    def test_hegerfeldt(self):
        inst = hegerfeldt("0.01")
        mu, nu = inst.measures["mu"], inst.measures["nu"]
        r = check_precedence(inst.model, mu, nu)
        assert not r.feasible
        assert r.certificate.violating_set == inst.model.future_of(mu.support)
        assert r.certificate.nu_mass == F(99, 100)

    def test_invalid_event(self):
        with pytest.raises(InputError):
            check_precedence(CausalGraphModel(2), dirac(0), dirac(5))

    def test_certificate_indicator_is_causal_violator(self):
        m = MinkowskiModel([(0, 0), (1, 0), (1, 5)])
        nu = DiscreteMeasure({1: F(1, 2), 2: F(1, 2)})
        cert = check_precedence(m, dirac(0), nu).certificate
        phi = cert.indicator(m.n)
        for p, q in pairs(range(m.n), repeat=2):
            if m.precedes(p, q):
                assert phi[p] <= phi[q]
        assert dirac(0).integrate(phi) > nu.integrate(phi)

    def test_minimize_certificate(self):
        inst = hegerfeldt("0.5")
        mu, nu = inst.measures["mu"], inst.measures["nu"]
        cert = check_precedence(inst.model, mu, nu).certificate
        small = minimize_certificate(inst.model, cert, mu, nu)
        assert verify_certificate(inst.model, small, mu, nu)
        assert small.generator < cert.generator
        for p in small.generator:
            f = inst.model.future_of(small.generator - {p})
            assert mu.mass(f) <= nu.mass(f)


class TestVerifyCoupling:
    def test_examples(self):
        m = CausalGraphModel(2)
        assert verify_coupling(m, diagonal(HALF), HALF, HALF)
        assert not verify_coupling(m, product(dirac(0), dirac(1)), dirac(0), dirac(1))
        assert not verify_coupling(m, diagonal(HALF), HALF, dirac(0))


@settings(max_examples=80, deadline=None)
@given(st.data(), digraphs(max_n=7))
def test_flow_agrees_with_upset_oracle(data, g):
    mu = data.draw(measures(g.n))
    nu = data.draw(measures(g.n))
    r = check_precedence(g, mu, nu)
    assert r.feasible == check_condition_5(g, mu, nu).holds
    if r.feasible:
        assert verify_coupling(g, r.coupling, mu, nu)
    else:
        assert verify_certificate(g, r.certificate, mu, nu)


@settings(max_examples=60, deadline=None)
@given(st.data(), dags(max_n=7))
def test_transitivity_and_antisymmetry(data, g):
    m1, m2, m3 = (data.draw(measures(g.n)) for _ in range(3))
    r12, r23 = check_precedence(g, m1, m2), check_precedence(g, m2, m3)
    if r12 and r23:
        _, w13 = glue(r12.coupling, r23.coupling)
        assert verify_coupling(g, w13, m1, m3)
    if r12 and check_precedence(g, m2, m1):
        assert m1 == m2


def test_antisymmetry_fails_on_timelike_cycle():
    assert check_precedence(TWO_CYCLE, dirac(0), dirac(1))
    assert check_precedence(TWO_CYCLE, dirac(1), dirac(0))


class TestLorentzWasserstein:
    def test_dirac_identity(self):
        m = MinkowskiModel([(0, 0), (5, 3), (2, 0)])
        for s in (0.25, 0.5, 1.0):
            assert lorentz_wasserstein(m, dirac(0), dirac(1), s).value == pytest.approx(4)
            assert lorentz_wasserstein(m, dirac(0), dirac(2), s).value == pytest.approx(2)

    def test_non_precedent_is_zero(self):
        m = MinkowskiModel([(0, 0), (1, 2)])
        res = lorentz_wasserstein(m, dirac(0), dirac(1))
        assert res.value == 0 and res.coupling is None

    @pytest.mark.parametrize("n", [1, 2, 3, 5, 10])
    def test_geometric_truncation(self, n):
        inst = geometric(n)
        # the coupling is forced (Dirac first marginal): Σ 2^-i 2^i / (1 - 2^-N)
        expected = sum(F(2**i, 2**i) for i in range(1, n + 1)) / (1 - F(1, 2**n))
        value = lorentz_wasserstein(inst.model, inst.measures["mu"], inst.measures["nu"]).value
        assert value == pytest.approx(float(expected), rel=1e-12)

    def test_geometric_general_s(self):
        s = 0.5
        inst = geometric(4, s)
        # d^s = (2^{i/s})^s = 2^i, so the s-moment is the same partial sum
        moment = 4 / (1 - 2**-4)
        value = lorentz_wasserstein(inst.model, inst.measures["mu"], inst.measures["nu"], s).value
        assert value == pytest.approx(moment ** (1 / s), rel=1e-9)

    def test_self_distance(self, rng):
        for _ in range(10):
            g = random_dag(rng, 8)
            mu = random_measure(rng, 8)
            assert lorentz_wasserstein(g, mu, mu).value == 0

    def test_infinite_on_timelike_cycle(self):
        assert lorentz_wasserstein(TWO_CYCLE, HALF, HALF).value == INF
        assert lorentz_wasserstein(TWO_CYCLE, dirac(0), dirac(0)).value == INF

    def test_infinite_arc_that_cannot_carry_mass(self):
        # 0 -> 1 <-> 2 loop; 0 -> 3. μ = δ0, ν = δ3: the only route avoids the loop
        g = CausalGraphModel(4, [(0, 1, 1, "timelike"), (1, 2, 1, "timelike"), (2, 1, 1, "timelike"), (0, 3, 5, "timelike")])
        assert lorentz_wasserstein(g, dirac(0), dirac(3)).value == 5
        # μ = ½δ0 + ½δ3, ν = ½δ2 + ½δ3: (0,2) has d = inf but is forced to carry ½
        mu = DiscreteMeasure({0: F(1, 2), 3: F(1, 2)})
        nu = DiscreteMeasure({2: F(1, 2), 3: F(1, 2)})
        assert lorentz_wasserstein(g, mu, nu).value == INF

    def test_s_out_of_range(self):
        m = MinkowskiModel([(0, 0)])
        for s in (0, -1, 1.5):
            with pytest.raises(InputError):
                lorentz_wasserstein(m, dirac(0), dirac(0), s)

    def test_matches_linprog_reference(self, rng):
        checked = 0
        for trial in range(80):
            kind = trial % 3
            if kind == 0:
                model = random_dag(rng, 9)
            elif kind == 1:
                model = random_graph(rng, 7, edge_prob=0.2)
            else:
                model = random_minkowski(rng, 9)
            mu = random_measure(rng, model.n, 5)
            nu = future_measure(rng, model, mu) if trial % 2 else random_measure(rng, model.n, 5)
            s = (1.0, 0.5, 0.8)[trial % 3]
            got = lorentz_wasserstein(model, mu, nu, s).value
            ref = lw_reference(model, mu, nu, s)
            if math.isinf(ref):
                assert got == INF
            else:
                assert got == pytest.approx(ref, rel=1e-9, abs=1e-9)
            checked += got > 0
        assert checked > 10

    def test_optimal_coupling_is_causal_and_positive_on_chronology(self, rng):
        for _ in range(30):
            g = random_dag(rng, 8)
            mu = random_measure(rng, 8)
            nu = future_measure(rng, g, mu)
            res = lorentz_wasserstein(g, mu, nu)
            if 0 < res.value < INF:
                assert check_precedence(g, mu, nu)
                assert all(g.precedes(p, q) for p, q in res.coupling)
                assert sum(w for (p, q), w in res.coupling.items() if g.chrono[p, q]) > 0
                assert lorentz_wasserstein(g, nu, mu).value == 0

    def test_monotone_under_added_arcs(self, rng):
        for _ in range(20):
            g = random_dag(rng, 7, edge_prob=0.3)
            extra = [(e.src, e.dst, e.weight, e.kind) for e in g.edges]
            a, b = (int(x) for x in rng.choice(7, 2, replace=False))
            bigger = CausalGraphModel(7, extra + [(a, b, 1, "timelike")])
            if bigger.classify_ladder().value != "causal":
                continue
            mu, nu = random_measure(rng, 7), random_measure(rng, 7)
            small_v = lorentz_wasserstein(g, mu, nu).value
            if small_v > 0:
                assert lorentz_wasserstein(bigger, mu, nu).value >= small_v - 1e-9


class TestMaxViolation:
    def test_dag_zero(self, rng):
        for _ in range(10):
            g = random_dag(rng, 8)
            assert max_violation(g, random_measure(rng, 8, 6)) == 0

    def test_two_cycle(self):
        assert max_violation(TWO_CYCLE, HALF) == 1
        # brute force: the 2x2 polytope with uniform marginals has vertices
        # diag (off-diagonal mass 0) and anti-diag (mass 1)
        vertices = [{(0, 0): F(1, 2), (1, 1): F(1, 2)}, {(0, 1): F(1, 2), (1, 0): F(1, 2)}]
        assert max(sum(w for (p, q), w in v.items() if p != q) for v in vertices) == 1

    def test_dirac(self):
        assert max_violation(TWO_CYCLE, dirac(0)) == 0

    def test_exact_type(self):
        assert isinstance(max_violation(TWO_CYCLE, DiscreteMeasure({0: F(1, 3), 1: F(2, 3)})), F)
        assert max_violation(TWO_CYCLE, DiscreteMeasure({0: F(1, 3), 1: F(2, 3)})) == F(2, 3)


def test_reverse_triangle(rng):
    tested = 0
    for _ in range(60):
        g = random_dag(rng, 8)
        m1 = random_measure(rng, 8)
        m2 = future_measure(rng, g, m1)
        m3 = future_measure(rng, g, m2)
        if check_precedence(g, m1, m2) and check_precedence(g, m2, m3):
            lw = lambda a, b: lorentz_wasserstein(g, a, b).value  # noqa: E731
            assert lw(m1, m2) + lw(m2, m3) <= lw(m1, m3) + 1e-9
            tested += 1
    assert tested == 60


def test_finite_models_finite_lw(rng):
    for _ in range(20):
        m = random_minkowski(rng, 10)
        mu, nu = random_measure(rng, 10), random_measure(rng, 10)
        assert math.isfinite(lorentz_wasserstein(m, mu, nu).value)
