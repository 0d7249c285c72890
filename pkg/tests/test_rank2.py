import pytest
from hypothesis import given, settings, strategies as st

from logpoisson.chart import LogChart, check_h3
from logpoisson.connection import curvature_is_zero, poisson_curvature
from logpoisson.errors import ShapeError
from logpoisson.poisson import PoissonStructure, Polyvector, check_jacobi, lichnerowicz, wedge
from logpoisson.rank2 import (L1111Params, PoissonTriple, coord_criterion_check, l1111_structure,
                              l1111_triple, lu_uw_check, mc_check, search_w,
                              sl2_curvature_formula, triple_to_theta, xi_closed_check)
from logpoisson.series import LaurentPoly, Ring, Scalar

from helpers import log_canonical_chart, rand_poly, rand_q, rand_vector, seeded, sum_zero_tuple

seeds = st.integers(0, 10**6)


def test_sum_zero_enforced():
    with pytest.raises(ShapeError):
        L1111Params((1, -1, 2, -1))
    with pytest.raises(ShapeError):
        L1111Params((1, -1))


def test_l1111_worked():
    C = l1111_structure(L1111Params((1, -1, 2, -2)))
    c = C.P.log_canonical_constants()
    assert c[(0, 1)] == Scalar(-4) and c[(2, 3)] == Scalar(-2)
    assert check_jacobi(C.P) and check_h3(C) and xi_closed_check(C)
    t = l1111_triple(C)
    assert mc_check(C.P, t)
    broken = PoissonTriple(t.u, Polyvector.zero(C.ring, 1), t.w)
    r = mc_check(C.P, broken)
    assert not r and r.violations[0][0] == "delta(u) = -2 u^v"


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_l1111_family(seed):
    C = l1111_structure(L1111Params(sum_zero_tuple(seeded(seed))))
    assert check_jacobi(C.P)
    assert xi_closed_check(C)
    res = mc_check(C.P, l1111_triple(C))
    assert res.flat and res.curvature_flat


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_mc_equations_match_curvature(seed):
    rng = seeded(seed)
    C = log_canonical_chart(rng, 3, trunc=6)
    t = PoissonTriple(*[rand_vector(rng, C.ring, 1, 1) for _ in range(3)])
    r = mc_check(C.P, t)
    assert r.flat == r.curvature_flat
    K = poisson_curvature(C, triple_to_theta(t))
    assert K == sl2_curvature_formula(C.P, t)


def test_mc_flat_triples_exist_off_l1111():
    # u = v = w = 0 and the Euler-type triple on C^2
    ring = Ring(2, (0, 1), trunc=5)
    P = PoissonStructure.log_canonical(ring, {(0, 1): Scalar(1)})
    z = Polyvector.zero(ring, 1)
    assert mc_check(P, PoissonTriple(z, z, z))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_coord_criterion_agrees(seed):
    rng = seeded(seed)
    C = log_canonical_chart(rng, 3, trunc=6)
    ring = C.ring
    comps = {}
    for k in range(3):
        ex = [0, 0, 0]
        ex[k] = rng.randint(0, 2)
        comps[k] = LaurentPoly(ring, {tuple(ex): rand_q(rng, -2, 2)})
    v = Polyvector.vector(ring, comps)
    r = coord_criterion_check(C.P, v)
    assert r.agrees
    assert r.ok == (not lichnerowicz(C.P, v))


def test_coord_criterion_needs_separation():
    C = log_canonical_chart(seeded(1), 2)
    with pytest.raises(ShapeError):
        coord_criterion_check(C.P, Polyvector.vector(C.ring, {0: C.ring.var(1)}))


def test_quadratic_field_fails_l1111_criterion():
    C = l1111_structure(L1111Params((1, -1, 2, -2)))
    v = Polyvector.vector(C.ring, {0: C.ring.var(0) ** 2})
    r = coord_criterion_check(C.P, v)
    assert not r and r.fails == [(0, 1), (0, 2), (0, 3)] and r.agrees


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_lu_uw_agrees(seed):
    rng = seeded(seed)
    C = l1111_structure(L1111Params(sum_zero_tuple(rng)))
    ring = C.ring
    u = Polyvector.vector(ring, {k: LaurentPoly.constant(ring, rand_q(rng, -1, 1)) for k in range(4)
                                 if rng.random() < 0.5})
    c = C.P.log_canonical_constants()
    b = {}
    for k in range(4):
        # bias towards the solution b_j = c_0j so positive cases occur
        b[k] = c.get((0, k), Scalar(0)) if k and rng.random() < 0.7 else rand_q(rng, -2, 2)
    v = Polyvector.vector(ring, {k: ring.var(k) * b[k] for k in range(4)})
    r = lu_uw_check(C.P, u, v)
    assert r.agrees
    assert r.ok == (not (lichnerowicz(C.P, u) - wedge(u, v)))


def test_lu_uw_shape_checks():
    C = l1111_structure(L1111Params((1, -1, 2, -2)))
    ring = C.ring
    with pytest.raises(ShapeError):
        lu_uw_check(C.P, Polyvector.vector(ring, {0: ring.var(1)}), Polyvector.zero(ring, 1))
    with pytest.raises(ShapeError):
        lu_uw_check(C.P, Polyvector.vector(ring, {0: ring.one()}),
                    Polyvector.vector(ring, {0: ring.var(1)}))


def test_search_w_recovers_zero_for_l1111():
    C = l1111_structure(L1111Params((1, -1, 2, -2)))
    t = l1111_triple(C)
    particular, kernel = search_w(C.P, t.u, t.v, 1)
    assert particular is not None
    # every returned w completes the triple
    for w in [particular] + kernel:
        ring = w.ring
        P = C.P.with_ring(ring)
        tt = PoissonTriple(t.u.in_ring(ring), t.v.in_ring(ring), w if w is particular else w + particular)
        assert mc_check(P, tt)
