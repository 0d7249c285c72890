import pytest
from hypothesis import given, settings, strategies as st

from logpoisson.chart import (LogChart, check_h3, delta_monomial_check, log_hamiltonian,
                              log_hamiltonians, log_poincare_primitive, residues,
                              vector_field_class)
from logpoisson.errors import NotClosedError, ResidueError, ShapeError
from logpoisson.poisson import LogForm, PoissonStructure, Polyvector, lichnerowicz
from logpoisson.series import LaurentPoly, Ring, Scalar, parse_poly

from helpers import log_canonical_chart, rand_poly, rand_q, seeded

seeds = st.integers(0, 10**6)


def test_c2_log_hamiltonians():
    ring = Ring(2, (0, 1), trunc=4)
    C = LogChart(PoissonStructure.log_canonical(ring, {(0, 1): Scalar(1)}))
    X1, X2 = log_hamiltonians(C)
    z1, z2 = ring.gens()
    assert X1 == Polyvector.vector(ring, {1: z2})
    assert X2 == Polyvector.vector(ring, {0: -z1})
    assert check_h3(C)
    assert vector_field_class(X1) == "holomorphic"


def test_h3_failure_names_component():
    ring = Ring(2, (0,), trunc=4)
    C = LogChart(PoissonStructure(Polyvector(ring, 2, {(0, 1): ring.one()})))
    v = check_h3(C)
    assert not v and v.where == 0 and v.note == "pole"
    assert vector_field_class(log_hamiltonian(C, 0)) == "genuine_pole"


def test_h3_tangency_failure():
    # sigma = z1 d1^d2 with z2 logarithmic: X_z2 = -z1/z2 * ... has a pole
    ring = Ring(2, (0, 1), trunc=4)
    z1, z2 = ring.gens()
    C = LogChart(PoissonStructure(Polyvector(ring, 2, {(0, 1): z1})))
    assert not check_h3(C)


def test_log_index_range():
    C = log_canonical_chart(seeded(0), 2)
    with pytest.raises(ShapeError):
        log_hamiltonian(C, 2)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(2, 4))
def test_log_hamiltonians_are_poisson(seed, n):
    C = log_canonical_chart(seeded(seed), n)
    assert check_h3(C)
    for X in log_hamiltonians(C):
        assert not lichnerowicz(C.P, X)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(2, 4))
def test_delta_of_log_monomials(seed, n):
    rng = seeded(seed)
    C = log_canonical_chart(rng, n, trunc=10)
    alpha = tuple(rng.randint(0, 3) for _ in range(n))
    assert delta_monomial_check(C, alpha)


def test_delta_monomial_shape():
    ring = Ring(3, (0, 1), trunc=6)
    C = LogChart(PoissonStructure.log_canonical(ring, {(0, 1): Scalar(2), (1, 2): Scalar(1)}))
    assert delta_monomial_check(C, (1, 2))
    assert delta_monomial_check(C, (1, 2, 0))
    with pytest.raises(ShapeError):
        delta_monomial_check(C, (1, 2, 1))
    with pytest.raises(ShapeError):
        delta_monomial_check(C, (1,))


def _zero_constant(f):
    return f - LaurentPoly.constant(f.ring, f.constant_term())


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 4))
def test_primitive_inverts_d(seed, n):
    rng = seeded(seed)
    r = rng.randint(0, n)
    ring = Ring(n, tuple(rng.sample(range(n), r)), trunc=8)
    C = LogChart(PoissonStructure(Polyvector.zero(ring, 2)))
    f = rand_poly(rng, ring, 8, 6)
    eta = LogForm.exact(f)
    g = log_poincare_primitive(C, eta)
    assert g == _zero_constant(f)
    assert LogForm.exact(g) == eta


def test_primitive_rejects_residues():
    ring = Ring(2, (0, 1), trunc=6)
    C = LogChart(PoissonStructure(Polyvector.zero(ring, 2)))
    eta = LogForm.exact(parse_poly("z1*z2^2", ring)) + LogForm.one_form(ring, {1: ring.one() * 3})
    with pytest.raises(ResidueError) as ei:
        log_poincare_primitive(C, eta)
    k, res = ei.value.witness
    assert k == 1 and res == LaurentPoly.constant(ring, Scalar(3))
    assert residues(eta)[1] == res


def test_primitive_rejects_open_forms():
    ring = Ring(2, (), trunc=6)
    C = LogChart(PoissonStructure(Polyvector.zero(ring, 2)))
    z1, z2 = ring.gens()
    eta = LogForm.one_form(ring, {0: z2})
    with pytest.raises(NotClosedError) as ei:
        log_poincare_primitive(C, eta)
    assert ei.value.witness == eta.d()


def test_primitive_rejects_poles():
    ring = Ring(2, (0,), trunc=6)
    C = LogChart(PoissonStructure(Polyvector.zero(ring, 2)))
    eta = LogForm.one_form(ring, {1: parse_poly("z2/z1", ring)})
    with pytest.raises(ShapeError):
        log_poincare_primitive(C, eta)
