import pytest
from hypothesis import given, settings, strategies as st

from logpoisson import linalg
from logpoisson.chart import LogChart, log_hamiltonians
from logpoisson.connection import (ConnMatrix, conjugate_curvature, curvature_is_zero,
                                   ep_principal, extract_principal, frame_curvature,
                                   gauge_transform, horizontal_defect, poisson_curvature,
                                   poly_identity, poly_matmul, principal_pivots, series_inverse)
from logpoisson.errors import (DegenerateSpanError, H3Error, NotInvertibleError, ShapeError)
from logpoisson.poisson import PoissonStructure, Polyvector, wedge
from logpoisson.series import ONE, ZERO, LaurentPoly, Ring, Scalar

from helpers import log_canonical_chart, rand_poly, rand_q, seeded

seeds = st.integers(0, 10**6)


def rand_matrix(rng, e, den=(1, 2, 3)):
    return [[rand_q(rng, -2, 2, den) for _ in range(e)] for _ in range(e)]


def rand_gauge(rng, ring, e, deg=2):
    g = poly_identity(ring, e)
    for a in range(e):
        for b in range(e):
            g[a][b] = g[a][b] + rand_poly(rng, ring, deg, 2) - LaurentPoly.constant(
                ring, 0)
    # keep the constant part invertible: reset it to the identity
    return [[x - LaurentPoly.constant(ring, x.constant_term()) + (ring.one() if a == b else ring.zero())
             for b, x in enumerate(row)] for a, row in enumerate(g)]


def rand_connection(rng, C, e):
    A = [rand_matrix(rng, e) for _ in range(C.r)]
    Th = ep_principal(C, A, e)
    M = [row[:] for row in Th.entries]
    for a in range(e):
        for b in range(e):
            k = rng.randrange(C.n)
            v = Polyvector.vector(C.ring, {k: C.ring.var(k) * rand_poly(rng, C.ring, 2, 2)})
            M[a][b] = M[a][b] + v
    return ConnMatrix(C.ring, M)


def commutator_formula(C, A):
    X = log_hamiltonians(C)
    e = len(A[0])
    K = [[Polyvector.zero(C.ring, 2) for _ in range(e)] for _ in range(e)]
    for i in range(C.r):
        for j in range(i + 1, C.r):
            comm = linalg.commutator(A[i], A[j])
            XX = wedge(X[i], X[j])
            for a in range(e):
                for b in range(e):
                    if comm[a][b]:
                        K[a][b] = K[a][b] + XX * comm[a][b]
    return K


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(2, 3))
def test_ep_curvature_is_the_commutator_term(seed, e):
    rng = seeded(seed)
    C = log_canonical_chart(rng, 2)
    A = [rand_matrix(rng, e) for _ in range(2)]
    K = poisson_curvature(C, ep_principal(C, A, e))
    assert K == commutator_formula(C, A)
    commuting = linalg.is_zero(linalg.commutator(A[0], A[1]))
    assert curvature_is_zero(K) == commuting


def test_ep_requires_h3():
    ring = Ring(2, (0,), trunc=4)
    C = LogChart(PoissonStructure(Polyvector(ring, 2, {(0, 1): ring.one()})))
    with pytest.raises(H3Error):
        ep_principal(C, [linalg.identity(2)])


def test_tuple_shape():
    C = log_canonical_chart(seeded(0), 2)
    with pytest.raises(ShapeError):
        ep_principal(C, [linalg.identity(2)])


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(2, 3))
def test_series_inverse(seed, e):
    rng = seeded(seed)
    ring = Ring(2, (0, 1), trunc=5)
    g = rand_gauge(rng, ring, e)
    assert poly_matmul(g, series_inverse(g)) == poly_identity(ring, e)
    assert poly_matmul(series_inverse(g), g) == poly_identity(ring, e)


def test_series_inverse_rejects_singular_constant():
    ring = Ring(1, (), trunc=3)
    z = ring.var(0)
    with pytest.raises(NotInvertibleError):
        series_inverse([[z]])


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_gauge_composition(seed):
    rng = seeded(seed)
    C = log_canonical_chart(rng, 2, trunc=5)
    Th = rand_connection(rng, C, 2)
    g, h = rand_gauge(rng, C.ring, 2), rand_gauge(rng, C.ring, 2)
    for conv in ("frame", "section"):
        two_steps = gauge_transform(C, gauge_transform(C, Th, g, convention=conv), h, convention=conv)
        assert two_steps == gauge_transform(C, Th, poly_matmul(h, g), convention=conv)
    assert gauge_transform(C, Th, poly_identity(C.ring, 2)) == Th


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_curvature_covariance_pairings(seed):
    rng = seeded(seed)
    C = log_canonical_chart(rng, 2, trunc=5)
    Th = rand_connection(rng, C, 2)
    g = rand_gauge(rng, C.ring, 2)
    ginv = series_inverse(g)
    Kf = frame_curvature(C, gauge_transform(C, Th, g, convention="frame"))
    assert Kf == conjugate_curvature(g, frame_curvature(C, Th), ginv)
    Kp = poisson_curvature(C, gauge_transform(C, Th, g, convention="section"))
    assert Kp == conjugate_curvature(g, poisson_curvature(C, Th), ginv)


def test_mismatched_pairing_is_not_covariant():
    # frame gauge of a flat principal part is frame-flat but not Poisson-flat
    ring = Ring(2, (0, 1), trunc=4)
    C = LogChart(PoissonStructure.log_canonical(ring, {(0, 1): Scalar(1)}))
    A = [linalg.diag([Scalar(1, 1) * Scalar("1/2"), ZERO]), linalg.zeros(2)]
    Th0 = ep_principal(C, A, 2)
    g = [[ring.one(), ring.var(1)], [ring.zero(), ring.one()]]
    Th = gauge_transform(C, Th0, g, convention="frame")
    assert curvature_is_zero(frame_curvature(C, Th))
    assert not curvature_is_zero(poisson_curvature(C, Th))
    Ts = gauge_transform(C, Th0, g, convention="section")
    assert curvature_is_zero(poisson_curvature(C, Ts))


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_horizontality_induces_section_gauge(seed):
    rng = seeded(seed)
    C = log_canonical_chart(rng, 2, trunc=5)
    Th = rand_connection(rng, C, 2)
    g = rand_gauge(rng, C.ring, 2)
    Y = [rand_poly(rng, C.ring, 2, 3) for _ in range(2)]
    gY = [sum((g[a][b] * Y[b] for b in range(2)), C.ring.zero()) for a in range(2)]
    left = horizontal_defect(C, gauge_transform(C, Th, g, convention="section"), gY)
    D = horizontal_defect(C, Th, Y)
    right = [sum((D[b] * g[a][b] for b in range(2)), Polyvector.zero(C.ring, 1)) for a in range(2)]
    assert left == right


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(2, 4), st.integers(1, 3))
def test_extract_inverts_principal(seed, n, e):
    rng = seeded(seed)
    C = log_canonical_chart(rng, n)
    try:
        principal_pivots(C)
    except DegenerateSpanError:
        return
    A = [rand_matrix(rng, e) for _ in range(n)]
    A2, V = extract_principal(C, ep_principal(C, A, e))
    assert A2 == A
    assert V.is_zero()


def test_degenerate_span_on_c3():
    # on C^3 the constant log parts of X_1..X_3 are always dependent
    C = log_canonical_chart(seeded(3), 3)
    with pytest.raises(DegenerateSpanError):
        extract_principal(C, ConnMatrix.zero(C.ring, 2))


def test_gauge_size_mismatch():
    C = log_canonical_chart(seeded(0), 2)
    with pytest.raises(ShapeError):
        gauge_transform(C, ConnMatrix.zero(C.ring, 2), poly_identity(C.ring, 3))
