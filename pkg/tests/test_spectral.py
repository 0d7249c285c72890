import pytest
from hypothesis import given, settings, strategies as st

from logpoisson import linalg
from logpoisson.errors import EigenvalueError, NonCommutingError
from logpoisson.series import ONE, ZERO, LaurentPoly, Ring, Scalar
from logpoisson.spectral import (centralizer_check, check_commuting, check_nonresonance,
                                 eigenvalues, joint_spectrum)

from helpers import rand_q, seeded

seeds = st.integers(0, 10**6)
VALUES = [Scalar(0), Scalar("1/2"), Scalar("-1/2"), Scalar("1/3"), Scalar("-1/3"), Scalar("2/5"),
          Scalar("-2/5"), Scalar(1), Scalar(0, 1)]


def rand_invertible(rng, e):
    while True:
        S = [[rand_q(rng, -2, 2, (1, 2)) for _ in range(e)] for _ in range(e)]
        Sinv = linalg.inverse(S)
        if Sinv is not None:
            return S, Sinv


def commuting_tuple(rng, e, r):
    """Polynomials in one triangular matrix, conjugated by a random S."""
    J = linalg.zeros(e)
    for a in range(e):
        J[a][a] = rng.choice(VALUES)
        for b in range(a + 1, e):
            if J[a][a] == J[b][b] or rng.random() < 0.3:
                J[a][b] = rand_q(rng, -1, 1)
    S, Sinv = rand_invertible(rng, e)
    B = linalg.matmul(linalg.matmul(S, J), Sinv)
    out = []
    for _ in range(r):
        c0, c1, c2 = rand_q(rng, -1, 1), rand_q(rng, -1, 1), rand_q(rng, -1, 1)
        M = linalg.add(linalg.scale(linalg.identity(e), c0),
                       linalg.add(linalg.scale(B, c1), linalg.scale(linalg.matmul(B, B), c2)))
        out.append(M)
    return out


def test_eigenvalues_gaussian():
    M = [[ZERO, Scalar(-1)], [ONE, ZERO]]  # eigenvalues +-i
    assert eigenvalues(M) == [Scalar(0, -1), Scalar(0, 1)]


def test_eigenvalues_irrational_rejected():
    M = [[ZERO, Scalar(2)], [ONE, ZERO]]
    with pytest.raises(EigenvalueError):
        eigenvalues(M)


def test_noncommuting_rejected():
    A = [linalg.unit(2, 0, 1), linalg.unit(2, 1, 0)]
    assert not check_commuting(A)
    with pytest.raises(NonCommutingError):
        joint_spectrum(A)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 3), st.integers(1, 3))
def test_spectral_reconstruction(seed, e, r):
    rng = seeded(seed)
    A = commuting_tuple(rng, e, r)
    S = joint_spectrum(A)
    P = S.projectors()
    total = linalg.zeros(e)
    for Pk in P:
        total = linalg.add(total, Pk)
        assert linalg.matmul(Pk, Pk) == Pk
    assert total == linalg.identity(e)
    for blk, Pk in zip(S.blocks, P):
        for M, lam in zip(A, blk.lam):
            assert linalg.matmul(M, Pk) == linalg.matmul(Pk, M)
            N = linalg.sub(M, linalg.scale(linalg.identity(e), lam))
            assert linalg.is_zero(linalg.matmul(linalg.mat_pow(N, blk.nilpotency_bound), Pk))
    assert len(set(S.lambdas)) == len(S.lambdas)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 3), st.integers(1, 3))
def test_spectrum_conjugation_invariant(seed, e, r):
    rng = seeded(seed)
    A = commuting_tuple(rng, e, r)
    T, Tinv = rand_invertible(rng, e)
    B = [linalg.matmul(linalg.matmul(T, M), Tinv) for M in A]
    S1, S2 = joint_spectrum(A), joint_spectrum(B)
    assert S1.lambdas == S2.lambdas
    assert [len(b.basis) for b in S1.blocks] == [len(b.basis) for b in S2.blocks]
    assert check_nonresonance(S1) == check_nonresonance(S2)


def test_nonresonance_modes():
    A = [linalg.diag([ZERO, ONE])]
    S = joint_spectrum(A)
    v = check_nonresonance(S, "symmetric")
    assert not v and v.witness == (1,)
    # blocks are ordered (0), (1); as stated only lambda_k - lambda_k' for k < k' is tested
    assert check_nonresonance(S, "as_stated")
    S2 = joint_spectrum([linalg.diag([ONE, ZERO])])
    assert S2.lambdas == S.lambdas


def test_half_integer_pair_is_resonant():
    S = joint_spectrum([linalg.diag([Scalar("1/2"), Scalar("-1/2")])])
    assert not check_nonresonance(S)
    S = joint_spectrum([linalg.diag([Scalar("1/2"), Scalar("-1/3")]), linalg.diag([ZERO, Scalar(2)])])
    assert check_nonresonance(S)


def test_nonresonance_needs_all_components_nonnegative():
    S = joint_spectrum([linalg.diag([ONE, ZERO]), linalg.diag([ZERO, ONE])])
    # differences (1,-1) and (-1,1): not in Z_{>=0}^2
    assert check_nonresonance(S)


def test_centralizer_polynomial_matrix():
    ring = Ring(2, (0, 1), trunc=4)
    z1 = ring.var(0)
    A = [linalg.diag([Scalar("1/2"), ZERO]), linalg.zeros(2)]
    G = [[ring.one() + z1, ring.zero()], [ring.zero(), ring.one()]]
    assert centralizer_check(G, A)
    G[0][1] = z1
    v = centralizer_check(G, A)
    assert not v and v.where == 0
