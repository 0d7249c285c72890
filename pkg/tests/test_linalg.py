from hypothesis import given, settings, strategies as st

from logpoisson import linalg
from logpoisson.series import ONE, ZERO, Scalar

from helpers import rand_q, seeded

seeds = st.integers(0, 10**6)


def rand_mat(rng, m, n, lo=-3, hi=3):
    return [[rand_q(rng, lo, hi, (1, 2)) if rng.random() < 0.7 else ZERO for _ in range(n)]
            for _ in range(m)]


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 5), st.integers(1, 5))
def test_kernel_and_rank(seed, m, n):
    rng = seeded(seed)
    a = rand_mat(rng, m, n)
    ker = linalg.kernel(a, n)
    assert linalg.rank(a) + len(ker) == n
    for v in ker:
        assert all(not x for x in linalg.matvec(a, v))


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 5), st.integers(1, 5))
def test_solve_any_column_order(seed, m, n):
    rng = seeded(seed)
    a = rand_mat(rng, m, n)
    x0 = [rand_q(rng) for _ in range(n)]
    b = linalg.matvec(a, x0)
    order = list(range(n))
    rng.shuffle(order)
    for col_order in (None, order):
        x = linalg.solve(a, b, col_order)
        assert x is not None
        assert linalg.matvec(a, x) == b


def test_solve_inconsistent():
    a = [[ONE, ONE], [ONE, ONE]]
    assert linalg.solve(a, [ONE, ZERO]) is None


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 4))
def test_inverse(seed, n):
    rng = seeded(seed)
    a = rand_mat(rng, n, n)
    inv = linalg.inverse(a)
    if linalg.rank(a) < n:
        assert inv is None
    else:
        assert linalg.matmul(a, inv) == linalg.identity(n)


def test_format_matrix():
    assert linalg.format_matrix([[Scalar("1/2"), ZERO], [ZERO, Scalar(0, 1)]]) == \
        "[1/2, 0/1; 0/1, 0/1+1/1*i]"
