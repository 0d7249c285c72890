import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from logpoisson import linalg
from logpoisson.errors import NonCommutingError, ShapeError, UnknownGeneratorError
from logpoisson.monodromy import (LeafLetter, MeridianLetter, format_complex,
                                  format_complex_matrix, meridional_character, transport_1d,
                                  twisted_rep_eval)
from logpoisson.series import ZERO, Scalar

from helpers import rand_q, seeded

seeds = st.integers(0, 10**6)
HALF_THIRD = [linalg.diag([Scalar("1/2"), Scalar("1/3")])]


def test_character_worked_value():
    M = meridional_character(HALF_THIRD, [1])
    assert format_complex_matrix(M) == "[-1, 0; 0, -0.5-0.866025403784439i]"


def test_transport_half_is_minus_one():
    y = transport_1d(Scalar("1/2"))
    assert abs(y + 1) < 1e-10
    assert format_complex(y, 12) == "-1"


@settings(max_examples=10, deadline=None)
@given(seeds)
def test_transport_matches_character(seed):
    a = rand_q(seeded(seed), -2, 2, (1, 2, 3, 5, 7))
    y = transport_1d(a, steps=20000)
    M = meridional_character([[[a]]], [1])
    assert abs(y - M[0, 0]) < 1e-8


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_character_is_a_homomorphism(seed):
    rng = seeded(seed)
    A = [linalg.diag([rand_q(rng, -2, 2), rand_q(rng, -2, 2)]) for _ in range(2)]
    # add a shared nilpotent part to keep the tuple commuting but not diagonal
    for M in A:
        M[0][1] = rand_q(rng, -1, 1)
        M[1][1] = M[0][0]
    m1 = [rng.randint(-3, 3) for _ in range(2)]
    m2 = [rng.randint(-3, 3) for _ in range(2)]
    if linalg.is_zero(linalg.commutator(A[0], A[1])):
        lhs = meridional_character(A, [x + y for x, y in zip(m1, m2)])
        rhs = meridional_character(A, m1) @ meridional_character(A, m2)
        assert np.max(np.abs(lhs - rhs)) < 1e-10
        assert np.max(np.abs(meridional_character(A, [0, 0]) - np.eye(2))) < 1e-12


def test_character_needs_commuting():
    with pytest.raises(NonCommutingError):
        meridional_character([linalg.unit(2, 0, 1), linalg.unit(2, 1, 0)], [1, 1])
    with pytest.raises(ShapeError):
        meridional_character(HALF_THIRD, [1, 0])


def test_twisted_word():
    rho = {"a": np.array([[0, 1], [-1, 0]], dtype=complex)}
    word = [LeafLetter("a"), MeridianLetter((1,)), LeafLetter("a", True)]
    M = twisted_rep_eval(rho, HALF_THIRD, word)
    want = rho["a"] @ meridional_character(HALF_THIRD, [1]) @ np.linalg.inv(rho["a"])
    assert np.allclose(M, want)
    # conjugating the diagonal character by a rotation swaps its entries
    assert abs(M[0, 0] - cmath.exp(-2j * cmath.pi / 3)) < 1e-12
    assert np.allclose(twisted_rep_eval(rho, HALF_THIRD, []), np.eye(2))
    with pytest.raises(UnknownGeneratorError):
        twisted_rep_eval(rho, HALF_THIRD, [LeafLetter("b")])


def test_transport_step_floor():
    with pytest.raises(ShapeError):
        transport_1d(Scalar(1), steps=10)


@pytest.mark.parametrize("z,text", [(1 + 0j, "1"), (-0.0 + 0j, "0"), (1e-17 + 2j, "2i"),
                                    (0.5 - 0.25j, "0.5-0.25i"), (-1j, "-1i")])
def test_complex_format(z, text):
    assert format_complex(z) == text
