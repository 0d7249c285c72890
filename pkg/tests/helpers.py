"""Random generators shared by the test modules."""
import random
from fractions import Fraction

from logpoisson.chart import LogChart
from logpoisson.poisson import LogForm, PoissonStructure, Polyvector
from logpoisson.series import LaurentPoly, Ring, Scalar


def rand_q(rng, lo=-5, hi=5, den=(1, 2, 3, 4, 5)):
    d = rng.choice(den)
    return Scalar(Fraction(rng.randint(lo * d, hi * d), d))


def sum_zero_tuple(rng):
    a = [rand_q(rng, -5, 5) for _ in range(3)]
    last = -(a[0] + a[1] + a[2])
    while abs(Fraction(str(last.re))) > 5:
        a = [rand_q(rng, -5, 5) for _ in range(3)]
        last = -(a[0] + a[1] + a[2])
    return tuple(a + [last])


def rand_poly(rng, ring, max_deg=3, nterms=4, allow_poles=False, coeff=lambda r: rand_q(r, -3, 3)):
    terms = {}
    for _ in range(nterms):
        ex = [0] * ring.n
        for _ in range(rng.randint(0, max_deg)):
            ex[rng.randrange(ring.n)] += 1
        if allow_poles and ring.log_coords and rng.random() < 0.3:
            k = rng.choice(ring.log_coords)
            ex[k] -= 1
        if sum(ex) > ring.trunc:
            continue
        terms[tuple(ex)] = coeff(rng)
    return LaurentPoly(ring, terms)


def log_canonical_chart(rng, n, *, trunc=6, pole_bound=1, log=None, den=(1, 2, 3), nonzero=True):
    ring = Ring(n, tuple(range(n)) if log is None else tuple(log), trunc=trunc, pole_bound=pole_bound)
    c = {}
    for i in range(n):
        for j in range(i + 1, n):
            c[(i, j)] = rand_q(rng, -3, 3, den)
            while nonzero and not c[(i, j)]:
                c[(i, j)] = rand_q(rng, -3, 3, den)
    return LogChart(PoissonStructure.log_canonical(ring, c))


def rand_vector(rng, ring, max_deg=2, nterms=2):
    return Polyvector.vector(ring, {k: rand_poly(rng, ring, max_deg, nterms) for k in range(ring.n)})


def rand_log_one_form(rng, ring, max_deg=3, nterms=3):
    return LogForm.one_form(ring, {k: rand_poly(rng, ring, max_deg, nterms) for k in range(ring.n)})


def seeded(seed):
    return random.Random(seed)


RESIDUE_VALUES = ("0", "1/2", "-1/2", "1/3", "-1/3", "2/5", "-2/5")


def nonresonant_diagonal(rng, r, e):
    """Diagonal residue tuple drawn from RESIDUE_VALUES, resampled until non-resonant."""
    from logpoisson import linalg
    from logpoisson.spectral import check_nonresonance, joint_spectrum
    while True:
        A = [linalg.diag([Scalar(rng.choice(RESIDUE_VALUES)) for _ in range(e)]) for _ in range(r)]
        if check_nonresonance(joint_spectrum(A)):
            return A


def holomorphic_gauge(rng, ring, e, max_deg=3, nterms=2):
    """``I + `` random entries with terms of degree 1..max_deg."""
    g = []
    for a in range(e):
        row = []
        for b in range(e):
            terms = {}
            for _ in range(nterms):
                d = rng.randint(1, max_deg)
                ex = [0] * ring.n
                for _ in range(d):
                    ex[rng.randrange(ring.n)] += 1
                terms[tuple(ex)] = rand_q(rng, -2, 2, (1, 2, 3))
            p = LaurentPoly(ring, terms)
            row.append(p + ring.one() if a == b else p)
        g.append(row)
    return g


def ppd_instance(rng, n, e, T=6):
    """``(C, Theta, A, g)`` with ``Theta`` the frame gauge of ``sum A_i X_i`` by ``g``."""
    from logpoisson.connection import ep_principal, gauge_transform
    C = log_canonical_chart(rng, n, trunc=T + 1)
    A = nonresonant_diagonal(rng, n, e)
    g = holomorphic_gauge(rng, C.ring, e)
    Theta = gauge_transform(C, ep_principal(C, A, e), g)
    return C, Theta, A, g


ACCEPTANCE_LINES = []
