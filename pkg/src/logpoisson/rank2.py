"""Rank-2 trace-free connections ``[[v, w], [u, -v]]`` and the L(1,1,1,1) family."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from . import linalg
from .chart import LogChart, log_hamiltonian
from .connection import ConnMatrix, curvature_is_zero, poisson_curvature
from .errors import ShapeError, Verdict
from .poisson import PoissonStructure, Polyvector, lichnerowicz, wedge
from .series import ZERO, LaurentPoly, Ring, Scalar, as_scalar


@dataclass(frozen=True, eq=False)
class PoissonTriple:
    u: Polyvector
    v: Polyvector
    w: Polyvector

    def __post_init__(self):
        if not (self.u.ring == self.v.ring == self.w.ring):
            raise ShapeError("triple components must share a ring")
        for x in (self.u, self.v, self.w):
            if x.comps and x.grade != 1:
                raise ShapeError("triple components are vector fields")

    @property
    def ring(self) -> Ring:
        return self.u.ring


@dataclass
class MCResult:
    flat: bool
    violations: list = field(default_factory=list)
    curvature_flat: bool | None = None

    def __bool__(self):
        return self.flat


def mc_equations(P: PoissonStructure, t: PoissonTriple):
    """Residuals of ``delta u = -2 u^v``, ``delta v = u^w``, ``delta w = -2 v^w``."""
    d = lambda x: lichnerowicz(P, x) if x else Polyvector.zero(t.ring, 2)
    return [
        ("delta(u) = -2 u^v", d(t.u) + wedge(t.u, t.v) * 2),
        ("delta(v) = u^w", d(t.v) - wedge(t.u, t.w)),
        ("delta(w) = -2 v^w", d(t.w) + wedge(t.v, t.w) * 2),
    ]


def triple_to_theta(t: PoissonTriple, *, chart: LogChart | None = None) -> ConnMatrix:
    """``Theta = [[v, w], [u, -v]]``; with a chart, entries must be log-tangent."""
    Th = ConnMatrix(t.ring, [[t.v, t.w], [t.u, -t.v]])
    if chart is not None:
        Th = Th.in_ring(chart.ring)
        if not Th.is_log_tangent():
            raise ShapeError("triple entries are not tangent to the divisor")
    return Th


def mc_check(P: PoissonStructure, t: PoissonTriple) -> MCResult:
    """Evaluate the three Maurer-Cartan identities and cross-check with the curvature."""
    viol = [(name, res) for name, res in mc_equations(P, t) if res]
    K = poisson_curvature(LogChart(P), triple_to_theta(t))
    return MCResult(not viol, viol, curvature_is_zero(K))


def sl2_curvature_formula(P: PoissonStructure, t: PoissonTriple) -> list:
    """Closed form of ``delta(Theta) + Theta^Theta`` for ``Theta = [[v, w], [u, -v]]``."""
    d = lambda x: lichnerowicz(P, x) if x else Polyvector.zero(t.ring, 2)
    uw = wedge(t.u, t.w)
    return [[d(t.v) - uw, d(t.w) + wedge(t.v, t.w) * 2],
            [d(t.u) + wedge(t.u, t.v) * 2, -d(t.v) + uw]]


# ---------------------------------------------------------------------------
# Poisson vector fields


@dataclass
class CriterionResult:
    ok: bool
    fails: list
    agrees: bool

    def __bool__(self):
        return self.ok


def _is_separated(v: Polyvector) -> bool:
    return all(ex[j] == 0 for (k,), c in v.comps.items() for ex in c.terms
               for j in range(len(ex)) if j != k)


def coord_criterion_check(P: PoissonStructure, v: Polyvector) -> CriterionResult:
    """Pairwise test ``v({z_i,z_j}) = (d_i v^i + d_j v^j) {z_i,z_j}`` for separated ``v``."""
    if not _is_separated(v):
        raise ShapeError("each component v^k must depend on z_k only")
    ring = v.ring
    fails = []
    for i, j in combinations(range(ring.n), 2):
        s = P.sigma[(i, j)].in_ring(ring) if P.ring != ring else P.sigma[(i, j)]
        lhs = ring.zero()
        for (k,), vk in v.comps.items():
            lhs = lhs + vk * s.partial(k)
        rhs = (v.coeff(i).partial(i) + v.coeff(j).partial(j)) * s
        if lhs != rhs:
            fails.append((i, j))
    direct = not lichnerowicz(P if P.ring == ring else P.with_ring(ring), v)
    return CriterionResult(not fails, fails, direct == (not fails))


def _constant_field(u: Polyvector):
    out = []
    for k in range(u.ring.n):
        c = u.coeff(k)
        if any(sum(ex) != 0 for ex in c.terms):
            raise ShapeError("u must be a constant vector field")
        out.append(c.constant_term())
    return out


def _diagonal_linear(v: Polyvector):
    out = []
    for k in range(v.ring.n):
        c = v.coeff(k)
        unit = tuple(1 if j == k else 0 for j in range(v.ring.n))
        if any(ex != unit for ex in c.terms):
            raise ShapeError("v must be a diagonal linear vector field")
        out.append(c.coefficient(unit))
    return out


@dataclass
class LuUwResult:
    ok: bool
    fails: list
    agrees: bool

    def __bool__(self):
        return self.ok


def lu_uw_check(P: PoissonStructure, u: Polyvector, v: Polyvector) -> LuUwResult:
    """Conditions ``c_i (c_ij - b_j) = 0`` and ``c_j (c_ij + b_i) = 0`` for ``L_u sigma = u^v``."""
    cij = P.log_canonical_constants()
    if cij is None:
        raise ShapeError("sigma must be log-canonical")
    c = _constant_field(u)
    b = _diagonal_linear(v)
    fails = []
    for i, j in combinations(range(P.n), 2):
        k = cij.get((i, j), ZERO)
        if c[i] * (k - b[j]):
            fails.append((i, j, "c_i (c_ij - b_j) = 0"))
        if c[j] * (k + b[i]):
            fails.append((i, j, "c_j (c_ij + b_i) = 0"))
    Q = P if P.ring == u.ring else P.with_ring(u.ring)
    direct = not (lichnerowicz(Q, u) - wedge(u, v))
    return LuUwResult(not fails, fails, direct == (not fails))


# ---------------------------------------------------------------------------
# L(1,1,1,1)


L1111_LABELS = ("z0", "z1", "z2", "z3")


@dataclass(frozen=True)
class L1111Params:
    a: tuple

    def __post_init__(self):
        a = tuple(as_scalar(x) for x in self.a)
        if len(a) != 4:
            raise ShapeError("L(1,1,1,1) needs four parameters a0..a3")
        total = a[0] + a[1] + a[2] + a[3]
        if total:
            raise ShapeError(f"sum-zero constraint violated: a0+a1+a2+a3 = {total}")
        object.__setattr__(self, "a", a)

    def constants(self) -> dict:
        a0, a1, a2, a3 = self.a
        return {(0, 1): a3 - a2, (0, 2): a1 - a3, (0, 3): a2 - a1,
                (1, 2): a3 - a0, (1, 3): a0 - a2, (2, 3): a1 - a0}


def l1111_structure(p: L1111Params, log_coords=(1, 2, 3), *, trunc: int = 6,
                    pole_bound: int = 1) -> LogChart:
    """Log-canonical chart on C^4 with ``{z_i, z_j} = c_ij z_i z_j``."""
    ring = Ring(4, tuple(log_coords), trunc=trunc, pole_bound=pole_bound, labels=L1111_LABELS)
    return LogChart(PoissonStructure.log_canonical(ring, p.constants()))


def xi_closed_formula(C: LogChart, k: int) -> Polyvector:
    """``sum_{j>k} c_kj z_j d_j - sum_{l<k} c_lk z_l d_l`` for coordinate ``k``."""
    c = C.P.log_canonical_constants()
    if c is None:
        raise ShapeError("closed formula needs a log-canonical structure")
    out = Polyvector.zero(C.ring, 1)
    for j in range(k + 1, C.n):
        if c.get((k, j)):
            out = out + Polyvector.euler_field(C.ring, j, c[(k, j)])
    for l in range(k):
        if c.get((l, k)):
            out = out - Polyvector.euler_field(C.ring, l, c[(l, k)])
    return out


def xi_closed_check(C: LogChart) -> Verdict:
    """Closed formula versus anchor for each log Hamiltonian."""
    for pos, k in enumerate(C.log_coords):
        X = log_hamiltonian(C, pos)
        Y = xi_closed_formula(C, k)
        if X != Y:
            return Verdict(False, where=k, witness=(X, Y))
    return Verdict(True)


def l1111_triple(C: LogChart) -> PoissonTriple:
    """``(d_0, -v/2, 0)`` with ``v = z_0 d_0 + sum_j c_0j z_j d_j``."""
    c = C.P.log_canonical_constants() or {}
    ring = C.ring
    v = Polyvector.euler_field(ring, 0)
    for j in (1, 2, 3):
        if c.get((0, j)):
            v = v + Polyvector.euler_field(ring, j, c[(0, j)])
    u = Polyvector.vector(ring, {0: ring.one()})
    return PoissonTriple(u, v * Scalar("-1/2"), Polyvector.zero(ring, 1))


def _monomials(n: int, maxdeg: int):
    def rec(k, d):
        if k == n:
            yield ()
            return
        for a in range(d, -1, -1):
            for rest in rec(k + 1, d - a):
                yield (a,) + rest
    return sorted(rec(0, maxdeg), key=lambda e: (sum(e), tuple(-x for x in e)))


def search_w(P: PoissonStructure, u: Polyvector, v: Polyvector, degree: int):
    """Vector fields ``w`` of degree <= ``degree`` with ``delta w = -2 v^w`` and ``u^w = delta v``.

    Returns ``(particular, kernel)``: a pivot-minimal solution (or ``None``)
    and a basis of the homogeneous solutions.  Both equations are linear in
    ``w``, so this is one exact linear solve over the monomial ansatz.
    """
    ring = P.ring.with_trunc(max(P.ring.trunc, degree + 3))
    Q = P.with_ring(ring)
    u, v = u.in_ring(ring), v.in_ring(ring)
    basis = [(k, ex) for k in range(ring.n) for ex in _monomials(ring.n, degree)]

    def image(w):
        a = lichnerowicz(Q, w) + wedge(v, w) * 2
        b = wedge(u, w)
        return a, b

    cols = []
    keys = set()
    for k, ex in basis:
        w = Polyvector.vector(ring, {k: LaurentPoly.monomial(ring, ex)})
        a, b = image(w)
        col = {}
        for tag, pv in (("a", a), ("b", b)):
            for idx, p in pv.comps.items():
                for e2, c in p.terms.items():
                    col[(tag, idx, e2)] = c
        keys |= set(col)
        cols.append(col)
    dv = lichnerowicz(Q, v) if v else Polyvector.zero(ring, 2)
    target = {("b", idx, e2): c for idx, p in dv.comps.items() for e2, c in p.terms.items()}
    keys |= set(target)
    keys = sorted(keys)
    M = [[col.get(key, ZERO) for col in cols] for key in keys]
    rhs = [target.get(key, ZERO) for key in keys]

    def to_field(vec):
        comps = {}
        for (k, ex), c in zip(basis, vec):
            if c:
                comps[k] = comps.get(k, ring.zero()) + LaurentPoly.monomial(ring, ex, c)
        return Polyvector.vector(ring, comps)

    sol = linalg.solve(M, rhs) if M else [ZERO] * len(basis)
    particular = to_field(sol) if sol is not None else None
    kernel = [to_field(k) for k in linalg.kernel(M, len(basis))] if M else []
    return particular, kernel
