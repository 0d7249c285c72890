"""SNC log charts, logarithmic Hamiltonians and the algebraic log Poincare lemma."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import NotClosedError, ResidueError, ShapeError, Verdict
from .poisson import LogForm, PoissonStructure, Polyvector, anchor, hamiltonian
from .series import LaurentPoly, Ring


@dataclass(frozen=True, eq=False)
class LogChart:
    """A Poisson structure on a chart whose ring marks the divisor coordinates.

    The divisor is ``prod(z_k for k in ring.log_coords) = 0``.  Log indices
    used by the functions below are positions in ``ring.log_coords``.
    """

    P: PoissonStructure

    @property
    def ring(self) -> Ring:
        return self.P.ring

    @property
    def n(self) -> int:
        return self.ring.n

    @property
    def r(self) -> int:
        return self.ring.r

    @property
    def log_coords(self) -> tuple:
        return self.ring.log_coords

    @property
    def labels(self) -> tuple:
        return self.ring.labels

    def with_ring(self, ring: Ring) -> "LogChart":
        return LogChart(self.P.with_ring(ring))


def log_hamiltonian(C: LogChart, i: int) -> Polyvector:
    """``X_i = sigma#(dz_k/z_k)`` for ``k = log_coords[i]``."""
    if not 0 <= i < C.r:
        raise ShapeError(f"log index {i} out of range for r={C.r}")
    return anchor(C.P, LogForm.generator(C.ring, C.log_coords[i]))


def log_hamiltonians(C: LogChart) -> list:
    return [log_hamiltonian(C, i) for i in range(C.r)]


def vector_field_class(X: Polyvector) -> str:
    """Holomorphy class of a vector field's coordinate coefficients."""
    classes = {c.holomorphy_class() for c in X.comps.values()}
    for cls in ("genuine_pole", "logarithmic_only"):
        if cls in classes:
            return cls
    return "holomorphic"


def check_h3(C: LogChart) -> Verdict:
    """Every ``X_i`` is holomorphic and tangent to every divisor branch."""
    for i in range(C.r):
        X = log_hamiltonian(C, i)
        if vector_field_class(X) != "holomorphic":
            return Verdict(False, where=i, witness=X, note="pole")
        for j in C.log_coords:
            if not X.coeff(j).divisible_by(j):
                return Verdict(False, where=i, witness=X, note=f"not tangent to {C.labels[j]}=0")
    return Verdict(True)


def residues(eta: LogForm) -> dict:
    """``a_k|_{z_k=0}`` for each log slot ``k``."""
    ring = eta.ring
    return {k: eta[k].at_zero(k) for k in ring.log_coords}


def log_poincare_primitive(C: LogChart, eta: LogForm) -> LaurentPoly:
    """Holomorphic ``f`` with ``df = eta`` and zero constant term.

    ``eta`` must be closed with holomorphic log-frame coefficients and
    vanishing residues.  The degree-``d`` part of ``f`` is the degree-``d``
    part of ``sum a_i + sum z_j b_j`` divided by ``d`` (Euler homotopy).
    """
    ring = eta.ring
    if eta.grade != 1:
        raise ShapeError("the primitive is defined for 1-forms")
    for idx, v in eta.comps.items():
        if v.has_negative():
            raise ShapeError(f"coefficient on slot {idx[0] + 1} is not holomorphic")
    for k in ring.log_coords:
        res = eta[k].at_zero(k)
        if res:
            raise ResidueError(f"nonzero residue along {ring.labels[k]}=0: {res}", witness=(k, res))
    d_eta = eta.d()
    if d_eta:
        raise NotClosedError("the form is not closed", witness=d_eta)
    big = ring.with_trunc(ring.trunc + 1)
    euler = big.zero()
    for k in range(ring.n):
        c = eta[k].in_ring(big)
        euler = euler + (c if k in ring.log_coords else c.shift(k, 1))
    terms = {}
    for e, c in euler.terms.items():
        terms[e] = c / sum(e)
    return LaurentPoly(big, terms).in_ring(ring)


def delta_monomial_check(C: LogChart, alpha) -> Verdict:
    """``delta(z^alpha) == z^alpha * sum alpha_i X_i`` for alpha on log coordinates."""
    alpha = tuple(alpha)
    if len(alpha) == C.r:
        e = [0] * C.n
        for pos, k in enumerate(C.log_coords):
            e[k] = alpha[pos]
        exp = tuple(e)
    elif len(alpha) == C.n:
        if any(a and k not in C.log_coords for k, a in enumerate(alpha)):
            raise ShapeError("multi-index must be supported on log coordinates")
        exp = alpha
    else:
        raise ShapeError("multi-index length must be r or n")
    ring = C.ring
    mono = LaurentPoly.monomial(ring, exp)
    lhs = hamiltonian(C.P, mono)
    rhs = Polyvector.zero(ring, 1)
    for pos, k in enumerate(C.log_coords):
        if exp[k]:
            rhs = rhs + log_hamiltonian(C, pos) * exp[k]
    rhs = rhs * mono
    if lhs == rhs:
        return Verdict(True)
    return Verdict(False, where=exp, witness=lhs - rhs)
