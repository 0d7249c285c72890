"""Joint spectra of commuting residue tuples, non-resonance and centralizers."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import sympy

from . import linalg
from .errors import EigenvalueError, NonCommutingError, ShapeError, Verdict
from .series import ONE, ZERO, LaurentPoly, Scalar, as_scalar


def check_commuting(A) -> Verdict:
    """First pair ``(i, j)`` with ``[A_i, A_j] != 0``, witness the commutator."""
    for i in range(len(A)):
        for j in range(i + 1, len(A)):
            c = linalg.commutator(A[i], A[j])
            if not linalg.is_zero(c):
                return Verdict(False, where=(i, j), witness=c)
    return Verdict(True)


def _to_sympy(s: Scalar):
    return sympy.Rational(int(s.re.numerator), int(s.re.denominator)) + \
        sympy.I * sympy.Rational(int(s.im.numerator), int(s.im.denominator))


def _from_sympy(x) -> Scalar:
    re, im = sympy.re(x), sympy.im(x)
    if not (re.is_Rational and im.is_Rational):
        raise EigenvalueError(f"eigenvalue {x} is not in Q(i)")
    return Scalar(f"{re.p}/{re.q}", f"{im.p}/{im.q}")


def eigenvalues(M) -> list:
    """Distinct eigenvalues of ``M`` in Q(i), in canonical order.

    Raises :class:`EigenvalueError` when the characteristic polynomial has an
    irreducible factor of degree > 1 over Q(i).
    """
    n = len(M)
    if n == 0:
        return []
    t = sympy.Symbol("t")
    sm = sympy.Matrix([[_to_sympy(x) for x in row] for row in M])
    cp = sm.charpoly(t).as_expr()
    _, factors = sympy.factor_list(sympy.expand(cp), t, gaussian=True)
    roots = []
    for f, _mult in factors:
        poly = sympy.Poly(f, t)
        if poly.degree() == 0:
            continue
        if poly.degree() > 1:
            raise EigenvalueError(f"characteristic factor {f} has roots outside Q(i)",
                                  witness=str(poly.as_expr()))
        a, b = poly.all_coeffs()
        roots.append(_from_sympy(sympy.nsimplify(-b / a)))
    uniq = []
    for r in roots:
        if r not in uniq:
            uniq.append(r)
    return sorted(uniq, key=scalar_key)


def scalar_key(s: Scalar):
    return (s.re, s.im)


@dataclass(frozen=True)
class Block:
    lam: tuple
    basis: tuple
    nilpotency_bound: int


@dataclass(frozen=True)
class SpectralData:
    e: int
    blocks: tuple

    @property
    def lambdas(self) -> list:
        return [b.lam for b in self.blocks]

    def projectors(self) -> list:
        """Projector onto each block along the others."""
        cols = [v for b in self.blocks for v in b.basis]
        B = linalg.transpose(cols)
        Binv = linalg.inverse(B)
        out = []
        start = 0
        for b in self.blocks:
            d = len(b.basis)
            D = linalg.diag([ONE if start <= i < start + d else ZERO for i in range(self.e)])
            out.append(linalg.matmul(linalg.matmul(B, D), Binv))
            start += d
        return out


def joint_spectrum(A, e: int | None = None) -> SpectralData:
    """Joint generalised eigenspace decomposition of a commuting tuple."""
    v = check_commuting(A)
    if not v:
        raise NonCommutingError(f"residues A_{v.where[0] + 1}, A_{v.where[1] + 1} do not commute",
                                witness=v.witness)
    if not A:
        if e is None:
            raise ShapeError("rank is required for an empty tuple")
        return SpectralData(e, (Block((), tuple(tuple(c) for c in linalg.identity(e)), 1),))
    e = len(A[0])
    spectra = [eigenvalues(M) for M in A]
    blocks = []
    for lam in product(*spectra):
        stacked = []
        for M, l in zip(A, lam):
            shifted = linalg.sub(M, linalg.scale(linalg.identity(e), l))
            stacked.extend(linalg.mat_pow(shifted, e))
        basis = linalg.kernel(stacked, e)
        if not basis:
            continue
        nil = 1
        for M, l in zip(A, lam):
            shifted = linalg.sub(M, linalg.scale(linalg.identity(e), l))
            k, P = 1, shifted
            while any(any(x for x in linalg.matvec(P, b)) for b in basis):
                P = linalg.matmul(P, shifted)
                k += 1
            nil = max(nil, k)
        blocks.append(Block(tuple(lam), tuple(tuple(b) for b in basis), nil))
    if sum(len(b.basis) for b in blocks) != e:
        raise EigenvalueError("joint generalised eigenspaces do not span; tuple is not commuting")
    blocks.sort(key=lambda b: tuple(scalar_key(x) for x in b.lam))
    return SpectralData(e, tuple(blocks))


def _nonneg_int_nonzero(vec) -> bool:
    return all(x.is_integer() and x.re >= 0 for x in vec) and any(x for x in vec)


def check_nonresonance(S: SpectralData, mode: str = "symmetric") -> Verdict:
    """No difference ``lambda_k - lambda_k'`` lies in ``Z_{>=0}^r \\ {0}``.

    ``symmetric`` tests both orders of every pair of blocks; ``as_stated``
    only tests ``k < k'`` in the canonical block order.
    """
    if mode not in ("symmetric", "as_stated"):
        raise ValueError("mode must be 'symmetric' or 'as_stated'")
    lams = S.lambdas
    for a in range(len(lams)):
        for b in range(len(lams)):
            if a == b or (mode == "as_stated" and a > b):
                continue
            diff = tuple(x - y for x, y in zip(lams[a], lams[b]))
            if _nonneg_int_nonzero(diff):
                return Verdict(False, where=(a, b), witness=tuple(int(x.re) for x in diff))
    return Verdict(True)


def centralizer_check(G, A) -> Verdict:
    """``G A_i == A_i G`` for every ``i``; polynomial ``G`` is tested per monomial."""
    if G and isinstance(G[0][0], LaurentPoly):
        exps = sorted({e for row in G for x in row for e in x.terms}, reverse=True)
        layers = [[[x.coefficient(ex) for x in row] for row in G] for ex in exps]
    else:
        layers = [[[as_scalar(x) for x in row] for row in G]]
    for i, M in enumerate(A):
        for L in layers:
            if not linalg.is_zero(linalg.commutator(L, M)):
                return Verdict(False, where=i, witness=linalg.commutator(L, M))
    return Verdict(True)
