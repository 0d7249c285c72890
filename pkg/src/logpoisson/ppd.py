"""Degree-by-degree normalisation of flat log Poisson connections.

Given ``Theta = Theta_0 + V`` with ``Theta_0 = sum A_i X_i`` and ``V`` vanishing
at the origin, :func:`normalize` builds ``H = ... (I + K_2)(I + K_1)`` so that
``(delta H) H^-1 + H Theta H^-1 = Theta_0`` through total degree ``T``.  At
degree ``N`` the correction solves the homological equation

    delta(K) + [K, Theta_0] = -R_N

which on ``K = z^alpha k`` reads, coefficient of ``z^alpha z_m d_m``::

    sum_i x_im (alpha_i k + k A_i - A_i k) = -r_{alpha, m}

where ``X_i = sum_m x_im z_m d_m``.  Each monomial gives an independent exact
linear system over Q(i).

Scope: log-canonical charts with every coordinate logarithmic, so that
``delta`` preserves the degree filtration.  Polynomials live in a ring of
truncation ``T + 1`` because a log-frame degree ``d`` coefficient is a
coordinate-frame degree ``d + 1`` one.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import linalg
from .chart import LogChart, log_hamiltonians
from .connection import (ConnMatrix, _constant_log_vector, curvature_is_zero, ep_principal,
                         extract_principal, frame_curvature, gauge_transform, poly_identity,
                         poly_matmul, poly_matrix, poly_mat_in_ring, series_inverse)
from .errors import (FiltrationError, InconsistentSystemError, NonCommutingError, NotFlatError,
                     PreconditionError, ResonanceError, ShapeError, Verdict)
from .poisson import Polyvector, hamiltonian, lichnerowicz, wedge
from .series import ZERO, LaurentPoly, Ring, format_scalar
from .spectral import SpectralData, centralizer_check, check_commuting, check_nonresonance, joint_spectrum

OPERATOR = "delta(K) + [K, Theta0] = -R"


@dataclass(frozen=True)
class Denominator:
    kappa: tuple
    kappa_prime: tuple
    alpha: tuple
    weight: tuple

    def text(self) -> str:
        f = lambda t: "(" + ", ".join(format_scalar(x) if not isinstance(x, int) else str(x) for x in t) + ")"
        return (f"block {f(self.kappa)} <- {f(self.kappa_prime)} alpha {f(self.alpha)} "
                f"weight {f(self.weight)}")


@dataclass
class DegreeRecord:
    degree: int
    support: list
    denominators: list
    solution: list  # e x e LaurentPoly


@dataclass
class NormalizationResult:
    gauge: list
    normal_form: ConnMatrix
    residues: list
    certificate: list
    trunc: int
    ring: Ring
    operator: str = OPERATOR
    spectrum: SpectralData | None = field(default=None, repr=False)


# ---------------------------------------------------------------------------
# helpers


def internal_ring(ring: Ring, T: int) -> Ring:
    return ring.with_trunc(T + 1)


def check_filtration(C: LogChart) -> dict:
    """Log-canonical constants of ``sigma`` when every coordinate is logarithmic."""
    if C.r != C.n:
        raise FiltrationError(
            f"the solver needs every coordinate logarithmic (r={C.r}, n={C.n})")
    c = C.P.log_canonical_constants()
    if c is None:
        raise FiltrationError("sigma is not log-canonical on this chart; delta need not preserve degrees")
    for k in range(C.n):
        X = hamiltonian(C.P, C.ring.var(k))
        d = X.min_degree()
        if d is not None and d < 2:
            raise FiltrationError(f"delta({C.labels[k]}) drops degree", witness=X)
    return c


def generator_matrix(C: LogChart) -> list:
    """``x[i][m]``: constant log-frame coefficient of ``X_i`` on ``z_m d_m``."""
    return [_constant_log_vector(X) for X in log_hamiltonians(C)]


def _log_monomials(R: ConnMatrix) -> dict:
    """``{alpha: {(a, b, m): coeff}}`` from the log-frame coefficients of ``R``."""
    out = {}
    e = R.e
    for a in range(e):
        for b in range(e):
            for (m,), c in R.entries[a][b].log_coefficients().items():
                for alpha, v in c.terms.items():
                    out.setdefault(alpha, {})[(a, b, m)] = v
    return out


def _kappa_blocks(S: SpectralData):
    return [(b.lam, P) for b, P in zip(S.blocks, S.projectors())]


def _resolve_order(order, size: int):
    if order is None:
        return list(range(size))
    if isinstance(order, random.Random):
        perm = list(range(size))
        order.shuffle(perm)
        return perm
    if isinstance(order, int):
        perm = list(range(size))
        random.Random(order).shuffle(perm)
        return perm
    perm = list(order)
    if sorted(perm) != list(range(size)):
        raise ShapeError("unknown order must be a permutation")
    return perm


def _alpha_system(x, A, alpha, e):
    """Rows of the per-monomial operator, keyed ``(a, b, m)``; columns by ``a*e+b``."""
    n = len(x[0]) if x else 0
    r = len(A)
    rows = []
    keys = []
    for m in range(n):
        for a in range(e):
            for b in range(e):
                row = [ZERO] * (e * e)
                for i in range(r):
                    xi = x[i][m]
                    if not xi:
                        continue
                    Ai = A[i]
                    if alpha[i]:
                        row[a * e + b] = row[a * e + b] + xi * alpha[i]
                    # (k A_i)_ab = sum_c k_ac A_i[c][b]
                    for c in range(e):
                        if Ai[c][b]:
                            row[a * e + c] = row[a * e + c] + xi * Ai[c][b]
                    # -(A_i k)_ab = -sum_c A_i[a][c] k_cb
                    for c in range(e):
                        if Ai[a][c]:
                            row[c * e + b] = row[c * e + b] - xi * Ai[a][c]
                rows.append(row)
                keys.append((a, b, m))
    return rows, keys


def _block_denominators(S, blocks, rhs_mats, alpha, n):
    """Denominator vectors for spectral blocks hit by the right-hand side."""
    out = []
    for lam, P in blocks:
        for lamp, Pp in blocks:
            hit = any(not linalg.is_zero(linalg.matmul(linalg.matmul(P, M), Pp)) for M in rhs_mats)
            if not hit:
                continue
            w = tuple(alpha[i] + lamp[i] - lam[i] for i in range(len(lam)))
            if all(not x for x in w):
                raise ResonanceError(
                    f"zero denominator for blocks {lam} <- {lamp} at alpha={alpha}; "
                    "requires the residues to be non-resonant at p if no difference of joint "
                    "eigenvalue tuples is a nonzero non-negative integer vector",
                    kappa=lam, kappa_prime=lamp, alpha=alpha)
            out.append(Denominator(lam, lamp, tuple(alpha), w))
    return out


# ---------------------------------------------------------------------------
# public operations


def defect(C: LogChart, Theta: ConnMatrix, H, Theta0: ConnMatrix) -> ConnMatrix:
    """``(delta H) H^-1 + H Theta H^-1 - Theta_0``."""
    return gauge_transform(C, Theta, H) - Theta0


def homological_solve(C: LogChart, Theta0: ConnMatrix, R_N: ConnMatrix, N: int, A, *,
                      spectrum: SpectralData | None = None, order=None):
    """Solve ``delta(K) + [K, Theta_0] = -R_N`` for ``K`` homogeneous of degree ``N``.

    Returns ``(K, denominators)``.  ``order`` permutes the unknowns before
    elimination; the solution is pivot-minimal (free unknowns zero).
    """
    check_filtration(C)
    ring = R_N.ring
    e = R_N.e
    x = generator_matrix(C.with_ring(ring) if C.ring != ring else C)
    S = spectrum or joint_spectrum(A, e)
    blocks = _kappa_blocks(S)
    perm = _resolve_order(order, e * e)
    mons = _log_monomials(R_N)
    for alpha in mons:
        if sum(alpha) != N or any(a < 0 for a in alpha):
            raise ShapeError(f"defect term z^{alpha} is not holomorphic of degree {N}")
    K = [[ring.zero() for _ in range(e)] for _ in range(e)]
    dens = []
    for alpha in sorted(mons, reverse=True):
        coeffs = mons[alpha]
        rhs_mats = []
        for m in range(ring.n):
            M = [[coeffs.get((a, b, m), ZERO) for b in range(e)] for a in range(e)]
            if not linalg.is_zero(M):
                rhs_mats.append(M)
        dens.extend(_block_denominators(S, blocks, rhs_mats, alpha, ring.n))
        rows, keys = _alpha_system(x, A, alpha, e)
        rhs = [-coeffs.get(k, ZERO) for k in keys]
        sol = linalg.solve(rows, rhs, perm)
        if sol is None:
            raise InconsistentSystemError(
                f"homological equation has no solution at alpha={alpha} "
                "(flatness fails or the diagonal obstruction is nonzero)", witness=alpha)
        for u, v in enumerate(sol):
            if v:
                a, b = divmod(u, e)
                K[a][b] = K[a][b] + LaurentPoly.monomial(ring, alpha, v)
    return K, dens


def closed_form_solve(C: LogChart, R_N: ConnMatrix, A, spectrum: SpectralData):
    """Blockwise ``K = -Lambda`` when each block of ``R`` is ``Lambda (x) sum w_i X_i``.

    Needs semisimple residues.  Returns ``None`` if some block is not of
    that proportional shape.
    """
    ring = R_N.ring
    e = R_N.e
    if any(b.nilpotency_bound > 1 for b in spectrum.blocks):
        return None
    x = generator_matrix(C.with_ring(ring) if C.ring != ring else C)
    blocks = _kappa_blocks(spectrum)
    K = [[ring.zero() for _ in range(e)] for _ in range(e)]
    for alpha, coeffs in _log_monomials(R_N).items():
        total = linalg.zeros(e)
        for lam, P in blocks:
            for lamp, Pp in blocks:
                w = [alpha[i] + lamp[i] - lam[i] for i in range(len(lam))]
                wx = [sum((w[i] * x[i][m] for i in range(len(w))), ZERO) for m in range(ring.n)]
                mats = []
                for m in range(ring.n):
                    M = [[coeffs.get((a, b, m), ZERO) for b in range(e)] for a in range(e)]
                    mats.append(linalg.matmul(linalg.matmul(P, M), Pp))
                if all(linalg.is_zero(M) for M in mats):
                    continue
                m0 = next((m for m in range(ring.n) if wx[m]), None)
                if m0 is None:
                    return None
                Lam = linalg.scale(mats[m0], wx[m0].inverse())
                for m in range(ring.n):
                    if not linalg.is_zero(linalg.sub(mats[m], linalg.scale(Lam, wx[m]))):
                        return None
                total = linalg.sub(total, Lam)
        for a in range(e):
            for b in range(e):
                if total[a][b]:
                    K[a][b] = K[a][b] + LaurentPoly.monomial(ring, alpha, total[a][b])
    return K


def defect_compatibility(C: LogChart, Theta0: ConnMatrix, R: ConnMatrix, A, N: int) -> Verdict:
    """``delta(R) - sum_i X_i ^ [A_i, R]`` vanishes through log degree ``N``.

    This is the linearisation at ``Theta_0`` of ``delta(Theta) - Theta ^ Theta``.
    """
    ring = R.ring
    Cr = C.with_ring(ring) if C.ring != ring else C
    X = log_hamiltonians(Cr)
    e = R.e
    for a in range(e):
        for b in range(e):
            acc = lichnerowicz(Cr.P, R.entries[a][b]) if R.entries[a][b] else Polyvector.zero(ring, 2)
            for i, Ai in enumerate(A):
                comm = Polyvector.zero(ring, 1)
                for c in range(e):
                    if Ai[a][c]:
                        comm = comm + R.entries[c][b] * Ai[a][c]
                    if Ai[c][b]:
                        comm = comm - R.entries[a][c] * Ai[c][b]
                if comm:
                    acc = acc - wedge(X[i], comm)
            for idx, p in acc.comps.items():
                low = [ex for ex in p.terms if sum(ex) <= N + 2]
                if low:
                    return Verdict(False, where=(a, b, idx), witness=p)
    return Verdict(True)


def _lowest_log_degree_ok(R: ConnMatrix, N: int) -> bool:
    d = R.log_min_degree()
    return d is None or d >= N


def normalize(C: LogChart, Theta: ConnMatrix, T: int, *, residues=None, mode: str = "symmetric",
              order=None, check_defects: bool = False) -> NormalizationResult:
    """Gauge ``Theta`` to ``sum A_i X_i`` through total degree ``T``.

    ``residues`` fixes the split ``Theta = Theta_0 + V`` (needed when the
    constant parts of the ``X_i`` are dependent); otherwise it is extracted.
    """
    ring = internal_ring(Theta.ring, T)
    Cr = C.with_ring(ring)
    check_filtration(Cr)
    Th = Theta.in_ring(ring)
    if not Th.is_log_tangent():
        raise ShapeError("connection entries are not tangent to the divisor")
    e = Th.e
    if residues is None:
        A, V = extract_principal(Cr, Th)
    else:
        A = [[list(map(_scalar, row)) for row in M] for M in residues]
        V = Th - ep_principal(Cr, A, e, check=False)
    if not _lowest_log_degree_ok(V, 1):
        raise ShapeError("V must vanish at the origin in the log frame; check the supplied residues")
    v = check_commuting(A)
    if not v:
        raise NonCommutingError(
            f"residues A_{v.where[0] + 1} and A_{v.where[1] + 1} do not commute "
            "(the principal part is flat only if the residue tuple commutes)", witness=v.witness)
    K = frame_curvature(Cr, Th)
    if not curvature_is_zero(K):
        raise NotFlatError("connection is not Poisson-flat (or simply flat) within the truncation",
                           witness=K)
    S = joint_spectrum(A, e)
    nr = check_nonresonance(S, mode)
    if not nr:
        ka, kb = nr.where
        lam, lamp = S.blocks[ka].lam, S.blocks[kb].lam
        raise ResonanceError(
            f"resonant residues: lambda_k - lambda_k' = {nr.witness} is a nonzero non-negative "
            "integer vector; normalisation requires the tuple to be non-resonant at p if no such "
            "difference occurs", kappa=lam, kappa_prime=lamp, alpha=nr.witness)
    Theta0 = ep_principal(Cr, A, e, check=False)
    cur = Th
    H = poly_identity(ring, e)
    cert = []
    for N in range(1, T + 1):
        R = cur - Theta0
        if not _lowest_log_degree_ok(R, N):
            raise PreconditionError(f"defect has a term below degree {N}; induction invariant broken")
        if check_defects:
            dc = defect_compatibility(Cr, Theta0, R, A, N)
            if not dc:
                raise PreconditionError(f"linearised flatness fails at degree {N}", witness=dc.witness)
        R_N = R.log_homogeneous_part(N)
        if R_N.is_zero():
            cert.append(DegreeRecord(N, [], [], [[ring.zero()] * e for _ in range(e)]))
            continue
        Kn, dens = homological_solve(Cr, Theta0, R_N, N, A, spectrum=S, order=order)
        support = sorted(_log_monomials(R_N), reverse=True)
        cert.append(DegreeRecord(N, support, dens, Kn))
        g = [[x + y for x, y in zip(r, s)] for r, s in zip(poly_identity(ring, e), Kn)]
        cur = gauge_transform(Cr, cur, g)
        H = poly_matmul(g, H)
    R = cur - Theta0
    if not R.is_zero():
        raise PreconditionError("residual defect after the last degree", witness=R)
    H = [[LaurentPoly(ring, {ex: c for ex, c in x.terms.items() if sum(ex) <= T}) for x in row]
         for row in H]
    if gauge_transform(Cr, Th, H) != Theta0:
        raise PreconditionError("independent check failed: the gauge does not reach the normal form")
    return NormalizationResult(H, Theta0, A, cert, T, ring, spectrum=S)


def _scalar(x):
    from .series import as_scalar
    return as_scalar(x)


def truncate_matrix(G, T: int):
    return [[LaurentPoly(x.ring, {ex: c for ex, c in x.terms.items() if sum(ex) <= T}) for x in row]
            for row in G]


def verify_uniqueness(C: LogChart, Theta: ConnMatrix, H1, H2, A, T: int) -> Verdict:
    """``G = H2 H1^-1`` has Casimir entries and commutes with every ``A_i``."""
    ring = internal_ring(Theta.ring, T)
    Cr = C.with_ring(ring)
    Th = Theta.in_ring(ring)
    e = Th.e
    Theta0 = ep_principal(Cr, A, e, check=False)
    H1 = poly_mat_in_ring(poly_matrix(ring, H1), ring)
    H2 = poly_mat_in_ring(poly_matrix(ring, H2), ring)
    for name, H in (("H1", H1), ("H2", H2)):
        if gauge_transform(Cr, Th, H) != Theta0:
            raise PreconditionError(f"{name} does not send the connection to the normal form")
    G = truncate_matrix(poly_matmul(H2, series_inverse(H1)), T)
    for a in range(e):
        for b in range(e):
            dG = hamiltonian(Cr.P, G[a][b])
            if dG:
                return Verdict(False, where=("casimir", a, b), witness=dG)
    cz = centralizer_check(G, A)
    if not cz:
        return Verdict(False, where=("centralizer", cz.where), witness=cz.witness)
    return Verdict(True, witness=G)


def stabilizer_kernel(C: LogChart, A, d: int):
    """Kernel of the homogeneous operator ``delta(G) + [G, Theta_0]`` at degree ``d``.

    Returns a list of ``(alpha, k)`` pairs, one per basis vector of the kernel
    of each per-monomial system.
    """
    check_filtration(C)
    e = len(A[0])
    x = generator_matrix(C)
    out = []
    for alpha in _compositions(d, C.n):
        rows, _ = _alpha_system(x, A, alpha, e)
        for v in linalg.kernel(rows, e * e):
            k = [[v[a * e + b] for b in range(e)] for a in range(e)]
            out.append((alpha, k))
    return out


def check_stabilizer_kernel(C: LogChart, A, d: int) -> Verdict:
    """Every kernel element ``z^alpha k`` is Casimir and commutes with all ``A_i``."""
    for alpha, k in stabilizer_kernel(C, A, d):
        f = LaurentPoly.monomial(C.ring, alpha)
        if hamiltonian(C.P, f):
            return Verdict(False, where=alpha, witness=k, note="non-Casimir stabilizer")
        cz = centralizer_check(k, A)
        if not cz:
            return Verdict(False, where=alpha, witness=k, note="outside the centralizer")
    return Verdict(True)


def _compositions(d: int, n: int):
    if n == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in _compositions(d - first, n - 1):
            yield (first,) + rest
