"""Command-line entry point: ``logpoisson JOBFILE`` prints a canonical report.

Exit codes: 0 success, 2 a mathematical hypothesis fails (the report names
it), 3 malformed input.
"""
from __future__ import annotations

import argparse
import sys

from . import linalg
from .chart import check_h3, log_hamiltonian, log_poincare_primitive, vector_field_class
from .connection import (extract_principal, frame_curvature, gauge_transform, poisson_curvature)
from .errors import InputError, LogPoissonError, MathematicalFailure
from .jobspec import JobSpec, parse_jobspec
from .monodromy import (format_complex, format_complex_matrix, meridional_character,
                        transport_1d, twisted_rep_eval, to_complex_matrix)
from .poisson import check_jacobi, koszul_bracket, poisson_rank_at
from .ppd import normalize, verify_uniqueness
from .rank2 import coord_criterion_check, lu_uw_check, mc_check, xi_closed_check
from .report import EXIT_INPUT, EXIT_MATH, EXIT_OK, Report, emit_report
from .series import format_scalar
from .spectral import check_nonresonance, joint_spectrum


def _tuple_text(t) -> str:
    return "(" + ", ".join(x if isinstance(x, str) else (str(x) if isinstance(x, int) else format_scalar(x))
                           for x in t) + ")"


def _matrix_text(M) -> str:
    return linalg.format_matrix(M)


def _poly_matrix_text(G) -> str:
    return "[" + "; ".join(", ".join(str(x) for x in row) for row in G) + "]"


def _conn_items(Theta, prefix="theta"):
    out = []
    for a, row in enumerate(Theta.entries):
        for b, x in enumerate(row):
            out.append((f"{prefix}[{a + 1},{b + 1}]", str(x)))
    return out


def _fail(rep: Report, hypothesis: str, message: str, witness="") -> None:
    rep.status = "fail"
    rep.exit_code = EXIT_MATH
    rep.hypothesis = hypothesis
    rep.message = message
    rep.witness = str(witness) if witness != "" else ""


def _chart_section(rep: Report, job: JobSpec):
    C = job.chart
    items = rep.section("chart")
    items.append(("labels", ", ".join(C.labels)))
    items.append(("log", ", ".join(C.labels[k] for k in C.log_coords)))
    items.append(("trunc", str(C.ring.trunc)))
    items.append(("pole_bound", str(C.ring.pole_bound)))
    items.append(("sigma", str(C.P.sigma)))


def _run_command(job: JobSpec, rep: Report) -> None:
    C, cmd, p = job.chart, job.command, job.params
    if cmd == "check-jacobi":
        v = check_jacobi(C.P)
        items = rep.section("jacobi")
        items.append(("poisson", "yes" if v else "no"))
        if not v:
            i, j, k = v.where
            items.append(("triple", f"({i + 1}, {j + 1}, {k + 1})"))
            _fail(rep, "Jacobi identity for sigma", "jacobiator is nonzero", v.witness)
    elif cmd == "check-h3":
        v = check_h3(C)
        items = rep.section("h3")
        items.append(("ok", "yes" if v else "no"))
        if not v:
            items.append(("component", str(v.where + 1)))
            _fail(rep, "(H3): each component is a Poisson hypersurface",
                  f"log Hamiltonian X_{v.where + 1} is not log-tangent ({v.note})", v.witness)
    elif cmd == "log-hamiltonians":
        items = rep.section("log-hamiltonians")
        for i in range(C.r):
            X = log_hamiltonian(C, i)
            items.append((f"X{i + 1}", str(X)))
            items.append((f"X{i + 1}.class", vector_field_class(X)))
    elif cmd == "koszul":
        res = koszul_bracket(C.P, p["alpha"], p["beta"])
        items = rep.section("koszul")
        items.append(("bracket", str(res.form)))
        items.append(("log-frame-holomorphic", "yes" if res.holomorphic else "no"))
        for idx in sorted(res.classes):
            items.append((f"class.dz{idx[0] + 1}", res.classes[idx]))
    elif cmd == "curvature":
        fn = poisson_curvature if p["kind"] == "poisson" else frame_curvature
        K = fn(C, job.theta)
        items = rep.section(f"curvature.{p['kind']}")
        flat = all(not x for row in K for x in row)
        items.append(("flat", "yes" if flat else "no"))
        for a, row in enumerate(K):
            for b, x in enumerate(row):
                items.append((f"K[{a + 1},{b + 1}]", str(x)))
        if not flat:
            _fail(rep, "Poisson-flat (or simply flat)", "curvature is nonzero")
    elif cmd == "gauge":
        out = gauge_transform(C, job.theta, p["g"], convention=p["convention"])
        items = rep.section("gauge")
        items.append(("convention", p["convention"]))
        items.extend(_conn_items(out))
    elif cmd == "extract-principal":
        A, V = extract_principal(C, job.theta)
        items = rep.section("principal")
        for i, M in enumerate(A):
            items.append((f"A{i + 1}", _matrix_text(M)))
        items.extend(_conn_items(V, "V"))
    elif cmd == "spectrum":
        S = joint_spectrum(job.residues, job.e)
        items = rep.section("spectrum")
        for k, b in enumerate(S.blocks):
            items.append((f"block{k + 1}.lambda", _tuple_text(b.lam)))
            items.append((f"block{k + 1}.dim", str(len(b.basis))))
            items.append((f"block{k + 1}.nilpotency", str(b.nilpotency_bound)))
    elif cmd == "nonresonance":
        S = joint_spectrum(job.residues, job.e)
        v = check_nonresonance(S, job.mode)
        items = rep.section("nonresonance")
        items.append(("mode", job.mode))
        items.append(("nonresonant", "yes" if v else "no"))
        if not v:
            a, b = v.where
            items.append(("kappa", _tuple_text(S.blocks[a].lam)))
            items.append(("kappa-prime", _tuple_text(S.blocks[b].lam)))
            items.append(("alpha", _tuple_text(v.witness)))
            _fail(rep, "non-resonant at p if", "a joint eigenvalue difference is a nonzero "
                  "non-negative integer vector", _tuple_text(v.witness))
    elif cmd == "normalize":
        res = normalize(C, job.theta, p["T"], residues=job.residues, mode=job.mode,
                        order=p.get("order", job.seed))
        _normalization_sections(rep, res)
    elif cmd == "verify-uniqueness":
        T = p["T"]
        H1, H2 = p.get("H1"), p.get("H2")
        if H1 is None:
            H1 = normalize(C, job.theta, T, residues=job.residues, mode=job.mode).gauge
        res2 = None
        if H2 is None:
            res2 = normalize(C, job.theta, T, residues=job.residues, mode=job.mode,
                             order=job.seed if job.seed is not None else 1)
            H2 = res2.gauge
        A = job.residues or (res2.residues if res2 else extract_principal(C, job.theta)[0])
        v = verify_uniqueness(C, job.theta, H1, H2, A, T)
        items = rep.section("uniqueness")
        items.append(("ok", "yes" if v else "no"))
        if v:
            items.append(("G", _poly_matrix_text(v.witness)))
        else:
            items.append(("where", str(v.where)))
            _fail(rep, "is Casimir-valued entrywise", "H2 H1^-1 is not a Casimir centralizer gauge",
                  v.witness)
    elif cmd == "character":
        M = meridional_character(job.residues, p["m"])
        items = rep.section("character")
        items.append(("m", _tuple_text(p["m"])))
        items.append(("value", format_complex_matrix(M)))
    elif cmd == "twisted-eval":
        rho = {k: to_complex_matrix(M) for k, M in p["rho"].items()}
        M = twisted_rep_eval(rho, job.residues, p["word"])
        items = rep.section("twisted")
        items.append(("value", format_complex_matrix(M)))
    elif cmd == "transport-1d":
        y = transport_1d(p["a"], job.steps)
        items = rep.section("transport")
        items.append(("a", format_scalar(p["a"])))
        items.append(("steps", str(job.steps)))
        items.append(("monodromy", format_complex(y, 12)))
    elif cmd == "rank2-mc":
        r = mc_check(C.P, p["triple"])
        items = rep.section("rank2-mc")
        items.append(("flat", "yes" if r.flat else "no"))
        items.append(("curvature-flat", "yes" if r.curvature_flat else "no"))
        for name, w in r.violations:
            items.append((f"violation {name}", str(w)))
        if not r.flat:
            _fail(rep, "the triple (u,v,w) satisfies", "Maurer-Cartan system fails",
                  r.violations[0][1])
    elif cmd == "rank2-criterion":
        r = coord_criterion_check(C.P, p["v"])
        items = rep.section("rank2-criterion")
        items.append(("poisson-vector-field", "yes" if r.ok else "no"))
        items.append(("agrees-with-lie-derivative", "yes" if r.agrees else "no"))
        items.append(("fails", ", ".join(f"({i + 1},{j + 1})" for i, j in r.fails)))
        if not r.ok:
            _fail(rep, "is a Poisson vector field", "coordinate criterion fails",
                  items[-1][1])
    elif cmd == "rank2-luuw":
        r = lu_uw_check(C.P, p["u"], p["v"])
        items = rep.section("rank2-luuw")
        items.append(("ok", "yes" if r.ok else "no"))
        items.append(("agrees-with-lie-derivative", "yes" if r.agrees else "no"))
        items.append(("fails", "; ".join(f"({i + 1},{j + 1}) {w}" for i, j, w in r.fails)))
        if not r.ok:
            _fail(rep, "if and only if for every i<j", "L_u sigma != u^v", items[-1][1])
    elif cmd == "l1111-build":
        items = rep.section("l1111")
        items.append(("a", _tuple_text(job.l1111.a)))
        c = job.l1111.constants()
        for key in sorted(c):
            items.append((f"c{key[0]}{key[1]}", format_scalar(c[key])))
        items.append(("jacobi", "yes" if check_jacobi(C.P) else "no"))
        items.append(("h3", "yes" if check_h3(C) else "no"))
    elif cmd == "xi-check":
        v = xi_closed_check(C)
        items = rep.section("xi-check")
        items.append(("ok", "yes" if v else "no"))
        for i in range(C.r):
            items.append((f"X{i + 1}", str(log_hamiltonian(C, i))))
        if not v:
            _fail(rep, "yields the closed formula", "closed formula disagrees with the anchor")
    elif cmd == "poincare-primitive":
        f = log_poincare_primitive(C, p["eta"])
        items = rep.section("primitive")
        items.append(("f", str(f)))
    elif cmd == "rank-at":
        k = poisson_rank_at(C.P, p["point"])
        items = rep.section("rank")
        items.append(("point", _tuple_text(p["point"])))
        items.append(("rank", str(k)))
    else:  # pragma: no cover - parse_jobspec restricts commands
        raise InputError(f"unknown command {cmd}")


def _normalization_sections(rep: Report, res) -> None:
    items = rep.section("normal-form")
    items.append(("truncation", str(res.trunc)))
    items.append(("operator", res.operator))
    for i, M in enumerate(res.residues):
        items.append((f"A{i + 1}", _matrix_text(M)))
    items.extend(_conn_items(res.normal_form, "theta0"))
    items = rep.section("gauge")
    items.append(("H", _poly_matrix_text(res.gauge)))
    items = rep.section("spectrum")
    for k, b in enumerate(res.spectrum.blocks):
        items.append((f"block{k + 1}.lambda", _tuple_text(b.lam)))
    items = rep.section("certificate")
    for rec in res.certificate:
        items.append((f"degree {rec.degree} support", ", ".join(_tuple_text(a) for a in rec.support)))
        for j, d in enumerate(rec.denominators):
            items.append((f"degree {rec.degree} denominator {j + 1}", d.text()))
        items.append((f"degree {rec.degree} K", _poly_matrix_text(rec.solution)))


def run(job: JobSpec) -> Report:
    """Execute a parsed job; mathematical failures become reports with exit code 2."""
    rep = Report(command=job.command)
    _chart_section(rep, job)
    try:
        _run_command(job, rep)
    except MathematicalFailure as exc:
        rep.status = "error"
        rep.exit_code = EXIT_MATH
        rep.error = type(exc).__name__
        rep.hypothesis = exc.hypothesis
        rep.message = str(exc)
        rep.witness = _witness_text(exc.witness)
    except InputError as exc:
        rep.status = "error"
        rep.exit_code = EXIT_INPUT
        rep.error = type(exc).__name__
        rep.message = str(exc)
    return rep


def _witness_text(w) -> str:
    if w is None:
        return ""
    if isinstance(w, tuple):
        return "(" + ", ".join(_witness_text(x) if not isinstance(x, int) else str(x) for x in w) + ")"
    if isinstance(w, list) and w and isinstance(w[0], list):
        return "[" + "; ".join(", ".join(str(x) for x in row) for row in w) + "]"
    try:
        return format_scalar(w)
    except AttributeError:
        return str(w).replace("\n", " ")


def run_text(text: str, **overrides) -> tuple:
    """Parse and run; returns ``(report_text, exit_code)``."""
    try:
        job = parse_jobspec(text, **overrides)
    except LogPoissonError as exc:
        rep = Report(command="?", status="error", exit_code=EXIT_INPUT if isinstance(exc, InputError)
                     else EXIT_MATH, error=type(exc).__name__, message=str(exc))
        return emit_report(rep), rep.exit_code
    rep = run(job)
    return emit_report(rep), rep.exit_code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="logpoisson", description=__doc__.splitlines()[0])
    ap.add_argument("job", help="job file, or - for stdin")
    ap.add_argument("--trunc", type=int, help="total-degree truncation T")
    ap.add_argument("--pole-bound", type=int, help="largest pole order on log coordinates")
    ap.add_argument("--mode", choices=["symmetric", "as-stated"], help="non-resonance test")
    ap.add_argument("--steps", type=int, help="RK4 steps for transport-1d")
    ap.add_argument("--seed", type=int, help="seed for permuted elimination orders")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.job == "-":
            text = sys.stdin.read()
        else:
            with open(args.job, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        print(f"cannot read job: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out, code = run_text(text, trunc=args.trunc, pole_bound=args.pole_bound,
                         mode=args.mode, steps=args.steps, seed=args.seed)
    sys.stdout.write(out)
    if code:
        for line in out.splitlines():
            if line.startswith("message: "):
                print(line[len("message: "):], file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
