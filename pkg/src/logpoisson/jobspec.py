"""The line-based job format read by the command-line tool.

A job file has three sections::

    # C^2 worked example
    [chart]
    labels = z1, z2
    log = z1, z2
    trunc = 4
    sigma = (z1*z2)*d1^d2

    [connection]
    e = 2
    A1 = [1/2, 0; 0, 0]
    A2 = [0, 0; 0, 0]
    V[1,2] = (1/2*z1*z2)*d2

    [job]
    command = normalize

Polyvectors are sums of ``(poly)*dI^dJ`` terms (``dK`` is the K-th
coordinate vector field, 1-based); log forms use ``LK`` for the K-th log
frame slot.  Scalars are exact: ``3/4``, ``-1/2+1/3*i``.  Floats are
rejected.  A chart may instead be given as ``l1111 = a0, a1, a2, a3``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations

from .chart import LogChart
from .connection import ConnMatrix, ep_principal
from .errors import ParseError, ShapeError
from .monodromy import LeafLetter, MeridianLetter
from .poisson import LogForm, PoissonStructure, Polyvector
from .rank2 import L1111_LABELS, L1111Params, PoissonTriple, l1111_structure
from .series import LaurentPoly, Ring, parse_poly, parse_scalar

COMMANDS = (
    "check-jacobi", "check-h3", "log-hamiltonians", "koszul", "curvature", "gauge",
    "extract-principal", "spectrum", "nonresonance", "normalize", "verify-uniqueness",
    "character", "twisted-eval", "transport-1d", "rank2-mc", "rank2-criterion", "rank2-luuw",
    "l1111-build", "xi-check", "poincare-primitive", "rank-at",
)

SECTIONS = ("chart", "connection", "job")


@dataclass
class Entry:
    value: str
    line: int
    col: int


@dataclass
class JobSpec:
    command: str
    chart: LogChart
    trunc: int
    e: int | None = None
    residues: list | None = None
    theta: ConnMatrix | None = None
    params: dict = field(default_factory=dict)
    l1111: L1111Params | None = None
    mode: str = "symmetric"
    steps: int = 100_000
    seed: int | None = None
    source: str = ""


# ---------------------------------------------------------------------------
# raw sections


def split_sections(text: str) -> dict:
    sections = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        s = line.strip()
        if s.startswith("["):
            m = re.fullmatch(r"\[\s*([a-z]+)\s*\]", s)
            if not m or m.group(1) not in SECTIONS:
                raise ParseError(f"unknown section header {s!r}", lineno, raw.index("[") + 1)
            current = m.group(1)
            if current in sections:
                raise ParseError(f"duplicate section [{current}]", lineno, 1)
            sections[current] = {}
            continue
        if current is None:
            raise ParseError("content before the first section header", lineno, 1)
        if "=" not in line:
            raise ParseError("expected 'key = value'", lineno, len(raw) - len(raw.lstrip()) + 1)
        key, _, value = line.partition("=")
        k = key.strip()
        if not k:
            raise ParseError("missing key", lineno, 1)
        if k in sections[current]:
            raise ParseError(f"duplicate key {k!r}", lineno, raw.index(k) + 1)
        col = len(key) + 2 + (len(value) - len(value.lstrip()))
        sections[current][k] = Entry(value.strip(), lineno, col)
    return sections


# ---------------------------------------------------------------------------
# value grammars


def _int(ent: Entry, lo: int | None = None) -> int:
    if not re.fullmatch(r"[-+]?\d+", ent.value):
        raise ParseError(f"integer expected, got {ent.value!r}", ent.line, ent.col)
    v = int(ent.value)
    if lo is not None and v < lo:
        raise ParseError(f"value must be >= {lo}", ent.line, ent.col)
    return v


def _list(ent: Entry):
    """Comma-separated items with their columns."""
    out = []
    pos = 0
    for part in ent.value.split(","):
        lead = len(part) - len(part.lstrip())
        out.append((part.strip(), ent.col + pos + lead))
        pos += len(part) + 1
    return out


def scalars(ent: Entry) -> list:
    return [parse_scalar(s, line=ent.line, col=c) for s, c in _list(ent) if s]


def ints(ent: Entry) -> list:
    out = []
    for s, c in _list(ent):
        if not re.fullmatch(r"[-+]?\d+", s):
            raise ParseError(f"integer expected, got {s!r}", ent.line, c)
        out.append(int(s))
    return out


def matrix(ent: Entry, e: int | None = None) -> list:
    v = ent.value
    if not (v.startswith("[") and v.endswith("]")):
        raise ParseError("matrix must be written [a, b; c, d]", ent.line, ent.col)
    body = v[1:-1]
    rows = []
    offset = ent.col + 1
    for rtext in body.split(";"):
        rows.append(scalars(Entry(rtext, ent.line, offset)))
        offset += len(rtext) + 1
    size = len(rows)
    if any(len(r) != size for r in rows):
        raise ParseError("matrix must be square", ent.line, ent.col)
    if e is not None and size != e:
        raise ParseError(f"matrix must be {e}x{e}", ent.line, ent.col)
    return rows


_CHAIN = re.compile(r"([dL])(\d+)((?:\s*\^\s*[dL]\d+)*)")


def _canonical_chains(text: str, letter: str, n: int, line: int, col: int) -> str:
    """Rewrite ``dA^dB`` chains as ``(s*dA'*dB')`` with sorted indices and sign."""
    def repl(m):
        if m.group(1) != letter:
            raise ParseError(f"unexpected symbol {m.group(1)}{m.group(2)}", line, col + m.start())
        idx = [int(m.group(2))] + [int(x) for x in re.findall(r"\d+", m.group(3))]
        for k in idx:
            if not 1 <= k <= n:
                raise ParseError(f"index {letter}{k} out of range 1..{n}", line, col + m.start())
        if len(set(idx)) != len(idx):
            return "0"
        inv = sum(1 for a, b in combinations(idx, 2) if a > b)
        body = "*".join(f"{letter}{k}" for k in sorted(idx))
        return f"({'-1' if inv % 2 else '1'}*{body})"
    return _CHAIN.sub(lambda m: repl(m) if _word_start(text, m.start()) else m.group(0), text)


def _word_start(text: str, i: int) -> bool:
    return i == 0 or not (text[i - 1].isalnum() or text[i - 1] == "_")


def _graded(text: str, ring: Ring, letter: str, line: int, col: int, grade: int | None):
    n = ring.n
    names = tuple(f"{letter}{k + 1}" for k in range(n))
    if set(names) & set(ring.labels):
        raise ParseError(f"coordinate labels clash with {letter}-symbols", line, col)
    rewritten = _canonical_chains(text, letter, n, line, col)
    big = Ring(2 * n, ring.log_coords, trunc=ring.trunc + n, pole_bound=ring.pole_bound,
               labels=ring.labels + names)
    try:
        p = parse_poly(rewritten, big, line=line, col=col)
    except ParseError as exc:
        if rewritten != text:
            raise ParseError(exc.bare_message, line, col) from None
        raise
    comps = {}
    grades = set()
    for ex, c in p.terms.items():
        dpart = ex[n:]
        if any(x > 1 for x in dpart):
            raise ParseError(f"repeated {letter}-index in a term", line, col)
        idx = tuple(k for k, x in enumerate(dpart) if x)
        grades.add(len(idx))
        mono = ex[:n]
        if sum(mono) > ring.trunc:
            continue
        comps.setdefault(idx, {})[mono] = c
    if len(grades) > 1:
        raise ParseError(f"mixed grades {sorted(grades)} in one expression", line, col)
    g = grades.pop() if grades else (grade or 0)
    if grade is not None and g != grade and comps:
        raise ParseError(f"expected grade {grade}, got {g}", line, col)
    return g, {idx: LaurentPoly(ring, t) for idx, t in comps.items()}


def parse_polyvector(text: str, ring: Ring, *, grade: int | None = None, line: int = 0,
                     col: int = 1) -> Polyvector:
    g, comps = _graded(text, ring, "d", line, col, grade)
    return Polyvector(ring, g if grade is None else grade, comps)


def parse_logform(text: str, ring: Ring, *, grade: int | None = None, line: int = 0,
                  col: int = 1) -> LogForm:
    g, comps = _graded(text, ring, "L", line, col, grade)
    return LogForm(ring, g if grade is None else grade, comps)


def _pv(ent: Entry, ring: Ring, grade: int | None = None) -> Polyvector:
    return parse_polyvector(ent.value, ring, grade=grade, line=ent.line, col=ent.col)


def _form(ent: Entry, ring: Ring, grade: int | None = None) -> LogForm:
    return parse_logform(ent.value, ring, grade=grade, line=ent.line, col=ent.col)


def _poly(ent: Entry, ring: Ring) -> LaurentPoly:
    return parse_poly(ent.value, ring, line=ent.line, col=ent.col)


_INDEXED = re.compile(r"([A-Za-z]\w*)\[\s*(\d+)\s*,\s*(\d+)\s*\]")


def _indexed(section: dict, name: str, e: int) -> dict:
    out = {}
    for key, ent in section.items():
        m = _INDEXED.fullmatch(key)
        if m and m.group(1) == name:
            a, b = int(m.group(2)), int(m.group(3))
            if not (1 <= a <= e and 1 <= b <= e):
                raise ParseError(f"index {key} outside 1..{e}", ent.line, 1)
            out[(a - 1, b - 1)] = ent
    return out


def poly_matrix_from(section: dict, name: str, e: int, ring: Ring, *, identity_default=False):
    ents = _indexed(section, name, e)
    if not ents:
        return None
    M = [[(ring.one() if (a == b and identity_default) else ring.zero()) for b in range(e)]
         for a in range(e)]
    for (a, b), ent in ents.items():
        M[a][b] = _poly(ent, ring)
    return M


def parse_word(ent: Entry, r: int) -> list:
    """Letters ``gen``, ``gen^-1`` and ``m(1,0,...)`` separated by commas."""
    letters = []
    for m in re.finditer(r"m\([^)]*\)|[^,\s]+", ent.value):
        tok, col = m.group(0), ent.col + m.start()
        mm = re.fullmatch(r"m\(([^)]*)\)", tok)
        if mm:
            vec = ints(Entry(mm.group(1), ent.line, col + 2))
            if len(vec) != r:
                raise ParseError(f"meridian needs {r} entries", ent.line, col)
            letters.append(MeridianLetter(tuple(vec)))
            continue
        mm = re.fullmatch(r"([A-Za-z]\w*)(\^-1)?", tok)
        if not mm:
            raise ParseError(f"bad word letter {tok!r}", ent.line, col)
        letters.append(LeafLetter(mm.group(1), bool(mm.group(2))))
    return letters


# ---------------------------------------------------------------------------
# the job spec


ALLOWED_CHART = {"labels", "log", "trunc", "pole_bound", "sigma", "l1111"}
ALLOWED_CONN = {"e"}


def _labels(ent: Entry) -> tuple:
    labs = tuple(s for s, _ in _list(ent))
    for s, c in _list(ent):
        if not re.fullmatch(r"[A-Za-z_]\w*", s) or s == "i" or re.fullmatch(r"[dL]\d+", s):
            raise ParseError(f"bad coordinate label {s!r}", ent.line, c)
    if len(set(labs)) != len(labs):
        raise ParseError("duplicate coordinate labels", ent.line, ent.col)
    return labs


def parse_jobspec(text: str, *, trunc: int | None = None, pole_bound: int | None = None,
                  mode: str | None = None, steps: int | None = None,
                  seed: int | None = None) -> JobSpec:
    """Parse and validate a job file; flags override values from the file."""
    sec = split_sections(text)
    if "job" not in sec:
        raise ParseError("missing [job] section", 1, 1)
    job = sec["job"]
    if "command" not in job:
        raise ParseError("missing 'command' in [job]", 1, 1)
    cmd_ent = job["command"]
    command = cmd_ent.value
    if command not in COMMANDS:
        raise ParseError(f"unknown command {command!r}", cmd_ent.line, cmd_ent.col)

    chart_sec = sec.get("chart")
    if chart_sec is None:
        raise ParseError("missing [chart] section", 1, 1)
    for k, ent in chart_sec.items():
        if k not in ALLOWED_CHART:
            raise ParseError(f"unknown chart key {k!r}", ent.line, 1)
    T = trunc if trunc is not None else (_int(chart_sec["trunc"], 0) if "trunc" in chart_sec else 6)
    pb = pole_bound if pole_bound is not None else (
        _int(chart_sec["pole_bound"], 0) if "pole_bound" in chart_sec else 1)

    l1111 = None
    if "l1111" in chart_sec:
        ent = chart_sec["l1111"]
        try:
            l1111 = L1111Params(tuple(scalars(ent)))
        except ShapeError as exc:
            raise ParseError(str(exc), ent.line, ent.col) from None
        labels = L1111_LABELS
        if "labels" in chart_sec:
            raise ParseError("l1111 charts use the fixed labels z0..z3", chart_sec["labels"].line, 1)
        if "sigma" in chart_sec:
            raise ParseError("give either sigma or l1111, not both", chart_sec["sigma"].line, 1)
    else:
        if "labels" not in chart_sec:
            raise ParseError("chart needs 'labels'", 1, 1)
        labels = _labels(chart_sec["labels"])
    log = ()
    if "log" in chart_sec:
        ent = chart_sec["log"]
        log_l = []
        for s, c in _list(ent):
            if not s:
                continue
            if s not in labels:
                raise ParseError(f"log coordinate {s!r} is not a chart label", ent.line, c)
            log_l.append(labels.index(s))
        log = tuple(log_l)
    elif l1111 is not None:
        log = (1, 2, 3)
    try:
        ring = Ring(len(labels), log, trunc=T, pole_bound=pb, labels=labels)
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1) from None
    if l1111 is not None:
        chart = l1111_structure(l1111, log, trunc=T, pole_bound=pb)
    else:
        if "sigma" not in chart_sec:
            raise ParseError("chart needs 'sigma' (or 'l1111')", 1, 1)
        chart = LogChart(PoissonStructure(_pv(chart_sec["sigma"], ring, 2)))
    ring = chart.ring

    spec = JobSpec(command=command, chart=chart, trunc=T, l1111=l1111, source=text)
    spec.mode = mode or (job["mode"].value if "mode" in job else "symmetric")
    spec.mode = spec.mode.replace("-", "_")
    if spec.mode not in ("symmetric", "as_stated"):
        raise ParseError(f"unknown non-resonance mode {spec.mode!r}", 1, 1)
    spec.steps = steps if steps is not None else (_int(job["steps"], 1) if "steps" in job else 100_000)
    spec.seed = seed if seed is not None else (_int(job["seed"]) if "seed" in job else None)

    conn = sec.get("connection")
    if conn is not None:
        _parse_connection(spec, conn, ring)
    _parse_params(spec, job, ring)
    return spec


def _parse_connection(spec: JobSpec, conn: dict, ring: Ring):
    if "e" not in conn:
        raise ParseError("connection needs 'e'", 1, 1)
    e = _int(conn["e"], 1)
    spec.e = e
    C = spec.chart
    A = []
    for i in range(C.r):
        key = f"A{i + 1}"
        if key in conn:
            A.append(matrix(conn[key], e))
    if A and len(A) != C.r:
        raise ParseError(f"give all residues A1..A{C.r} or none", 1, 1)
    for key, ent in conn.items():
        if key == "e" or re.fullmatch(r"A\d+", key) and int(key[1:]) <= C.r:
            continue
        m = _INDEXED.fullmatch(key)
        if not (m and m.group(1) in ("theta", "V")):
            raise ParseError(f"unknown connection key {key!r}", ent.line, 1)
    spec.residues = A or None
    theta = _indexed(conn, "theta", e)
    V = _indexed(conn, "V", e)
    if theta and (V or A):
        raise ParseError("give either theta[a,b] entries or residues plus V[a,b]", 1, 1)
    if theta:
        M = ConnMatrix.zero(ring, e).entries
        for (a, b), ent in theta.items():
            M[a][b] = _pv(ent, ring, 1)
        spec.theta = ConnMatrix(ring, M)
    elif A:
        base = ep_principal(C, A, e, check=False)
        M = [row[:] for row in base.entries]
        for (a, b), ent in V.items():
            M[a][b] = M[a][b] + _pv(ent, ring, 1)
        spec.theta = ConnMatrix(ring, M)
    elif V:
        raise ParseError("V[a,b] entries need residues A1..Ar", 1, 1)


def _need(job: dict, key: str) -> Entry:
    if key not in job:
        raise ParseError(f"command needs '{key}' in [job]", 1, 1)
    return job[key]


PARAM_KEYS = {
    "koszul": {"alpha", "beta"},
    "gauge": {"convention"},
    "curvature": {"kind"},
    "normalize": {"T", "order"},
    "verify-uniqueness": {"T"},
    "character": {"m"},
    "twisted-eval": {"word"},
    "transport-1d": {"a"},
    "rank2-mc": {"u", "v", "w"},
    "rank2-criterion": {"v"},
    "rank2-luuw": {"u", "v"},
    "poincare-primitive": {"eta"},
    "rank-at": {"point"},
}


def _parse_params(spec: JobSpec, job: dict, ring: Ring):
    cmd = spec.command
    allowed = {"command", "mode", "steps", "seed"} | PARAM_KEYS.get(cmd, set())
    for key, ent in job.items():
        if key in allowed:
            continue
        m = _INDEXED.fullmatch(key)
        if m and m.group(1) in ("g", "H1", "H2") and cmd in ("gauge", "verify-uniqueness"):
            continue
        if cmd == "twisted-eval" and key.startswith("rho."):
            continue
        raise ParseError(f"key {key!r} is not used by {cmd}", ent.line, 1)
    p = spec.params
    needs_conn = {"curvature", "gauge", "extract-principal", "spectrum", "nonresonance",
                  "normalize", "verify-uniqueness", "character", "twisted-eval"}
    if cmd in needs_conn and spec.e is None:
        raise ParseError(f"{cmd} needs a [connection] section", 1, 1)
    if cmd in ("spectrum", "nonresonance", "character", "twisted-eval") and spec.residues is None:
        raise ParseError(f"{cmd} needs residues A1..Ar", 1, 1)
    if cmd in ("curvature", "gauge", "extract-principal", "normalize", "verify-uniqueness") \
            and spec.theta is None:
        raise ParseError(f"{cmd} needs a connection matrix", 1, 1)
    if cmd == "koszul":
        p["alpha"] = _form(_need(job, "alpha"), ring, 1)
        p["beta"] = _form(_need(job, "beta"), ring, 1)
    elif cmd == "gauge":
        g = poly_matrix_from(job, "g", spec.e, ring, identity_default=True)
        if g is None:
            raise ParseError("gauge needs g[a,b] entries", 1, 1)
        p["g"] = g
        conv = job["convention"].value if "convention" in job else "frame"
        if conv not in ("frame", "section"):
            raise ParseError("convention must be frame or section", job["convention"].line, job["convention"].col)
        p["convention"] = conv
    elif cmd == "curvature":
        kind = job["kind"].value if "kind" in job else "poisson"
        if kind not in ("poisson", "frame"):
            raise ParseError("kind must be poisson or frame", job["kind"].line, job["kind"].col)
        p["kind"] = kind
    elif cmd in ("normalize", "verify-uniqueness"):
        p["T"] = _int(job["T"], 1) if "T" in job else spec.trunc
        if cmd == "normalize" and "order" in job:
            p["order"] = _int(job["order"])
        if cmd == "verify-uniqueness":
            for name in ("H1", "H2"):
                p[name] = poly_matrix_from(job, name, spec.e, ring, identity_default=True)
    elif cmd == "character":
        ent = _need(job, "m")
        m = ints(ent)
        if len(m) != spec.chart.r:
            raise ParseError(f"m needs {spec.chart.r} entries", ent.line, ent.col)
        p["m"] = m
    elif cmd == "twisted-eval":
        ent = _need(job, "word")
        letters = parse_word(ent, spec.chart.r)
        rho = {}
        for key, e2 in job.items():
            if key.startswith("rho."):
                rho[key[4:]] = matrix(e2, spec.e)
        for L in letters:
            if isinstance(L, LeafLetter) and L.gen not in rho:
                raise ParseError(f"no rho.{L.gen} given", ent.line, ent.col)
        p["word"] = letters
        p["rho"] = rho
    elif cmd == "transport-1d":
        ent = _need(job, "a")
        p["a"] = parse_scalar(ent.value, line=ent.line, col=ent.col)
        if spec.steps < 1000:
            raise ParseError("steps must be at least 1000", 1, 1)
    elif cmd == "rank2-mc":
        p["triple"] = PoissonTriple(*[_pv(job[k], ring, 1) if k in job else Polyvector.zero(ring, 1)
                                      for k in ("u", "v", "w")])
    elif cmd == "rank2-criterion":
        p["v"] = _pv(_need(job, "v"), ring, 1)
    elif cmd == "rank2-luuw":
        p["u"] = _pv(_need(job, "u"), ring, 1)
        p["v"] = _pv(_need(job, "v"), ring, 1)
    elif cmd == "poincare-primitive":
        p["eta"] = _form(_need(job, "eta"), ring, 1)
    elif cmd == "rank-at":
        ent = _need(job, "point")
        pt = scalars(ent)
        if len(pt) != ring.n:
            raise ParseError(f"point needs {ring.n} entries", ent.line, ent.col)
        p["point"] = pt
    elif cmd == "l1111-build" and spec.l1111 is None:
        raise ParseError("l1111-build needs 'l1111 = a0, a1, a2, a3' in [chart]", 1, 1)
