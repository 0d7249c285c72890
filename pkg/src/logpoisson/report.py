"""Canonical text reports.

A report is a header followed by named sections of ``key: value`` lines::

    command: normalize
    status: ok
    exit-code: 0
    == residues
    A1: [1/2, 0/1; 0/1, 0/1]

Values are single lines.  :func:`parse_report` inverts :func:`emit_report`.
"""
from __future__ import annotations

from dataclasses import dataclass, field

EXIT_OK = 0
EXIT_MATH = 2
EXIT_INPUT = 3


@dataclass
class Report:
    command: str
    status: str = "ok"  # ok | fail | error
    exit_code: int = EXIT_OK
    error: str = ""
    hypothesis: str = ""
    message: str = ""
    witness: str = ""
    sections: list = field(default_factory=list)  # [(name, [(key, value), ...])]

    def section(self, name: str) -> list:
        items = []
        self.sections.append((name, items))
        return items

    def get(self, name: str) -> dict:
        for n, items in self.sections:
            if n == name:
                return dict(items)
        raise KeyError(name)


def _clean(v) -> str:
    s = str(v)
    if s.splitlines() not in ([], [s]):
        raise ValueError("report values must be single lines")
    return s


def emit_report(rep: Report) -> str:
    lines = [f"command: {_clean(rep.command)}", f"status: {rep.status}", f"exit-code: {rep.exit_code}"]
    for key, attr in (("error", rep.error), ("hypothesis", rep.hypothesis),
                      ("message", rep.message), ("witness", rep.witness)):
        if attr:
            lines.append(f"{key}: {_clean(attr)}")
    for name, items in rep.sections:
        lines.append(f"== {_clean(name)}")
        for k, v in items:
            k = _clean(k)
            if ":" in k or k.startswith("== "):
                raise ValueError("report keys may not contain ':' or start with '== '")
            lines.append(f"{k}: {_clean(v)}")
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> Report:
    lines = text.splitlines()
    header = {}
    i = 0
    while i < len(lines) and not lines[i].startswith("== "):
        k, sep, v = lines[i].partition(": ")
        if not sep:
            k, v = lines[i].rstrip(":"), ""
        header[k] = v
        i += 1
    rep = Report(command=header.get("command", ""), status=header.get("status", "ok"),
                 exit_code=int(header.get("exit-code", 0)), error=header.get("error", ""),
                 hypothesis=header.get("hypothesis", ""), message=header.get("message", ""),
                 witness=header.get("witness", ""))
    items = None
    for line in lines[i:]:
        if line.startswith("== "):
            items = rep.section(line[3:])
        else:
            k, sep, v = line.partition(": ")
            if not sep:
                k, v = line.rstrip(":"), ""
            items.append((k, v))
    return rep
