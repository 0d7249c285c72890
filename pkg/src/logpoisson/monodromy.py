"""Meridional characters, twisted word evaluation and a 1-D transport oracle.

This is the only floating-point part of the package: exact residues go in,
complex matrices come out.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np
from scipy.linalg import expm

from .errors import NonCommutingError, ShapeError, UnknownGeneratorError
from .series import as_scalar
from .spectral import check_commuting


def to_complex_matrix(M) -> np.ndarray:
    return np.array([[complex(as_scalar(x)) for x in row] for row in M], dtype=complex)


def meridional_character(A, m: Sequence[int]) -> np.ndarray:
    """``exp(-2 pi i sum m_i A_i)``."""
    if len(m) != len(A):
        raise ShapeError(f"meridian vector needs {len(A)} entries")
    v = check_commuting(A)
    if not v:
        raise NonCommutingError("meridional characters need a commuting residue tuple",
                                witness=v.witness)
    e = len(A[0]) if A else 0
    S = np.zeros((e, e), dtype=complex)
    for mi, Ai in zip(m, A):
        if mi:
            S += int(mi) * to_complex_matrix(Ai)
    return expm(-2j * np.pi * S)


@dataclass(frozen=True)
class LeafLetter:
    gen: str
    inverse: bool = False


@dataclass(frozen=True)
class MeridianLetter:
    m: tuple


Letter = Union[LeafLetter, MeridianLetter]


def twisted_rep_eval(rho: Mapping[str, np.ndarray], A, word: Sequence[Letter]) -> np.ndarray:
    """Left-to-right product of letter images; meridians map through the character."""
    e = len(A[0]) if A else (next(iter(rho.values())).shape[0] if rho else 0)
    out = np.eye(e, dtype=complex)
    for letter in word:
        if isinstance(letter, MeridianLetter):
            out = out @ meridional_character(A, letter.m)
        else:
            if letter.gen not in rho:
                raise UnknownGeneratorError(f"no image for generator {letter.gen!r}")
            M = np.asarray(rho[letter.gen], dtype=complex)
            out = out @ (np.linalg.inv(M) if letter.inverse else M)
    return out


def transport_1d(a, steps: int = 100_000) -> complex:
    """Monodromy of ``d + a dz/z`` around ``z = eps e^{i theta}`` by classical RK4.

    Integrates ``y' = -i a y`` on ``[0, 2 pi]`` and returns ``y(2 pi) / y(0)``.
    """
    if steps < 1000:
        raise ShapeError("transport needs at least 1000 steps")
    k = -1j * complex(as_scalar(a))
    h = 2 * cmath.pi / steps
    y = 1 + 0j
    for _ in range(steps):
        k1 = k * y
        k2 = k * (y + h / 2 * k1)
        k3 = k * (y + h / 2 * k2)
        k4 = k * (y + h * k3)
        y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return y


def format_complex(z: complex, digits: int = 15) -> str:
    """Compact ``a+bi`` text at ``digits`` significant digits; tiny parts print as 0."""
    re, im = z.real, z.imag
    scale = max(abs(re), abs(im), 1.0)
    if abs(re) < 5e-15 * scale:
        re = 0.0
    if abs(im) < 5e-15 * scale:
        im = 0.0
    fr = _fmt(re, digits)
    if im == 0:
        return fr
    fi = _fmt(abs(im), digits)
    sign = "-" if im < 0 else "+"
    if re == 0:
        return f"{'-' if im < 0 else ''}{fi}i"
    return f"{fr}{sign}{fi}i"


def _fmt(x: float, digits: int) -> str:
    s = f"{x:.{digits}g}"
    return "0" if s in ("-0", "0") else s


def format_complex_matrix(M: np.ndarray) -> str:
    return "[" + "; ".join(", ".join(format_complex(z) for z in row) for row in M) + "]"
