"""Exact computations for logarithmic Poisson structures and their flat connections.

Modules:

- ``series``: scalars over Q(i), truncated Laurent polynomials, parsing
- ``poisson``: polyvectors, log forms, anchors, Lichnerowicz differential, Koszul bracket
- ``chart``: log charts, log Hamiltonians, the (H3) check, log Poincare primitives
- ``connection``: connection matrices, curvature, gauge action, principal parts
- ``spectral``: joint spectra and non-resonance
- ``ppd``: order-by-order normalisation with certificates
- ``monodromy``: meridional characters and a numerical transport oracle
- ``rank2``: trace-free rank-2 connections and the L(1,1,1,1) family
- ``cli``: job-file driven command line
"""
from .errors import (InputError, LogPoissonError, MathematicalFailure, ParseError,
                     ResonanceError, Verdict)
from .series import LaurentPoly, Ring, Scalar, parse_poly
from .poisson import LogForm, PoissonStructure, Polyvector, koszul_bracket, lichnerowicz, wedge
from .chart import LogChart, check_h3, log_hamiltonian, log_poincare_primitive
from .connection import (ConnMatrix, ep_principal, extract_principal, frame_curvature,
                         gauge_transform, poisson_curvature)
from .spectral import check_nonresonance, joint_spectrum
from .ppd import normalize, verify_uniqueness
from .monodromy import meridional_character, transport_1d, twisted_rep_eval
from .rank2 import L1111Params, l1111_structure, mc_check

__version__ = "0.1.0"
