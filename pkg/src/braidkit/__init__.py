"""
braidkit: an exact symbolic workbench over Q(q) for quantum matrix
algebras (RTT, reflection-equation and modified reflection-equation),
their finite-dimensional braided representations, idempotents and the
braided index pairing, and q-analogs of the Laplace, Dirac and Maxwell
operators.

Everything is verified by exact arithmetic; no floats anywhere.
"""

from .scalars import QScalar, eval_at, limit_coefficient, parse_scalar, q, qint, qpow, render_scalar

__all__ = [
    "QScalar",
    "q",
    "qint",
    "qpow",
    "eval_at",
    "limit_coefficient",
    "parse_scalar",
    "render_scalar",
]

__version__ = "0.1.0"
