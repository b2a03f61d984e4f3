"""Dual arithmetic backend helpers.

Scalars live in one of two worlds: exact rationals (`fractions.Fraction`)
when every input was rational, and 64-bit floats otherwise.  Exact data is
carried as numpy object arrays of Fractions next to the float arrays; the
predicates that must be error-free (Jacobi, unimodularity, rationality)
loop over the exact copies, everything numerical uses the float copies.
"""

from __future__ import annotations

import os
import re
from fractions import Fraction

import numpy as np

#: Default tolerance for every float predicate; overridable via QELIE_TOL.
DEFAULT_TOL = 1e-9

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")


def default_tol() -> float:
    env = os.environ.get("QELIE_TOL")
    return float(env) if env else DEFAULT_TOL


def is_rational_literal(text: str) -> bool:
    """True for integer or p/q literals; decimal/exponent forms are floats."""
    return bool(_RATIONAL_RE.match(text.strip()))


def parse_coeff(text: str):
    """Parse a coefficient string to Fraction (exact) or float.

    Raises ValueError when the text is neither a rational literal nor a
    finite decimal float literal.
    """
    text = text.strip()
    if is_rational_literal(text):
        return Fraction(text)
    value = float(text)
    if not np.isfinite(value):
        raise ValueError(f"coefficient must be finite, got {text!r}")
    return value


def as_exact(value) -> Fraction:
    """Coerce ints/Fractions/rational strings to Fraction; floats refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str) and is_rational_literal(value):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


def is_exact_scalar(value) -> bool:
    return isinstance(value, (Fraction, int, np.integer)) or (
        isinstance(value, str) and is_rational_literal(value)
    )


def exact_zeros(shape) -> np.ndarray:
    arr = np.empty(shape, dtype=object)
    arr.fill(Fraction(0))
    return arr


def exact_to_float(arr: np.ndarray) -> np.ndarray:
    return np.asarray(arr, dtype=object).astype(float)


def format_scalar(value) -> str:
    """15-significant-digit rendering for reports; Fractions stay exact."""
    if isinstance(value, Fraction):
        return str(value)
    v = float(value)
    if v == 0.0:
        v = 0.0  # normalize -0.0
    return format(v, ".15g")
