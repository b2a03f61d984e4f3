"""Exact-arithmetic rationality checks and the Diophantine obstruction.

A simply connected nilpotent group has a discrete cocompact subgroup iff its
structure constants are rational in some basis.  Deciding that over all
bases is out of reach, so verdicts are three-valued: "rational" (witnessed in
the declared basis), "obstructed" (a family-specific reduction to the
unsolvable equation x^2 + 3 y^2 = 2 z^2), or "unknown".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

import numpy as np

from .algebra import MetricLieAlgebra
from .errors import BadParams, NotApplicable
from .scalars import is_rational_literal

__all__ = [
    "RationalityReport",
    "Obstruction",
    "Mod3DescentCertificate",
    "rational_structure_check",
    "diophantine_search",
    "mod3_descent_certificate",
    "n6a_lattice_obstruction",
    "n7a_lattice_obstruction",
]


@dataclass
class Mod3DescentCertificate:
    """Machine-checked descent for x^2 + 3 y^2 = 2 z^2.

    ``squares_mod_3`` is the enumerated residue set {k^2 mod 3}; the residue
    table lists every (x mod 3, z mod 3) with x^2 = 2 z^2 (mod 3), forcing
    3 | x and 3 | z; the 3-adic valuations of x^2 and 2 z^2 are even while
    that of 3 y^2 is odd, so dividing the minimal solution by 3 descends
    forever.
    """

    equation: tuple
    squares_mod_3: tuple
    residue_table: tuple
    forces_divisibility: bool
    valuation_parity: dict
    validated: bool


@dataclass
class Obstruction:
    equation: tuple
    verdict: str
    bound: int
    reduction: str
    certificate: Mod3DescentCertificate | None = None
    search_solutions: list | None = None


@dataclass
class RationalityReport:
    all_rational: bool
    witness_basis: np.ndarray | None = None
    obstruction: Obstruction | None = None
    details: dict | None = None

    @property
    def verdict(self) -> str:
        if self.all_rational:
            return "rational"
        if self.obstruction is not None:
            return "obstructed"
        return "unknown"


def rational_structure_check(L: MetricLieAlgebra, denominator_bound: int,
                             tol: float = 1e-12) -> RationalityReport:
    """Are the declared-basis structure constants rational?

    Exact algebras are rational by construction.  Float algebras pass iff
    every nonzero constant is within tol * |constant| of a fraction with
    denominator at most denominator_bound, recovered by continued fractions.
    The tolerance is relative: quadratic irrationals sit ~1/q^2 from their
    best approximants, which crosses an absolute 1e-12 already at q ~ 1e6.
    """
    if denominator_bound < 1:
        raise BadParams("denominator bound must be positive")
    d = L.dim
    if L.exact:
        return RationalityReport(True, witness_basis=np.eye(d),
                                 details={"mode": "exact"})
    approx, worst = {}, 0.0
    ok = True
    for i in range(d):
        for j in range(i + 1, d):
            for k in range(d):
                v = float(L.c[i, j, k])
                if v == 0.0:
                    continue
                q = Fraction(v).limit_denominator(denominator_bound)
                err = abs(v - float(q)) / abs(v)
                approx[(i, j, k)] = (v, q, err)
                worst = max(worst, err)
                if err > tol:
                    ok = False
    return RationalityReport(
        ok, witness_basis=np.eye(d) if ok else None,
        details={"mode": "float", "worst_relative_error": worst,
                 "approximations": approx})


def diophantine_search(p: int, q: int, r: int, bound: int) -> list:
    """All integer triples with 0 < max(|x|,|y|,|z|) <= bound solving
    p x^2 + q y^2 = r z^2, by exhaustive exact search."""
    if min(p, q, r) < 1:
        raise BadParams("coefficients must be positive integers")
    if bound < 1:
        raise BadParams("bound must be at least 1")
    if (p + q) * bound ** 2 >= 2 ** 62:
        raise BadParams("bound too large for exact 64-bit arithmetic")
    xs = np.arange(bound + 1, dtype=np.int64)
    s = p * xs[:, None] ** 2 + q * xs[None, :] ** 2
    quo, rem = np.divmod(s, r)
    zf = np.rint(np.sqrt(quo.astype(float))).astype(np.int64)
    cand = np.argwhere((rem == 0) & (zf <= bound))
    out = set()
    for x, y in cand:
        v = int(quo[x, y])
        z = isqrt(v)
        if z * z != v or z > bound:
            continue
        if max(x, y, z) == 0:
            continue
        for sx in ({1, -1} if x else {1}):
            for sy in ({1, -1} if y else {1}):
                for sz in ({1, -1} if z else {1}):
                    out.add((sx * int(x), sy * int(y), sz * int(z)))
    return sorted(out)


def mod3_descent_certificate(p: int, q: int, r: int) -> Mod3DescentCertificate:
    """Descent certificate for (p,q,r) = (1,3,2); NotApplicable otherwise."""
    if (p, q, r) != (1, 3, 2):
        raise NotApplicable(
            f"the mod-3 descent argument is specific to x^2+3y^2=2z^2; "
            f"got coefficients {(p, q, r)}")
    squares = tuple(sorted({(k * k) % 3 for k in range(3)}))
    assert squares == (0, 1)
    table = tuple((x, z) for x in range(3) for z in range(3)
                  if (x * x - 2 * z * z) % 3 == 0)
    forces = table == ((0, 0),)
    # v3(x^2) and v3(2 z^2) are even, v3(3 y^2) = 1 + v3(y^2) is odd, so the
    # three 3-adic valuations can never share a minimum consistently
    parity = {"x^2": "even", "3*y^2": "odd", "2*z^2": "even"}
    return Mod3DescentCertificate(
        equation=(1, 3, 2), squares_mod_3=squares, residue_table=table,
        forces_divisibility=forces, valuation_parity=parity,
        validated=forces and squares == (0, 1))


def _require_rational(name, value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str) and is_rational_literal(value):
        return Fraction(value)
    raise BadParams(f"{name} must be an exact rational (int, Fraction, or "
                    f"'p/q' string); got {value!r}")


def _family_obstruction(a, c, constraint_ok, reduction, bound) -> RationalityReport:
    a = _require_rational("a", a)
    c = _require_rational("c", c)
    if c == 0:
        raise BadParams("c must be nonzero")
    if not constraint_ok(a, c):
        raise BadParams("parameters violate the family constraint c^2 >= 3 a^2")
    solutions = diophantine_search(1, 3, 2, bound)
    cert = mod3_descent_certificate(1, 3, 2)
    obstruction = Obstruction(
        equation=(1, 3, 2),
        verdict="no-nonzero-solution-up-to-bound",
        bound=bound,
        reduction=reduction,
        certificate=cert,
        search_solutions=solutions,
    )
    return RationalityReport(False, witness_basis=None, obstruction=obstruction,
                             details={"a": a, "c": c})


def n6a_lattice_obstruction(a, c, bound: int = 1000) -> RationalityReport:
    """Simultaneous rationality of (sqrt((c^2-3a^2)/2), sqrt((c^2+a^2)/2))
    would give b12^2 + 3 b^2 = 2 c^2, hence a nonzero integer point on
    x^2 + 3 y^2 = 2 z^2, which has none: the constants are never all
    rational, for any rational (a, c) in range."""
    return _family_obstruction(
        a, c,
        constraint_ok=lambda a_, c_: c_ ** 2 >= 3 * a_ ** 2,
        reduction="b12^2 + 3*b^2 = 2*c^2 with b12^2=(c^2-3a^2)/2, "
                  "b^2=(c^2+a^2)/2; rational values would clear denominators "
                  "to a nonzero integer solution of x^2+3y^2=2z^2",
        bound=bound)


def n7a_lattice_obstruction(a, c, bound: int = 1000) -> RationalityReport:
    """Same reduction for the 7-dimensional family: rational
    e = sqrt((a^2+c^2)/2) and d = sqrt((c^2-3a^2)/2) would satisfy
    d^2 + 3 e^2 = 2 c^2."""
    a_f = _require_rational("a", a)
    if a_f == 0:
        raise BadParams("a must be nonzero for the 7-dimensional family")
    return _family_obstruction(
        a, c,
        constraint_ok=lambda a_, c_: c_ ** 2 >= 3 * a_ ** 2,
        reduction="d^2 + 3*e^2 = 2*c^2 with e^2=(a^2+c^2)/2, "
                  "d^2=(c^2-3a^2)/2; rational values would clear denominators "
                  "to a nonzero integer solution of x^2+3y^2=2z^2",
        bound=bound)
