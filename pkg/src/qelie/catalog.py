"""Constructors for the example families, with parameter validation.

Every constructor returns a CatalogEntry whose ``expected`` block records the
values asserted by the classification tables; the test suite compares those
against computed values.  Gram matrices default to the identity in the
declared basis; the solvable extensions set the a-block so the metric
normalization g(a,a) = -(1/lambda) tr S(ad_a)^2 holds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import MetricLieAlgebra, StructureTensor, jacobi_residual
from .errors import ActionsDoNotCommute, BadParams
from .scalars import exact_zeros

__all__ = [
    "CatalogEntry",
    "make_heisenberg",
    "make_n6a",
    "make_n7a",
    "make_heisenberg_extension",
    "make_almost_abelian",
    "tables_report",
    "kirillov_basis",
]


@dataclass(eq=False)
class CatalogEntry:
    """A named example: parameters, the metric Lie algebra, and the expected
    classification data (quasi-Einstein constant, center dimension, step)."""

    name: str
    params: dict
    algebra: MetricLieAlgebra
    expected: dict | None = None
    tables: tuple = ()


def _is_exact(*values) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in values)


def _algebra(labels, entries, gram=None, gram_exact=None) -> MetricLieAlgebra:
    dim = len(labels)
    st = StructureTensor.from_entries(dim, entries)
    if gram is None:
        gram = np.eye(dim)
        if st.exact:
            gram_exact = exact_zeros((dim, dim))
            for i in range(dim):
                gram_exact[i, i] = Fraction(1)
    return MetricLieAlgebra(tuple(labels), st, gram, gram_exact)


def make_heisenberg(s: int, c) -> CatalogEntry:
    """Heisenberg algebra h_{2s+1}: [x_i, y_i] = c z, identity Gram."""
    if not isinstance(s, (int, np.integer)) or s < 1:
        raise BadParams(f"number of x,y pairs must be a positive integer, got {s}")
    if c == 0:
        raise BadParams("bracket coefficient c must be nonzero")
    labels = [lab for i in range(s) for lab in (f"x{i+1}", f"y{i+1}")] + ["z"]
    dim = 2 * s + 1
    entries = {(2 * i, 2 * i + 1, dim - 1): c for i in range(s)}
    alg = _algebra(labels, entries)
    lam = -float(c) ** 2 / 2
    return CatalogEntry(
        "heisenberg", {"s": s, "c": c}, alg,
        expected={"lambda": lam, "center_dim": 1, "nilpotent_step": 2})


def make_n6a(a, c, signs=(1, 1, 1, 1)) -> CatalogEntry:
    """The 6-dimensional 3-step family: [x,y] = c z,
    [w1,w2] = +-a w3 +- b12 z, [w1,w3] = [w2,w3] = +-b z with
    b12 = sqrt((c^2-3a^2)/2), b = sqrt((c^2+a^2)/2).

    ``signs`` flips the four sign slots (a, b12, b13, b23) for robustness
    experiments; the default takes every + branch.
    """
    a_f, c_f = float(a), float(c)
    if c_f == 0:
        raise BadParams("c must be nonzero")
    if a_f == 0:
        raise BadParams("a = 0 degenerates to a two-dimensional center; "
                        "the family requires a != 0")
    disc = c_f ** 2 - 3 * a_f ** 2
    if disc < -1e-12 * c_f ** 2:
        raise BadParams(f"need c^2 >= 3 a^2; got c^2 = {c_f**2:g} < {3*a_f**2:g}")
    if any(s not in (1, -1) for s in signs) or len(signs) != 4:
        raise BadParams("signs must be a 4-tuple over {+1, -1}")
    b12 = np.sqrt(max(disc, 0.0) / 2)
    b = np.sqrt((c_f ** 2 + a_f ** 2) / 2)
    labels = ["x", "y", "z", "w1", "w2", "w3"]
    entries = {
        (0, 1, 2): c_f,
        (3, 4, 5): signs[0] * a_f,
        (3, 4, 2): signs[1] * b12,
        (3, 5, 2): signs[2] * b,
        (4, 5, 2): signs[3] * b,
    }
    alg = _algebra(labels, entries)
    return CatalogEntry(
        "n6a", {"a": a, "c": c}, alg,
        expected={"lambda": -c_f ** 2 / 2, "center_dim": 1, "nilpotent_step": 3})


def make_n7a(a, c, signs=(1, 1, 1, 1, -1, 1)) -> CatalogEntry:
    """The 7-dimensional 3-step family: [x,y] = c z,
    [w1,w2] = [w1,w3] = +-e z, [w1,w4] = +-a z,
    [w2,w4] = [w3,w4] = +-d z +- a w1 with e = sqrt((a^2+c^2)/2),
    d = sqrt((c^2-3a^2)/2).

    Sign slots: ([w1,w2], [w1,w3], [w1,w4], [w2,w4], [w3,w4] z-part,
    [w3,w4] w1-part).  The Jacobi identity forces
    signs[5]*signs[0] = signs[3]*signs[1]; a one-dimensional center
    additionally needs signs[3]*signs[1] != signs[4]*signs[0], so the
    default flips the z-part of [w3,w4].  Jacobi-breaking choices are
    rejected.
    """
    a_f, c_f = float(a), float(c)
    if a_f == 0:
        raise BadParams("a must be nonzero")
    disc = c_f ** 2 - 3 * a_f ** 2
    if disc < -1e-12 * c_f ** 2:
        raise BadParams("need (c/a)^2 >= 3")
    if any(s not in (1, -1) for s in signs) or len(signs) != 6:
        raise BadParams("signs must be a 6-tuple over {+1, -1}")
    e = np.sqrt((a_f ** 2 + c_f ** 2) / 2)
    d = np.sqrt(max(disc, 0.0) / 2)
    labels = ["x", "y", "z", "w1", "w2", "w3", "w4"]
    entries = {
        (0, 1, 2): c_f,
        (3, 4, 2): signs[0] * e,
        (3, 5, 2): signs[1] * e,
        (3, 6, 2): signs[2] * a_f,
    }
    st = StructureTensor.from_entries(7, entries)
    cf = st.c.copy()
    # [w2,w4] and [w3,w4] carry both a z and a w1 component
    for (i, j, k), v in (((4, 6, 2), signs[3] * d), ((4, 6, 3), signs[3] * a_f),
                         ((5, 6, 2), signs[4] * d), ((5, 6, 3), signs[5] * a_f)):
        cf[i, j, k] += v
        cf[j, i, k] -= v
    alg = MetricLieAlgebra(tuple(labels), StructureTensor(7, cf), np.eye(7))
    if jacobi_residual(alg) > 1e-10 * max(1.0, c_f ** 2):
        raise BadParams(f"sign choice {signs} violates the Jacobi identity")
    return CatalogEntry(
        "n7a", {"a": a, "c": c}, alg,
        expected={"lambda": -c_f ** 2 / 2, "center_dim": 1, "nilpotent_step": 3})


def make_heisenberg_extension(s: int, c, t_rows) -> CatalogEntry:
    """Abelian extension R^k + h_{2s+1}: generator a_j acts diagonally by
    (t_j1, -t_j1, ..., t_js, -t_js, 0) on (x_1,y_1,..,x_s,y_s,z).

    The Gram is the identity on the Heisenberg factor, orthogonal to the
    a-factor, with a-block (4/c^2) T T^T so the metric normalization of the
    structure theorem holds for every element of the a-factor.
    """
    if not isinstance(s, (int, np.integer)) or s < 1:
        raise BadParams("s must be a positive integer")
    if c == 0:
        raise BadParams("c must be nonzero")
    rows = list(t_rows)
    k = len(rows)
    exact = _is_exact(c, *[v for row in rows for v in row])
    T = np.asarray([[float(v) for v in row] for row in rows], dtype=float)
    if T.ndim != 2 or T.shape[1] != s:
        raise BadParams(f"t_rows must be k x {s}")
    if not 1 <= k <= s:
        raise BadParams(f"need 1 <= k <= s rows, got {k}")
    if np.linalg.matrix_rank(T, tol=1e-12 * max(1.0, np.abs(T).max())) < k:
        raise BadParams("t rows must be linearly independent")

    dim = k + 2 * s + 1
    z = dim - 1
    labels = [f"a{j+1}" for j in range(k)] \
        + [lab for i in range(s) for lab in (f"x{i+1}", f"y{i+1}")] + ["z"]
    entries = {}
    for i in range(s):
        xi, yi = k + 2 * i, k + 2 * i + 1
        entries[(xi, yi, z)] = c if exact else float(c)
        for j in range(k):
            tji = Fraction(rows[j][i]) if exact else float(rows[j][i])
            if tji:
                entries[(j, xi, xi)] = tji
                entries[(j, yi, yi)] = -tji

    # the diagonal actions commute by construction; verified anyway
    for j in range(k):
        for l in range(j + 1, k):
            Dj = np.diag([t for ti in T[j] for t in (ti, -ti)] + [0.0])
            Dl = np.diag([t for ti in T[l] for t in (ti, -ti)] + [0.0])
            if np.abs(Dj @ Dl - Dl @ Dj).max() > 1e-12:
                raise ActionsDoNotCommute("a-factor actions do not commute")

    gram = np.eye(dim)
    c_f = float(c)
    gram[:k, :k] = 4.0 / c_f ** 2 * (T @ T.T)
    gram_exact = None
    if exact:
        gram_exact = exact_zeros((dim, dim))
        for i in range(dim):
            gram_exact[i, i] = Fraction(1)
        c_x = Fraction(c)
        rows_x = [[Fraction(v) for v in row] for row in rows]
        for j in range(k):
            for l in range(k):
                gram_exact[j, l] = 4 / c_x ** 2 * sum(
                    rows_x[j][i] * rows_x[l][i] for i in range(s))
        gram = np.array([[float(gram_exact[i, jj]) for jj in range(dim)]
                         for i in range(dim)])

    st = StructureTensor.from_entries(dim, entries)
    alg = MetricLieAlgebra(tuple(labels), st, gram, gram_exact)
    return CatalogEntry(
        "heisenberg_extension", {"s": s, "c": c, "k": k, "t": rows}, alg,
        expected={"lambda": -c_f ** 2 / 2, "center_dim": 1})


def make_almost_abelian(A) -> CatalogEntry:
    """(n+1)-dimensional algebra w + R e0 with w abelian and ad_{e0}|w = A;
    identity Gram.  The entry records tr A (unimodular iff zero)."""
    rows = [list(r) for r in A]
    n = len(rows)
    exact = _is_exact(*[v for r in rows for v in r])
    labels = ["e0"] + [f"e{i+1}" for i in range(n)]
    entries = {}
    for i in range(n):
        for j in range(n):
            v = rows[j][i]  # column i of A feeds [e0, e_{i+1}]
            if v:
                entries[(0, 1 + i, 1 + j)] = v if exact else float(v)
    alg = _algebra(labels, entries)
    trace = sum(rows[i][i] for i in range(n))
    return CatalogEntry("almost_abelian", {"n": n, "trace": trace}, alg)


def tables_report() -> list:
    """Canonical classification rows: the nilpotent table {h3, h5, n6a} and
    the solvable table {h3, R+h3, h5, R+h5, n6a}, each at canonical
    parameters (c = 1, alpha = beta = 1, a valid)."""
    h3 = make_heisenberg(1, 1)
    h3.name, h3.tables = "h3", ("table1", "table2")
    h5 = make_heisenberg(2, 1)
    h5.name, h5.tables = "h5", ("table1", "table2")
    n6 = make_n6a(Fraction(1, 2), 1)
    n6.name, n6.tables = "n6a", ("table1", "table2")
    e3 = make_heisenberg_extension(1, 1, [[1]])
    e3.name, e3.tables = "h3_ext", ("table2",)
    e5 = make_heisenberg_extension(2, 1, [[1, 1]])
    e5.name, e5.tables = "h5_ext", ("table2",)
    return [h3, h5, n6, e3, e5]


def kirillov_basis(entry: CatalogEntry) -> np.ndarray:
    """Adapted-basis permutation (columns ordered x, y, z, w_1..w_t) for the
    nilpotent catalog families, derived from the basis labels."""
    labels = list(entry.algebra.basis_labels)
    def pick(*names):
        for nm in names:
            if nm in labels:
                return labels.index(nm)
        raise KeyError(names)
    ix, iy, iz = pick("x", "x1"), pick("y", "y1"), pick("z")
    rest = [i for i in range(len(labels)) if i not in (ix, iy, iz)]
    order = [ix, iy, iz] + rest
    return np.eye(len(labels))[:, order]
