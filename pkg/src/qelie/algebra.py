"""Structure-constant data model and metric-free Lie algebra computations.

Conventions
-----------
A Lie algebra of dimension d is stored by its structure tensor c with
``[e_i, e_j] = sum_k c[i,j,k] e_k`` in the declared basis, together with a
symmetric positive-definite Gram matrix of inner products g(e_i, e_j).
"Adjoint/transpose" always means the Gram-adjoint ``A# = G^-1 A^T G``;
in an orthonormal frame this is the ordinary transpose.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    DimensionMismatch,
    GramNotPositiveDefinite,
    NotNilpotent,
    NotSolvable,
    SplitNotOrthogonal,
    VerificationFailed,
)
from .scalars import default_tol, exact_zeros

__all__ = [
    "StructureTensor",
    "MetricLieAlgebra",
    "Subspace",
    "SeriesReport",
    "ad_matrix",
    "bracket",
    "jacobi_residual",
    "is_unimodular",
    "series",
    "is_nilpotent",
    "is_solvable",
    "center",
    "nilradical_solvable",
    "killing_form",
    "restrict",
    "mean_curvature_vector",
    "is_derivation",
    "derivation_residual",
    "gram_adjoint",
    "symmetric_part",
    "orthonormal_frame",
    "graded_orthonormal_basis",
]

_ANTISYM_TOL = 1e-12


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class StructureTensor:
    """Antisymmetric 3-index array c[i][j][k] with [e_i,e_j] = sum_k c_ijk e_k.

    ``c`` is always a float array; ``c_exact`` (object array of Fractions)
    is carried alongside when every coefficient was rational.
    """

    dim: int
    c: np.ndarray
    c_exact: np.ndarray | None = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)
        if self.c.shape != (self.dim, self.dim, self.dim):
            raise DimensionMismatch(
                f"structure tensor shape {self.c.shape} != dim {self.dim}")
        skew = self.c + np.swapaxes(self.c, 0, 1)
        scale = max(1.0, float(np.abs(self.c).max(initial=0.0)))
        if np.abs(skew).max(initial=0.0) > _ANTISYM_TOL * scale:
            raise ValueError("structure tensor is not antisymmetric in (i,j)")
        if self.c_exact is not None:
            d = self.dim
            for i in range(d):
                for j in range(d):
                    for k in range(d):
                        if self.c_exact[i, j, k] != -self.c_exact[j, i, k]:
                            raise ValueError(
                                "exact structure tensor is not antisymmetric")

    @classmethod
    def from_entries(cls, dim: int, entries: dict) -> "StructureTensor":
        """Build from {(i,j,k): coeff}; the (j,i,k) images are filled in.

        Exact mode is kept when every coefficient is an int or Fraction.
        """
        exact = all(isinstance(v, (int, Fraction)) for v in entries.values())
        cx = exact_zeros((dim, dim, dim)) if exact else None
        cf = np.zeros((dim, dim, dim))
        for (i, j, k), v in entries.items():
            if i == j:
                raise ValueError(f"bracket [e_{i},e_{i}] must vanish")
            cf[i, j, k] += float(v)
            cf[j, i, k] -= float(v)
            if exact:
                cx[i, j, k] += Fraction(v)
                cx[j, i, k] -= Fraction(v)
        return cls(dim, cf, cx)

    @property
    def exact(self) -> bool:
        return self.c_exact is not None


@dataclass(eq=False)
class MetricLieAlgebra:
    """A Lie algebra with a left-invariant metric: structure tensor + Gram."""

    basis_labels: tuple
    st: StructureTensor
    gram: np.ndarray
    gram_exact: np.ndarray | None = None

    def __post_init__(self):
        self.basis_labels = tuple(self.basis_labels)
        if len(self.basis_labels) != self.st.dim:
            raise DimensionMismatch("label count != dimension")
        if len(set(self.basis_labels)) != len(self.basis_labels):
            raise ValueError("basis labels must be unique")
        self.gram = np.asarray(self.gram, dtype=float)
        if self.gram.shape != (self.dim, self.dim):
            raise DimensionMismatch("gram shape != dim")
        if not np.allclose(self.gram, self.gram.T, atol=1e-12, rtol=1e-12):
            raise GramNotPositiveDefinite("gram matrix is not symmetric")
        if np.linalg.eigvalsh(self.gram).min() <= 0:
            raise GramNotPositiveDefinite("gram matrix has a non-positive eigenvalue")

    @property
    def dim(self) -> int:
        return self.st.dim

    @property
    def exact(self) -> bool:
        return self.st.exact

    @property
    def c(self) -> np.ndarray:
        return self.st.c

    def inner(self, u, v) -> float:
        return float(np.asarray(u) @ self.gram @ np.asarray(v))

    def norm(self, u) -> float:
        return float(np.sqrt(max(self.inner(u, u), 0.0)))

    def ad_stack(self) -> np.ndarray:
        """Array A with A[i] = matrix of ad_{e_i}."""
        return np.einsum("ijk->ikj", self.c)


@dataclass(eq=False)
class Subspace:
    """Subspace of R^ambient_dim spanned by the columns of basis_matrix."""

    ambient_dim: int
    basis_matrix: np.ndarray

    def __post_init__(self):
        self.basis_matrix = np.asarray(self.basis_matrix, dtype=float)
        if self.basis_matrix.ndim != 2 or self.basis_matrix.shape[0] != self.ambient_dim:
            raise DimensionMismatch("basis matrix shape inconsistent with ambient dim")
        if self.dim > 0:
            s = np.linalg.svd(self.basis_matrix, compute_uv=False)
            if s[-1] <= 1e-12 * max(1.0, s[0]):
                raise ValueError("subspace basis columns are linearly dependent")

    @property
    def dim(self) -> int:
        return self.basis_matrix.shape[1]

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, np.zeros((ambient_dim, 0)))

    @classmethod
    def whole(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, np.eye(ambient_dim))

    @classmethod
    def from_span(cls, ambient_dim: int, vectors, tol: float | None = None) -> "Subspace":
        """Orthonormal basis (deterministic SVD) of the span of the vectors."""
        tol = default_tol() if tol is None else tol
        M = np.asarray(vectors, dtype=float).reshape(ambient_dim, -1)
        if M.shape[1] == 0 or not np.abs(M).max(initial=0.0) > 0:
            return cls.zero(ambient_dim)
        u, s, _ = np.linalg.svd(M, full_matrices=False)
        rank = int((s > tol * max(1.0, s[0])).sum())
        return cls(ambient_dim, _fix_column_signs(u[:, :rank]))

    def orthonormal(self) -> np.ndarray:
        """Euclidean-orthonormal basis of the subspace."""
        if self.dim == 0:
            return self.basis_matrix
        u, s, _ = np.linalg.svd(self.basis_matrix, full_matrices=False)
        return _fix_column_signs(u[:, : self.dim])

    def projector(self) -> np.ndarray:
        U = self.orthonormal()
        return U @ U.T

    def containment_residual(self, other: "Subspace") -> float:
        """max column norm of the part of ``other`` outside ``self``."""
        if other.dim == 0:
            return 0.0
        B = other.orthonormal()
        R = B - self.projector() @ B
        return float(np.linalg.norm(R, axis=0).max())

    def contains(self, other: "Subspace", tol: float | None = None) -> bool:
        tol = default_tol() if tol is None else tol
        return self.containment_residual(other) <= tol

    def equals(self, other: "Subspace", tol: float | None = None) -> bool:
        tol = default_tol() if tol is None else tol
        return (self.dim == other.dim and self.contains(other, tol)
                and other.contains(self, tol))


@dataclass
class SeriesReport:
    """Derived or lower-central series with its stabilization verdict."""

    kind: str
    terms: list
    verdict: str
    nilpotent_step: int | None = None
    solvable_length: int | None = None

    @property
    def dims(self) -> tuple:
        return tuple(t.dim for t in self.terms)


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _fix_column_signs(M: np.ndarray) -> np.ndarray:
    """Deterministic sign convention: largest-|entry| of each column > 0."""
    M = M.copy()
    for j in range(M.shape[1]):
        col = M[:, j]
        i = int(np.argmax(np.abs(col)))
        if col[i] < 0:
            M[:, j] = -col
    return M


def _null_space(M: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis of ker M (columns), with relative tolerance."""
    n = M.shape[1]
    if not np.abs(M).max(initial=0.0) > 0:
        return np.eye(n)
    _, s, vt = np.linalg.svd(M)
    s = np.concatenate([s, np.zeros(n - len(s))]) if len(s) < n else s
    rank = int((s > tol * max(1.0, s[0])).sum())
    return _fix_column_signs(vt[rank:].T)


def bracket(L: MetricLieAlgebra, u, v) -> np.ndarray:
    """Coefficient vector of [u, v] in the declared basis."""
    return np.einsum("ijk,i,j->k", L.c, np.asarray(u, float), np.asarray(v, float))


def _bracket_span(L: MetricLieAlgebra, U: Subspace, V: Subspace,
                  tol: float) -> Subspace:
    """Span of [u, v] over basis columns of U and V."""
    if U.dim == 0 or V.dim == 0:
        return Subspace.zero(L.dim)
    cols = np.einsum("ijk,ia,jb->kab", L.c, U.basis_matrix, V.basis_matrix)
    return Subspace.from_span(L.dim, cols.reshape(L.dim, -1), tol)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def ad_matrix(L: MetricLieAlgebra, x) -> np.ndarray:
    """Matrix of ad_x in the declared basis: (ad_x) y = [x, y]."""
    x = np.asarray(x, dtype=float)
    if x.shape != (L.dim,):
        raise DimensionMismatch(f"vector of length {x.shape} on a dim-{L.dim} algebra")
    return np.einsum("ijk,i->kj", L.c, x)


def jacobi_residual(L: MetricLieAlgebra):
    """Worst Jacobi defect over basis triples; 0 iff Jacobi holds exactly.

    Exact algebras return a Fraction (max |component| of the defect, computed
    without rounding); float algebras return the max Euclidean norm.
    """
    if L.exact:
        d, cx = L.dim, L.st.c_exact
        worst = Fraction(0)
        for i in range(d):
            for j in range(i + 1, d):
                for k in range(j + 1, d):
                    for l in range(d):
                        term = Fraction(0)
                        for m in range(d):
                            term += (cx[i, j, m] * cx[m, k, l]
                                     + cx[j, k, m] * cx[m, i, l]
                                     + cx[k, i, m] * cx[m, j, l])
                        worst = max(worst, abs(term))
        return worst
    c = L.c
    jac = (np.einsum("ijm,mkl->ijkl", c, c)
           + np.einsum("jkm,mil->ijkl", c, c)
           + np.einsum("kim,mjl->ijkl", c, c))
    return float(np.sqrt((jac ** 2).sum(axis=3)).max(initial=0.0))


def is_unimodular(L: MetricLieAlgebra, tol: float | None = None) -> bool:
    """True iff every ad_{e_i} is trace-free (|tr| <= tol)."""
    tol = default_tol() if tol is None else tol
    if L.exact:
        d, cx = L.dim, L.st.c_exact
        for i in range(d):
            tr = sum(cx[i, k, k] for k in range(d))
            if abs(tr) > tol:
                return False
        return True
    traces = np.einsum("ikk->i", L.c)
    return bool(np.abs(traces).max(initial=0.0) <= tol)


def series(L: MetricLieAlgebra, kind: str, tol: float | None = None) -> SeriesReport:
    """Derived or lower-central series down to stabilization.

    The verdict is "nilpotent(step k)" when the lower-central series reaches
    zero after k nonzero terms, "solvable(length k)" likewise for the derived
    series, and "neither" when the series stabilizes at a nonzero subspace.
    """
    if kind not in ("derived", "lower-central"):
        raise ValueError(f"unknown series kind: {kind!r}")
    tol = default_tol() if tol is None else tol
    terms = [Subspace.whole(L.dim)]
    while True:
        prev = terms[-1]
        if prev.dim == 0:
            break
        other = prev if kind == "derived" else terms[0]
        nxt = _bracket_span(L, other, prev, tol)
        if nxt.dim >= prev.dim:
            break  # stabilized at a nonzero subspace
        terms.append(nxt)
    reached_zero = terms[-1].dim == 0
    if kind == "lower-central":
        if reached_zero:
            step = len(terms) - 1
            return SeriesReport(kind, terms, f"nilpotent(step {step})",
                                nilpotent_step=step)
        return SeriesReport(kind, terms, "neither")
    if reached_zero:
        length = len(terms) - 1
        return SeriesReport(kind, terms, f"solvable(length {length})",
                            solvable_length=length)
    return SeriesReport(kind, terms, "neither")


def is_nilpotent(L: MetricLieAlgebra, tol: float | None = None) -> bool:
    return series(L, "lower-central", tol).nilpotent_step is not None


def is_solvable(L: MetricLieAlgebra, tol: float | None = None) -> bool:
    return series(L, "derived", tol).solvable_length is not None


def center(L: MetricLieAlgebra, tol: float | None = None) -> Subspace:
    """{x : ad_x = 0}, as the null space of the map x -> ad_x."""
    tol = default_tol() if tol is None else tol
    M = L.c.transpose(1, 2, 0).reshape(L.dim * L.dim, L.dim)
    return Subspace(L.dim, _null_space(M, tol))


def nilradical_solvable(L: MetricLieAlgebra, tol: float | None = None) -> Subspace:
    """Nilradical of a solvable algebra: {x : ad_x nilpotent}.

    The candidate is [s,s] plus the kernel of the quadratic form
    kappa(t) = sum |eig(ad_{v_t})|^2 on a complement of [s,s] (the weights of
    a solvable algebra depend linearly on the element, so kappa is a
    positive-semidefinite quadratic form whose kernel is exactly the
    ad-nilpotent directions).  The result is then verified to be a nilpotent
    ideal containing [s,s]; VerificationFailed is raised otherwise.
    """
    tol = default_tol() if tol is None else tol
    low = series(L, "lower-central", tol)
    if low.nilpotent_step is not None:
        return Subspace.whole(L.dim)
    der = series(L, "derived", tol)
    if der.solvable_length is None:
        raise NotSolvable("algebra is not solvable; nilradical routine does not apply")

    derived = der.terms[1]
    comp = _null_space(derived.orthonormal().T, tol) if derived.dim else np.eye(L.dim)
    q = comp.shape[1]

    scale = max(1.0, float(np.abs(L.c).max(initial=0.0)))

    def kappa(t):
        ev = np.linalg.eigvals(ad_matrix(L, comp @ t))
        return float((np.abs(ev) ** 2).sum())

    if q:
        K = np.zeros((q, q))
        eye = np.eye(q)
        for i in range(q):
            K[i, i] = kappa(eye[:, i])
        for i in range(q):
            for j in range(i + 1, q):
                K[i, j] = K[j, i] = 0.5 * (kappa(eye[:, i] + eye[:, j])
                                           - K[i, i] - K[j, j])
        w, V = np.linalg.eigh(K)
        # eigenvalues of nearly defective nilpotent ad's carry eps^(1/k) noise,
        # so the kernel cut sits well above machine precision
        cut = 1e-5 * max(1.0, float(np.abs(w).max(initial=0.0)))
        extra = comp @ _fix_column_signs(V[:, np.abs(w) <= cut])
    else:
        extra = np.zeros((L.dim, 0))

    cand = Subspace.from_span(L.dim, np.hstack([derived.basis_matrix, extra]), tol)

    # a-posteriori verification: contains [s,s], is an ideal, is nilpotent
    if not cand.contains(derived, max(tol, 1e-9)):
        raise VerificationFailed("nilradical candidate lost the derived algebra")
    amb = Subspace.whole(L.dim)
    img = _bracket_span(L, amb, cand, tol)
    if cand.containment_residual(img) > max(tol, 1e-8) * scale:
        raise VerificationFailed("nilradical candidate is not an ideal")
    term = cand
    for _ in range(L.dim + 1):
        if term.dim == 0:
            break
        term = _bracket_span(L, cand, term, tol)
    else:
        raise VerificationFailed("nilradical candidate is not nilpotent")
    return cand


def restrict(L: MetricLieAlgebra, sub: Subspace, tol: float | None = None,
             labels=None) -> tuple:
    """Metric Lie algebra induced on a subalgebra, in a Gram-orthonormal basis.

    Returns (restricted algebra, basis matrix B); column j of B gives the
    coordinates of the new basis vector in the ambient declared basis.
    Raises ValueError when the subspace is not closed under the bracket.
    """
    tol = default_tol() if tol is None else tol
    B = _gram_orthonormalize(L, sub.basis_matrix, tol)
    k = B.shape[1]
    br = np.einsum("ijk,ia,jb->kab", L.c, B, B)
    coeff = np.einsum("kab,kl,lc->abc", br, L.gram, B)
    recon = np.einsum("abc,kc->kab", coeff, B)
    scale = max(1.0, float(np.abs(L.c).max(initial=0.0)))
    if np.abs(br - recon).max(initial=0.0) > max(tol, 1e-9) * scale:
        raise ValueError("subspace is not closed under the bracket")
    if labels is None:
        labels = tuple(f"v{i}" for i in range(k))
    coeff = 0.5 * (coeff - np.swapaxes(coeff, 0, 1))
    sub_alg = MetricLieAlgebra(labels, StructureTensor(k, coeff), np.eye(k))
    return sub_alg, B


def killing_form(L: MetricLieAlgebra) -> np.ndarray:
    """Matrix B[i][j] = tr(ad_{e_i} ad_{e_j})."""
    A = L.ad_stack()
    return np.einsum("iab,jba->ij", A, A)


def mean_curvature_vector(L: MetricLieAlgebra, split) -> np.ndarray:
    """Unique H in the a-factor with g(H, a) = tr ad_a; zero when unimodular.

    ``split`` is a pair (a: Subspace, n: Subspace) with a orthogonal to n
    (with respect to the Gram) and a + n the whole algebra.
    """
    a_sub, n_sub = split
    A, N = a_sub.basis_matrix, n_sub.basis_matrix
    if a_sub.dim + n_sub.dim != L.dim:
        raise SplitNotOrthogonal("split does not decompose the algebra")
    if a_sub.dim and n_sub.dim:
        cross = A.T @ L.gram @ N
        if np.abs(cross).max(initial=0.0) > 1e-9 * max(1.0, np.abs(L.gram).max()):
            raise SplitNotOrthogonal("a-factor is not Gram-orthogonal to n-factor")
    if a_sub.dim == 0:
        return np.zeros(L.dim)
    rhs = np.array([np.trace(ad_matrix(L, A[:, j])) for j in range(a_sub.dim)])
    h = np.linalg.solve(A.T @ L.gram @ A, rhs)
    return A @ h


def derivation_residual(L: MetricLieAlgebra, D: np.ndarray) -> float:
    """max over basis pairs of ||D[e_i,e_j] - [De_i,e_j] - [e_i,De_j]||."""
    D = np.asarray(D, dtype=float)
    lhs = np.einsum("ijk,lk->ijl", L.c, D)
    r1 = np.einsum("ai,ajk->ijk", D, L.c)
    r2 = np.einsum("bj,ibk->ijk", D, L.c)
    defect = lhs - r1 - r2
    return float(np.sqrt((defect ** 2).sum(axis=2)).max(initial=0.0))


def is_derivation(L: MetricLieAlgebra, D: np.ndarray,
                  tol: float | None = None) -> bool:
    tol = default_tol() if tol is None else tol
    return derivation_residual(L, D) <= tol


def gram_adjoint(A: np.ndarray, gram: np.ndarray | None = None) -> np.ndarray:
    """A# = G^-1 A^T G; the plain transpose for an orthonormal frame."""
    A = np.asarray(A, dtype=float)
    if gram is None:
        return A.T
    return np.linalg.solve(gram, A.T @ gram)


def symmetric_part(A: np.ndarray, gram: np.ndarray | None = None) -> np.ndarray:
    """S(A) = (A + A#)/2 with the Gram-adjoint."""
    A = np.asarray(A, dtype=float)
    return 0.5 * (A + gram_adjoint(A, gram))


def orthonormal_frame(L: MetricLieAlgebra):
    """Cholesky change of basis Q with Q^T G Q = I.

    Returns (Q, L') where L' carries the transformed structure tensor and the
    identity Gram.  Deterministic in the declared basis order; exactness is
    dropped (the frame change involves square roots).
    """
    try:
        R = np.linalg.cholesky(L.gram)
    except np.linalg.LinAlgError as exc:
        raise GramNotPositiveDefinite(str(exc)) from exc
    Q = np.linalg.inv(R).T
    Qinv = R.T
    c_on = np.einsum("ia,jb,ijk,lk->abl", Q, Q, L.c, Qinv)
    # clean the tiny symmetric part left by rounding so the tensor validates
    c_on = 0.5 * (c_on - np.swapaxes(c_on, 0, 1))
    prim = MetricLieAlgebra(L.basis_labels, StructureTensor(L.dim, c_on),
                            np.eye(L.dim))
    return Q, prim


def _gram_orthonormalize(L: MetricLieAlgebra, cols: np.ndarray,
                         tol: float) -> np.ndarray:
    """Gram-orthonormal basis for the span of the given columns."""
    if cols.shape[1] == 0:
        return cols
    K = cols.T @ L.gram @ cols
    w, V = np.linalg.eigh(K)
    keep = w > tol * max(1.0, float(w.max(initial=0.0)))
    basis = cols @ V[:, keep] / np.sqrt(w[keep])
    return _fix_column_signs(basis)


def graded_orthonormal_basis(L: MetricLieAlgebra, tol: float | None = None):
    """Orthonormal basis adapted to the lower-central grading of a nilpotent
    algebra: grade i is the g-orthogonal complement of the (i+1)-st
    lower-central term inside the i-th one.

    In the returned frame g([e_i,e_j], e_i) = 0 for all pairs; this is
    verified and VerificationFailed is raised on numerical breakdown.
    Returns (basis matrix, grading as a list of Subspace).
    """
    tol = default_tol() if tol is None else tol
    rep = series(L, "lower-central", tol)
    if rep.nilpotent_step is None:
        raise NotNilpotent("graded basis requires a nilpotent algebra")
    terms = rep.terms  # g = S_1 > S_2 > ... > S_r > 0
    blocks, grading = [], []
    for i in range(len(terms) - 1):
        Si, Snext = terms[i], terms[i + 1]
        B = Si.basis_matrix
        if Snext.dim:
            C = Snext.basis_matrix
            P = C @ np.linalg.solve(C.T @ L.gram @ C, C.T @ L.gram)
            B = B - P @ B
        block = _gram_orthonormalize(L, B, tol)
        if block.shape[1] != Si.dim - Snext.dim:
            raise VerificationFailed("grading dimensions are inconsistent")
        blocks.append(block)
        grading.append(Subspace(L.dim, block))
    basis = np.hstack(blocks)
    scale = max(1.0, float(np.abs(L.c).max(initial=0.0)))
    # g([e_a, e_b], e_a) for all frame pairs
    br = np.einsum("ijk,ia,jb->kab", L.c, basis, basis)
    res = np.abs(np.einsum("kab,kl,la->ab", br, L.gram, basis)).max(initial=0.0)
    if res > max(tol, 1e-9) * scale:
        raise VerificationFailed(
            f"graded basis property g([e_i,e_j],e_i)=0 failed (residual {res:g})")
    return basis, grading
