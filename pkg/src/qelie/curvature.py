"""Ricci curvature of left-invariant metrics.

A general curvature-tensor oracle plus the closed-form expressions for
nilpotent algebras, unimodular solvable algebras, and standard splits.
All formulas are evaluated in the orthonormalized frame and the resulting
bilinear forms are transported back to the declared basis, so reports from
different routes are directly comparable.

Sign convention: fixed so that the Heisenberg center has positive Ricci
curvature (Ric(z,z) = s c^2 / 2 > 0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .algebra import (
    MetricLieAlgebra,
    Subspace,
    is_unimodular,
    mean_curvature_vector,
    nilradical_solvable,
    orthonormal_frame,
    series,
)
from .errors import NotNilpotent, NotSolvable, NotUnimodular, SplitInvalid
from .scalars import default_tol

__all__ = [
    "ConnectionCoefficients",
    "CurvatureReport",
    "connection_coefficients",
    "cluster_eigenvalues",
    "ricci_oracle",
    "ricci_nilpotent",
    "ricci_unimodular_solvable",
    "ricci_standard_split",
    "scalar_and_flatness",
]

#: Relative gap used to split Ricci eigenvalues into multiplicity clusters.
CLUSTER_GAP = 1e-7


@dataclass(eq=False)
class ConnectionCoefficients:
    """Levi-Civita coefficients: gamma[i][j][k] = <nabla_{e_i} e_j, e_k>
    in an orthonormal frame."""

    gamma: np.ndarray


@dataclass(eq=False)
class CurvatureReport:
    """Ricci data in the algebra's declared basis.

    ``ricci`` is the bilinear form; ``eigenvalues``/``eigenvectors`` are the
    ascending spectrum of the Ricci operator r = G^-1 ricci (eigenvectors
    Gram-orthonormal); ``scalar`` its trace; ``flat`` whether the full
    curvature tensor vanishes.
    """

    ricci: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    scalar: float
    flat: bool
    provenance: str


def connection_coefficients(L: MetricLieAlgebra) -> ConnectionCoefficients:
    """Koszul formula in an orthonormal frame.

    gamma[i][j][k] = (c[i][j][k] - c[j][k][i] + c[k][i][j]) / 2; requires the
    algebra to be orthonormalized already (identity Gram).
    """
    if not np.allclose(L.gram, np.eye(L.dim), atol=1e-10):
        raise ValueError("connection coefficients require an orthonormal frame; "
                         "apply orthonormal_frame first")
    c = L.c
    gamma = 0.5 * (c - np.einsum("jki->ijk", c) + np.einsum("kij->ijk", c))
    return ConnectionCoefficients(gamma)


def _full_curvature(c: np.ndarray) -> np.ndarray:
    """R[i,j,k,l] = <R(e_i,e_j) e_k, e_l> in an orthonormal frame."""
    gamma = 0.5 * (c - np.einsum("jki->ijk", c) + np.einsum("kij->ijk", c))
    return (np.einsum("jkm,iml->ijkl", gamma, gamma)
            - np.einsum("ikm,jml->ijkl", gamma, gamma)
            - np.einsum("ijm,mkl->ijkl", c, gamma))


def cluster_eigenvalues(values, rel_gap: float = CLUSTER_GAP):
    """Group an ascending eigenvalue list into multiplicity clusters.

    Two consecutive eigenvalues belong to the same cluster when their gap is
    at most rel_gap * (1 + |lambda_max|).  Returns a list of
    (mean value, index list) pairs.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return []
    threshold = rel_gap * (1.0 + float(np.abs(values).max()))
    clusters = [[0]]
    for i in range(1, values.size):
        if values[i] - values[i - 1] <= threshold:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    return [(float(values[idx].mean()), idx) for idx in clusters]


def _report(L: MetricLieAlgebra, ricci_decl: np.ndarray, provenance: str,
            flat: bool) -> CurvatureReport:
    ricci_decl = 0.5 * (ricci_decl + ricci_decl.T)
    vals, vecs = scipy.linalg.eigh(ricci_decl, L.gram)
    for j in range(vecs.shape[1]):
        i = int(np.argmax(np.abs(vecs[:, j])))
        if vecs[i, j] < 0:
            vecs[:, j] = -vecs[:, j]
    scalar = float(vals.sum())
    return CurvatureReport(ricci_decl, vals, vecs, scalar, flat, provenance)


def _to_declared(L: MetricLieAlgebra, Q: np.ndarray, ric_on: np.ndarray) -> np.ndarray:
    Qi = np.linalg.inv(Q)
    return Qi.T @ ric_on @ Qi


def ricci_oracle(L: MetricLieAlgebra, tol: float | None = None) -> CurvatureReport:
    """Ricci tensor contracted from the full curvature tensor.

    Ric(u, v) = sum_i <R(e_i, u) v, e_i> over an orthonormal frame; the
    flatness flag tests the whole curvature tensor against tol.
    """
    tol = default_tol() if tol is None else tol
    Q, prim = orthonormal_frame(L)
    R = _full_curvature(prim.c)
    ric_on = np.einsum("iuvi->uv", R)
    flat = bool(np.abs(R).max(initial=0.0) <= tol)
    return _report(L, _to_declared(L, Q, ric_on), "oracle", flat)


def _nilpotent_quadratic(c: np.ndarray, x: np.ndarray) -> float:
    """Q(x) = -1/2 sum_k ||[x,e_k]||^2 + 1/4 sum_{k,j} <[e_k,e_j],x>^2."""
    adx = np.einsum("ijk,i->kj", c, x)
    comp = np.einsum("kjl,l->kj", c, x)
    return float(-0.5 * (adx ** 2).sum() + 0.25 * (comp ** 2).sum())


def ricci_nilpotent(L: MetricLieAlgebra, tol: float | None = None) -> CurvatureReport:
    """Closed-form nilpotent Ricci: diagonal entries from the quadratic form
    Q(x), off-diagonal entries by polarization Ric(u,v) = (Q(u+v)-Q(u-v))/4.
    """
    tol = default_tol() if tol is None else tol
    if series(L, "lower-central", tol).nilpotent_step is None:
        raise NotNilpotent("nilpotent Ricci formula applied to a non-nilpotent algebra")
    Q, prim = orthonormal_frame(L)
    d, c = L.dim, prim.c
    ric = np.zeros((d, d))
    eye = np.eye(d)
    for a in range(d):
        ric[a, a] = _nilpotent_quadratic(c, eye[:, a])
    for a in range(d):
        for b in range(a + 1, d):
            qp = _nilpotent_quadratic(c, eye[:, a] + eye[:, b])
            qm = _nilpotent_quadratic(c, eye[:, a] - eye[:, b])
            ric[a, b] = ric[b, a] = 0.25 * (qp - qm)
    flat = bool(np.abs(_full_curvature(c)).max(initial=0.0) <= tol)
    return _report(L, _to_declared(L, Q, ric), "nilpotent-formula", flat)


def ricci_unimodular_solvable(L: MetricLieAlgebra,
                              tol: float | None = None) -> CurvatureReport:
    """Ricci of a unimodular solvable algebra on the split [s,s] + [s,s]^perp.

    Diagonal blocks come from the two quadratic forms
        Q_h(h) = -1/2 tr(ad_h^T ad_h) + 1/2 sum_{i<j} <[e_i,e_j],h>^2
        Q_f(f) = -1/4 tr(ad_f + ad_f^T)^2
    polarized within each block; the cross block is -1/2 tr(ad_h^T ad_f).
    """
    tol = default_tol() if tol is None else tol
    if not is_unimodular(L, tol):
        raise NotUnimodular("solvable Ricci formulas require unimodularity")
    rep = series(L, "derived", tol)
    if rep.solvable_length is None:
        raise NotSolvable("solvable Ricci formulas require a solvable algebra")
    Q, prim = orthonormal_frame(L)
    d, c = L.dim, prim.c
    Qinv = np.linalg.inv(Q)
    der = series(prim, "derived", tol).terms[1]
    H = der.orthonormal()
    q = H.shape[1]
    Fc = scipy.linalg.null_space(H.T) if q else np.eye(d)

    pair_forms = np.einsum("ijk->kij", c)  # <[e_i,e_j], e_k> as k-indexed forms
    iu = np.triu_indices(d, k=1)

    def q_h(h):
        adh = np.einsum("ijk,i->kj", c, h)
        comp = np.einsum("l,lij->ij", h, pair_forms)
        return float(-0.5 * (adh ** 2).sum() + 0.5 * (comp[iu] ** 2).sum())

    def q_f(f):
        adf = np.einsum("ijk,i->kj", c, f)
        s = adf + adf.T
        return float(-0.25 * np.trace(s @ s))

    def polarize(qfun, B):
        k = B.shape[1]
        M = np.zeros((k, k))
        for a in range(k):
            M[a, a] = qfun(B[:, a])
        for a in range(k):
            for b in range(a + 1, k):
                M[a, b] = M[b, a] = 0.25 * (qfun(B[:, a] + B[:, b])
                                            - qfun(B[:, a] - B[:, b]))
        return M

    Rhh = polarize(q_h, H)
    Rff = polarize(q_f, Fc)
    Rhf = np.zeros((q, Fc.shape[1]))
    for a in range(q):
        adh = np.einsum("ijk,i->kj", c, H[:, a])
        for b in range(Fc.shape[1]):
            adf = np.einsum("ijk,i->kj", c, Fc[:, b])
            Rhf[a, b] = -0.5 * np.trace(adh.T @ adf)

    B = np.hstack([H, Fc])
    R_ad = np.block([[Rhh, Rhf], [Rhf.T, Rff]])
    ric_on = B @ R_ad @ B.T
    flat = bool(np.abs(_full_curvature(c)).max(initial=0.0) <= tol)
    return _report(L, Qinv.T @ ric_on @ Qinv, "solvable-formula", flat)


def ricci_standard_split(L: MetricLieAlgebra, a_sub: Subspace, n_sub: Subspace,
                         tol: float | None = None) -> CurvatureReport:
    """Ricci of a solvable algebra via the a + nilradical split formulas,
    including the [ad_a, ad_a^T] commutator and mean-curvature terms."""
    tol = default_tol() if tol is None else tol
    if a_sub.dim + n_sub.dim != L.dim:
        raise SplitInvalid("split does not decompose the algebra")
    if a_sub.dim and n_sub.dim:
        cross = a_sub.basis_matrix.T @ L.gram @ n_sub.basis_matrix
        if np.abs(cross).max(initial=0.0) > 1e-9 * max(1.0, np.abs(L.gram).max()):
            raise SplitInvalid("a-factor is not Gram-orthogonal to the nilradical")
    try:
        nil = nilradical_solvable(L, tol)
    except NotSolvable as exc:
        raise SplitInvalid(str(exc)) from exc
    if not nil.equals(n_sub, max(tol, 1e-8)):
        raise SplitInvalid("n-factor is not the nilradical")

    Q, prim = orthonormal_frame(L)
    Qinv = np.linalg.inv(Q)
    c = prim.c
    A = Subspace.from_span(L.dim, Qinv @ a_sub.basis_matrix, tol).orthonormal() \
        if a_sub.dim else np.zeros((L.dim, 0))
    N = Subspace.from_span(L.dim, Qinv @ n_sub.basis_matrix, tol).orthonormal() \
        if n_sub.dim else np.zeros((L.dim, 0))
    q, p = A.shape[1], N.shape[1]

    Hvec = mean_curvature_vector(prim, (Subspace(L.dim, A), Subspace(L.dim, N))) \
        if q else np.zeros(L.dim)

    def br(u, v):
        return np.einsum("ijk,i,j->k", c, u, v)

    def ad_on_n(v):
        full = np.einsum("ijk,i->kj", c, v)
        return N.T @ full @ N

    D = [ad_on_n(A[:, g]) for g in range(q)]
    Sym = [0.5 * (Dg + Dg.T) for Dg in D]

    Raa = np.zeros((q, q))
    for g in range(q):
        for h in range(g, q):
            t1 = -0.5 * sum(br(A[:, g], A[:, k]) @ br(A[:, h], A[:, k])
                            for k in range(q))
            t2 = -np.trace(Sym[g] @ Sym[h])
            Raa[g, h] = Raa[h, g] = t1 + t2

    Ran = np.zeros((q, p))
    for g in range(q):
        for m in range(p):
            x = N[:, m]
            t1 = -0.5 * sum(br(A[:, g], A[:, k]) @ br(x, A[:, k]) for k in range(q))
            t2 = -0.5 * np.trace(D[g].T @ ad_on_n(x))
            t3 = -0.5 * (br(Hvec, A[:, g]) @ x)
            Ran[g, m] = t1 + t2 + t3

    comm = sum(Dg @ Dg.T - Dg.T @ Dg for Dg in D) if q else np.zeros((p, p))
    Rnn = np.zeros((p, p))
    for m in range(p):
        for l in range(m, p):
            x, y = N[:, m], N[:, l]
            t1 = 0.25 * sum((br(A[:, g], A[:, h]) @ x) * (br(A[:, g], A[:, h]) @ y)
                            for g in range(q) for h in range(q))
            t2 = 0.5 * comm[l, m] if q else 0.0
            t3 = -0.5 * sum(br(x, N[:, k]) @ br(y, N[:, k]) for k in range(p))
            t4 = 0.25 * sum((br(N[:, k], N[:, j]) @ x) * (br(N[:, k], N[:, j]) @ y)
                            for k in range(p) for j in range(p))
            t5 = -0.5 * (br(Hvec, x) @ y + br(Hvec, y) @ x)
            Rnn[m, l] = Rnn[l, m] = t1 + t2 + t3 + t4 + t5

    B = np.hstack([A, N])
    R_ad = np.block([[Raa, Ran], [Ran.T, Rnn]])
    ric_on = B @ R_ad @ B.T
    flat = bool(np.abs(_full_curvature(c)).max(initial=0.0) <= tol)
    return _report(L, Qinv.T @ ric_on @ Qinv, "standard-split", flat)


def scalar_and_flatness(L: MetricLieAlgebra, tol: float | None = None):
    """Scalar curvature tr(G^-1 Ric) and the full-tensor flatness flag."""
    rep = ricci_oracle(L, tol)
    return rep.scalar, rep.flat
