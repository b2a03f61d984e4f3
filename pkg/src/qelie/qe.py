"""The quasi-Einstein tensor, its closed-form solver, and theorem verifiers.

The quasi-Einstein equation with nonzero parameter m asks for
``Ric + (1/2) L_X g - (1/m) Xb (x) Xb = lambda g`` with Xb = g(X, .).
On a unimodular algebra a left-invariant solution forces X to be Killing,
so the Ricci operator must have a single eigenvalue lambda away from X and
lambda + |X|^2/m along X; the solver eigendecomposes Ricci, clusters the
spectrum, and validates every candidate by its final tensor residual.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    MetricLieAlgebra,
    Subspace,
    _null_space,
    ad_matrix,
    center,
    gram_adjoint,
    is_unimodular,
    nilradical_solvable,
    restrict,
    series,
    symmetric_part,
)
from .curvature import cluster_eigenvalues, ricci_oracle
from .errors import (
    AdANotNormal,
    BadPartition,
    BasisNotHeisenberg,
    NotSolvable,
    NotUnimodular,
    QelieError,
    SplitInvalid,
    ZeroM,
)
from .scalars import default_tol

__all__ = [
    "QESolution",
    "QEOperator",
    "Check",
    "VerdictReport",
    "lie_derivative_metric",
    "killing_subalgebra",
    "bakry_emery",
    "qe_solve",
    "verify_two_eigenvalue_structure",
    "verify_nilpotent_structure_theorem",
    "verify_solvable_conditions",
    "verify_heisenberg_extension_form",
]


@dataclass(eq=False)
class QESolution:
    """One totally left-invariant solution: constant lam, field X, residual
    of the full tensor equation, and the Killing/central/Einstein flags."""

    lam: float
    m: float
    X: np.ndarray
    residual: float
    x_killing: bool
    x_central: bool
    einstein: bool

    @property
    def flags(self) -> dict:
        return {"X_killing": self.x_killing, "X_central": self.x_central,
                "einstein": self.einstein}

    @property
    def nontrivial(self) -> bool:
        return bool(np.abs(self.X).max(initial=0.0) > 0)


@dataclass(eq=False)
class QEOperator:
    """F with g(F x, y) = (1/m) g(X,x) g(X,y); rank <= 1, and for non-flat
    unimodular solvable solutions its image lies in the center."""

    F: np.ndarray

    @classmethod
    def from_solution(cls, L: MetricLieAlgebra, sol: QESolution) -> "QEOperator":
        xb = L.gram @ sol.X
        return cls(np.outer(sol.X, xb) / sol.m)


@dataclass
class Check:
    """One named verdict: the quantity compared, its residual and tolerance."""

    name: str
    passed: bool
    residual: float
    tolerance: float
    detail: str


@dataclass
class VerdictReport:
    checks: list = field(default_factory=list)

    def add(self, name, passed, residual, tolerance, detail):
        self.checks.append(Check(name, bool(passed), float(residual),
                                 float(tolerance), detail))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


# ---------------------------------------------------------------------------
# tensors
# ---------------------------------------------------------------------------

def lie_derivative_metric(L: MetricLieAlgebra, X) -> np.ndarray:
    """(L_X g)(u,v) = -g((ad_X + ad_X#) u, v) as a symmetric matrix."""
    adX = ad_matrix(L, X)
    return -(adX.T @ L.gram + L.gram @ adX)


def killing_residual(L: MetricLieAlgebra, X) -> float:
    """Frobenius norm of ad_X + ad_X#; zero iff X is a Killing direction."""
    adX = ad_matrix(L, X)
    return float(np.linalg.norm(adX + gram_adjoint(adX, L.gram)))


def killing_subalgebra(L: MetricLieAlgebra, tol: float | None = None) -> Subspace:
    """{x : ad_x skew-adjoint}, as the null space of x -> ad_x^T G + G ad_x."""
    tol = default_tol() if tol is None else tol
    rows = []
    eye = np.eye(L.dim)
    for i in range(L.dim):
        adi = ad_matrix(L, eye[:, i])
        rows.append((adi.T @ L.gram + L.gram @ adi).ravel())
    M = np.asarray(rows).T
    return Subspace(L.dim, _null_space(M, tol))


def bakry_emery(L: MetricLieAlgebra, X, m: float) -> np.ndarray:
    """Ric + (1/2) L_X g - (1/m) Xb (x) Xb, as a bilinear form matrix."""
    if m == 0:
        raise ZeroM("the quasi-Einstein parameter m must be nonzero")
    X = np.asarray(X, dtype=float)
    ric = ricci_oracle(L).ricci
    xb = L.gram @ X
    return ric + 0.5 * lie_derivative_metric(L, X) - np.outer(xb, xb) / m


# ---------------------------------------------------------------------------
# solver
# ---------------------------------------------------------------------------

def _solution(L, lam, m, X, tol) -> QESolution:
    res = float(np.abs(bakry_emery(L, X, m) - lam * L.gram).max(initial=0.0))
    scale = max(1.0, float(np.abs(L.c).max(initial=0.0)))
    xnorm = float(np.linalg.norm(X))
    killing = killing_residual(L, X) <= max(tol, 1e-9) * scale * max(1.0, xnorm)
    central = float(np.linalg.norm(ad_matrix(L, X))) <= \
        max(tol, 1e-9) * scale * max(1.0, xnorm)
    return QESolution(float(lam), float(m), X, res, killing, central,
                      einstein=xnorm == 0.0)


def qe_solve(L: MetricLieAlgebra, m: float, tol: float | None = None) -> list:
    """All totally left-invariant quasi-Einstein solutions for parameter m.

    A single Ricci eigenvalue cluster gives the Einstein solution (lam, X=0);
    an (n-1, 1) cluster pattern with values (lam, mu) gives the candidates
    X = +-sqrt(m (mu - lam)) u along the distinguished unit eigenvector u,
    accepted when m(mu-lam) >= -tol, u is Killing, and the assembled tensor
    residual stays within tol.  Anything else yields no solutions.
    """
    if m == 0:
        raise ZeroM("the quasi-Einstein parameter m must be nonzero")
    tol = default_tol() if tol is None else tol
    if not is_unimodular(L, tol):
        warnings.warn("qe_solve on a non-unimodular algebra: the Killing "
                      "reduction behind the eigen-split is not guaranteed",
                      stacklevel=2)
    rep = ricci_oracle(L, tol)
    clusters = cluster_eigenvalues(rep.eigenvalues)
    n = L.dim
    out = []
    if len(clusters) == 1:
        lam = clusters[0][0]
        sol = _solution(L, lam, m, np.zeros(n), tol)
        if sol.residual <= tol:
            out.append(sol)
        return out
    if len(clusters) == 2:
        for k in (0, 1):
            mu, idx = clusters[k]
            lam, other = clusters[1 - k]
            if len(idx) != 1 or len(other) != n - 1:
                continue
            t = m * (mu - lam)
            if t < -tol:
                continue
            u = rep.eigenvectors[:, idx[0]]
            X = np.sqrt(max(t, 0.0)) * u
            scale = max(1.0, float(np.abs(L.c).max(initial=0.0)))
            if killing_residual(L, u) > max(tol, 1e-9) * scale:
                continue
            for sign in (1.0, -1.0):
                sol = _solution(L, lam, m, sign * X, tol)
                if sol.residual <= tol:
                    out.append(sol)
    return out


# ---------------------------------------------------------------------------
# theorem verifiers
# ---------------------------------------------------------------------------

def verify_two_eigenvalue_structure(L: MetricLieAlgebra, sol: QESolution,
                                    tol: float | None = None) -> VerdictReport:
    """Checks on a nontrivial solution: (1, n-1) Ricci multiplicities,
    negative constant, one-dimensional center, center inside the derived
    algebra.  Failures are report entries, never exceptions."""
    tol = default_tol() if tol is None else tol
    report = VerdictReport()
    if not sol.nontrivial:
        report.add("vacuous", True, 0.0, tol,
                   "X = 0: structure checks do not apply to the trivial solution")
        return report
    rep = ricci_oracle(L, tol)
    clusters = cluster_eigenvalues(rep.eigenvalues)
    sizes = sorted(len(idx) for _, idx in clusters)
    spread = max((float(rep.eigenvalues[idx].max() - rep.eigenvalues[idx].min())
                  for _, idx in clusters), default=0.0)
    report.add("eigenvalue-multiplicities", sizes == [1, L.dim - 1], spread, tol,
               f"Ricci operator eigenvalue multiplicities {sizes} vs (1, n-1); "
               f"residual is the worst within-cluster spread")
    report.add("lambda-negative", sol.lam < 0, max(sol.lam, 0.0), tol,
               f"quasi-Einstein constant lambda = {sol.lam:.12g} must be "
               f"negative for a non-abelian algebra")
    cen = center(L, tol)
    report.add("center-dimension-one", cen.dim == 1, abs(cen.dim - 1), tol,
               f"dim z = {cen.dim}, expected 1")
    derived = series(L, "derived", tol).terms[1]
    res = derived.containment_residual(cen)
    report.add("center-in-derived", res <= tol, res, tol,
               "projection residual of the center outside the derived algebra")
    return report


def verify_nilpotent_structure_theorem(L: MetricLieAlgebra, basis: np.ndarray,
                                       tol: float | None = None) -> VerdictReport:
    """Checks the adapted-basis bracket pattern of a nilpotent quasi-Einstein
    algebra: columns ordered (x, y, z, w_1..w_t), orthonormal for the metric.

    Verifies [x,y] = c z, [x,w_i] = [y,w_i] = 0, z central,
    [w_i,w_j] in span(W, z), and lambda = -c^2/2 against the solver.
    """
    tol = default_tol() if tol is None else tol
    basis = np.asarray(basis, dtype=float)
    if basis.shape != (L.dim, L.dim) or L.dim < 3:
        raise BadPartition("expected a full square basis (x, y, z, w_1..w_t)")
    if np.abs(basis.T @ L.gram @ basis - np.eye(L.dim)).max() > 1e-8:
        raise BadPartition("basis columns are not orthonormal for the metric")
    x, y, z, W = basis[:, 0], basis[:, 1], basis[:, 2], basis[:, 3:]
    t = W.shape[1]
    report = VerdictReport()

    def br(u, v):
        return np.einsum("ijk,i,j->k", L.c, u, v)

    def coords(v):
        return basis.T @ L.gram @ v

    c_val = float(coords(br(x, y))[2])
    res = float(np.linalg.norm(br(x, y) - c_val * z))
    report.add("x-y-bracket", res <= tol, res, tol,
               f"[x,y] = c z with c = {c_val:.12g}; residual is the off-z part")

    res = max((float(np.linalg.norm(br(x, W[:, i]))) for i in range(t)), default=0.0)
    report.add("x-w-brackets", res <= tol, res, tol, "[x, w_i] = 0 for all i")
    res = max((float(np.linalg.norm(br(y, W[:, i]))) for i in range(t)), default=0.0)
    report.add("y-w-brackets", res <= tol, res, tol, "[y, w_i] = 0 for all i")

    res = float(np.linalg.norm(ad_matrix(L, z)))
    report.add("z-central", res <= tol, res, tol, "ad_z = 0")

    worst = 0.0
    for i in range(t):
        for j in range(i + 1, t):
            comp = coords(br(W[:, i], W[:, j]))
            worst = max(worst, float(np.abs(comp[:2]).max()))
    report.add("w-brackets-in-W-plus-z", worst <= tol, worst, tol,
               "[w_i, w_j] has no x or y component")

    sols = [s for s in qe_solve(L, m=1.0, tol=max(tol, 1e-8)) if s.nontrivial]
    if sols:
        res = abs(sols[0].lam + 0.5 * c_val ** 2)
        report.add("lambda-is-minus-half-c-squared", res <= max(tol, 1e-8), res,
                   max(tol, 1e-8),
                   f"lambda = {sols[0].lam:.12g} vs -c^2/2 = {-0.5 * c_val**2:.12g}")
    else:
        report.add("lambda-is-minus-half-c-squared", False, float("inf"),
                   max(tol, 1e-8), "no nontrivial quasi-Einstein solution found")
    return report


def _restricted_nilradical(L: MetricLieAlgebra, n_sub: Subspace, tol: float):
    labels = tuple(f"n{i}" for i in range(n_sub.dim))
    return restrict(L, n_sub, tol, labels=labels)


def verify_solvable_conditions(L: MetricLieAlgebra, a_sub: Subspace,
                               n_sub: Subspace, m: float,
                               tol: float | None = None) -> VerdictReport:
    """The four equivalent conditions for a non-flat unimodular solvable
    algebra with normal ad_a: (i) the nilradical solves the quasi-Einstein
    equation, (ii) [a,a] = 0, (iii) the centers of s and n agree, (iv)
    g(a,a) = -(1/lambda) tr S(ad_a)^2 on a spanning set of a."""
    tol = default_tol() if tol is None else tol
    if not is_unimodular(L, tol):
        raise NotUnimodular("the structure conditions require unimodularity")
    if series(L, "derived", tol).solvable_length is None:
        raise NotSolvable("the structure conditions require solvability")
    rep = ricci_oracle(L, tol)
    if rep.flat:
        raise QelieError("algebra is flat: the non-flat structure conditions "
                         "do not apply")
    nil = nilradical_solvable(L, tol)
    if not nil.equals(n_sub, max(tol, 1e-8)):
        raise SplitInvalid("n-factor is not the nilradical")
    if a_sub.dim + n_sub.dim != L.dim:
        raise SplitInvalid("split does not decompose the algebra")

    A = a_sub.basis_matrix
    scale = max(1.0, float(np.abs(L.c).max(initial=0.0)) ** 2)
    ad_a = [ad_matrix(L, A[:, i]) for i in range(a_sub.dim)]
    adj = [gram_adjoint(M, L.gram) for M in ad_a]
    for i in range(a_sub.dim):
        for j in range(i, a_sub.dim):
            comm = ad_a[i] @ adj[j] - adj[j] @ ad_a[i] \
                + ad_a[j] @ adj[i] - adj[i] @ ad_a[j]
            if 0.5 * np.abs(comm).max(initial=0.0) > max(tol, 1e-8) * scale:
                raise AdANotNormal(
                    "ad_a does not commute with its metric adjoint on the "
                    "a-factor; the structure theorem hypothesis fails")

    report = VerdictReport()

    sub_alg, B = _restricted_nilradical(L, n_sub, tol)
    sols = [s for s in qe_solve(sub_alg, m, tol=max(tol, 1e-8)) if s.nontrivial]
    if not sols:
        sols = qe_solve(sub_alg, m, tol=max(tol, 1e-8))
    lam = sols[0].lam if sols else None
    res = sols[0].residual if sols else float("inf")
    report.add("nilradical-quasi-einstein", bool(sols), res, max(tol, 1e-8),
               "the restricted metric algebra on the nilradical admits a "
               "quasi-Einstein solution"
               + (f" with lambda = {lam:.12g}" if sols else ""))

    worst = 0.0
    for i in range(a_sub.dim):
        for j in range(i + 1, a_sub.dim):
            worst = max(worst, float(np.linalg.norm(
                np.einsum("ijk,i,j->k", L.c, A[:, i], A[:, j]))))
    report.add("a-factor-abelian", worst <= tol, worst, tol, "[a_i, a_j] = 0")

    cen_s = center(L, tol)
    cen_n_sub = center(sub_alg, tol)
    cen_n = Subspace.from_span(L.dim, B @ cen_n_sub.basis_matrix, tol) \
        if cen_n_sub.dim else Subspace.zero(L.dim)
    res = max(cen_s.containment_residual(cen_n), cen_n.containment_residual(cen_s))
    same = cen_s.dim == cen_n.dim and res <= tol
    report.add("centers-match", same, res, tol,
               f"center(s) dim {cen_s.dim} vs center(n) dim {cen_n.dim}; "
               "residual is the worst mutual projection defect")

    if lam is not None and lam < 0:
        syms = [symmetric_part(M, L.gram) for M in ad_a]
        worst = 0.0
        for i in range(a_sub.dim):
            for j in range(i, a_sub.dim):
                gij = float(A[:, i] @ L.gram @ A[:, j])
                pred = -np.trace(syms[i] @ syms[j]) / lam
                worst = max(worst, abs(gij - pred) / max(1.0, abs(gij)))
        report.add("metric-normalization", worst <= max(tol, 1e-8), worst,
                   max(tol, 1e-8),
                   "g(a_i,a_j) = -(1/lambda) tr S(ad_a_i) S(ad_a_j)")
    else:
        report.add("metric-normalization", False, float("inf"), max(tol, 1e-8),
                   "no negative lambda available from the nilradical solve")
    return report


def verify_heisenberg_extension_form(L: MetricLieAlgebra, a_sub: Subspace,
                                     n_sub: Subspace,
                                     tol: float | None = None) -> VerdictReport:
    """For a nilradical declared in a Heisenberg basis (x_1,y_1,..,x_s,y_s,z):
    checks every ad_a restricted to it is diagonal with paired entries
    (t_1, -t_1, ..., t_s, -t_s, 0) and that dim a <= s."""
    tol = default_tol() if tol is None else tol
    N = n_sub.basis_matrix
    p = n_sub.dim
    if p < 3 or p % 2 == 0:
        raise BasisNotHeisenberg(f"nilradical dimension {p} is not 2s+1")
    if np.abs(N.T @ L.gram @ N - np.eye(p)).max() > 1e-8:
        raise BasisNotHeisenberg("declared Heisenberg basis is not orthonormal")
    s = (p - 1) // 2

    def br(u, v):
        return np.einsum("ijk,i,j->k", L.c, u, v)

    def ncoords(v):
        return N.T @ L.gram @ v

    z = N[:, -1]
    c_val = float(ncoords(br(N[:, 0], N[:, 1]))[-1])
    if abs(c_val) <= tol:
        raise BasisNotHeisenberg("[x_1, y_1] has no z component")
    worst = 0.0
    for i in range(p):
        for j in range(i + 1, p):
            expect = np.zeros(p)
            if j == i + 1 and i % 2 == 0 and i < p - 1:
                expect[-1] = c_val
            worst = max(worst, float(np.linalg.norm(ncoords(br(N[:, i], N[:, j]))
                                                    - expect)))
    if worst > max(tol, 1e-8) * max(1.0, abs(c_val)):
        raise BasisNotHeisenberg(
            f"bracket table does not match [x_i,y_i] = c z (residual {worst:g})")

    report = VerdictReport()
    for g_idx in range(a_sub.dim):
        a = a_sub.basis_matrix[:, g_idx]
        D = np.array([ncoords(br(a, N[:, j])) for j in range(p)]).T
        off = D - np.diag(np.diag(D))
        res_off = float(np.abs(off).max(initial=0.0))
        report.add(f"ad-a{g_idx}-diagonal", res_off <= max(tol, 1e-8), res_off,
                   max(tol, 1e-8),
                   "ad_a restricted to the nilradical is diagonal in the "
                   "declared basis (z column and row included)")
        diag = np.diag(D)
        res_pair = max(abs(float(diag[2 * i] + diag[2 * i + 1])) for i in range(s))
        res_pair = max(res_pair, abs(float(diag[-1])))
        report.add(f"ad-a{g_idx}-paired-spectrum", res_pair <= max(tol, 1e-8),
                   res_pair, max(tol, 1e-8),
                   "diagonal has the pattern (t_1, -t_1, ..., t_s, -t_s, 0)")
    report.add("a-dimension-bound", a_sub.dim <= s, max(0, a_sub.dim - s), 0,
               f"dim a = {a_sub.dim} must not exceed s = {s}")
    return report
