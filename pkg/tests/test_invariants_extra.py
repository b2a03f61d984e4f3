"""Cross-cutting invariants and edge cases that span several modules."""

import numpy as np
import pytest

from conftest import abelian, euclid2, make_algebra, random_spd, with_gram
from qelie.algebra import (
    MetricLieAlgebra,
    StructureTensor,
    Subspace,
    nilradical_solvable,
    orthonormal_frame,
)
from qelie.catalog import make_heisenberg, make_n6a, make_n7a
from qelie.curvature import ricci_nilpotent, ricci_oracle
from qelie.errors import GramNotPositiveDefinite
from qelie.qe import qe_solve


class TestTypeValidation:
    def test_structure_tensor_antisymmetry_enforced(self):
        c = np.zeros((2, 2, 2))
        c[0, 1, 1] = 1.0  # no mirror entry
        with pytest.raises(ValueError):
            StructureTensor(2, c)

    def test_gram_must_be_symmetric(self):
        st = StructureTensor(2, np.zeros((2, 2, 2)))
        with pytest.raises(GramNotPositiveDefinite):
            MetricLieAlgebra(("a", "b"), st, np.array([[1.0, 0.2], [0.0, 1.0]]))

    def test_gram_must_be_positive_definite(self):
        st = StructureTensor(2, np.zeros((2, 2, 2)))
        with pytest.raises(GramNotPositiveDefinite):
            MetricLieAlgebra(("a", "b"), st, np.diag([1.0, -1.0]))

    def test_duplicate_labels_rejected(self):
        st = StructureTensor(2, np.zeros((2, 2, 2)))
        with pytest.raises(ValueError):
            MetricLieAlgebra(("a", "a"), st, np.eye(2))

    def test_subspace_rank_validated(self):
        with pytest.raises(ValueError):
            Subspace(3, np.array([[1.0, 2.0], [0.0, 0.0], [1.0, 2.0]]))

    def test_degenerate_gram_rejected_by_frame(self):
        # just-positive eigenvalues still orthonormalize
        L = with_gram(abelian(2), np.diag([1e-8, 1.0]))
        Q, prim = orthonormal_frame(L)
        assert np.abs(Q.T @ L.gram @ Q - np.eye(2)).max() <= 1e-10


class TestNilradicalEdges:
    def test_flat_euclidean_algebra(self):
        nil = nilradical_solvable(euclid2(), 1e-9)
        assert nil.dim == 2
        assert nil.equals(Subspace(3, np.eye(3)[:, 1:]), 1e-9)

    def test_mixed_jordan_semisimple_action(self):
        # ad_a has a Jordan block on (e1,e2) and weights (1,-1) on (e3,e4)
        L = make_algebra(
            ["a", "e1", "e2", "e3", "e4"],
            {(0, 2, 1): 1, (0, 3, 3): 1, (0, 4, 4): -1})
        nil = nilradical_solvable(L, 1e-9)
        assert nil.dim == 4
        assert nil.equals(Subspace(5, np.eye(5)[:, 1:]), 1e-9)


class TestRicciNilpotentBilinearCrossCheck:
    def test_polarization_equals_direct_bilinear_form(self, rng):
        # independent expression: Ric(u,v) = -1/2 tr(ad_u^T ad_v)
        # + 1/4 sum_{k,j} <[e_k,e_j],u><[e_k,e_j],v> in an orthonormal frame
        for entry in [make_heisenberg(2, 1), make_n6a(1, 2), make_n7a(1, 2)]:
            L = with_gram(entry.algebra,
                          random_spd(rng, entry.algebra.dim, cond=40))
            Q, prim = orthonormal_frame(L)
            c = prim.c
            direct = (-0.5 * np.einsum("akl,bkl->ab", c, c)
                      + 0.25 * np.einsum("kja,kjb->ab", c, c))
            Qi = np.linalg.inv(Q)
            direct_decl = Qi.T @ direct @ Qi
            assert np.abs(ricci_nilpotent(L).ricci - direct_decl).max() <= 1e-10

    def test_two_hundred_random_nilpotent_instances(self):
        rng = np.random.default_rng(20240812)
        worst = 0.0
        for i in range(200):
            c = float(rng.uniform(0.5, 2.0))
            kind = i % 3
            if kind == 0:
                L = make_heisenberg(int(rng.integers(1, 4)), c).algebra
            elif kind == 1:
                L = make_n6a(float(rng.uniform(0.05, c / np.sqrt(3))), c).algebra
            else:
                L = make_n7a(float(rng.uniform(0.05, c / np.sqrt(3))), c).algebra
            L = with_gram(L, random_spd(rng, L.dim, cond=1e3))
            dev = float(np.abs(ricci_nilpotent(L).ricci
                               - ricci_oracle(L).ricci).max())
            worst = max(worst, dev)
        assert worst <= 1e-8


class TestSolverDeterminism:
    def test_repeat_runs_identical(self):
        L = make_heisenberg(2, 1).algebra
        a = qe_solve(L, 2.0)
        b = qe_solve(L, 2.0)
        assert len(a) == len(b)
        for s, t in zip(a, b):
            assert s.lam == t.lam and np.array_equal(s.X, t.X)
            assert s.residual == t.residual

    def test_plus_branch_listed_first(self):
        # the distinguished eigenvector is sign-fixed, so the +X solution
        # precedes -X deterministically
        sols = [s for s in qe_solve(make_heisenberg(1, 1).algebra, 2.0)
                if s.nontrivial]
        assert sols[0].X[-1] > 0 > sols[1].X[-1]

    def test_two_dim_hyperbolic_plane_is_einstein(self):
        from conftest import two_dim_ax

        with pytest.warns(UserWarning):
            sols = qe_solve(two_dim_ax(), 1.0)
        assert len(sols) == 1
        assert sols[0].einstein
        assert sols[0].lam == pytest.approx(-1.0)
