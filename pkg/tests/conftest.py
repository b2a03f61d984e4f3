"""Shared fixtures and generators for the test suite."""

import numpy as np
import pytest

from qelie.algebra import MetricLieAlgebra, StructureTensor


def make_algebra(labels, entries, gram=None):
    dim = len(labels)
    st = StructureTensor.from_entries(dim, entries)
    return MetricLieAlgebra(tuple(labels), st,
                            np.eye(dim) if gram is None else gram)


def with_gram(L, gram):
    """Same structure constants, different inner product."""
    return MetricLieAlgebra(L.basis_labels, L.st, gram)


def random_spd(rng, n, cond=100.0):
    """Random SPD matrix with condition number at most ``cond``."""
    Q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    d = np.exp(rng.uniform(0.0, np.log(cond), size=n))
    d = d / d.min()
    return (Q * d) @ Q.T


def random_orthogonal(rng, n):
    Q, r = np.linalg.qr(rng.normal(size=(n, n)))
    return Q * np.sign(np.diag(r))


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def abelian(n):
    return make_algebra([f"e{i}" for i in range(n)], {})


def two_dim_ax():
    """[a, x] = x: the smallest non-unimodular solvable algebra."""
    return make_algebra(["a", "x"], {(0, 1, 1): 1})


def so3():
    """[e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e2: compact simple, not solvable."""
    return make_algebra(["e1", "e2", "e3"],
                        {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1})


def euclid2():
    """[a,x]=y, [a,y]=-x: flat solvable (rotation action on the plane)."""
    return make_algebra(["a", "x", "y"], {(0, 1, 2): 1, (0, 2, 1): -1})
