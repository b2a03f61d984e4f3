#!/usr/bin/env python3
"""Randomized oracle-equivalence sweep.

Draws catalog instances with random valid parameters and random SPD Gram
matrices, computes Ricci through the family-specific closed formula and
through the curvature-tensor oracle, and reports the worst max-norm
deviation.  Exits nonzero if it exceeds the bound.
"""

import argparse
import sys

import numpy as np

from qelie.algebra import MetricLieAlgebra, series
from qelie.catalog import (
    make_almost_abelian,
    make_heisenberg,
    make_heisenberg_extension,
    make_n6a,
    make_n7a,
)
from qelie.curvature import ricci_nilpotent, ricci_oracle, \
    ricci_unimodular_solvable


def random_spd(rng, n, cond):
    Q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    d = np.exp(rng.uniform(0.0, np.log(cond), size=n))
    return (Q * (d / d.min())) @ Q.T


def draw(rng):
    kind = int(rng.integers(0, 5))
    c = float(rng.uniform(0.5, 2.0))
    if kind == 0:
        return make_heisenberg(int(rng.integers(1, 4)), c).algebra
    if kind == 1:
        return make_n6a(float(rng.uniform(0.05, c / np.sqrt(3))), c).algebra
    if kind == 2:
        return make_n7a(float(rng.uniform(0.05, c / np.sqrt(3))), c).algebra
    if kind == 3:
        s = int(rng.integers(1, 3))
        k = int(rng.integers(1, s + 1))
        T = rng.uniform(0.3, 2.0, size=(k, s))
        while np.linalg.matrix_rank(T) < k:
            T = rng.uniform(0.3, 2.0, size=(k, s))
        return make_heisenberg_extension(s, c, T.tolist()).algebra
    n = int(rng.integers(2, 5))
    A = rng.uniform(-1.5, 1.5, size=(n, n))
    A -= np.trace(A) / n * np.eye(n)
    return make_almost_abelian(A.tolist()).algebra


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--cond", type=float, default=1e3)
    ap.add_argument("--bound", type=float, default=1e-8)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    worst, worst_kind = 0.0, ""
    for i in range(args.count):
        L = draw(rng)
        L = MetricLieAlgebra(L.basis_labels, L.st,
                             random_spd(rng, L.dim, args.cond))
        if series(L, "lower-central", 1e-9).nilpotent_step is not None:
            rep = ricci_nilpotent(L)
        else:
            rep = ricci_unimodular_solvable(L)
        dev = float(np.abs(rep.ricci - ricci_oracle(L).ricci).max())
        if dev > worst:
            worst, worst_kind = dev, rep.provenance
    print(f"{args.count} instances, worst |formula - oracle| = {worst:.3e} "
          f"({worst_kind})")
    if worst > args.bound:
        print(f"FAIL: exceeds bound {args.bound:.1e}")
        return 1
    print(f"OK: within bound {args.bound:.1e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
