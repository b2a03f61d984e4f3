#!/usr/bin/env python3
"""Reproduce the classification rows and re-derive their data from scratch.

For each row: Jacobi residual, unimodularity, nilpotency step, center dimension,
the quasi-Einstein solve, and (for the solvable extensions) the four
structure conditions.  The n6a row is reported exactly as computed: its
Ricci tensor has off-diagonal entries and the solver finds no solution,
in conflict with the recorded table value lambda = -c^2/2.
"""

import numpy as np

from qelie.algebra import Subspace, center, jacobi_residual, \
    nilradical_solvable, series, is_unimodular
from qelie.catalog import tables_report
from qelie.curvature import ricci_oracle
from qelie.qe import qe_solve, verify_solvable_conditions


def canonical_split(L, tol=1e-9):
    n_sub = nilradical_solvable(L, tol)
    U = n_sub.orthonormal()
    P = U @ np.linalg.solve(U.T @ L.gram @ U, U.T @ L.gram)
    return Subspace.from_span(L.dim, np.eye(L.dim) - P, tol), n_sub


def main():
    for entry in tables_report():
        L = entry.algebra
        low = series(L, "lower-central", 1e-9)
        der = series(L, "derived", 1e-9)
        kind = low.verdict if low.nilpotent_step is not None else der.verdict
        print(f"== {entry.name} (dim {L.dim}, tables {'/'.join(entry.tables)}, "
              f"params {entry.params})")
        print(f"   jacobi residual: {float(jacobi_residual(L)):.3g}   "
              f"unimodular: {is_unimodular(L, 1e-9)}   "
              f"type: {kind}   center dim: {center(L, 1e-9).dim}")
        rep = ricci_oracle(L)
        print(f"   ricci eigenvalues: "
              + ", ".join(f"{v:.12g}" for v in rep.eigenvalues))
        sols = [s for s in qe_solve(L, m=1.0, tol=1e-8) if s.nontrivial]
        if sols:
            s = sols[0]
            print(f"   quasi-Einstein: lambda = {s.lam:.12g}, |X| = "
                  f"{np.linalg.norm(s.X):.12g}, residual = {s.residual:.3g}")
        else:
            print("   quasi-Einstein: no nontrivial solution found")
        if entry.expected and "lambda" in entry.expected:
            recorded = entry.expected["lambda"]
            status = ("matches" if sols and abs(sols[0].lam - recorded) < 1e-9
                      else "DOES NOT match")
            print(f"   recorded table value lambda = {recorded}: {status}")
        if low.nilpotent_step is None:
            a_sub, n_sub = canonical_split(L)
            vrep = verify_solvable_conditions(L, a_sub, n_sub, m=1.0, tol=1e-9)
            marks = ", ".join(f"{c.name}={'ok' if c.passed else 'FAIL'}"
                              for c in vrep.checks)
            print(f"   structure conditions: {marks}")
        print()


if __name__ == "__main__":
    main()
