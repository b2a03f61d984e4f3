"""Command-line front end: `qelie check|ricci|qe|catalog|lattice`.

Reports are human-readable text by default; --json switches stdout to a
machine-readable JSON document.  All numeric output is printed with 15
significant digits and reports are byte-deterministic for identical inputs.
Exit codes: 0 success (per-command semantics), 1 domain failure, 2
usage/parse failure.  The environment variable QELIE_TOL overrides the
default tolerance 1e-9.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import algebra as alg
from . import catalog as cat
from . import curvature as curv
from . import lattice as lat
from . import qe
from .documents import algebra_to_document, document_to_algebra, dump_document, \
    parse_algebra
from .errors import ParseError, QelieError, ValidationError
from .scalars import default_tol, format_scalar

__all__ = ["main", "entrypoint"]


def _num(v):
    """Round to 15 significant digits for JSON emission."""
    return float(format(float(v), ".15g"))


def _vec(v):
    return [_num(x) for x in np.asarray(v).ravel()]


def _mat(M):
    return [[_num(x) for x in row] for row in np.asarray(M)]


def _load(path: str):
    data = Path(path).read_bytes()
    doc = parse_algebra(data)
    return doc, document_to_algebra(doc)


def _emit(payload: dict, lines: list, as_json: bool) -> None:
    if as_json:
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write("\n".join(lines) + "\n")


def _verdict_lines(title: str, report: qe.VerdictReport) -> list:
    lines = [f"{title}: {'pass' if report.passed else 'FAIL'}"]
    for c in report.checks:
        lines.append(f"  [{'ok' if c.passed else 'FAIL'}] {c.name}: "
                     f"residual {format_scalar(c.residual)} "
                     f"(tol {format_scalar(c.tolerance)}) - {c.detail}")
    return lines


def _verdict_json(report: qe.VerdictReport) -> dict:
    return {
        "passed": report.passed,
        "checks": [{
            "name": c.name, "passed": c.passed,
            "residual": _num(c.residual) if np.isfinite(c.residual) else "inf",
            "tolerance": _num(c.tolerance), "detail": c.detail,
        } for c in report.checks],
    }


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_check(args) -> int:
    doc, L = _load(args.path)
    tol = args.tol
    jac = alg.jacobi_residual(L)
    jac_ok = (jac == 0) if L.exact else (jac <= tol)
    uni = alg.is_unimodular(L, tol)
    low = alg.series(L, "lower-central", tol)
    der = alg.series(L, "derived", tol)
    cen = alg.center(L, tol)
    nil_dim, nil_note = None, ""
    if der.solvable_length is not None:
        try:
            nil_dim = alg.nilradical_solvable(L, tol).dim
        except QelieError as exc:
            nil_note = str(exc)
    lines = [
        f"algebra: {doc.name} (dim {L.dim}, "
        f"{'exact' if L.exact else 'float'} mode)",
        f"jacobi residual: {format_scalar(jac)} "
        f"({'pass' if jac_ok else 'FAIL'})",
        f"unimodular: {uni}",
        f"lower central series dims: {list(low.dims)} -> {low.verdict}",
        f"derived series dims: {list(der.dims)} -> {der.verdict}",
        f"center dimension: {cen.dim}",
    ]
    if nil_dim is not None:
        lines.append(f"nilradical dimension: {nil_dim}")
    elif nil_note:
        lines.append(f"nilradical: error: {nil_note}")
    payload = {
        "command": "check", "name": doc.name, "dim": L.dim,
        "exact": L.exact, "jacobi_residual": _num(float(jac)),
        "jacobi_pass": bool(jac_ok), "unimodular": uni,
        "lower_central_dims": list(low.dims), "lower_central": low.verdict,
        "derived_dims": list(der.dims), "derived": der.verdict,
        "center_dim": cen.dim, "nilradical_dim": nil_dim,
        "nilradical_error": nil_note or None,
    }
    _emit(payload, lines, args.json)
    return 0 if jac_ok else 1


def _standard_split(L, tol):
    n_sub = alg.nilradical_solvable(L, tol)
    U = n_sub.orthonormal()
    P = U @ np.linalg.solve(U.T @ L.gram @ U, U.T @ L.gram)
    comp = np.eye(L.dim) - P
    a_sub = alg.Subspace.from_span(L.dim, comp, tol)
    return a_sub, n_sub


def cmd_ricci(args) -> int:
    doc, L = _load(args.path)
    tol = args.tol
    oracle = curv.ricci_oracle(L, tol)
    if args.formula == "oracle":
        rep = oracle
    elif args.formula == "nilpotent":
        rep = curv.ricci_nilpotent(L, tol)
    elif args.formula == "solvable":
        rep = curv.ricci_unimodular_solvable(L, tol)
    else:
        a_sub, n_sub = _standard_split(L, tol)
        rep = curv.ricci_standard_split(L, a_sub, n_sub, tol)
    dev = float(np.abs(rep.ricci - oracle.ricci).max(initial=0.0))
    agree = dev <= tol
    lines = [
        f"algebra: {doc.name} (dim {L.dim})",
        f"formula: {rep.provenance}",
        "ricci matrix (declared basis):",
    ]
    for row in rep.ricci:
        lines.append("  [" + ", ".join(format_scalar(v) for v in row) + "]")
    lines += [
        "eigenvalues (ascending): "
        + ", ".join(format_scalar(v) for v in rep.eigenvalues),
        f"scalar curvature: {format_scalar(rep.scalar)}",
        f"flat: {rep.flat}",
    ]
    if args.formula != "oracle":
        lines.append(f"oracle deviation: {format_scalar(dev)} "
                     f"({'pass' if agree else 'FAIL'})")
    payload = {
        "command": "ricci", "name": doc.name, "formula": rep.provenance,
        "ricci": _mat(rep.ricci), "eigenvalues": _vec(rep.eigenvalues),
        "scalar": _num(rep.scalar), "flat": rep.flat,
        "oracle_deviation": _num(dev), "oracle_agrees": bool(agree),
    }
    _emit(payload, lines, args.json)
    return 0 if agree else 1


def cmd_qe(args) -> int:
    doc, L = _load(args.path)
    tol = args.tol
    if args.m == 0:
        raise ValidationError("m", "m must be nonzero")
    sols = qe.qe_solve(L, args.m, tol)
    flat = curv.ricci_oracle(L, tol).flat
    lines = [f"algebra: {doc.name} (dim {L.dim}), m = {format_scalar(args.m)}",
             f"solutions: {len(sols)}"]
    sol_payload = []
    reports_payload = {}
    for idx, s in enumerate(sols):
        lines.append(
            f"  [{idx}] lambda = {format_scalar(s.lam)}, "
            f"X = [" + ", ".join(format_scalar(v) for v in s.X) + "], "
            f"residual = {format_scalar(s.residual)}, flags = {s.flags}")
        sol_payload.append({
            "lambda": _num(s.lam), "m": _num(s.m), "X": _vec(s.X),
            "residual": _num(s.residual), "flags": s.flags,
        })
    nontrivial = [s for s in sols if s.nontrivial]
    if nontrivial:
        rep = qe.verify_two_eigenvalue_structure(L, nontrivial[0], tol)
        lines += _verdict_lines("two-eigenvalue structure", rep)
        reports_payload["two_eigenvalue_structure"] = _verdict_json(rep)
    low = alg.series(L, "lower-central", tol)
    if (low.nilpotent_step is None and alg.is_unimodular(L, tol)
            and alg.is_solvable(L, tol) and not flat):
        try:
            a_sub, n_sub = _standard_split(L, tol)
            rep = qe.verify_solvable_conditions(L, a_sub, n_sub, args.m, tol)
            lines += _verdict_lines("solvable structure conditions", rep)
            reports_payload["solvable_conditions"] = _verdict_json(rep)
        except QelieError as exc:
            lines.append(f"solvable structure conditions: not applicable "
                         f"({exc})")
            reports_payload["solvable_conditions"] = {"error": str(exc)}
    payload = {
        "command": "qe", "name": doc.name, "m": _num(args.m), "flat": flat,
        "solutions": sol_payload, "reports": reports_payload,
    }
    _emit(payload, lines, args.json)
    return 0 if (sols or flat) else 1


def _parse_params(text: str) -> dict:
    params = {}
    if not text:
        return params
    for item in text.split(","):
        if "=" not in item:
            raise ValidationError("params", f"expected key=value, got {item!r}")
        key, _, raw = item.partition("=")
        params[key.strip()] = raw.strip()
    return params


def _scalar_param(params, key, default=None):
    if key not in params:
        if default is None:
            raise ValidationError("params", f"missing parameter {key!r}")
        return default
    raw = params[key]
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return Fraction(raw)
    except ValueError:
        return float(raw)


def _matrix_param(params, key):
    if key not in params:
        raise ValidationError("params", f"missing parameter {key!r}")
    rows = []
    for row in params[key].split("|"):
        rows.append([_scalar_param({"v": v}, "v") for v in row.split(":")])
    return rows


def _build_entries(family: str, params: dict) -> list:
    if family == "tables":
        return cat.tables_report()
    if family == "heisenberg":
        entry = cat.make_heisenberg(int(_scalar_param(params, "s")),
                                    _scalar_param(params, "c"))
    elif family == "n6a":
        entry = cat.make_n6a(_scalar_param(params, "a"),
                             _scalar_param(params, "c"))
    elif family == "n7a":
        entry = cat.make_n7a(_scalar_param(params, "a"),
                             _scalar_param(params, "c"))
    elif family == "heisenberg_extension":
        entry = cat.make_heisenberg_extension(
            int(_scalar_param(params, "s")), _scalar_param(params, "c"),
            _matrix_param(params, "t"))
    elif family == "almost_abelian":
        entry = cat.make_almost_abelian(_matrix_param(params, "A"))
    else:
        raise ValidationError("family", f"unknown family {family!r}")
    return [entry]


def _entry_filename(entry) -> str:
    if entry.tables:
        return f"{entry.name}.json"
    parts = "_".join(f"{k}{v}" for k, v in sorted(entry.params.items())
                     if not isinstance(v, list))
    return f"{entry.name}_{parts}.json".replace("/", "over")


def cmd_catalog(args) -> int:
    entries = _build_entries(args.family, _parse_params(args.params or ""))
    docs = [(e, algebra_to_document(e.name, e.algebra)) for e in entries]
    if args.emit:
        target = Path(args.emit)
        if len(docs) > 1:
            target.mkdir(parents=True, exist_ok=True)
            written = []
            for e, doc in docs:
                p = target / _entry_filename(e)
                p.write_text(dump_document(doc), encoding="utf-8")
                written.append(str(p))
        else:
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(dump_document(docs[0][1]), encoding="utf-8")
            written = [str(target)]
        payload = {"command": "catalog", "family": args.family,
                   "written": written}
        _emit(payload, [f"wrote {p}" for p in written], args.json)
    else:
        if args.json:
            payload = {"command": "catalog", "family": args.family,
                       "documents": [json.loads(dump_document(d))
                                     for _, d in docs]}
            _emit(payload, [], True)
        else:
            sys.stdout.write("".join(dump_document(d) for _, d in docs))
    return 0


def _recognize_family(L, tol=1e-9):
    """Positional template match for the two obstructed families; returns
    (kind, a, c) with rational snaps, or None."""
    def snap(v):
        q = Fraction(float(v)).limit_denominator(10 ** 6)
        return q if abs(float(v) - float(q)) <= tol * max(1.0, abs(v)) else None

    c = L.c
    if L.dim == 6:
        template = {(0, 1, 2), (3, 4, 5), (3, 4, 2), (3, 5, 2), (4, 5, 2)}
        nz = {tuple(idx) for idx in np.argwhere(np.abs(c) > tol)}
        upper = {t for t in nz if t[0] < t[1]}
        if upper == template:
            cc, aa = c[0, 1, 2], c[3, 4, 5]
            b12, b13, b23 = c[3, 4, 2], c[3, 5, 2], c[4, 5, 2]
            want_b = np.sqrt((cc ** 2 + aa ** 2) / 2)
            want_b12 = np.sqrt(max(cc ** 2 - 3 * aa ** 2, 0.0) / 2)
            if (abs(abs(b13) - want_b) <= tol * max(1, want_b)
                    and abs(abs(b23) - want_b) <= tol * max(1, want_b)
                    and abs(abs(b12) - want_b12) <= tol * max(1.0, want_b12)):
                a_q, c_q = snap(abs(aa)), snap(abs(cc))
                if a_q is not None and c_q is not None:
                    return "n6a", a_q, c_q
    if L.dim == 7:
        template = {(0, 1, 2), (3, 4, 2), (3, 5, 2), (3, 6, 2),
                    (4, 6, 2), (4, 6, 3), (5, 6, 2), (5, 6, 3)}
        nz = {tuple(idx) for idx in np.argwhere(np.abs(c) > tol)}
        upper = {t for t in nz if t[0] < t[1]}
        if upper == template:
            cc, aa = c[0, 1, 2], c[3, 6, 2]
            e = np.sqrt((aa ** 2 + cc ** 2) / 2)
            d = np.sqrt(max(cc ** 2 - 3 * aa ** 2, 0.0) / 2)
            checks = [
                abs(abs(c[3, 4, 2]) - e), abs(abs(c[3, 5, 2]) - e),
                abs(abs(c[4, 6, 2]) - d), abs(abs(c[5, 6, 2]) - d),
                abs(abs(c[4, 6, 3]) - abs(aa)), abs(abs(c[5, 6, 3]) - abs(aa)),
            ]
            if max(checks) <= tol * max(1.0, e):
                a_q, c_q = snap(abs(aa)), snap(abs(cc))
                if a_q is not None and c_q is not None:
                    return "n7a", a_q, c_q
    return None


def cmd_lattice(args) -> int:
    doc, L = _load(args.path)
    # tol 1e-14: float images of true rationals sit within 2^-53 of them,
    # while quadratic irrationals stay >= ~1e-13 away from denominator <= 1e6
    # fractions; the op's looser 1e-12 default would misread sqrt(3)
    report = lat.rational_structure_check(L, denominator_bound=10 ** 6,
                                          tol=1e-14)
    recognized = None
    if not report.all_rational:
        recognized = _recognize_family(L)
        if recognized:
            kind, a_q, c_q = recognized
            fn = (lat.n6a_lattice_obstruction if kind == "n6a"
                  else lat.n7a_lattice_obstruction)
            report = fn(a_q, c_q, bound=args.bound)
    lines = [f"algebra: {doc.name} (dim {L.dim})",
             f"verdict: {report.verdict}"]
    payload = {"command": "lattice", "name": doc.name,
               "verdict": report.verdict, "all_rational": report.all_rational}
    if recognized:
        kind, a_q, c_q = recognized
        lines.append(f"recognized family: {kind} (a = {a_q}, c = {c_q})")
        payload["family"] = {"kind": kind, "a": str(a_q), "c": str(c_q)}
    if report.obstruction is not None:
        ob = report.obstruction
        ncert = ob.certificate
        lines += [
            f"obstruction: p*x^2 + q*y^2 = r*z^2 with (p,q,r) = {ob.equation}",
            f"  reduction: {ob.reduction}",
            f"  search: {ob.verdict} (bound {ob.bound}, "
            f"{len(ob.search_solutions)} solutions found)",
            f"  mod-3 certificate: squares mod 3 = {list(ncert.squares_mod_3)}, "
            f"residue table {list(ncert.residue_table)}, "
            f"valuation parity {ncert.valuation_parity}, "
            f"validated = {ncert.validated}",
        ]
        payload["obstruction"] = {
            "equation": list(ob.equation), "verdict": ob.verdict,
            "bound": ob.bound, "reduction": ob.reduction,
            "solutions_found": len(ob.search_solutions),
            "certificate": {
                "squares_mod_3": list(ncert.squares_mod_3),
                "residue_table": [list(t) for t in ncert.residue_table],
                "forces_divisibility": ncert.forces_divisibility,
                "valuation_parity": ncert.valuation_parity,
                "validated": ncert.validated,
            },
        }
    _emit(payload, lines, args.json)
    return 0


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qelie",
        description="metric Lie algebras: curvature, quasi-Einstein solving, "
                    "and lattice obstructions")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_path=True):
        if with_path:
            p.add_argument("path", help="algebra JSON file")
        p.add_argument("--tol", type=float, default=None,
                       help="tolerance (default 1e-9, or QELIE_TOL)")
        p.add_argument("--json", action="store_true",
                       help="emit a JSON report instead of text")

    p = sub.add_parser("check", help="Jacobi, unimodularity, series, center, "
                                     "nilradical")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("ricci", help="Ricci curvature report")
    common(p)
    p.add_argument("--formula", default="oracle",
                   choices=["oracle", "nilpotent", "solvable", "standard"])
    p.set_defaults(func=cmd_ricci)

    p = sub.add_parser("qe", help="solve the quasi-Einstein equation")
    common(p)
    p.add_argument("--m", type=float, required=True,
                   help="nonzero quasi-Einstein parameter")
    p.set_defaults(func=cmd_qe)

    p = sub.add_parser("catalog", help="emit example-family documents")
    p.add_argument("--family", required=True,
                   choices=["heisenberg", "n6a", "n7a", "heisenberg_extension",
                            "almost_abelian", "tables"])
    p.add_argument("--params", default="",
                   help="comma list key=value; matrices use | rows, : columns")
    p.add_argument("--emit", default=None,
                   help="output file (or directory for --family=tables)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("lattice", help="rationality / lattice obstruction report")
    common(p)
    p.add_argument("--bound", type=int, default=1000)
    p.set_defaults(func=cmd_lattice)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "tol", None) is None and hasattr(args, "tol"):
        args.tol = default_tol()
    try:
        return args.func(args)
    except (ParseError, ValidationError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except QelieError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
