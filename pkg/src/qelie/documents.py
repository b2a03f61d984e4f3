"""The algebra file format: a small JSON schema and its (de)serialization.

Schema::

    {
      "name": "h3",
      "dim": 3,
      "basis": ["x", "y", "z"],
      "brackets": [["x", "y", "z", "1"]],
      "metric": [["x", "x", "4"]]          # optional, identity by default
    }

Brackets store [e_i, e_j] components as (i, j, k, coeff) rows; storing
(i, j, k, v) implies (j, i, k, -v).  Coefficients are strings: integer or
"p/q" literals select the exact rational mode, decimal/exponent literals the
float mode.  Unspecified metric entries default to the identity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import MetricLieAlgebra, StructureTensor
from .errors import ParseError, ValidationError
from .scalars import exact_zeros, format_scalar, is_rational_literal, parse_coeff

__all__ = ["AlgebraDocument", "parse_algebra", "dump_document",
           "document_to_algebra", "algebra_to_document"]


@dataclass(eq=False)
class AlgebraDocument:
    name: str
    dim: int
    basis: tuple
    brackets: list  # of (i_label, j_label, k_label, coeff_string)
    metric: list | None = None  # of (i_label, j_label, value_string)

    @property
    def exact(self) -> bool:
        coeffs = [b[3] for b in self.brackets]
        if self.metric:
            coeffs += [m[2] for m in self.metric]
        return all(is_rational_literal(s) for s in coeffs)


def _coeff_string(raw, where: str) -> str:
    if isinstance(raw, str):
        text = raw.strip()
    elif isinstance(raw, bool):
        raise ValidationError("coefficient-type", f"{where}: boolean coefficient")
    elif isinstance(raw, int):
        text = str(raw)
    elif isinstance(raw, float):
        text = format(raw, ".17g")
    else:
        raise ValidationError("coefficient-type",
                              f"{where}: coefficient must be a string or number")
    try:
        parse_coeff(text)
    except ValueError as exc:
        raise ValidationError("coefficient-syntax", f"{where}: {exc}") from exc
    return text


def parse_algebra(text) -> AlgebraDocument:
    """Parse and validate UTF-8 JSON bytes (or str) into an AlgebraDocument.

    Raises ParseError (with line/column) for malformed JSON and
    ValidationError naming the violated invariant otherwise.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not valid UTF-8: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from exc
    if not isinstance(data, dict):
        raise ValidationError("document-shape", "top level must be a JSON object")

    name = data.get("name", "")
    if not isinstance(name, str):
        raise ValidationError("name", "name must be a string")
    basis = data.get("basis")
    if not isinstance(basis, list) or not basis \
            or not all(isinstance(b, str) for b in basis):
        raise ValidationError("basis", "basis must be a nonempty list of labels")
    if len(set(basis)) != len(basis):
        raise ValidationError("unique-labels", "basis labels must be unique")
    dim = data.get("dim", len(basis))
    if not isinstance(dim, int) or dim != len(basis):
        raise ValidationError("dim", f"dim {dim!r} does not match basis size "
                                     f"{len(basis)}")
    index = {lab: i for i, lab in enumerate(basis)}

    raw_brackets = data.get("brackets", [])
    if not isinstance(raw_brackets, list):
        raise ValidationError("brackets", "brackets must be a list")
    brackets, seen = [], {}
    for row in raw_brackets:
        if not isinstance(row, list) or len(row) != 4:
            raise ValidationError("bracket-shape",
                                  f"bracket row {row!r} is not (i, j, k, coeff)")
        i, j, k, raw = row
        for lab in (i, j, k):
            if lab not in index:
                raise ValidationError("label-reference",
                                      f"bracket references unknown label {lab!r}")
        coeff = _coeff_string(raw, f"bracket ({i},{j},{k})")
        value = parse_coeff(coeff)
        if i == j and value != 0:
            raise ValidationError("antisymmetry",
                                  f"[{i},{i}] must vanish, got {coeff}")
        key = (index[i], index[j], index[k])
        mirror = (index[j], index[i], index[k])
        if key in seen:
            raise ValidationError("duplicate-bracket",
                                  f"bracket ({i},{j},{k}) given twice")
        if mirror in seen:
            if seen[mirror] != -value:
                raise ValidationError(
                    "antisymmetry-conflict",
                    f"brackets ({i},{j},{k}) and ({j},{i},{k}) are not opposite")
            continue  # the canonical row already carries this bracket
        seen[key] = value
        brackets.append((i, j, k, coeff))

    metric = data.get("metric")
    parsed_metric = None
    if metric is not None:
        if not isinstance(metric, list):
            raise ValidationError("metric", "metric must be a list")
        parsed_metric, seen_m = [], {}
        for row in metric:
            if not isinstance(row, list) or len(row) != 3:
                raise ValidationError("metric-shape",
                                      f"metric row {row!r} is not (i, j, value)")
            i, j, raw = row
            for lab in (i, j):
                if lab not in index:
                    raise ValidationError("label-reference",
                                          f"metric references unknown label {lab!r}")
            value_s = _coeff_string(raw, f"metric ({i},{j})")
            value = parse_coeff(value_s)
            key, mirror = (index[i], index[j]), (index[j], index[i])
            if key in seen_m or (mirror in seen_m and seen_m[mirror] != value):
                raise ValidationError("metric-symmetry",
                                      f"metric entry ({i},{j}) duplicated or "
                                      f"asymmetric")
            seen_m[key] = value
            parsed_metric.append((i, j, value_s))

    doc = AlgebraDocument(name, dim, tuple(basis), brackets, parsed_metric)
    document_to_algebra(doc)  # runs the structural invariants (SPD metric etc.)
    return doc


def document_to_algebra(doc: AlgebraDocument) -> MetricLieAlgebra:
    """Materialize the document; exact mode iff all literals are rational."""
    n = doc.dim
    index = {lab: i for i, lab in enumerate(doc.basis)}
    exact = doc.exact
    cf = np.zeros((n, n, n))
    cx = exact_zeros((n, n, n)) if exact else None
    for (i, j, k, coeff) in doc.brackets:
        a, b, c = index[i], index[j], index[k]
        v = parse_coeff(coeff)
        cf[a, b, c] += float(v)
        cf[b, a, c] -= float(v)
        if exact:
            cx[a, b, c] += Fraction(coeff)
            cx[b, a, c] -= Fraction(coeff)
    gram = np.eye(n)
    gram_exact = None
    if exact:
        gram_exact = exact_zeros((n, n))
        for i in range(n):
            gram_exact[i, i] = Fraction(1)
    if doc.metric:
        for (i, j, value_s) in doc.metric:
            a, b = index[i], index[j]
            v = parse_coeff(value_s)
            gram[a, b] = gram[b, a] = float(v)
            if exact:
                gram_exact[a, b] = gram_exact[b, a] = Fraction(value_s)
    if np.linalg.eigvalsh(gram).min() <= 0:
        raise ValidationError("metric-positive-definite",
                              "completed metric is not positive definite")
    return MetricLieAlgebra(doc.basis, StructureTensor(n, cf, cx), gram,
                            gram_exact)


def algebra_to_document(name: str, L: MetricLieAlgebra) -> AlgebraDocument:
    """Serialize an algebra; exact values stay rational literals, floats are
    printed with 15 significant digits."""
    n = L.dim
    labels = L.basis_labels

    def fmt(i, j, k):
        if L.exact:
            return str(L.st.c_exact[i, j, k])
        return format_scalar(L.c[i, j, k])

    brackets = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                exact_v = L.st.c_exact[i, j, k] if L.exact else None
                if (exact_v if L.exact else L.c[i, j, k]) != 0:
                    brackets.append((labels[i], labels[j], labels[k], fmt(i, j, k)))

    metric = None
    if not np.array_equal(L.gram, np.eye(n)):
        metric = []
        for i in range(n):
            for j in range(i, n):
                default = 1.0 if i == j else 0.0
                if L.gram_exact is not None:
                    v = L.gram_exact[i, j]
                    if v != Fraction(default):
                        metric.append((labels[i], labels[j], str(v)))
                elif L.gram[i, j] != default:
                    metric.append((labels[i], labels[j],
                                   format_scalar(L.gram[i, j])))
    return AlgebraDocument(name, n, tuple(labels), brackets, metric)


def dump_document(doc: AlgebraDocument) -> str:
    """Deterministic JSON text (fixed key order, two-space indent)."""
    data = {
        "name": doc.name,
        "dim": doc.dim,
        "basis": list(doc.basis),
        "brackets": [list(b) for b in doc.brackets],
    }
    if doc.metric:
        data["metric"] = [list(m) for m in doc.metric]
    return json.dumps(data, indent=2) + "\n"
