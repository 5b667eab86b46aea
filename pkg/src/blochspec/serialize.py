"""JSON wire formats: operators, bivariate polynomials, series, reports.

All exact scalars travel as canonical "p/q" strings (plain "p" for
integers).  Serializers emit deterministically ordered structures so that
equal objects produce identical bytes; loaders validate strictly and raise
FormatError on anything malformed, ignoring unknown keys (forward
compatibility for provenance blocks and the like).
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import FormatError
from .generators import quiddity_operator
from .operators import DifferenceOperator
from .poly import BiPoly, UPoly
from .rationals import frac_str, parse_frac


def canonical_dumps(payload) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, newline end."""
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


# -- operators -----------------------------------------------------------------


def operator_to_json(L: DifferenceOperator) -> dict:
    return {
        "n": L.n,
        "terms": {
            str(p): [frac_str(v) for v in L.term(p)] for p in L.powers()
        },
    }


def operator_from_json(obj) -> DifferenceOperator:
    if not isinstance(obj, dict):
        raise FormatError("operator payload must be a JSON object")
    n = obj.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise FormatError(f"operator period must be a positive integer, got {n!r}")
    terms = obj.get("terms")
    if not isinstance(terms, dict):
        raise FormatError("operator payload needs a 'terms' object")
    parsed = {}
    for key, values in terms.items():
        try:
            power = int(key, 10)
        except (TypeError, ValueError) as exc:
            raise FormatError(f"term power {key!r} is not a decimal integer") from exc
        if not isinstance(values, list) or len(values) != n:
            raise FormatError(
                f"term {key!r} must list exactly n={n} coefficients"
            )
        parsed[power] = [parse_frac(v) for v in values]
    return DifferenceOperator(n, parsed)


def quiddity_from_json(obj) -> DifferenceOperator:
    if not isinstance(obj, dict):
        raise FormatError("quiddity payload must be a JSON object")
    n = obj.get("n")
    cycle = obj.get("quiddity")
    if not isinstance(n, int) or isinstance(n, bool) or n < 3:
        raise FormatError(f"quiddity period must be an integer >= 3, got {n!r}")
    if (
        not isinstance(cycle, list)
        or len(cycle) != n
        or any(not isinstance(v, int) or isinstance(v, bool) or v < 1 for v in cycle)
    ):
        raise FormatError("'quiddity' must list n positive integers")
    return quiddity_operator(cycle)


def load_operator(obj) -> DifferenceOperator:
    """Accept either the operator format or the quiddity input format."""
    if isinstance(obj, dict) and "terms" in obj:
        return operator_from_json(obj)
    if isinstance(obj, dict) and "quiddity" in obj:
        return quiddity_from_json(obj)
    raise FormatError("payload is neither an operator nor a quiddity input")


def load_operator_text(text: str) -> DifferenceOperator:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc
    return load_operator(obj)


# -- polynomials ---------------------------------------------------------------


def bipoly_to_json(R: BiPoly) -> dict:
    return {
        "vars": [R.vars[0], R.vars[1]],
        "coeffs": [[i, j, frac_str(R.coefficient(i, j))] for (i, j) in R.support()],
    }


def bipoly_from_json(obj) -> BiPoly:
    if not isinstance(obj, dict):
        raise FormatError("polynomial payload must be a JSON object")
    vars_ = obj.get("vars")
    if (
        not isinstance(vars_, list)
        or len(vars_) != 2
        or any(not isinstance(v, str) for v in vars_)
    ):
        raise FormatError("'vars' must be a pair of strings")
    coeffs = obj.get("coeffs")
    if not isinstance(coeffs, list):
        raise FormatError("'coeffs' must be a list of [i, j, value] triples")
    acc = {}
    for triple in coeffs:
        if not isinstance(triple, list) or len(triple) != 3:
            raise FormatError(f"bad coefficient triple: {triple!r}")
        i, j, value = triple
        if not isinstance(i, int) or not isinstance(j, int):
            raise FormatError(f"exponents must be integers in {triple!r}")
        acc[(i, j)] = parse_frac(value)
    return BiPoly(acc, (vars_[0], vars_[1]))


def upoly_to_json(p: UPoly) -> list:
    return [frac_str(c) for c in p.coeffs] if not p.is_zero() else ["0"]


def upoly_from_json(values) -> UPoly:
    if not isinstance(values, list):
        raise FormatError("univariate polynomial must be a list of rationals")
    return UPoly([parse_frac(v) for v in values])


# -- series --------------------------------------------------------------------


def infinity_series_to_json(exp) -> dict:
    return {
        "S": exp.order,
        "e": [frac_str(v) for v in exp.e],
        "xi": [[frac_str(v) for v in level] for level in exp.xi],
    }


def infinity_series_from_json(obj) -> dict:
    if not isinstance(obj, dict):
        raise FormatError("series payload must be a JSON object")
    order = obj.get("S")
    e = obj.get("e")
    xi = obj.get("xi")
    if not isinstance(order, int) or isinstance(order, bool) or order < 1:
        raise FormatError("'S' must be a positive integer")
    if not isinstance(e, list) or not isinstance(xi, list):
        raise FormatError("'e' and 'xi' must be lists")
    return {
        "S": order,
        "e": [parse_frac(v) for v in e],
        "xi": [[parse_frac(v) for v in level] for level in xi],
    }


# -- reports -------------------------------------------------------------------


def matrix_to_json(rows) -> list:
    return [[frac_str(v) for v in row] for row in rows]


def decomposition_to_json(data) -> dict:
    payload = {
        "e": frac_str(data.e),
        "Q": upoly_to_json(data.Q),
        "mu": frac_str(data.mu),
    }
    if data.c is not None:
        if data.c_exact:
            payload["c"] = {"exact": frac_str(data.c)}
        else:
            payload["c"] = {"approx": float(data.c), "tolerance": data.c_tolerance}
    if data.P is not None:
        payload["P"] = upoly_to_json(data.P)
    return payload
