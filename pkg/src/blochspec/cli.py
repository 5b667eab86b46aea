"""Command-line front end: generate, check, transform, and demo scenarios.

Subcommands: gen, check, dual, commuting, demo-pentagram.  Files are the
only state; every output is deterministic for a fixed seed.  Reports are
sorted by check name and exit status encodes the outcome: 0 all passed,
1 a check failed, 2 usage or precondition violation, 3 malformed input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from .commuting import bc_curve, normalize_to_superperiodic
from .curves import char_curve, lattice_counts, multiplicity_at, newton_report
from .errors import (
    BlochSpecError,
    CoprimalityError,
    DegenerateError,
    FormatError,
    ShapeError,
    TruncationError,
    VerificationError,
)
from .generators import (
    generate_numeric,
    quiddity_operator,
    random_triangulation_quiddity,
)
from .operators import DifferenceOperator, shape_of
from .poly import UPoly
from .rationals import frac_str, parse_frac
from .serialize import (
    bipoly_to_json,
    canonical_dumps,
    decomposition_to_json,
    load_operator_text,
    matrix_to_json,
    operator_to_json,
)
from .series import verify_curve_series
from .superperiodic import (
    admissible,
    bloch_space_test,
    canonical_multiplier,
    divide,
    dual_pair,
    gauged_kernel_table,
    is_superperiodic,
    matrix_duality_check,
)

PENTAGRAM_QUIDDITY = (1, 3, 1, 2, 2)


# -- report plumbing -----------------------------------------------------------


class Check:
    __slots__ = ("name", "status", "detail", "payload")

    def __init__(self, name, status, detail, payload=None):
        self.name = name
        self.status = status
        self.detail = detail
        self.payload = payload

    def as_json(self):
        entry = {"name": self.name, "status": self.status, "detail": self.detail}
        if self.payload is not None:
            entry["payload"] = self.payload
        return entry


def _assemble(checks):
    return sorted(checks, key=lambda c: c.name)


def _report_text(checks, extra_lines=()):
    lines = [f"{c.status:<4} {c.name}: {c.detail}" for c in _assemble(checks)]
    lines.extend(extra_lines)
    fails = sum(1 for c in checks if c.status == "FAIL")
    skips = sum(1 for c in checks if c.status == "SKIP")
    passes = sum(1 for c in checks if c.status == "PASS")
    lines.append(f"total: {passes} passed, {fails} failed, {skips} skipped")
    return "\n".join(lines) + "\n"


def _emit(args, text_body: str, json_payload) -> None:
    body = canonical_dumps(json_payload) if args.format == "json" else text_body
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(body)
    else:
        sys.stdout.write(body)


def _exit_code(checks) -> int:
    return 1 if any(c.status == "FAIL" for c in checks) else 0


def _read_operator(path: str) -> DifferenceOperator:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    return load_operator_text(text)


# -- gen -----------------------------------------------------------------------


def _resolve_source(source: str, k: int, n: int) -> str:
    if source != "auto":
        return source
    if k == 1:
        return "quiddity"
    if k == n - 3:
        return "gale"
    return "numeric"


def cmd_gen(args) -> int:
    import random

    k, n = args.k, args.n
    if args.tolerance <= 0:
        raise ValueError("tolerance must be positive")
    if n < 3 or k < 1 or k + 1 >= n:
        raise ValueError(f"need 1 <= k and k+1 < n, got k={k}, n={n}")
    if math.gcd(n, k + 1) != 1:
        raise CoprimalityError(f"period {n} and order {k + 1} must be coprime")
    source = _resolve_source(args.source, k, n)
    rng = random.Random(args.seed)
    provenance = {"generator": source, "seed": args.seed, "k": k, "n": n}
    if source == "quiddity":
        if k != 1:
            raise ValueError("quiddity source generates order 2 only (k=1)")
        cycle = random_triangulation_quiddity(n, rng)
        op = quiddity_operator(cycle)
        provenance["quiddity"] = cycle
    elif source == "gale":
        if k != n - 3:
            raise ValueError(f"gale source generates order n-2 = {n - 2} only")
        cycle = random_triangulation_quiddity(n, rng)
        op = dual_pair(quiddity_operator(cycle)).gale
        provenance["base_quiddity"] = cycle
    elif source == "numeric":
        op = generate_numeric(k, n, rng, args.tolerance)
        provenance["tolerance"] = args.tolerance
    else:
        raise ValueError(f"unknown source {source!r}")
    payload = operator_to_json(op)
    payload["provenance"] = provenance
    body = canonical_dumps(payload)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(body)
    else:
        sys.stdout.write(body)
    return 0


# -- check ---------------------------------------------------------------------


def _curve_at_base(R, mu, k):
    """R(w, -1) as a univariate polynomial and the target (w - mu)^(k+1)."""
    by_power = {}
    for (i, j), c in R.coeffs.items():
        by_power[i] = by_power.get(i, Fraction(0)) + c * (Fraction(-1) ** j)
    actual = UPoly([by_power.get(i, Fraction(0)) for i in range(k + 2)])
    target = UPoly((-mu, Fraction(1))) ** (k + 1)
    return actual, target


def run_check_suite(L: DifferenceOperator, series_order: int):
    checks = []
    shape = shape_of(L)
    n, k = L.n, shape.order - 1
    mu = canonical_multiplier(n, k)
    coprime = math.gcd(n, k + 1) == 1

    checks.append(
        Check(
            "admissible-canonical",
            "PASS" if admissible(Fraction(-1), mu, n, k) else "FAIL",
            f"(e, mu) = (-1, {frac_str(mu)}) satisfies mu^(k+1) = (-1)^(kn) e^n",
        )
    )

    cert = bloch_space_test(L, Fraction(-1), mu)
    detail = (
        f"one-period translation at E=-1 {'equals' if cert.ok else 'differs from'} "
        f"{frac_str(mu)} times the identity"
    )
    payload = {"monodromy": matrix_to_json(cert.monodromy)}
    if not cert.ok:
        residual = max(
            abs(float(v - (mu if r == c else 0)))
            for r, row in enumerate(cert.monodromy)
            for c, v in enumerate(row)
        )
        payload["max_residual"] = residual
        detail += f" (max entry residual {residual:.3e})"
    checks.append(Check("superperiodic", "PASS" if cert.ok else "FAIL", detail, payload))
    superperiodic = cert.ok

    remainders = {}
    if k + 1 < n:
        division = {}
        for side in ("left", "right"):
            res = divide(L, side)
            division[side] = res
            zero = res.remainder.is_zero()
            remainders[side] = res.remainder
            checks.append(
                Check(
                    f"division-{side}",
                    "PASS" if zero else "FAIL",
                    f"{side} remainder is {'zero' if zero else 'nonzero'}",
                    {"remainder": operator_to_json(res.remainder)},
                )
            )
        if all(division[s].remainder.is_zero() for s in ("left", "right")):
            same = division["left"].quotient == division["right"].quotient
            checks.append(
                Check(
                    "division-quotients-equal",
                    "PASS" if same else "FAIL",
                    "the two one-sided quotients agree"
                    if same
                    else "one-sided quotients differ",
                )
            )
        else:
            checks.append(
                Check(
                    "division-quotients-equal",
                    "SKIP",
                    "nonzero remainder: quotient comparison not applicable",
                )
            )
    else:
        checks.append(
            Check("division-left", "SKIP", "order k+1 = n leaves no room to divide")
        )
        checks.append(
            Check("division-right", "SKIP", "order k+1 = n leaves no room to divide")
        )

    pair = None
    if superperiodic and k + 1 < n:
        pair = dual_pair(L)
        commutator = pair.operator * pair.dual - pair.dual * pair.operator
        checks.append(
            Check(
                "dual-commutator-zero",
                "PASS" if commutator.is_zero() else "FAIL",
                "the operator commutes with its division dual",
            )
        )
        checks.append(
            Check(
                "gale-superperiodic",
                "PASS" if is_superperiodic(pair.gale) else "FAIL",
                f"the order-{n - k - 1} transform passes the scalar translation test",
            )
        )
        duality = matrix_duality_check(L, pair.gale)
        checks.append(
            Check(
                "duality-pairing",
                "PASS" if duality.residual == 0 else "FAIL",
                f"signed window pairing vanishes at offset {duality.offset} "
                f"(control residual at offset 0: {frac_str(duality.control_residual)})",
                {
                    "offset": duality.offset,
                    "residual": frac_str(duality.residual),
                    "control_offset": duality.control_offset,
                    "control_residual": frac_str(duality.control_residual),
                },
            )
        )
    else:
        reason = (
            "requires a superperiodic operator"
            if k + 1 < n
            else "order k+1 = n leaves no dual order"
        )
        for name in ("dual-commutator-zero", "gale-superperiodic", "duality-pairing"):
            checks.append(Check(name, "SKIP", reason))

    R = None
    try:
        R = char_curve(L, method="both")
        checks.append(
            Check(
                "curve-routes-agree",
                "PASS",
                "transfer-product and one-period determinant give the same curve",
                {"curve": bipoly_to_json(R)},
            )
        )
    except VerificationError as exc:
        checks.append(Check("curve-routes-agree", "FAIL", str(exc)))
        R = char_curve(L, method="monodromy")

    report = newton_report(R, n, k)
    support_ok = (
        report.within_triangle
        and report.vertex_monic == 1
        and report.vertex_corner == -1
    )
    checks.append(
        Check(
            "curve-support",
            "PASS" if support_ok else "FAIL",
            f"support inside the lattice triangle, monic top, corner coefficient "
            f"{frac_str(report.vertex_corner)}",
            {
                "within_triangle": report.within_triangle,
                "vertex_monic": frac_str(report.vertex_monic),
                "vertex_corner": frac_str(report.vertex_corner),
                "base_coefficient": frac_str(report.base_coefficient),
            },
        )
    )

    if coprime:
        counts = lattice_counts(n, k)
        want_interior = k * (n - 1) // 2
        want_slots = k * (n + 1) // 2
        counts_ok = (
            k * (n - 1) % 2 == 0
            and k * (n + 1) % 2 == 0
            and counts["interior"] == want_interior
            and counts["slots"] == want_slots
        )
        checks.append(
            Check(
                "newton-counts",
                "PASS" if counts_ok else "FAIL",
                f"interior {counts['interior']} = k(n-1)/2, slots {counts['slots']} = k(n+1)/2",
                counts,
            )
        )
    else:
        checks.append(
            Check("newton-counts", "SKIP", "count formulas assume gcd(n, k+1) = 1")
        )

    if superperiodic:
        actual, target = _curve_at_base(R, mu, k)
        base_ok = actual == target
        checks.append(
            Check(
                "curve-at-base",
                "PASS" if base_ok else "FAIL",
                f"R(w, -1) {'=' if base_ok else '!='} (w - {frac_str(mu)})^{k + 1}",
            )
        )
        mult = multiplicity_at(R, mu, Fraction(-1))
        checks.append(
            Check(
                "multiplicity-at-base",
                "PASS" if mult == k + 1 else "FAIL",
                f"curve multiplicity at (w, E) = ({frac_str(mu)}, -1) is {mult}, "
                f"expected {k + 1}",
            )
        )
    else:
        checks.append(
            Check("curve-at-base", "SKIP", "requires a superperiodic operator")
        )
        checks.append(
            Check("multiplicity-at-base", "SKIP", "requires a superperiodic operator")
        )

    for branch in ("infinity", "zero"):
        name = f"series-{branch}"
        try:
            reports = verify_curve_series(L, series_order, at=branch, R=R)
            rep = reports[0]
            checks.append(
                Check(
                    name,
                    "PASS" if rep.ok else "FAIL",
                    f"curve residual vanishes through order {rep.order} "
                    f"(all known coefficients below {rep.checked_below})",
                    {
                        "order": rep.order,
                        "cutoff": rep.cutoff,
                        "checked_below": rep.checked_below,
                    },
                )
            )
        except (CoprimalityError, DegenerateError) as exc:
            checks.append(Check(name, "SKIP", str(exc)))
        except TruncationError as exc:
            checks.append(Check(name, "SKIP", f"not enough computed orders: {exc}"))
        except VerificationError as exc:
            checks.append(Check(name, "FAIL", str(exc)))

    certificate = {
        "superperiodic": superperiodic,
        "monodromy": matrix_to_json(cert.monodromy),
        "remainder_left": operator_to_json(remainders["left"])
        if "left" in remainders
        else None,
        "remainder_right": operator_to_json(remainders["right"])
        if "right" in remainders
        else None,
        "gale_dual": operator_to_json(pair.gale) if pair is not None else None,
    }
    return checks, certificate


def cmd_check(args) -> int:
    if args.series_order < 1:
        raise ValueError("--series-order must be at least 1")
    L = _read_operator(args.input)
    checks, certificate = run_check_suite(L, args.series_order)
    payload = {
        "checks": [c.as_json() for c in _assemble(checks)],
        "certificate": certificate,
        "ok": _exit_code(checks) == 0,
    }
    _emit(args, _report_text(checks), payload)
    return _exit_code(checks)


# -- dual ----------------------------------------------------------------------


def cmd_dual(args) -> int:
    L = _read_operator(args.input)
    pair = dual_pair(L)
    duality = matrix_duality_check(L, pair.gale)
    checks = [
        Check(
            "dual-commutator-zero",
            "PASS",
            "the operator commutes with its division dual",
        ),
        Check(
            "gale-superperiodic",
            "PASS" if is_superperiodic(pair.gale) else "FAIL",
            "the transform passes the scalar translation test",
        ),
        Check(
            "duality-pairing",
            "PASS" if duality.residual == 0 else "FAIL",
            f"signed window pairing vanishes at offset {duality.offset}",
        ),
    ]
    payload = {
        "operator": operator_to_json(pair.operator),
        "dual": operator_to_json(pair.dual),
        "gale": operator_to_json(pair.gale),
        "pairing": {
            "offset": duality.offset,
            "residual": frac_str(duality.residual),
            "control_offset": duality.control_offset,
            "control_residual": frac_str(duality.control_residual),
        },
        "checks": [c.as_json() for c in _assemble(checks)],
        "ok": _exit_code(checks) == 0,
    }
    text = _report_text(
        checks,
        extra_lines=[
            "dual: " + json.dumps(operator_to_json(pair.dual), sort_keys=True),
            "gale: " + json.dumps(operator_to_json(pair.gale), sort_keys=True),
        ],
    )
    _emit(args, text, payload)
    return _exit_code(checks)


# -- commuting -----------------------------------------------------------------


def _parse_scramble(text: str):
    alpha, c = Fraction(0), Fraction(1)
    if text:
        for piece in text.split(","):
            piece = piece.strip()
            if not piece:
                continue
            if "=" not in piece:
                raise ValueError(f"scramble piece {piece!r} is not key=value")
            key, _, value = piece.partition("=")
            key = key.strip()
            if key == "alpha":
                alpha = parse_frac(value.strip())
            elif key == "c":
                c = parse_frac(value.strip())
            else:
                raise ValueError(f"unknown scramble key {key!r}")
    if c == 0:
        raise ValueError("scramble scaling c must be nonzero")
    return alpha, c


def cmd_commuting(args) -> int:
    if args.input:
        L = _read_operator(args.input)
    else:
        L = quiddity_operator(PENTAGRAM_QUIDDITY)
    shape = shape_of(L)
    n, k = L.n, shape.order - 1
    alpha, c_target = _parse_scramble(args.scramble)
    pair = dual_pair(L)
    if alpha != 0 and 2 * (k + 1) >= n:
        raise ValueError(
            "scrambling by alpha*L needs order k+1 strictly below n-k-1"
        )
    scale_in = Fraction(1) / c_target
    L_in = L.rescale(scale_in)
    K_in = pair.dual.rescale(scale_in)
    if alpha != 0:
        K_in = K_in + L_in.scale(alpha)
    result = normalize_to_superperiodic(L_in, K_in)
    curve = bc_curve(L_in, K_in)
    data = result.data
    expected_P = UPoly((0, -alpha)) if alpha != 0 else UPoly.zero()
    checks = [
        Check(
            "bc-support",
            "PASS",
            "pair curve is monic with the prescribed weighted support",
            {"curve": bipoly_to_json(curve.poly)},
        ),
        Check(
            "recovered-scaling",
            "PASS" if (data.c_exact and data.c == c_target) else "FAIL",
            f"recovered c = {frac_str(data.c) if data.c_exact else data.c}, "
            f"scramble used c = {frac_str(c_target)}",
        ),
        Check(
            "recovered-correction",
            "PASS" if data.P == expected_P else "FAIL",
            f"recovered P matches the scramble term alpha = {frac_str(alpha)}",
        ),
        Check(
            "partner-restored",
            "PASS" if result.scaled_partner == pair.dual else "FAIL",
            "rescaled corrected partner equals the division dual",
        ),
        Check(
            "scaled-superperiodic",
            "PASS"
            if result.scaled_operator is not None
            and is_superperiodic(result.scaled_operator)
            else "FAIL",
            "the recovered scaling restores superperiodicity",
        ),
    ]
    payload = {
        "decomposition": decomposition_to_json(data),
        "curve": bipoly_to_json(curve.poly),
        "partner": operator_to_json(result.partner),
        "scaled_operator": operator_to_json(result.scaled_operator)
        if result.scaled_operator is not None
        else None,
        "scaled_partner": operator_to_json(result.scaled_partner)
        if result.scaled_partner is not None
        else None,
        "scramble": {"alpha": frac_str(alpha), "c": frac_str(c_target)},
        "checks": [c.as_json() for c in _assemble(checks)],
        "ok": _exit_code(checks) == 0,
    }
    text = _report_text(
        checks,
        extra_lines=[
            "decomposition: "
            + json.dumps(decomposition_to_json(data), sort_keys=True)
        ],
    )
    _emit(args, text, payload)
    return _exit_code(checks)


# -- demo ----------------------------------------------------------------------


def cmd_demo_pentagram(args) -> int:
    L = quiddity_operator(PENTAGRAM_QUIDDITY)
    n = L.n
    pair = dual_pair(L)
    G = pair.gale
    tower = dual_pair(G)
    back = tower.gale

    def quasi_periodicity(op, sign):
        m = shape_of(op).order
        lo = -(m - 1) - n
        tables = gauged_kernel_table(op, lo, n)
        for t in tables:
            for i in range(lo + n, n + 1):
                if t[i - n] != sign * t[i]:
                    return False
        return True

    anti_ok = quasi_periodicity(L, Fraction(-1))
    per_ok = quasi_periodicity(G, Fraction(1))
    duality = matrix_duality_check(L, G)
    checks = [
        Check(
            "order2-superperiodic",
            "PASS" if is_superperiodic(L) else "FAIL",
            f"quiddity {PENTAGRAM_QUIDDITY} gives a superperiodic order-2 operator",
        ),
        Check(
            "order3-superperiodic",
            "PASS" if is_superperiodic(G) else "FAIL",
            "its transform is a superperiodic order-3 operator",
        ),
        Check(
            "order2-antiperiodic-solutions",
            "PASS" if anti_ok else "FAIL",
            "gauged order-2 solutions satisfy W(i-5) = -W(i)",
        ),
        Check(
            "order3-periodic-solutions",
            "PASS" if per_ok else "FAIL",
            "gauged order-3 solutions satisfy V(i-5) = V(i)",
        ),
        Check(
            "duality-pairing",
            "PASS" if duality.residual == 0 else "FAIL",
            f"signed window pairing vanishes at offset {duality.offset}",
        ),
        Check(
            "tower-order-returns",
            "PASS" if shape_of(back).order == 2 else "FAIL",
            f"transforming twice returns to order 2 (observed equality with the "
            f"start: {back == L})",
        ),
    ]
    payload = {
        "quiddity": list(PENTAGRAM_QUIDDITY),
        "order2": operator_to_json(L),
        "order3": operator_to_json(G),
        "tower_back": operator_to_json(back),
        "checks": [c.as_json() for c in _assemble(checks)],
        "ok": _exit_code(checks) == 0,
    }
    _emit(args, _report_text(checks), payload)
    return _exit_code(checks)


# -- argument parsing ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blochspec",
        description="Exact spectral toolkit for periodic triangular difference operators",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a superperiodic operator file")
    gen.add_argument("--k", type=int, default=1)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument(
        "--source",
        choices=["auto", "quiddity", "numeric", "gale"],
        default="auto",
    )
    gen.add_argument("--tolerance", type=float, default=1e-9)
    gen.add_argument("--output", default=None)
    gen.add_argument("--format", choices=["text", "json"], default="json")
    gen.set_defaults(handler=cmd_gen)

    check = sub.add_parser("check", help="run the full certificate suite on a file")
    check.add_argument("input")
    check.add_argument("--series-order", type=int, default=6)
    check.add_argument("--tolerance", type=float, default=1e-9)
    check.add_argument("--format", choices=["text", "json"], default="text")
    check.add_argument("--output", default=None)
    check.set_defaults(handler=cmd_check)

    dual = sub.add_parser("dual", help="emit the division dual and the transform")
    dual.add_argument("input")
    dual.add_argument("--format", choices=["text", "json"], default="text")
    dual.add_argument("--output", default=None)
    dual.set_defaults(handler=cmd_dual)

    comm = sub.add_parser(
        "commuting", help="recovery round trip on a (possibly scrambled) pair"
    )
    comm.add_argument("input", nargs="?", default=None)
    comm.add_argument(
        "--scramble",
        default="",
        help='e.g. "alpha=3,c=2": partner gains alpha*L, operator is scaled so the recovery must find c',
    )
    comm.add_argument("--format", choices=["text", "json"], default="text")
    comm.add_argument("--output", default=None)
    comm.set_defaults(handler=cmd_commuting)

    demo = sub.add_parser(
        "demo-pentagram", help="the order-2/order-3 tower on the pentagon quiddity"
    )
    demo.add_argument("--format", choices=["text", "json"], default="text")
    demo.add_argument("--output", default=None)
    demo.set_defaults(handler=cmd_demo_pentagram)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        return args.handler(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (CoprimalityError, ShapeError, TruncationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (VerificationError, DegenerateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BlochSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
