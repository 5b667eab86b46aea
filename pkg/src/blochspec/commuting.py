"""Commuting pairs: the curve they satisfy and recovery of the spectral data.

A commuting partner K of a period-n monic triangular operator L (orders k+1
and n-k-1, coprime to the period) acts on the (k+1)-dimensional solution
space of (L - E)psi = 0; its matrix K(E) in the unit-window basis is
polynomial in E.  The pair satisfies the characteristic equation of K(E),
a bivariate curve with prescribed support.  The one-period translation W(E)
acts on the same space and decomposes as

    W(E) = (E - e) K(E) + Q(E) Id

with a scalar point e and a polynomial Q vanishing at the origin.  From this
decomposition the pair is normalized: a scaling constant c with c^{k+1} e = -1
makes the rescaled operator superperiodic, and the unique polynomial
correction P with P(0) = 0 turns K + P(L) into the canonical commuting dual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .curves import monodromy_matrix, solution_table
from .errors import (
    CoprimalityError,
    DegenerateError,
    ShapeError,
    VerificationError,
)
from .operators import DifferenceOperator, shape_of
from .poly import BiPoly, UPoly, det_dp
from .rationals import rational_kth_root
from .superperiodic import bloch_space_test, is_superperiodic

_CURVE_VARS = ("kappa", "E")


def _check_pair(L: DifferenceOperator, K: DifferenceOperator) -> int:
    """Validate shapes/commutation for a candidate pair; return k."""
    shape = shape_of(L)
    k = shape.order - 1
    n = L.n
    if K.n != n:
        raise ShapeError(f"period mismatch: {n} vs {K.n}")
    if math.gcd(n, k + 1) != 1:
        raise CoprimalityError(f"period {n} and order {k + 1} must be coprime")
    if K.is_zero():
        raise ShapeError("zero partner")
    powers = K.powers()
    order = -powers[0]
    if order != n - k - 1:
        raise ShapeError(
            f"partner order must be n-k-1 = {n - k - 1}, got {order}"
        )
    if powers[-1] > 0:
        raise ShapeError("partner has terms shifting upward")
    if any(v != 1 for v in K.term(-order)):
        raise ShapeError("partner is not monic at its top order")
    if L * K != K * L:
        raise VerificationError("the two operators do not commute")
    return k


def action_on_solutions(L: DifferenceOperator, K: DifferenceOperator):
    """Matrix of K on the solution space of (L - E)psi = 0, polynomial in E.

    Basis: the k+1 solutions with unit windows psi^{(s)}_{-r} = delta_{rs},
    r, s = 0..k.  Entry (r, s) is (K psi^{(s)})_{-r}; computing it only needs
    the window extended down to index -(n-1), which is division-free.
    """
    k = _check_pair(L, K)
    n = L.n
    size = k + 1
    E = UPoly.x()
    matrix = [[UPoly.zero() for _ in range(size)] for _ in range(size)]
    for s in range(size):
        window = [UPoly.constant(1) if r == s else UPoly.zero() for r in range(size)]
        table = solution_table(L, window, E, -(n - 1))
        for r in range(size):
            acc = UPoly.zero()
            for p in K.powers():
                acc = acc + table[-r + p] * K.term(p)[-r]
            matrix[r][s] = acc
    return matrix


@dataclass(frozen=True)
class BCCurve:
    """Characteristic curve of the pair: det(kappa I - K(E))."""

    poly: BiPoly  # variables ("kappa", "E")
    orders: tuple  # (k+1, n-k-1)


def bc_curve(L: DifferenceOperator, K: DifferenceOperator) -> BCCurve:
    """Characteristic polynomial of the action, with its support certified.

    The result is monic of degree k+1 in the first variable, carries the
    monomial -E^{n-k-1}, and every other support point (i, j) obeys
    0 < i(n-k-1) + j(k+1) < (k+1)(n-k-1).
    """
    k = _check_pair(L, K)
    n = L.n
    size = k + 1
    top = n - k - 1
    M = action_on_solutions(L, K)
    zero = BiPoly.zero(_CURVE_VARS)
    kappa = BiPoly.monomial(1, 0, 1, _CURVE_VARS)
    rows = []
    for r in range(size):
        row = []
        for c in range(size):
            entry = zero - BiPoly.from_upoly(M[r][c], 1, _CURVE_VARS)
            if r == c:
                entry = entry + kappa
            row.append(entry)
        rows.append(row)
    poly = det_dp(rows, zero)
    if poly.coefficient(size, 0) != 1:
        raise VerificationError("pair curve is not monic in the first variable")
    if poly.coefficient(0, top) != -1:
        raise VerificationError(
            f"pair curve lacks the required -{_CURVE_VARS[1]}^{top} monomial"
        )
    for (i, j) in poly.support():
        if (i, j) in ((size, 0), (0, top)):
            continue
        weight = i * top + j * size
        if not (0 < weight < size * top):
            raise VerificationError(
                f"support point {(i, j)} violates the weighted degree bound"
            )
    return BCCurve(poly=poly, orders=(size, top))


@dataclass(frozen=True)
class DecompositionData:
    """Spectral data read off the translation-operator decomposition.

    e and mu = Q(e) locate the distinguished point; Q and P vanish at the
    origin; c is the scaling constant with c^{k+1} e = -1, exact when the
    root is rational (c_exact=True) and a float certified to the stated
    tolerance otherwise.
    """

    e: Fraction
    Q: UPoly
    mu: Fraction
    c: object = None
    c_exact: bool | None = None
    c_tolerance: float | None = None
    P: UPoly | None = None


def recover_e_Q(L: DifferenceOperator, K: DifferenceOperator) -> DecompositionData:
    """Solve W(E) = (E - e) K(E) + Q(E) Id for the scalar e and polynomial Q.

    e comes from exact division of off-diagonal entries (cross-checked on
    all of them), Q from the diagonal; the full matrix identity is then
    re-verified, Q(0) = 0 and the degree bound deg(Q)(k+1) < n asserted.
    """
    k = _check_pair(L, K)
    n = L.n
    size = k + 1
    bc_curve(L, K)  # support certification is a precondition
    M = action_on_solutions(L, K)
    W = monodromy_matrix(L)
    e = None
    for r in range(size):
        for s in range(size):
            if r == s or M[r][s].is_zero():
                continue
            try:
                ratio = W[r][s].exact_div(M[r][s])
            except ValueError as exc:
                raise VerificationError(
                    "translation entry is not a polynomial multiple of the "
                    f"action entry at {(r, s)}"
                ) from exc
            if ratio.degree != 1 or ratio.coefficient(1) != 1:
                raise VerificationError(
                    f"entry ratio at {(r, s)} is not monic linear in E"
                )
            candidate = -ratio.coefficient(0)
            if e is None:
                e = candidate
            elif candidate != e:
                raise VerificationError(
                    "inconsistent point recovered across off-diagonal entries"
                )
    if e is None:
        raise DegenerateError(
            "every off-diagonal action entry vanishes; the pair is outside "
            "general position"
        )
    linear = UPoly((-e, Fraction(1)))  # E - e
    Q = None
    for r in range(size):
        diag = W[r][r] - linear * M[r][r]
        if Q is None:
            Q = diag
        elif diag != Q:
            raise VerificationError("diagonal defect is not a scalar matrix")
    for r in range(size):
        for s in range(size):
            if r != s and W[r][s] != linear * M[r][s]:
                raise VerificationError(
                    f"decomposition identity fails at off-diagonal {(r, s)}"
                )
    if Q(0) != 0:
        raise VerificationError(
            "recovered polynomial does not vanish at the origin; the partner "
            "carries a constant-term offset"
        )
    if Q.degree * size >= n:
        raise VerificationError(
            f"recovered polynomial degree {Q.degree} breaks the bound "
            f"deg(Q)(k+1) < n = {n}"
        )
    return DecompositionData(e=e, Q=Q, mu=Q(e))


def polynomial_in_operator(p: UPoly, L: DifferenceOperator) -> DifferenceOperator:
    """Evaluate a univariate polynomial on an operator (p(0) enters as Id)."""
    acc = DifferenceOperator.zero(L.n)
    power = DifferenceOperator.identity(L.n)
    for t in range(p.degree + 1):
        if t > 0:
            power = power * L
        coeff = p.coefficient(t)
        if coeff != 0:
            acc = acc + power.scale(coeff)
    return acc


@dataclass(frozen=True)
class NormalizedPair:
    """Full recovery output: data, the corrected partner, and scaled pair."""

    data: DecompositionData
    partner: DifferenceOperator  # K + P(L), before scaling
    scaled_operator: DifferenceOperator | None  # tau_c(L); None in float mode
    scaled_partner: DifferenceOperator | None


def normalize_to_superperiodic(
    L: DifferenceOperator,
    K: DifferenceOperator,
    tolerance: float = 1e-12,
) -> NormalizedPair:
    """Recover (e, Q, mu, c, P), correct K to K + P(L), and rescale.

    The scaling constant solves c^{k+1} e = -1.  When -1/e has a rational
    (k+1)-th root the whole output is exact and the rescaled operator is
    certified superperiodic; otherwise c is a float, flagged via
    c_exact=False, with |c^{k+1} e + 1| <= tolerance and the exact scalar
    translation test at (e, mu) still certified.
    """
    data = recover_e_Q(L, K)
    k = shape_of(L).order - 1
    size = k + 1
    e, Q, mu = data.e, data.Q, data.mu
    if e == 0:
        raise DegenerateError("distinguished point e = 0 admits no scaling")
    certificate = bloch_space_test(L, e, mu)
    if not certificate.ok:
        raise VerificationError(
            "translation operator is not scalar at the recovered point"
        )
    linear = UPoly((-e, Fraction(1)))  # E - e
    try:
        P = (Q - UPoly.constant(mu)).exact_div(linear) - UPoly.constant(mu / e)
    except ValueError as exc:
        raise VerificationError(
            "Q - mu is not divisible by E - e; the decomposition premises fail"
        ) from exc
    if P(0) != 0:
        raise VerificationError("correction polynomial does not vanish at 0")
    partner = K + polynomial_in_operator(P, L)
    shape_partner = shape_of(partner)  # monic triangular, no constant term
    if shape_partner.order != L.n - size:
        raise VerificationError("corrected partner has the wrong order")

    c, c_exact = scaling_constant(e, mu, L.n, k, tolerance)
    if c_exact:
        scaled = L.rescale(c)
        if not is_superperiodic(scaled):
            raise VerificationError(
                "the rational scaling root does not yield a superperiodic operator"
            )
        data = DecompositionData(
            e=e, Q=Q, mu=mu, c=c, c_exact=True, c_tolerance=None, P=P
        )
        return NormalizedPair(
            data=data,
            partner=partner,
            scaled_operator=scaled,
            scaled_partner=partner.rescale(c),
        )
    data = DecompositionData(
        e=e, Q=Q, mu=mu, c=c, c_exact=False, c_tolerance=tolerance, P=P
    )
    return NormalizedPair(
        data=data, partner=partner, scaled_operator=None, scaled_partner=None
    )


def scaling_constant(e, mu, n: int, k: int, tolerance: float = 1e-12):
    """Solve c^{k+1} e = -1; exact Fraction when possible, else a float.

    Returns (c, exact_flag).  For even k+1 the sign of c is fixed by
    requiring c^n mu to land on the canonical multiplier (-1)^{n+k} (n is
    odd whenever gcd(n, k+1) = 1 with even k+1, so the sign of c matters).
    The float branch certifies |c^{k+1} e + 1| <= tolerance.
    """
    size = k + 1
    target = -Fraction(1) / Fraction(e)
    canonical_sign = 1 if (n + k) % 2 == 0 else -1
    root = rational_kth_root(target, size)
    if root is not None:
        if size % 2 == 0 and root != 0:
            # both signs solve c^{k+1} e = -1; pick by the multiplier sign
            want_positive = (mu > 0) == (canonical_sign > 0)
            root = abs(root) if want_positive else -abs(root)
        return root, True
    if target < 0 and size % 2 == 0:
        raise VerificationError(
            "-1/e is negative while k+1 is even: no real scaling exists"
        )
    magnitude = abs(target) ** (1.0 / size)
    c_float = magnitude if target > 0 else -magnitude
    if size % 2 == 0:
        if (mu > 0) != (canonical_sign > 0):
            c_float = -c_float
    if abs(c_float**size * float(e) + 1.0) > tolerance:
        raise VerificationError("float scaling root failed its residual bound")
    return c_float, False
