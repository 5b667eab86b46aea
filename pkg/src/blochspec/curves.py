"""Characteristic spectral curves of periodic lower-triangular operators.

For a monic operator of order k+1 and period n, Bloch eigenvectors
(L psi = E psi with psi_{i-n} = w psi_i) exist exactly where the
characteristic polynomial R(w, E) vanishes.  Two independent routes compute
R:

* monodromy: the eigenvalue equation solved for the lowest index gives a
  one-step transfer matrix on the window (psi_i, ..., psi_{i-k}); the product
  over one period is the monodromy W(E), and R = det(w I - W(E));
* solution space: write the n equations (L psi)_i = E psi_i on one period,
  folding out-of-window entries back with powers of w, and take the n x n
  determinant, sign-normalized so the w^{k+1} coefficient is +1.

Both are exact and must agree coefficient by coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DegenerateError, VerificationError
from .operators import DifferenceOperator, shape_of
from .poly import BiPoly, UPoly, det_dp, mat_identity, mat_mul
from .rationals import as_fraction

_WE = ("w", "E")


def transfer_step(L: DifferenceOperator, i: int, E, zero, one):
    """One-step transfer matrix at site i over any commutative ring.

    Maps the window (psi_i, psi_{i-1}, ..., psi_{i-k}) to
    (psi_{i-1}, ..., psi_{i-k-1}) using
    psi_{i-k-1} = E psi_i - sum_j a^j_i psi_{i-j}.
    E, zero, one are ring elements; coefficients embed via `one * value`.
    """
    k = shape_of(L).order - 1
    size = k + 1
    M = [[zero for _ in range(size)] for _ in range(size)]
    for r in range(k):
        M[r][r + 1] = one
    M[k][0] = E
    for j in range(1, k + 1):
        M[k][j] = zero - one * L.term(-j)[i]
    return M


def monodromy_matrix(L: DifferenceOperator, E=None):
    """Monodromy over one period from the window at index 0, going downward.

    Returns W = M_1 M_2 ... M_{n-1} M_0, so W maps (psi_0, ..., psi_{-k}) to
    (psi_{-n}, ..., psi_{-n-k}); a Bloch solution with psi_{i-n} = w psi_i is
    an eigenvector of W with eigenvalue w.  With E=None entries are UPoly in
    E; otherwise E is a rational and entries are Fractions.
    """
    n = L.n
    if E is None:
        zero, one, ev = UPoly.zero(), UPoly.constant(1), UPoly.x()
    else:
        zero, one, ev = Fraction(0), Fraction(1), as_fraction(E)
    order = list(range(1, n)) + [0]
    W = None
    for i in order:
        M = transfer_step(L, i, ev, zero, one)
        W = M if W is None else mat_mul(W, M, zero)
    return W


def char_curve_monodromy(L: DifferenceOperator) -> BiPoly:
    """R(w, E) = det(w I - W(E)), monic of degree k+1 in w."""
    W = monodromy_matrix(L)
    size = len(W)
    w = BiPoly.monomial(1, 0, 1, _WE)
    rows = []
    for r in range(size):
        row = []
        for c in range(size):
            entry = -BiPoly.from_upoly(W[r][c], 1, _WE)
            if r == c:
                entry = entry + w
            row.append(entry)
        rows.append(row)
    return det_dp(rows, BiPoly.zero(_WE))


def solution_space_matrix(L: DifferenceOperator):
    """n x n matrix over BiPoly(w, E) whose determinant cuts out the curve.

    Row i encodes (L psi)_i - E psi_i = 0 on the window psi_0..psi_{n-1},
    replacing psi_m for m < 0 by w^t psi_{m + t n}.
    """
    n = L.n
    rows = [[BiPoly.zero(_WE) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for p, seq in L.terms.items():
            m = i + p
            t, r = 0, m
            while r < 0:
                r += n
                t += 1
            rows[i][r] = rows[i][r] + BiPoly.monomial(t, 0, seq[i], _WE)
        rows[i][i] = rows[i][i] - BiPoly.monomial(0, 1, 1, _WE)
    return rows


def char_curve_solution_space(L: DifferenceOperator) -> BiPoly:
    """Determinant route, sign-normalized to make the w^{k+1} coefficient +1."""
    k = shape_of(L).order - 1
    det = det_dp(solution_space_matrix(L), BiPoly.zero(_WE))
    top = det.coefficient_of_first(k + 1)
    if top == UPoly.constant(1):
        return det
    if top == UPoly.constant(-1):
        return -det
    raise VerificationError(
        f"w^{k + 1} coefficient of the solution-space determinant is {top!r}, not ±1"
    )


def char_curve(L: DifferenceOperator, method: str = "both") -> BiPoly:
    """The characteristic curve R(w, E).

    method: "monodromy", "solution_space", or "both" (compute both and
    insist on exact agreement).
    """
    if method == "monodromy":
        return char_curve_monodromy(L)
    if method == "solution_space":
        return char_curve_solution_space(L)
    if method == "both":
        R1 = char_curve_monodromy(L)
        R2 = char_curve_solution_space(L)
        if R1 != R2:
            raise VerificationError(
                "monodromy and solution-space curves disagree: "
                f"{R1!r} vs {R2!r}"
            )
        return R1
    raise ValueError(f"unknown method {method!r}")


def solution_table(L: DifferenceOperator, window, E, lo: int) -> dict:
    """Extend an eigenvector window downward to all indices in [lo, 0].

    window lists (psi_0, psi_{-1}, ..., psi_{-k}); entries and E live in any
    commutative ring (Fractions or UPoly).  Returns {i: psi_i} computed via
    psi_{i-k-1} = E psi_i - sum_j a^j_i psi_{i-j}, which is division-free.
    """
    k = shape_of(L).order - 1
    if len(window) != k + 1:
        raise ValueError(f"window must have {k + 1} entries")
    table = {-j: window[j] for j in range(k + 1)}
    for m in range(-k - 1, lo - 1, -1):
        i = m + k + 1
        val = E * table[i]
        for j in range(1, k + 1):
            val = val - table[i - j] * L.term(-j)[i]
        table[m] = val
    return table


# -- Newton polygon bookkeeping ---------------------------------------------


def triangle_contains(n: int, k: int, i: int, j: int) -> bool:
    """Closed triangle with vertices (k+1, 0), (0, n), (1, 0)."""
    return j >= 0 and n * i + j >= n and n * i + (k + 1) * j <= n * (k + 1)


def interior_points(n: int, k: int):
    """Strictly interior lattice points of the triangle (the genus count)."""
    pts = []
    for i in range(0, k + 2):
        for j in range(1, n + 1):
            if n * i + j > n and n * i + (k + 1) * j < n * (k + 1):
                pts.append((i, j))
    return sorted(pts)


def slot_points(n: int, k: int):
    """Lattice points carrying free curve coefficients: i >= 1, j >= 0, below
    the hypotenuse n i + (k+1) j < n (k+1), excluding the two monic vertices."""
    pts = []
    for i in range(1, k + 2):
        for j in range(0, n + 1):
            if n * i + (k + 1) * j < n * (k + 1):
                pts.append((i, j))
    return sorted(pts)


def lattice_counts(n: int, k: int) -> dict:
    return {
        "interior": len(interior_points(n, k)),
        "slots": len(slot_points(n, k)),
    }


@dataclass(frozen=True)
class NewtonReport:
    """Support of R(w, E) against the expected lattice triangle."""

    n: int
    k: int
    support: tuple
    within_triangle: bool
    vertex_monic: Fraction  # coefficient at (k+1, 0); must be 1
    vertex_corner: Fraction  # coefficient at (0, n); must be +-1
    base_coefficient: Fraction  # coefficient at (1, 0); product of order-1 data
    interior: tuple
    slots: tuple
    slot_coefficients: dict
    interior_count: int
    slot_count: int


def newton_report(R: BiPoly, n: int, k: int) -> NewtonReport:
    support = tuple(R.support())
    within = all(triangle_contains(n, k, i, j) for (i, j) in support)
    interior = tuple(interior_points(n, k))
    slots = tuple(slot_points(n, k))
    return NewtonReport(
        n=n,
        k=k,
        support=support,
        within_triangle=within,
        vertex_monic=R.coefficient(k + 1, 0),
        vertex_corner=R.coefficient(0, n),
        base_coefficient=R.coefficient(1, 0),
        interior=interior,
        slots=slots,
        slot_coefficients={pt: R.coefficient(*pt) for pt in slots},
        interior_count=len(interior),
        slot_count=len(slots),
    )


def multiplicity_at(R: BiPoly, w0, E0) -> int:
    """Multiplicity of the point (w0, E0) on the curve R = 0."""
    if R.is_zero():
        raise DegenerateError("the zero polynomial is not a curve")
    return R.vanishing_order_at(w0, E0)
