"""Samplers for superperiodic operators and generic random operators.

Three sources:

* quiddity (exact, order 2): a random triangulation of a convex n-gon gives
  the cycle of per-vertex triangle counts; the order-2 operator with that
  cycle as its subdiagonal coefficient is superperiodic.
* numeric (any order, floating): lift a random closed polygon to n vectors
  in R^{k+1} with quasi-period sign (-1)^k, normalize all consecutive
  windows to determinant one (sign pattern by a GF(2) circulant solve,
  magnitudes by a log-space circulant solve), then read the recursion
  coefficients off (k+1)x(k+1) solves.  The result is rationalized and
  validated against the scalar monodromy to a tolerance.
* gale (exact, order n-2): the Gale transform of a quiddity sample.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .errors import CoprimalityError, DegenerateError
from .operators import DifferenceOperator, from_recursion, shape_of
from .superperiodic import canonical_multiplier, dual_pair, is_superperiodic

_MAX_ATTEMPTS = 400


def random_triangulation_quiddity(n: int, rng: random.Random):
    """Triangle counts per vertex for a uniform-ish random triangulation.

    Recursive splitting: pick a random apex for the triangle on the closing
    edge of the current sub-polygon and recurse on both sides.  Every
    triangulation of the convex n-gon is reachable; n=3 gives (1, 1, 1).
    """
    if n < 3:
        raise ValueError(f"need at least a triangle, got n={n}")
    counts = [0] * n

    def split(vertices):
        if len(vertices) < 3:
            return
        if len(vertices) == 3:
            for v in vertices:
                counts[v] += 1
            return
        apex = rng.randrange(1, len(vertices) - 1)
        for v in (vertices[0], vertices[apex], vertices[-1]):
            counts[v] += 1
        split(vertices[: apex + 1])
        split(vertices[apex:])

    split(list(range(n)))
    return counts


def quiddity_operator(quiddity) -> DifferenceOperator:
    """The order-2 operator whose subdiagonal coefficient is the given cycle."""
    values = [Fraction(v) for v in quiddity]
    if len(values) < 3:
        raise ValueError("quiddity cycle needs length at least 3")
    if any(v <= 0 for v in values):
        raise ValueError("quiddity entries must be positive")
    return from_recursion(len(values), 1, [values])


def generate_quiddity(n: int, rng: random.Random) -> DifferenceOperator:
    op = quiddity_operator(random_triangulation_quiddity(n, rng))
    if not is_superperiodic(op):
        raise DegenerateError("triangulation quiddity failed superperiodicity")
    return op


# -- numeric polygon-lift sampler ---------------------------------------------


def _det_float(mat):
    m = len(mat)
    a = [row[:] for row in mat]
    det = 1.0
    for c in range(m):
        p = max(range(c, m), key=lambda r: abs(a[r][c]))
        if abs(a[p][c]) == 0.0:
            return 0.0
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        inv = 1.0 / a[c][c]
        for r in range(c + 1, m):
            f = a[r][c] * inv
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


def _solve_float(A, b):
    m = len(A)
    M = [row[:] + [bb] for row, bb in zip(A, b)]
    for c in range(m):
        p = max(range(c, m), key=lambda r: abs(M[r][c]))
        if abs(M[p][c]) < 1e-12:
            raise DegenerateError("near-singular linear system in the sampler")
        M[c], M[p] = M[p], M[c]
        inv = 1.0 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(m):
            if r != c and M[r][c] != 0.0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [M[r][m] for r in range(m)]


def _solve_gf2_circulant(n: int, window: int, bits):
    """x with sum_{t<window} x_{i+t} = bits_i (mod 2) for all i, or None."""
    rows = []
    for i in range(n):
        mask = 0
        for t in range(window):
            mask |= 1 << ((i + t) % n)
        rows.append([mask, bits[i] & 1])
    pivots = []  # (column, mask, rhs), kept fully reduced against each other
    for mask, rhs in rows:
        for col, pm, pr in pivots:
            if (mask >> col) & 1:
                mask ^= pm
                rhs ^= pr
        if mask == 0:
            if rhs:
                return None
            continue
        col = (mask & -mask).bit_length() - 1
        reduced = []
        for c2, pm, pr in pivots:
            if (pm >> col) & 1:
                pm ^= mask
                pr ^= rhs
            reduced.append((c2, pm, pr))
        pivots = reduced + [(col, mask, rhs)]
    x = [0] * n
    for col, mask, rhs in pivots:
        # free columns (non-pivot bits remaining in mask) are set to zero
        x[col] = rhs
    for i in range(n):
        acc = 0
        for t in range(window):
            acc ^= x[(i + t) % n]
        if acc != (bits[i] & 1):
            return None
    return x


def generate_numeric(
    k: int, n: int, rng: random.Random, tolerance: float = 1e-9
) -> DifferenceOperator:
    """Floating polygon-lift sampler for arbitrary order k+1 (gcd(n,k+1)=1).

    The output has exactly rationalized coefficients but only a numeric
    certificate: the monodromy at eigenvalue -1 matches the scalar
    (-1)^{n+k} entrywise within the tolerance.
    """
    m = k + 1
    if math.gcd(n, m) != 1:
        raise CoprimalityError(f"period {n} and order {m} must be coprime")
    wrap = 1.0 if k % 2 == 0 else -1.0
    target = 1.0 if (n + k) % 2 == 0 else -1.0

    for _ in range(_MAX_ATTEMPTS):
        pts = [[rng.uniform(-1.0, 1.0) for _ in range(m)] for _ in range(n)]

        def window_det(points, i):
            cols = [points[(i + t) % n] for t in range(m)]
            signs = 1.0
            for t in range(m):
                if i + t >= n:
                    signs *= wrap
            return signs * _det_float([[cols[c][r] for c in range(m)] for r in range(m)])

        dets = [window_det(pts, i) for i in range(n)]
        scale_ref = max(abs(d) for d in dets)
        if scale_ref == 0.0 or min(abs(d) for d in dets) < 1e-4 * scale_ref:
            continue
        bits = [1 if d < 0 else 0 for d in dets]
        flips = _solve_gf2_circulant(n, m, bits)
        if flips is None:
            continue
        pts = [
            [(-x if flips[i] else x) for x in row] for i, row in enumerate(pts)
        ]
        dets = [window_det(pts, i) for i in range(n)]
        if min(dets) <= 0.0:
            continue
        rows_circ = []
        for i in range(n):
            row = [0.0] * n
            for t in range(m):
                row[(i + t) % n] += 1.0
            rows_circ.append(row)
        logs = _solve_float(rows_circ, [-math.log(d) for d in dets])
        pts = [[x * math.exp(logs[i]) for x in row] for i, row in enumerate(pts)]
        dets = [window_det(pts, i) for i in range(n)]
        if max(abs(d - 1.0) for d in dets) > 1e-6:
            continue

        # extended lift on [-m, n): indices below zero wrap with the sign
        ext = {}
        for i in range(-m, n):
            ext[i] = pts[i % n] if i >= 0 else [wrap * x for x in pts[i + n]]
        rows = [[Fraction(0)] * n for _ in range(k)]
        ok = True
        for i in range(n):
            A = [[ext[i - j][r] for j in range(1, m + 1)] for r in range(m)]
            coeffs = _solve_float(A, ext[i])
            tail = 1.0 if k % 2 == 0 else -1.0
            if abs(coeffs[m - 1] - tail) > 1e-6:
                ok = False
                break
            for j in range(1, m):
                signed = coeffs[j - 1] if (j - 1) % 2 == 0 else -coeffs[j - 1]
                rows[j - 1][i] = Fraction(signed).limit_denominator(10**12)
        if not ok:
            continue
        if any(v == 0 for v in rows[0]):
            continue
        op = from_recursion(n, k, rows)

        # numeric validation: float window-transfer product at eigenvalue -1.
        # Window u_i = (psi_i, ..., psi_{i-k}); the site-i equation
        # psi_{i-m} + sum_j a^j_i psi_{i-j} = -psi_i gives u_i = M_i u_{i-1}.
        mono = [[1.0 if r == c else 0.0 for c in range(m)] for r in range(m)]
        for i in range(1, n + 1):
            step = [[0.0] * m for _ in range(m)]
            for j in range(1, m):
                step[0][j - 1] = -float(op.term(-j)[i % n])
            step[0][m - 1] = -1.0
            for r in range(1, m):
                step[r][r - 1] = 1.0
            mono = [
                [sum(step[r][t] * mono[t][c] for t in range(m)) for c in range(m)]
                for r in range(m)
            ]
        residual = max(
            abs(mono[r][c] - (target if r == c else 0.0))
            for r in range(m)
            for c in range(m)
        )
        if residual > tolerance:
            continue
        return op
    raise DegenerateError(
        f"no valid sample after {_MAX_ATTEMPTS} attempts (k={k}, n={n})"
    )


def generate_superperiodic(
    k: int,
    n: int,
    source: str = "auto",
    seed: int | None = None,
    tolerance: float = 1e-9,
) -> DifferenceOperator:
    """Dispatch to one of the samplers; requires gcd(n, k+1) = 1.

    Sources: "quiddity" (k=1, exact), "numeric" (any k, float-validated),
    "gale" (k = n-3, exact), or "auto" to pick the exact source when the
    parameters allow one.
    """
    if n < 3:
        raise ValueError(f"period must be at least 3, got {n}")
    if k < 1:
        raise ValueError(f"order parameter must be positive, got k={k}")
    if k + 1 >= n:
        raise ValueError(f"order {k + 1} must be smaller than the period {n}")
    if math.gcd(n, k + 1) != 1:
        raise CoprimalityError(
            f"period {n} and order {k + 1} must be coprime for generation"
        )
    rng = random.Random(seed)
    if source == "auto":
        if k == 1:
            source = "quiddity"
        elif k == n - 3:
            source = "gale"
        else:
            source = "numeric"
    if source == "quiddity":
        if k != 1:
            raise ValueError("quiddity source generates order 2 only (k=1)")
        return generate_quiddity(n, rng)
    if source == "gale":
        if k != n - 3:
            raise ValueError(
                f"gale source generates order n-2 = {n - 2} only (k = n-3)"
            )
        base = generate_quiddity(n, rng)
        return dual_pair(base).gale
    if source == "numeric":
        return generate_numeric(k, n, rng, tolerance)
    raise ValueError(f"unknown source {source!r}")


# -- generic (usually non-superperiodic) random operators ----------------------


def random_operator(
    n: int, k: int, rng: random.Random, magnitude: int = 5
) -> DifferenceOperator:
    """Random monic triangular operator with nowhere-zero subdiagonal."""
    rows = []
    for j in range(1, k + 1):
        row = []
        for _ in range(n):
            numer = rng.randint(-magnitude, magnitude)
            if j == 1 and numer == 0:
                numer = rng.choice([-1, 1]) * rng.randint(1, magnitude)
            row.append(Fraction(numer, rng.randint(1, 4)))
        rows.append(row)
    return from_recursion(n, k, rows)


def perturb_operator(L: DifferenceOperator, rng: random.Random) -> DifferenceOperator:
    """Change one coefficient by a nonzero rational; shape is preserved."""
    shape = shape_of(L)
    k = shape.order - 1
    if k == 0:
        raise ValueError("an order-1 monic operator has no free coefficient")
    j = rng.randint(1, k)
    i = rng.randrange(L.n)
    rows = [list(L.term(-jj).values) for jj in range(1, k + 1)]
    while True:
        delta = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
        if delta == 0:
            continue
        new_value = rows[j - 1][i] + delta
        if j == 1 and new_value == 0:
            continue
        rows[j - 1][i] = new_value
        return from_recursion(L.n, k, rows)
