"""Exact polynomial arithmetic: dense univariate, sparse bivariate, determinants.

Coefficients are fractions.Fraction throughout.  UPoly stores coefficients
low-to-high in a trimmed tuple; BiPoly stores a dict (i, j) -> coefficient
over a fixed ordered pair of variable names, with zero entries pruned.

The determinant helper is division-free (Laplace expansion memoized over
column subsets), so it works verbatim over polynomial entries without ever
leaving the ring.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .rationals import as_fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class UPoly:
    """Univariate polynomial with exact rational coefficients, low degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        self.coeffs = _trim(as_fraction(c) for c in coeffs)

    @classmethod
    def zero(cls) -> "UPoly":
        return cls(())

    @classmethod
    def constant(cls, c) -> "UPoly":
        return cls((as_fraction(c),))

    @classmethod
    def x(cls) -> "UPoly":
        return cls((_ZERO, _ONE))

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial at -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else _ZERO

    def __eq__(self, other) -> bool:
        if isinstance(other, UPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == UPoly.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other) -> "UPoly":
        other = _as_upoly(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "UPoly":
        return UPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "UPoly":
        return self + (-_as_upoly(other))

    def __rsub__(self, other) -> "UPoly":
        return _as_upoly(other) - self

    def __mul__(self, other) -> "UPoly":
        if isinstance(other, (int, Fraction)):
            c = as_fraction(other)
            return UPoly(c * a for a in self.coeffs)
        other = _as_upoly(other)
        if self.is_zero() or other.is_zero():
            return UPoly.zero()
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "UPoly":
        if e < 0:
            raise ValueError("negative power of a polynomial")
        out = UPoly.constant(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __divmod__(self, other) -> tuple:
        other = _as_upoly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        d = other.degree
        lead = other.coeffs[-1]
        q = [_ZERO] * max(0, len(rem) - d)
        for i in range(len(rem) - 1, d - 1, -1):
            if rem[i] == 0:
                continue
            f = rem[i] / lead
            q[i - d] = f
            for j, b in enumerate(other.coeffs):
                rem[i - d + j] -= f * b
        return UPoly(q), UPoly(rem)

    def exact_div(self, other) -> "UPoly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ValueError("division is not exact")
        return q

    def __call__(self, at) -> Fraction:
        at = as_fraction(at)
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * at + c
        return acc

    def shift_arg(self, a) -> "UPoly":
        """The polynomial x -> self(x + a)."""
        a = as_fraction(a)
        out = [_ZERO] * len(self.coeffs)
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            ai = _ONE
            for t in range(i, -1, -1):
                out[t] += c * comb(i, t) * ai
                ai *= a
        return UPoly(out)

    def root_order(self, at) -> int:
        """Order of vanishing at a point (0 when self(at) != 0)."""
        shifted = self.shift_arg(at)
        for i, c in enumerate(shifted.coeffs):
            if c != 0:
                return i
        return len(self.coeffs)  # zero polynomial: conventionally full length

    def __repr__(self):
        return f"UPoly({[str(c) for c in self.coeffs]})"


def _as_upoly(value) -> UPoly:
    if isinstance(value, UPoly):
        return value
    return UPoly.constant(as_fraction(value))


class BiPoly:
    """Sparse bivariate polynomial sum c_{ij} first^i second^j, exact coefficients."""

    __slots__ = ("vars", "coeffs")

    def __init__(self, coeffs=None, vars=("w", "E")):
        self.vars = (str(vars[0]), str(vars[1]))
        clean = {}
        for (i, j), c in (coeffs or {}).items():
            c = as_fraction(c)
            if c != 0:
                clean[(int(i), int(j))] = c
        self.coeffs = clean

    @classmethod
    def zero(cls, vars=("w", "E")) -> "BiPoly":
        return cls({}, vars)

    @classmethod
    def constant(cls, c, vars=("w", "E")) -> "BiPoly":
        return cls({(0, 0): c}, vars)

    @classmethod
    def monomial(cls, i: int, j: int, c=1, vars=("w", "E")) -> "BiPoly":
        return cls({(i, j): c}, vars)

    @classmethod
    def from_upoly(cls, p: UPoly, position: int, vars=("w", "E")) -> "BiPoly":
        """Lift a univariate polynomial into slot 0 (first var) or 1 (second)."""
        if position == 0:
            return cls({(i, 0): c for i, c in enumerate(p.coeffs)}, vars)
        if position == 1:
            return cls({(0, j): c for j, c in enumerate(p.coeffs)}, vars)
        raise ValueError("position must be 0 or 1")

    def _check(self, other: "BiPoly"):
        if self.vars != other.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")

    def is_zero(self) -> bool:
        return not self.coeffs

    def support(self):
        return sorted(self.coeffs)

    def coefficient(self, i: int, j: int) -> Fraction:
        return self.coeffs.get((i, j), _ZERO)

    def degree_in(self, position: int) -> int:
        """Max exponent of the chosen variable (-1 for the zero polynomial)."""
        if not self.coeffs:
            return -1
        return max(key[position] for key in self.coeffs)

    def total_degree_min(self) -> int:
        """Minimal total degree i+j over the support (-1 for zero)."""
        if not self.coeffs:
            return -1
        return min(i + j for (i, j) in self.coeffs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BiPoly)
            and self.vars == other.vars
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.vars, tuple(sorted(self.coeffs.items()))))

    def __add__(self, other) -> "BiPoly":
        if isinstance(other, (int, Fraction)):
            other = BiPoly.constant(other, self.vars)
        self._check(other)
        acc = dict(self.coeffs)
        for key, c in other.coeffs.items():
            acc[key] = acc.get(key, _ZERO) + c
        return BiPoly(acc, self.vars)

    __radd__ = __add__

    def __neg__(self) -> "BiPoly":
        return BiPoly({k: -c for k, c in self.coeffs.items()}, self.vars)

    def __sub__(self, other) -> "BiPoly":
        if isinstance(other, (int, Fraction)):
            other = BiPoly.constant(other, self.vars)
        return self + (-other)

    def __rsub__(self, other) -> "BiPoly":
        return (-self) + other

    def __mul__(self, other) -> "BiPoly":
        if isinstance(other, (int, Fraction)):
            c = as_fraction(other)
            return BiPoly({k: c * v for k, v in self.coeffs.items()}, self.vars)
        self._check(other)
        acc = {}
        for (i1, j1), c1 in self.coeffs.items():
            for (i2, j2), c2 in other.coeffs.items():
                key = (i1 + i2, j1 + j2)
                acc[key] = acc.get(key, _ZERO) + c1 * c2
        return BiPoly(acc, self.vars)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "BiPoly":
        if e < 0:
            raise ValueError("negative power of a polynomial")
        out = BiPoly.constant(1, self.vars)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __call__(self, first, second) -> Fraction:
        a, b = as_fraction(first), as_fraction(second)
        acc = _ZERO
        for (i, j), c in self.coeffs.items():
            acc += c * a**i * b**j
        return acc

    def eval_first(self, value) -> UPoly:
        """Substitute the first variable; a UPoly in the second remains."""
        a = as_fraction(value)
        out = {}
        for (i, j), c in self.coeffs.items():
            out[j] = out.get(j, _ZERO) + c * a**i
        if not out:
            return UPoly.zero()
        dense = [_ZERO] * (max(out) + 1)
        for j, c in out.items():
            dense[j] = c
        return UPoly(dense)

    def eval_second(self, value) -> UPoly:
        """Substitute the second variable; a UPoly in the first remains."""
        b = as_fraction(value)
        out = {}
        for (i, j), c in self.coeffs.items():
            out[i] = out.get(i, _ZERO) + c * b**j
        if not out:
            return UPoly.zero()
        dense = [_ZERO] * (max(out) + 1)
        for i, c in out.items():
            dense[i] = c
        return UPoly(dense)

    def coefficient_of_first(self, i: int) -> UPoly:
        """The UPoly (in the second variable) multiplying first^i."""
        out = {}
        for (i0, j), c in self.coeffs.items():
            if i0 == i:
                out[j] = c
        if not out:
            return UPoly.zero()
        dense = [_ZERO] * (max(out) + 1)
        for j, c in out.items():
            dense[j] = c
        return UPoly(dense)

    def translate(self, a, b) -> "BiPoly":
        """The polynomial (x, y) -> self(x + a, y + b)."""
        a, b = as_fraction(a), as_fraction(b)
        acc = {}
        for (i, j), c in self.coeffs.items():
            for s in range(i + 1):
                ca = c * comb(i, s) * a ** (i - s)
                if ca == 0:
                    continue
                for t in range(j + 1):
                    cb = ca * comb(j, t) * b ** (j - t)
                    if cb == 0:
                        continue
                    key = (s, t)
                    acc[key] = acc.get(key, _ZERO) + cb
        return BiPoly(acc, self.vars)

    def vanishing_order_at(self, a, b) -> int:
        """Multiplicity of the point (a, b): min total degree after recentering."""
        shifted = self.translate(a, b)
        if shifted.is_zero():
            raise ValueError("zero polynomial has no finite vanishing order")
        return shifted.total_degree_min()

    def __repr__(self):
        w, e = self.vars
        parts = [
            f"{c}*{w}^{i}*{e}^{j}" for (i, j), c in sorted(self.coeffs.items())
        ]
        return "BiPoly(" + (" + ".join(parts) or "0") + ")"


def det_dp(rows, zero):
    """Determinant of a square matrix over a commutative ring, division-free.

    Laplace expansion along rows, memoized over the set of still-available
    columns (bitmask), so each of the 2^n column subsets is visited once.
    Entries need only __add__, __mul__, __neg__; `zero` is the ring zero.
    """
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix is not square")
    if n == 0:
        raise ValueError("empty matrix")
    full = (1 << n) - 1
    memo = {0: None}

    def go(mask):
        # mask: columns still available; row index = n - popcount(mask)
        if mask == 0:
            return None
        if mask in memo:
            return memo[mask]
        r = n - bin(mask).count("1")
        acc = zero
        sign = 1
        for c in range(n):
            bit = 1 << c
            if not mask & bit:
                continue
            entry = rows[r][c]
            sub = go(mask & ~bit)
            term = entry if sub is None else entry * sub
            acc = acc + term if sign > 0 else acc - term
            sign = -sign
        memo[mask] = acc
        return acc

    return go(full)


def mat_mul(A, B, zero):
    """Product of two matrices over a ring (lists of lists)."""
    if not A or not B or len(A[0]) != len(B):
        raise ValueError("incompatible shapes")
    cols = len(B[0])
    out = []
    for row in A:
        new = []
        for j in range(cols):
            acc = zero
            for t, a in enumerate(row):
                acc = acc + a * B[t][j]
            new.append(acc)
        out.append(new)
    return out


def mat_identity(n, zero, one):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]
