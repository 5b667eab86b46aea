"""Periodic sequences and strictly lower-triangular difference operators.

Conventions, fixed once and used everywhere:

* sequences are doubly infinite and n-periodic; a PeriodicSequence stores one
  period, value(i) = values[i mod n];
* the shift acts by (T psi)_i = psi_{i+1}, so (c T^p psi)_i = c_i psi_{i+p};
* an operator is a finite sum  sum_p c^(p) T^p  of such terms with a common
  period; composing terms, the product (c T^p)(d T^q) contributes the
  coefficient  i -> c_i d_{i+p}  at power p+q;
* the monic lower-triangular operators of order m are
  T^{-m} + a^{m-1} T^{-(m-1)} + ... + a^1 T^{-1}, and the sign-gauged kernel
  recursion of L+1 reads
  V_i = a^1_i V_{i-1} - a^2_i V_{i-2} + ... + (-1)^{m-2} a^{m-1}_i V_{i-m+1}
        + (-1)^{m-1} V_{i-m}.

Values are exact rationals and immutable after construction; every operation
returns a fresh object.  Identically zero coefficient sequences are pruned
eagerly so structural equality is semantic equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PeriodMismatchError, ShapeError
from .rationals import as_fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


class PeriodicSequence:
    """One period of an n-periodic sequence of exact rationals."""

    __slots__ = ("values",)

    def __init__(self, values):
        vals = tuple(as_fraction(v) for v in values)
        if not vals:
            raise ValueError("period must be positive")
        self.values = vals

    @classmethod
    def constant(cls, period: int, value=1) -> "PeriodicSequence":
        return cls([as_fraction(value)] * period)

    @property
    def period(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i % len(self.values)]

    def __iter__(self):
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def shift(self, d: int) -> "PeriodicSequence":
        """The sequence i -> self[i + d]."""
        n = len(self.values)
        return PeriodicSequence(self.values[(i + d) % n] for i in range(n))

    def _check(self, other: "PeriodicSequence"):
        if len(self.values) != len(other.values):
            raise PeriodMismatchError(
                f"periods differ: {len(self.values)} vs {len(other.values)}"
            )

    def __add__(self, other: "PeriodicSequence") -> "PeriodicSequence":
        self._check(other)
        return PeriodicSequence(a + b for a, b in zip(self.values, other.values))

    def __sub__(self, other: "PeriodicSequence") -> "PeriodicSequence":
        self._check(other)
        return PeriodicSequence(a - b for a, b in zip(self.values, other.values))

    def __mul__(self, other: "PeriodicSequence") -> "PeriodicSequence":
        """Pointwise product."""
        self._check(other)
        return PeriodicSequence(a * b for a, b in zip(self.values, other.values))

    def scale(self, c) -> "PeriodicSequence":
        c = as_fraction(c)
        return PeriodicSequence(c * a for a in self.values)

    def __neg__(self) -> "PeriodicSequence":
        return PeriodicSequence(-a for a in self.values)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.values)

    def __eq__(self, other) -> bool:
        return isinstance(other, PeriodicSequence) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return f"PeriodicSequence({[str(v) for v in self.values]})"


class DifferenceOperator:
    """Finite sum of terms c^(p) T^p with n-periodic coefficients.

    terms maps the shift power p to the coefficient sequence.  Sequences that
    are identically zero are never stored.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        if n < 1:
            raise ValueError("period must be positive")
        self.n = n
        clean = {}
        for p, coeff in (terms or {}).items():
            p = int(p)
            if isinstance(coeff, PeriodicSequence):
                seq = coeff
            elif isinstance(coeff, (list, tuple)):
                seq = PeriodicSequence(coeff)
            else:
                seq = PeriodicSequence.constant(n, coeff)
            if seq.period != n:
                raise PeriodMismatchError(
                    f"coefficient at power {p} has period {seq.period}, expected {n}"
                )
            if not seq.is_zero():
                clean[p] = seq
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "DifferenceOperator":
        return cls(n, {})

    @classmethod
    def identity(cls, n: int) -> "DifferenceOperator":
        return cls(n, {0: PeriodicSequence.constant(n, 1)})

    @classmethod
    def shift(cls, n: int, p: int, coeff=1) -> "DifferenceOperator":
        """The single term coeff * T^p (coeff constant or a sequence)."""
        return cls(n, {p: coeff})

    # -- inspection --------------------------------------------------------

    def powers(self):
        return sorted(self.terms)

    def term(self, p: int) -> PeriodicSequence:
        got = self.terms.get(p)
        return got if got is not None else PeriodicSequence.constant(self.n, 0)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DifferenceOperator)
            and self.n == other.n
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n, tuple(sorted((p, s.values) for p, s in self.terms.items()))))

    def __repr__(self):
        parts = []
        for p in sorted(self.terms, reverse=True):
            parts.append(f"({[str(v) for v in self.terms[p].values]})*T^{p}")
        return f"DifferenceOperator(n={self.n}, " + (" + ".join(parts) or "0") + ")"

    # -- algebra -----------------------------------------------------------

    def _check(self, other: "DifferenceOperator"):
        if self.n != other.n:
            raise PeriodMismatchError(f"periods differ: {self.n} vs {other.n}")

    def __add__(self, other: "DifferenceOperator") -> "DifferenceOperator":
        self._check(other)
        acc = dict(self.terms)
        for p, seq in other.terms.items():
            acc[p] = acc[p] + seq if p in acc else seq
        return DifferenceOperator(self.n, acc)

    def __sub__(self, other: "DifferenceOperator") -> "DifferenceOperator":
        return self + (-other)

    def __neg__(self) -> "DifferenceOperator":
        return DifferenceOperator(self.n, {p: -s for p, s in self.terms.items()})

    def scale(self, c) -> "DifferenceOperator":
        c = as_fraction(c)
        return DifferenceOperator(self.n, {p: s.scale(c) for p, s in self.terms.items()})

    def __mul__(self, other) -> "DifferenceOperator":
        """Operator composition (self applied after other)."""
        if not isinstance(other, DifferenceOperator):
            return self.scale(other)
        self._check(other)
        acc = {}
        for p, c in self.terms.items():
            for q, d in other.terms.items():
                contrib = c * d.shift(p)
                r = p + q
                acc[r] = acc[r] + contrib if r in acc else contrib
        return DifferenceOperator(self.n, acc)

    def __rmul__(self, other) -> "DifferenceOperator":
        return self.scale(other)

    def __pow__(self, exponent: int) -> "DifferenceOperator":
        if exponent < 0:
            raise ValueError("negative operator powers are not defined here")
        out = DifferenceOperator.identity(self.n)
        for _ in range(exponent):
            out = out * self
        return out

    # -- structure maps ----------------------------------------------------

    def adjoint(self) -> "DifferenceOperator":
        """Formal adjoint: c T^p -> (i -> c_{i-p}) T^{-p}."""
        return DifferenceOperator(
            self.n, {-p: s.shift(-p) for p, s in self.terms.items()}
        )

    def alternating_gauge(self) -> "DifferenceOperator":
        """Conjugation by the sign gauge eps_i = (-1)^i: term at power p flips by (-1)^p."""
        return DifferenceOperator(
            self.n,
            {p: (s if p % 2 == 0 else -s) for p, s in self.terms.items()},
        )

    def involution(self) -> "DifferenceOperator":
        """T^{-m} (L^* + 1) - 1 for a monic lower-triangular L of order m.

        Preserves the monic lower-triangular shape; applying it twice shifts
        every coefficient index by -m.
        """
        m = shape_of(self).order
        one = DifferenceOperator.identity(self.n)
        out = DifferenceOperator.shift(self.n, -m) * (self.adjoint() + one) - one
        shape_of(out)  # sanity: still monic lower-triangular of order m
        return out

    def rescale(self, c) -> "DifferenceOperator":
        """Diagonal scaling gauge: the term at power p picks up c^{m+p}.

        For an order-m monic lower-triangular operator this keeps the leading
        term monic and sends the order-j coefficient a^j to c^{m-j} a^j.
        """
        c = as_fraction(c)
        if c == 0:
            raise ValueError("scaling constant must be nonzero")
        m = shape_of(self).order
        return DifferenceOperator(
            self.n, {p: s.scale(c ** (m + p)) for p, s in self.terms.items()}
        )

    # -- action on Bloch sequences ------------------------------------------

    def apply(self, psi: "BlochSequence") -> "BlochSequence":
        if psi.period != self.n:
            raise PeriodMismatchError(f"periods differ: {self.n} vs {psi.period}")
        window = []
        for i in range(self.n):
            total = _ZERO
            for p, seq in self.terms.items():
                total += seq[i] * psi.value(i + p)
            window.append(total)
        return BlochSequence(window, psi.multiplicator)


class BlochSequence:
    """A Bloch sequence: psi_{i-n} = mu * psi_i, stored as one window psi_0..psi_{n-1}."""

    __slots__ = ("window", "multiplicator")

    def __init__(self, window, multiplicator):
        self.window = tuple(as_fraction(v) for v in window)
        if not self.window:
            raise ValueError("window must be nonempty")
        self.multiplicator = as_fraction(multiplicator)
        if self.multiplicator == 0:
            raise ValueError("multiplicator must be nonzero")

    @property
    def period(self) -> int:
        return len(self.window)

    def value(self, i: int) -> Fraction:
        q, r = divmod(i, len(self.window))
        return self.window[r] * self.multiplicator ** (-q)

    def scale(self, c) -> "BlochSequence":
        c = as_fraction(c)
        return BlochSequence([c * v for v in self.window], self.multiplicator)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BlochSequence)
            and self.window == other.window
            and self.multiplicator == other.multiplicator
        )

    def __hash__(self):
        return hash((self.window, self.multiplicator))

    def __repr__(self):
        return (
            f"BlochSequence({[str(v) for v in self.window]}, "
            f"mu={self.multiplicator})"
        )


@dataclass(frozen=True)
class TriangularShape:
    """Shape certificate: order m, and whether the order-1 coefficient never vanishes."""

    order: int
    leading_ok: bool


def shape_of(L: DifferenceOperator) -> TriangularShape:
    """Certify L = T^{-m} + sum_{j=1}^{m-1} a^j T^{-j}; raise ShapeError otherwise."""
    if L.is_zero():
        raise ShapeError("zero operator has no triangular shape")
    powers = L.powers()
    m = -powers[0]
    if m < 1 or powers[-1] > -1:
        raise ShapeError(f"support {powers} is not contained in [-m, -1]")
    top = L.term(-m)
    if any(v != 1 for v in top):
        raise ShapeError(f"coefficient at T^{-m} is not identically 1")
    if m == 1:
        leading_ok = True
    else:
        leading_ok = all(v != 0 for v in L.term(-1))
    return TriangularShape(order=m, leading_ok=leading_ok)


def is_triangular(L: DifferenceOperator) -> bool:
    try:
        shape_of(L)
        return True
    except ShapeError:
        return False


def from_recursion(n: int, k: int, rows) -> DifferenceOperator:
    """Build T^{-(k+1)} + sum_j a^j T^{-j} from the gauged recursion rows.

    rows[j-1] is the period of a^j for j = 1..k, i.e. the coefficients of
    V_i = a^1_i V_{i-1} - a^2_i V_{i-2} + ... + (-1)^{k-1} a^k_i V_{i-k}
          + (-1)^k V_{i-k-1}.
    The sign gauge V_i = (-1)^i psi_i turns that recursion into (L+1) psi = 0
    for exactly this operator, so stored coefficients equal the recursion's.
    """
    rows = [PeriodicSequence(r) if not isinstance(r, PeriodicSequence) else r for r in rows]
    if len(rows) != k:
        raise ValueError(f"expected {k} coefficient rows, got {len(rows)}")
    terms = {-(k + 1): PeriodicSequence.constant(n, 1)}
    for j, row in enumerate(rows, start=1):
        if row.period != n:
            raise PeriodMismatchError(f"row {j} has period {row.period}, expected {n}")
        terms[-j] = row
    return DifferenceOperator(n, terms)


def recursion_rows(L: DifferenceOperator):
    """Inverse of from_recursion: the coefficient rows a^1..a^k of a shaped L."""
    m = shape_of(L).order
    return [L.term(-j) for j in range(1, m)]


def commutator(A: DifferenceOperator, B: DifferenceOperator) -> DifferenceOperator:
    return A * B - B * A


def _lowest_monic_order(D: DifferenceOperator) -> int:
    """The order m of D when D's lowest term is exactly T^{-m}; else ShapeError."""
    if D.is_zero():
        raise ShapeError("cannot divide by the zero operator")
    m = -D.powers()[0]
    if any(v != 1 for v in D.term(-m)):
        raise ShapeError(f"divisor's lowest term at T^{-m} is not identically 1")
    return m


def divmod_right(A: DifferenceOperator, D: DifferenceOperator):
    """Quotient/remainder of division on the right: A = D*Q + R.

    D must have lowest term exactly T^{-m}; the remainder is supported on
    powers strictly above -m.  Peels the lowest power of the running
    remainder, which strictly increases, so the loop terminates.
    """
    A._check(D)
    m = _lowest_monic_order(D)
    Q = DifferenceOperator.zero(A.n)
    R = A
    while not R.is_zero():
        low = R.powers()[0]
        if low > -m:
            break
        g = R.term(low)
        # D * (c T^{low+m}) has lowest term (i -> c_{i-m}) T^{low}
        step = DifferenceOperator.shift(A.n, low + m, g.shift(m))
        Q = Q + step
        R = R - D * step
    return Q, R


def divmod_left(A: DifferenceOperator, D: DifferenceOperator):
    """Quotient/remainder of division on the left: A = Q*D + R."""
    A._check(D)
    m = _lowest_monic_order(D)
    Q = DifferenceOperator.zero(A.n)
    R = A
    while not R.is_zero():
        low = R.powers()[0]
        if low > -m:
            break
        g = R.term(low)
        # (c T^{low+m}) * D has lowest term c T^{low}
        step = DifferenceOperator.shift(A.n, low + m, g)
        Q = Q + step
        R = R - step * D
    return Q, R
