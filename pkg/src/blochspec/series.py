"""Formal Bloch series at the two marked points of the spectral curve.

Large eigenvalue: in the local coordinate z with w = z^{-n} exactly, the
eigenvalue expands as E(z) = z^{-(k+1)} (1 + sum_{s>=1} e_s z^s) and the
eigenvector as psi_i = z^i sum_s xi_s(i) z^s with xi_0 = 1, xi_s n-periodic,
xi_s(0) = 0 for s >= 1.  Matching powers of z gives, per order s,

    e_s + xi_s(i) - xi_s(i-k-1)
        = sum_j a^j_i xi_{s-k-1+j}(i-j) - sum_{t=1}^{s-1} e_t xi_{s-t}(i),

whose right side is known; summing over a period isolates e_s, and the
(k+1)-step walk on Z/n (coprimality of n and k+1 makes it a single cycle)
then recovers xi_s.

Small eigenvalue: with pi(i) the running product of the order-1 coefficients
(pi(0) = 1, pi(i)/pi(i-1) = a^1_i), the small branch is
psi_i = pi(i) E^{-i} sum_s xi_s(i) E^s with xi_0 = 1, xi_s(0) = 0.  Matching
powers of E gives

    xi_s(i) - xi_s(i-1) = sum_{j=2}^{min(k+1, s+1)} rho_j(i) xi_{s-j+1}(i-j),
    rho_j(i) = a^j_i / (a^1_i a^1_{i-1} ... a^1_{i-j+1}),

an integration in i (these xi_s are not periodic); the Bloch multiplier is
w(E) = psi_{i-n}/psi_i = r^{-1} E^n (1 + sum_{s>=1} xi_s(-n) E^s) with r the
product of the order-1 coefficients over one period.

TruncatedSeries keeps explicit cutoffs (coefficients valid strictly below
the cutoff) so substitution into the curve proves vanishing to a stated
order rather than silently checking less.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    CoprimalityError,
    DegenerateError,
    TruncationError,
    VerificationError,
)
from .operators import DifferenceOperator, shape_of
from .poly import BiPoly
from .rationals import as_fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


class TruncatedSeries:
    """Finite Laurent series with a validity cutoff.

    coeffs maps exponent -> Fraction; coefficients are meaningful only for
    exponents strictly below cutoff (cutoff None means the series is exact).
    Arithmetic propagates cutoffs pessimistically, so a zero coefficient
    below the cutoff is a proven zero.
    """

    __slots__ = ("var", "coeffs", "cutoff")

    def __init__(self, var: str, coeffs=None, cutoff=None):
        self.var = str(var)
        self.cutoff = None if cutoff is None else int(cutoff)
        clean = {}
        for e, c in (coeffs or {}).items():
            e = int(e)
            if self.cutoff is not None and e >= self.cutoff:
                continue
            c = as_fraction(c)
            if c != 0:
                clean[e] = c
        self.coeffs = clean

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, var: str, cutoff=None) -> "TruncatedSeries":
        return cls(var, {}, cutoff)

    @classmethod
    def monomial(cls, var: str, exp: int, c=1, cutoff=None) -> "TruncatedSeries":
        return cls(var, {exp: c}, cutoff)

    @classmethod
    def constant(cls, var: str, c, cutoff=None) -> "TruncatedSeries":
        return cls(var, {0: c}, cutoff)

    # -- inspection ----------------------------------------------------------

    def coefficient(self, e: int) -> Fraction:
        """Coefficient at exponent e; raises if e is beyond the cutoff."""
        if self.cutoff is not None and e >= self.cutoff:
            raise TruncationError(
                f"exponent {e} is not determined (cutoff {self.cutoff})"
            )
        return self.coeffs.get(e, _ZERO)

    def known_items(self):
        return sorted(self.coeffs.items())

    def is_zero_to_cutoff(self) -> bool:
        return not self.coeffs

    def _cut(self) -> float:
        return math.inf if self.cutoff is None else self.cutoff

    def _lo(self) -> float:
        """Lowest exponent at which the series can be nonzero."""
        lo = min(self.coeffs) if self.coeffs else math.inf
        return min(lo, self._cut())

    def _check(self, other: "TruncatedSeries"):
        if self.var != other.var:
            raise ValueError(f"variable mismatch: {self.var} vs {other.var}")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruncatedSeries)
            and self.var == other.var
            and self.coeffs == other.coeffs
            and self.cutoff == other.cutoff
        )

    def __hash__(self):
        return hash((self.var, tuple(sorted(self.coeffs.items())), self.cutoff))

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, Fraction)):
            other = TruncatedSeries.constant(self.var, other)
        self._check(other)
        cut = min(self._cut(), other._cut())
        acc = dict(self.coeffs)
        for e, c in other.coeffs.items():
            acc[e] = acc.get(e, _ZERO) + c
        return TruncatedSeries(self.var, acc, None if math.isinf(cut) else cut)

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(
            self.var, {e: -c for e, c in self.coeffs.items()}, self.cutoff
        )

    def __sub__(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, Fraction)):
            other = TruncatedSeries.constant(self.var, other)
        return self + (-other)

    def __rsub__(self, other) -> "TruncatedSeries":
        return (-self) + other

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, Fraction)):
            c = as_fraction(other)
            return TruncatedSeries(
                self.var, {e: c * v for e, v in self.coeffs.items()}, self.cutoff
            )
        self._check(other)
        cut = min(self._cut() + other._lo(), self._lo() + other._cut())
        acc = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                acc[e] = acc.get(e, _ZERO) + c1 * c2
        return TruncatedSeries(self.var, acc, None if math.isinf(cut) else cut)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "TruncatedSeries":
        if e < 0:
            raise ValueError("negative powers of truncated series are not supported")
        out = TruncatedSeries.constant(self.var, 1)
        for _ in range(e):
            out = out * self
        return out

    def __repr__(self):
        parts = [f"{c}*{self.var}^{e}" for e, c in sorted(self.coeffs.items())]
        tail = "" if self.cutoff is None else f" + O({self.var}^{self.cutoff})"
        return "TruncatedSeries(" + (" + ".join(parts) or "0") + tail + ")"


# -- expansion at large eigenvalue -------------------------------------------


@dataclass(frozen=True)
class InfinityExpansion:
    """E(z) = z^{-(k+1)}(1 + sum e_s z^s), w = z^{-n}, psi_i = z^i sum xi_s(i) z^s."""

    n: int
    k: int
    order: int
    e: tuple  # (e_1, ..., e_order)
    xi: tuple  # xi[s][i % n] for s = 0..order

    def eigenvalue_series(self) -> TruncatedSeries:
        coeffs = {-(self.k + 1): _ONE}
        for s, es in enumerate(self.e, start=1):
            coeffs[-(self.k + 1) + s] = es
        return TruncatedSeries("z", coeffs, cutoff=-(self.k + 1) + self.order + 1)

    def multiplier_series(self) -> TruncatedSeries:
        return TruncatedSeries.monomial("z", -self.n, 1)

    def eigenvector_series(self, i: int) -> TruncatedSeries:
        coeffs = {i + s: self.xi[s][i % self.n] for s in range(self.order + 1)}
        return TruncatedSeries("z", coeffs, cutoff=i + self.order + 1)


def expand_infinity(L: DifferenceOperator, order: int) -> InfinityExpansion:
    """Solve the large-eigenvalue expansion to the given order (>= 1)."""
    if order < 1:
        raise TruncationError("expansion order must be at least 1")
    shape = shape_of(L)
    n, k = L.n, shape.order - 1
    if math.gcd(n, k + 1) != 1:
        raise CoprimalityError(
            f"period {n} and order {k + 1} share a factor; the walk is not a cycle"
        )

    def a(i, j):  # coefficient a^j_i with a^{k+1} = 1
        if j == k + 1:
            return _ONE
        return L.term(-j)[i]

    xi = [[_ONE] * n]  # level 0
    e = []
    for s in range(1, order + 1):
        # right side Q_s(i), fully known from lower levels
        Q = []
        for i in range(n):
            val = _ZERO
            for j in range(1, k + 2):
                lvl = s - k - 1 + j
                if 0 <= lvl <= s - 1:
                    val += a(i, j) * xi[lvl][(i - j) % n]
            for t in range(1, s):
                val -= e[t - 1] * xi[s - t][i]
            Q.append(val)
        es = sum(Q, _ZERO) / n
        e.append(es)
        # xi_s(i) - xi_s(i-k-1) = Q_s(i) - e_s, walked around the (k+1)-cycle
        level = [None] * n
        level[0] = _ZERO
        i = 0
        for _ in range(n - 1):
            # step down: xi_s(i-k-1) = xi_s(i) - (Q_s(i) - e_s)
            nxt = (i - k - 1) % n
            level[nxt] = level[i] - (Q[i] - es)
            i = nxt
        # closing the cycle is automatic since sum(Q - e_s) = 0; verify anyway
        back = level[i] - (Q[i] - es)
        if back != level[(i - k - 1) % n]:
            raise VerificationError("cycle walk failed to close")
        xi.append(level)
    return InfinityExpansion(n=n, k=k, order=order, e=tuple(e), xi=tuple(map(tuple, xi)))


# -- expansion at small eigenvalue -------------------------------------------


@dataclass(frozen=True)
class ZeroExpansion:
    """psi_i = pi(i) E^{-i} sum xi_s(i) E^s on a finite index window.

    xi maps level s to {i: value} on the window [-n - (k+1)(order-s), n-1];
    these profiles are not periodic.  r is the period product of the order-1
    coefficients, pi_window stores pi(i) on [lo, n-1] for the widest window.
    """

    n: int
    k: int
    order: int
    r: Fraction
    pi_window: dict
    xi: tuple  # tuple of dicts, level s

    def multiplier_series(self) -> TruncatedSeries:
        coeffs = {self.n: _ONE / self.r}
        for s in range(1, self.order + 1):
            coeffs[self.n + s] = self.xi[s][-self.n] / self.r
        return TruncatedSeries("E", coeffs, cutoff=self.n + self.order + 1)

    def eigenvector_series(self, i: int) -> TruncatedSeries:
        """Series of psi_i in E; i must lie in the stored window."""
        coeffs = {}
        for s in range(self.order + 1):
            if i not in self.xi[s]:
                raise TruncationError(f"index {i} outside stored window at level {s}")
            coeffs[-i + s] = self.pi_window[i] * self.xi[s][i]
        return TruncatedSeries("E", coeffs, cutoff=-i + self.order + 1)


def expand_zero(L: DifferenceOperator, order: int, margin: int = 0) -> ZeroExpansion:
    """Solve the small-eigenvalue expansion to the given order (>= 1).

    margin widens every stored window by that many indices on both ends
    (handy when the caller wants residuals checked away from the base point).
    """
    if order < 1:
        raise TruncationError("expansion order must be at least 1")
    if margin < 0:
        raise ValueError("margin must be nonnegative")
    shape = shape_of(L)
    n, k = L.n, shape.order - 1
    if not shape.leading_ok:
        raise DegenerateError(
            "the small-eigenvalue branch needs a nowhere-zero order-1 coefficient"
        )

    def a(i, j):
        if j == k + 1:
            return _ONE
        return L.term(-j)[i]

    def a1(i):
        return _ONE if k == 0 else L.term(-1)[i]

    lo_all = -n - (k + 1) * order - margin
    hi = n - 1 + margin
    # pi(i): pi(0) = 1, pi(i) = a^1_i pi(i-1); extend over [lo_all - (k+1), hi]
    pi = {0: _ONE}
    for i in range(1, hi + 1):
        pi[i] = a1(i) * pi[i - 1]
    for i in range(0, lo_all - (k + 2), -1):
        pi[i - 1] = pi[i] / a1(i)
    r = _ONE
    for i in range(n):
        r *= a1(i)

    def rho(i, j):
        denom = _ONE
        for t in range(j):
            denom *= a1(i - t)
        return a(i, j) / denom

    xi = [dict()]  # level 0 is identically 1; fill lazily below
    for i in range(lo_all - (k + 1), hi + 1):
        xi[0][i] = _ONE
    for s in range(1, order + 1):
        lo_s = -n - (k + 1) * (order - s) - margin
        level = {0: _ZERO}

        def increment(i):
            val = _ZERO
            for j in range(2, min(k + 1, s + 1) + 1):
                val += rho(i, j) * xi[s - j + 1][i - j]
            return val

        for i in range(1, hi + 1):
            level[i] = level[i - 1] + increment(i)
        for i in range(0, lo_s, -1):
            level[i - 1] = level[i] - increment(i)
        xi.append(level)
    return ZeroExpansion(
        n=n, k=k, order=order, r=r, pi_window=pi, xi=tuple(xi)
    )


# -- curve/series cross-checks -----------------------------------------------


@dataclass(frozen=True)
class SeriesCurveReport:
    """Proof record that a series branch satisfies the curve to its cutoff."""

    at: str
    order: int
    cutoff: int
    checked_below: int
    ok: bool


def _substitute(R: BiPoly, w: TruncatedSeries, E: TruncatedSeries) -> TruncatedSeries:
    acc = TruncatedSeries.zero(w.var)
    for (i, j), c in R.coeffs.items():
        acc = acc + (w**i) * (E**j) * c
    return acc


def verify_curve_series(
    L: DifferenceOperator, order: int, at: str = "both", R: BiPoly | None = None
):
    """Substitute the series branches into the curve; residual must vanish.

    Returns a list of SeriesCurveReport (one per branch checked); raises
    VerificationError if any known residual coefficient is nonzero, and
    TruncationError if the cutoff arithmetic leaves nothing to check.
    """
    from .curves import char_curve  # local import to avoid a cycle

    shape = shape_of(L)
    n, k = L.n, shape.order - 1
    if R is None:
        R = char_curve(L, method="both")
    reports = []
    branches = ("infinity", "zero") if at == "both" else (at,)
    for branch in branches:
        if branch == "infinity":
            exp = expand_infinity(L, order)
            res = _substitute(R, exp.multiplier_series(), exp.eigenvalue_series())
            floor = -n * (k + 1)
        elif branch == "zero":
            exp = expand_zero(L, order)
            res = _substitute(
                R,
                exp.multiplier_series(),
                TruncatedSeries.monomial("E", 1, 1),
            )
            floor = n
        else:
            raise ValueError(f"unknown branch {branch!r}")
        expected_cut = floor + order + 1
        if res.cutoff is None or res.cutoff < expected_cut:
            raise TruncationError(
                f"{branch}: residual cutoff {res.cutoff} below expected {expected_cut}"
            )
        ok = res.is_zero_to_cutoff()
        reports.append(
            SeriesCurveReport(
                at=branch,
                order=order,
                cutoff=res.cutoff,
                checked_below=res.cutoff,
                ok=ok,
            )
        )
        if not ok:
            raise VerificationError(
                f"{branch}: curve residual has nonzero coefficients {res.known_items()}"
            )
    return reports
