"""Main terms for divisor sums in progressions, via residues at s=1.

The count of n <= X with n = a (mod q), weighted by the k-fold divisor
function, grows like X/q times a polynomial in log X.  That polynomial is
the residue at s=1 of

    X^(s-1)/s  *  zeta(s)^k  *  (local Euler corrections at primes p | q),

and this module extracts it with truncated Laurent series in u = s-1.
Three closely related polynomial families come out of the same residue:

  ap_main_term(q, a, k)   density polynomial for the class a mod q;
  m_poly(q, k)            its transform over the divisor lattice of q,
                          recovered by the recursion through f(d, d);
  f_star(q, k)            the quadratic mean sum_{d|q} phi(d) M(d)^2 / d^2.

Coefficients are double precision; exactness claims live in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .arith import d_k_of, divisors, euler_phi, factorize
from .errors import DomainError

# Laurent coefficients of zeta about s=1:  zeta(s) = 1/u + sum_n c_n u^n
# with c_n = (-1)^n g_n / n! and g_n the constants below (25+ digits each,
# from a high-precision Euler-Maclaurin evaluation).
_STIELTJES = (
    0.5772156649015328606065121,
    -0.0728158454836767248605864,
    -0.0096903631928723184845304,
    0.0020538344203033458661600,
    0.0023253700654673000574682,
    0.0007933238173010627017533,
    -0.0002387693454301996098724,
    -0.0005272895670577510460741,
    -0.0003521233538030395096021,
    -0.0000343947744180880481779,
    0.0002053328149090647946837,
    0.0002701844395439035266729,
    0.0001672729121051401933535,
    -0.0000274638066037601588600,
    -0.0002092092620592999458371,
    -0.0002834686553202414466429,
)

MAX_SERIES_ORDER = len(_STIELTJES) - 1


@dataclass(frozen=True)
class StieltjesTable:
    """Expansion constants g_0..g_15 for zeta about s=1."""

    gamma: tuple[float, ...] = _STIELTJES


@dataclass(frozen=True)
class LaurentSeries:
    """Truncated Laurent series in u = s-1.

    Coefficients run from u^(-pole_order) through u^cap; coeffs[j] is the
    coefficient of u^(j - pole_order).  Multiplication shrinks cap by the
    partner's pole order, which is exactly how far the unknown tail of one
    factor can reach down.
    """

    pole_order: int
    cap: int
    coeffs: tuple[float, ...]

    def __post_init__(self):
        if self.pole_order < 0:
            raise DomainError("pole_order must be >= 0")
        if self.cap < -self.pole_order:
            raise DomainError("truncation window is empty")
        if len(self.coeffs) != self.pole_order + self.cap + 1:
            raise DomainError("coefficient count does not match window")

    def __getitem__(self, power: int) -> float:
        """Coefficient of u^power; zero below the pole, error above cap."""
        if power > self.cap:
            raise DomainError(f"u^{power} lies beyond truncation cap {self.cap}")
        if power < -self.pole_order:
            return 0.0
        return self.coeffs[power + self.pole_order]

    def __add__(self, other: LaurentSeries) -> LaurentSeries:
        pole = max(self.pole_order, other.pole_order)
        cap = min(self.cap, other.cap)
        coeffs = tuple(
            self[j] + other[j] for j in range(-pole, cap + 1)
        )
        return LaurentSeries(pole, cap, coeffs)

    def __sub__(self, other: LaurentSeries) -> LaurentSeries:
        return self + (-1.0) * other

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return LaurentSeries(
                self.pole_order, self.cap, tuple(c * other for c in self.coeffs)
            )
        pole = self.pole_order + other.pole_order
        cap = min(self.cap - other.pole_order, other.cap - self.pole_order)
        if cap < -pole:
            raise DomainError("product truncation window is empty")
        out = [0.0] * (pole + cap + 1)
        for i, ci in enumerate(self.coeffs):
            if ci == 0.0:
                continue
            pi = i - self.pole_order
            for j, cj in enumerate(other.coeffs):
                pj = j - other.pole_order
                p = pi + pj
                if p > cap:
                    break
                out[p + pole] += ci * cj
        return LaurentSeries(pole, cap, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentSeries:
        if k < 1:
            raise DomainError("series powers need exponent >= 1")
        out = self
        for _ in range(k - 1):
            out = out * self
        return out

    def reciprocal(self) -> LaurentSeries:
        """1/self for a unit series (no pole, nonzero constant term)."""
        if self.pole_order != 0:
            raise DomainError("reciprocal requires a series without a pole")
        a0 = self.coeffs[0]
        if a0 == 0.0:
            raise DomainError("reciprocal requires a nonzero constant term")
        inv = [1.0 / a0]
        for n in range(1, self.cap + 1):
            acc = sum(self.coeffs[i] * inv[n - i] for i in range(1, n + 1))
            inv.append(-acc / a0)
        return LaurentSeries(0, self.cap, tuple(inv))


def constant_series(value: float, cap: int) -> LaurentSeries:
    return LaurentSeries(0, cap, (value,) + (0.0,) * cap)


def _inv_s_series(cap: int) -> LaurentSeries:
    """1/s = 1/(1+u) about u=0."""
    return LaurentSeries(0, cap, tuple((-1.0) ** j for j in range(cap + 1)))


def zeta_series(order: int) -> LaurentSeries:
    """zeta(s) about s=1, kept through u^order."""
    if order < 0 or order > MAX_SERIES_ORDER:
        raise DomainError(
            f"zeta expansion order must lie in 0..{MAX_SERIES_ORDER}"
        )
    coeffs = [1.0]
    coeffs += [
        (-1.0) ** n * _STIELTJES[n] / math.factorial(n)
        for n in range(order + 1)
    ]
    return LaurentSeries(1, order, tuple(coeffs))


def zeta_power_series(k: int, order: int) -> LaurentSeries:
    """zeta(s)^k about s=1: pole order k, principal coefficient 1.

    The k-th power pulls expansion terms of zeta down by k-1 places, so the
    base expansion must reach u^(order+k-1); orders beyond the tabulated
    constants are rejected.
    """
    if not 1 <= k <= 8:
        raise DomainError(f"fold parameter must lie in 1..8, got {k}")
    if order < 0 or order + k - 1 > MAX_SERIES_ORDER:
        raise DomainError(
            f"order {order} needs expansion constants beyond index {MAX_SERIES_ORDER}"
        )
    return zeta_series(order + k - 1) ** k


def _prime_power_series(p: int, cap: int) -> LaurentSeries:
    """p^(-s) = (1/p) exp(-u log p) about u=0."""
    lp = math.log(p)
    coeffs = [(-lp) ** j / (math.factorial(j) * p) for j in range(cap + 1)]
    return LaurentSeries(0, cap, tuple(coeffs))


@lru_cache(maxsize=None)
def local_correction_series(
    p: int, alpha: int, beta: int, k: int, order: int
) -> LaurentSeries:
    """Euler factor at p for the series restricted to v_p(n) pinned by (alpha, beta).

    With alpha = v_p(q) and beta = v_p(gcd), the restricted local factor is
        (1 - p^-s)^k * d_k(p^beta) p^(-beta*s)          if beta < alpha,
        1 - (1 - p^-s)^k * sum_{j<alpha} d_k(p^j) p^-js  if beta = alpha,
    expanded about s=1.  No pole; value at s=1 is positive.
    """
    if alpha < 1 or beta < 0 or beta > alpha:
        raise DomainError(f"need 0 <= beta <= alpha with alpha >= 1, got ({alpha}, {beta})")
    e = _prime_power_series(p, order)
    one = constant_series(1.0, order)
    euler = (one - e) ** k
    if beta < alpha:
        out = euler * float(d_k_of(p**beta, k))
        for _ in range(beta):
            out = out * e
        return out
    acc = constant_series(0.0, order)
    epow = one
    for j in range(alpha):
        acc = acc + float(d_k_of(p**j, k)) * epow
        epow = epow * e
    return one - euler * acc


def constrained_dirichlet_correction(
    q: int, delta: int, k: int, order: int
) -> LaurentSeries:
    """Product of local factors over p | q so that the Dirichlet series of
    d_k over {n : gcd(n, q) = delta} equals zeta(s)^k times this series."""
    if delta < 1 or q % delta != 0:
        raise DomainError(f"{delta} does not divide {q}")
    out = constant_series(1.0, order)
    for pp in factorize(q):
        beta = 0
        d = delta
        while d % pp.p == 0:
            d //= pp.p
            beta += 1
        out = out * local_correction_series(pp.p, pp.a, beta, k, order)
    return out


def _local_correction_value(p: int, alpha: int, beta: int, k: int, s: float) -> float:
    """The local factor evaluated directly at a real point s > 1."""
    euler = (1.0 - p**-s) ** k
    if beta < alpha:
        return euler * d_k_of(p**beta, k) * p ** (-beta * s)
    return 1.0 - euler * sum(d_k_of(p**j, k) * p ** (-j * s) for j in range(alpha))


def correction_value_at(q: int, delta: int, k: int, s: float) -> float:
    """Direct evaluation of the correction product at real s > 1.

    Independent of the series expansion; used to cross-check it against
    brute-force Dirichlet partial sums.
    """
    if delta < 1 or q % delta != 0:
        raise DomainError(f"{delta} does not divide {q}")
    if s <= 1.0:
        raise DomainError("direct evaluation needs s > 1")
    out = 1.0
    for pp in factorize(q):
        beta = 0
        d = delta
        while d % pp.p == 0:
            d //= pp.p
            beta += 1
        out *= _local_correction_value(pp.p, pp.a, beta, k, s)
    return out


@dataclass(frozen=True)
class LogPoly:
    """Polynomial in log X with float coefficients, increasing degree."""

    coeffs: tuple[float, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: LogPoly) -> LogPoly:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0.0,) * (n - len(self.coeffs))
        b = other.coeffs + (0.0,) * (n - len(other.coeffs))
        return LogPoly(tuple(x + y for x, y in zip(a, b)))

    def __sub__(self, other: LogPoly) -> LogPoly:
        return self + (-1.0) * other

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return LogPoly(tuple(c * other for c in self.coeffs))
        out = [0.0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, ci in enumerate(self.coeffs):
            for j, cj in enumerate(other.coeffs):
                out[i + j] += ci * cj
        return LogPoly(tuple(out))

    __rmul__ = __mul__


def eval_logpoly(poly: LogPoly, x: float) -> float:
    """Horner evaluation at log x; requires x > 1."""
    if x <= 1:
        raise DomainError(f"evaluation point must exceed 1, got {x}")
    t = math.log(x)
    acc = 0.0
    for c in reversed(poly.coeffs):
        acc = acc * t + c
    return acc


def logpoly_json(poly: LogPoly, *, k: int, q: int, a: int | None = None) -> dict:
    """JSON-ready mapping with coefficients in increasing degree."""
    out = {"k": k, "q": q}
    if a is not None:
        out["a"] = a
    out["coeffs"] = list(poly.coeffs)
    return out


def _working_orders(k: int) -> tuple[int, int]:
    """(zeta-power order, correction order) for residue extraction at fold k.

    The residue needs the full principal part of the product and two guard
    coefficients; the zeta-power order is additionally capped by the
    tabulated expansion constants.
    """
    return min(k + 2, MAX_SERIES_ORDER - (k - 1)), k + 2


@lru_cache(maxsize=None)
def _residue_poly(q: int, delta: int, k: int) -> LogPoly:
    """Residue at s=1 of X^(s-1)/s * zeta(s)^k * correction(q, delta),
    as a polynomial in log X of degree <= k-1."""
    ord_z, ord_c = _working_orders(k)
    g = zeta_power_series(k, ord_z) * constrained_dirichlet_correction(
        q, delta, k, ord_c
    )
    h = g * _inv_s_series(ord_c)
    return LogPoly(
        tuple(h[-1 - j] / math.factorial(j) for j in range(k))
    )


def ap_main_term(q: int, a: int, k: int) -> LogPoly:
    """Density polynomial f(q, a): the class a mod q holds X*f/q of the
    total divisor-function mass up to X, asymptotically.

    Depends on a only through gcd(q, a).  Degree <= k-1.
    """
    if not 1 <= k <= 8:
        raise DomainError(f"fold parameter must lie in 1..8, got {k}")
    if q < 1 or not 1 <= a <= q:
        raise DomainError(f"need 1 <= a <= q, got a={a}, q={q}")
    delta = math.gcd(q, a)
    scale = q / euler_phi(q // delta)
    return scale * _residue_poly(q, delta, k)


@lru_cache(maxsize=None)
def m_poly(q: int, k: int) -> LogPoly:
    """Reduced-fraction main-term polynomial M(q), degree <= k-1.

    Defined through the divisor-lattice recursion
        M(q) = (q/phi(q)) * ( f(q, q) - sum_{d|q, d<q} phi(d) M(d) / d ),
    base M(1) = f(1, 1); the transform f(q, a) = sum_{d|q} c_d(a) M(d) / d
    is verified in the test suite.
    """
    if not 1 <= k <= 8:
        raise DomainError(f"fold parameter must lie in 1..8, got {k}")
    if q < 1:
        raise DomainError(f"modulus must be >= 1, got {q}")
    acc = ap_main_term(q, q, k)
    if q == 1:
        return acc
    for d in divisors(q):
        if d == q:
            continue
        acc = acc - (euler_phi(d) / d) * m_poly(d, k)
    return (q / euler_phi(q)) * acc


def f_star(q: int, k: int) -> LogPoly:
    """Quadratic mean sum_{d|q} phi(d) M(d)^2 / d^2, degree <= 2k-2."""
    if q < 1:
        raise DomainError(f"modulus must be >= 1, got {q}")
    acc = LogPoly((0.0,) * (2 * k - 1))
    for d in divisors(q):
        m = m_poly(d, k)
        acc = acc + (euler_phi(d) / d**2) * (m * m)
    return acc
