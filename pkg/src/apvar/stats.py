"""Error terms, variance over progressions, and the identity checks.

For a sieved table this module forms the per-class error
E(q, a) = A(x; q, a) - x f(q, a)/q, the variance V_x(q) = sum_a E^2 and its
average V(x, Q) = sum_{q<=Q} V_x(q), and the deviation of the exponential
sum from its predicted main term.  Two families of cross-checks are wired
in: a Plancherel identity relating the class errors to the exponential-sum
deviations, and the expansion of the variance into congruence, cross and
main-term pieces.  Exact integer aggregates are converted to floats at the
last step; long float reductions go through math.fsum.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .arith import divisors
from .errors import DomainError, ResourceError
from .residues import (
    LogPoly,
    ap_main_term,
    correction_value_at,
    eval_logpoly,
    f_star,
    m_poly,
)
from .sieve import DkTable, ResidueClassSums, ap_sums, exp_sum, sieve_dk

DEFAULT_WORK_BUDGET = 4 * 10**9


@dataclass(frozen=True)
class ErrorVector:
    """e[a] = A(x; q, a) - x f(q, a)/q for a in 1..q (index 0 unused)."""

    q: int
    x: int
    k: int
    e: np.ndarray


@dataclass(frozen=True)
class DeltaValue:
    """Deviation of S_X(a/q) from X M(q/(q,a)) / (q/(q,a))."""

    value: complex
    a: int
    q: int
    X: int


@dataclass(frozen=True)
class VarianceReport:
    """Per-modulus variances, their total, and the three expansion terms.

    congruence_term is the exact integer sum over q of sum_a A(x;q,a)^2;
    cross_term and main_term carry the -2x and x^2 pieces of the expanded
    square.
    """

    x: int
    Q: int
    k: int
    per_q: tuple[float, ...]
    total: float
    congruence_term: int
    cross_term: float
    main_term: float


def _eval_main(poly: LogPoly, x: float) -> float:
    """Horner at log x, accepting the degenerate cutoff x = 1 (log x = 0)."""
    if x < 1:
        raise DomainError(f"cutoff must be >= 1, got {x}")
    if x == 1:
        return poly.coeffs[0]
    return eval_logpoly(poly, x)


def _density_values(q: int, x: float, k: int) -> np.ndarray:
    """f(q, a) evaluated at x for a = 1..q, via the gcd lookup."""
    divs = divisors(q)
    by_gcd = np.array([_eval_main(ap_main_term(q, d, k), x) for d in divs])
    gcds = np.gcd(np.arange(1, q + 1, dtype=np.int64), q)
    return by_gcd[np.searchsorted(divs, gcds)]


def error_vector(table: DkTable, q: int, x: int, k: int | None = None) -> ErrorVector:
    """Exact class sums minus evaluated main terms."""
    k = table.k if k is None else k
    if k != table.k:
        raise DomainError(f"table holds k={table.k}, requested {k}")
    counts = ap_sums(table, q, x).sums[1:]
    f_vals = _density_values(q, float(x), k)
    e = np.zeros(q + 1, dtype=np.float64)
    e[1:] = counts.astype(np.float64) - (x / q) * f_vals
    return ErrorVector(q=q, x=x, k=k, e=e)


def delta_value(cls: ResidueClassSums, a: int, k: int | None = None) -> DeltaValue:
    """S_X(a/q) minus X M(q/(q,a)) / (q/(q,a)) at X = cls.X."""
    k = cls.k if k is None else k
    q = cls.q
    r = a % q
    g = math.gcd(q, r) if r else q
    qr = q // g
    s = exp_sum(cls, a)
    main = cls.X * _eval_main(m_poly(qr, k), float(cls.X)) / qr
    return DeltaValue(value=s.value - main, a=r, q=q, X=cls.X)


def variance_q(table: DkTable, q: int, x: int, k: int | None = None) -> float:
    """V_x(q) = sum over classes of the squared error."""
    ev = error_vector(table, q, x, k)
    return float(np.sum(ev.e * ev.e))


def variance_total(
    table: DkTable,
    x: int,
    Q: int,
    k: int | None = None,
    *,
    threads: int = 1,
) -> VarianceReport:
    """V(x, Q) plus the three expansion terms, reduced in ascending q order.

    Per-q work may run on a thread pool; the final reduction is serial and
    ordered, so results do not depend on the thread count.
    """
    k = table.k if k is None else k
    if k != table.k:
        raise DomainError(f"table holds k={table.k}, requested {k}")
    if not 1 <= Q <= x:
        raise DomainError(f"need 1 <= Q <= x, got Q={Q}, x={x}")
    if x > table.x:
        raise DomainError(f"cutoff {x} beyond table limit {table.x}")

    def per_q(q: int):
        counts = ap_sums(table, q, x).sums[1:]
        f_vals = _density_values(q, float(x), k)
        cf = counts.astype(np.float64)
        e = cf - (x / q) * f_vals
        v = float(np.sum(e * e))
        congr = sum(int(c) * int(c) for c in counts.tolist())
        cross = -2.0 * x / q * float(np.sum(cf * f_vals))
        main = (x / q) ** 2 * float(np.sum(f_vals * f_vals))
        return v, congr, cross, main

    rows = [None] * Q
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for i, row in enumerate(pool.map(per_q, range(1, Q + 1))):
                rows[i] = row
    else:
        for i in range(Q):
            rows[i] = per_q(i + 1)

    per_q_v = tuple(r[0] for r in rows)
    return VarianceReport(
        x=x,
        Q=Q,
        k=k,
        per_q=per_q_v,
        total=math.fsum(per_q_v),
        congruence_term=sum(r[1] for r in rows),
        cross_term=math.fsum(r[2] for r in rows),
        main_term=math.fsum(r[3] for r in rows),
    )


def parseval_check(
    table: DkTable, q: int, x: int, k: int | None = None
) -> tuple[float, float]:
    """Both sides of sum_a E^2 = (1/q) sum_a |Delta(a/q)|^2.

    The left side runs through class sums and the density polynomials; the
    right side through exponential sums and the reduced-modulus
    polynomials.  Agreement is an exact identity up to rounding.
    """
    ev = error_vector(table, q, x, k)
    lhs = math.fsum(float(t) for t in ev.e[1:] * ev.e[1:])
    cls = ap_sums(table, q, x)
    rhs = (
        math.fsum(abs(delta_value(cls, a, k).value) ** 2 for a in range(1, q + 1)) / q
    )
    return lhs, rhs


def variance_expansion_check(
    table: DkTable,
    x: int,
    Q: int,
    k: int | None = None,
    *,
    budget: int = DEFAULT_WORK_BUDGET,
) -> tuple[float, float]:
    """Variance computed directly versus through its three-term expansion."""
    if x * Q > budget:
        raise ResourceError(
            f"expansion check needs ~{x * Q} element operations, budget {budget}"
        )
    report = variance_total(table, x, Q, k)
    expanded = float(report.congruence_term) + report.cross_term + report.main_term
    return report.total, expanded


def density_square_sum_check(q: int, x: float, k: int) -> tuple[float, float]:
    """sum_a f(q, a)^2 at x versus q times the quadratic-mean polynomial."""
    lhs = math.fsum(
        _eval_main(ap_main_term(q, a, k), x) ** 2 for a in range(1, q + 1)
    )
    rhs = q * _eval_main(f_star(q, k), x)
    return lhs, rhs


def dirichlet_partial_sum_check(
    table: DkTable, q: int, delta: int, *, s: float = 2.0
) -> tuple[float, float]:
    """Partial sum of d_k(n)/n^s over gcd(n, q) = delta, against
    zeta(s)^k times the correction product evaluated directly at s."""
    if s != 2.0:
        raise DomainError("only s=2 is supported (zeta value known in closed form)")
    n = np.arange(table.x + 1, dtype=np.int64)
    mask = np.gcd(n, q) == delta
    mask[0] = False
    terms = table.values[mask].astype(np.float64) / n[mask].astype(np.float64) ** s
    lhs = math.fsum(terms.tolist())
    zeta_s = math.pi**2 / 6.0
    rhs = zeta_s**table.k * correction_value_at(q, delta, table.k, s)
    return lhs, rhs


def regression_slope(xs, ys) -> float:
    """Least-squares slope of ys against xs."""
    n = len(xs)
    if n < 2 or n != len(ys):
        raise DomainError("regression needs two or more paired points")
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    sxx = math.fsum((t - mx) ** 2 for t in xs)
    sxy = math.fsum((t - mx) * (u - my) for t, u in zip(xs, ys))
    return sxy / sxx


def deviation_decay_slope(
    table: DkTable, q: int, a: int, cutoffs, k: int | None = None
) -> tuple[list[float], float]:
    """|Delta_X(a/q)| at each cutoff plus the slope of log|Delta| vs log X."""
    mags = [
        abs(delta_value(ap_sums(table, q, X), a, k).value) for X in cutoffs
    ]
    slope = regression_slope(
        [math.log(X) for X in cutoffs], [math.log(m) for m in mags]
    )
    return mags, slope


@dataclass(frozen=True)
class GrowthStudy:
    """Measured variance growth along a grid, with the fitted slope of
    log V against log(xQ)."""

    k: int
    rows: tuple[tuple[int, int, float, float], ...]  # (x, Q, V, V/(xQ))
    slope: float


def growth_csv(study: GrowthStudy) -> str:
    """Growth rows in the plot-ready schema x,Q,V,V_over_xQ."""
    lines = ["x,Q,V,V_over_xQ"]
    lines += [
        f"{x},{Q},{format(v, '.17g')},{format(r, '.17g')}"
        for x, Q, v, r in study.rows
    ]
    return "\n".join(lines) + "\n"


def growth_study(
    k: int,
    x_grid,
    q_rule,
    *,
    threads: int = 1,
    sieve=None,
) -> GrowthStudy:
    """Compute V(x, Q) along x_grid with Q = q_rule(x).

    q_rule is either a callable x -> Q, a ("power", c) pair for Q = x^c, or
    a ("ratio", r) pair for Q = x/r.  One table is sieved at max(x_grid)
    and shared across the grid.
    """
    xs = sorted(set(int(t) for t in x_grid))
    if not xs:
        raise DomainError("x grid is empty")
    if callable(q_rule):
        rule = q_rule
    else:
        kind, value = q_rule
        if kind == "power":
            rule = lambda t: int(round(t**value))
        elif kind == "ratio":
            rule = lambda t: int(round(t / value))
        else:
            raise DomainError(f"unknown Q rule {kind!r}")
    table = sieve if sieve is not None else sieve_dk(xs[-1], k, threads=threads)
    rows = []
    for x in xs:
        Q = max(1, min(rule(x), x))
        rep = variance_total(table, x, Q, k, threads=threads)
        rows.append((x, Q, rep.total, rep.total / (x * Q)))
    if len(rows) < 2:
        slope = math.nan  # a slope needs at least two grid points
    else:
        slope = regression_slope(
            [math.log(x * Q) for x, Q, _, _ in rows],
            [math.log(v) for _, _, v, _ in rows],
        )
    return GrowthStudy(k=k, rows=tuple(rows), slope=slope)
