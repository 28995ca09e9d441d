"""Classical test statistics with self-contained tail probabilities.

Implements one-way ANOVA, Kruskal-Wallis with tie correction, Pearson's
chi-squared test of independence, and Cohen's d. The chi-squared and F
survival functions are computed from the regularized incomplete gamma and
beta functions (power series plus Lentz continued fractions) rather than
lookup tables or an external numerical library, and are accurate to well
below 1e-8 relative error over the tested domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import (
    AllTiedError,
    DegenerateVarianceError,
    ValidationFailureError,
    ZeroExpectedCellError,
    ZeroPooledSDError,
)

_EPS = 1e-15
_FPMIN = 1e-300
_MAX_ITER = 500


@dataclass(frozen=True)
class TestResult:
    """Outcome of a statistical test."""

    kind: str
    statistic: float
    df: tuple[float, ...]
    p_value: float
    details: dict = field(default_factory=dict)


# Regularized incomplete gamma and beta


def _gamma_p_series(a: float, x: float) -> float:
    """Lower regularized gamma P(a, x) by power series; valid for x < a + 1."""
    term = 1.0 / a
    total = term
    n = 0
    while n < _MAX_ITER:
        n += 1
        term *= x / (a + n)
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))

def _gamma_q_cf(a: float, x: float) -> float:
    """Upper regularized gamma Q(a, x) by Lentz continued fraction; x >= a + 1."""
    b = x + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def regularized_gamma_p(a: float, x: float) -> float:
    """Lower regularized incomplete gamma function P(a, x)."""
    if a <= 0:
        raise ValidationFailureError("gamma shape must be positive")
    if x < 0:
        raise ValidationFailureError("gamma argument must be non-negative")
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        return _gamma_p_series(a, x)
    return 1.0 - _gamma_q_cf(a, x)


def regularized_gamma_q(a: float, x: float) -> float:
    """Upper regularized incomplete gamma function Q(a, x) = 1 - P(a, x)."""
    if a <= 0:
        raise ValidationFailureError("gamma shape must be positive")
    if x < 0:
        raise ValidationFailureError("gamma argument must be non-negative")
    if x == 0.0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_p_series(a, x)
    return _gamma_q_cf(a, x)


def _beta_cf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h


def regularized_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    if a <= 0 or b <= 0:
        raise ValidationFailureError("beta shape parameters must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValidationFailureError("beta argument must lie in [0, 1]")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    front = math.exp(
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    # The continued fraction converges fastest below the distribution mean.
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


def chi_squared_sf(x: float, df: float) -> float:
    """Survival function of the chi-squared distribution."""
    if df <= 0:
        raise ValidationFailureError("chi-squared df must be positive")
    if x <= 0:
        return 1.0
    return regularized_gamma_q(df / 2.0, x / 2.0)


def f_sf(x: float, df1: float, df2: float) -> float:
    """Survival function of the F distribution."""
    if df1 <= 0 or df2 <= 0:
        raise ValidationFailureError("F df must be positive")
    if x <= 0:
        return 1.0
    return regularized_beta(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * x))


# Tests


def _validate_groups(groups: Mapping[str, Sequence[float]], min_size: int) -> list[list[float]]:
    if len(groups) < 2:
        raise ValidationFailureError("need at least two groups")
    out = []
    for label, values in groups.items():
        vals = [float(v) for v in values]
        if len(vals) < min_size:
            raise ValidationFailureError(
                f"group {label!r} has {len(vals)} observations, needs at least {min_size}"
            )
        out.append(vals)
    return out


def one_way_anova(groups: Mapping[str, Sequence[float]]) -> TestResult:
    """One-way fixed-effects analysis of variance: F = MSB / MSW."""
    data = _validate_groups(groups, min_size=2)
    k = len(data)
    n_total = sum(len(g) for g in data)
    grand = sum(sum(g) for g in data) / n_total
    ssb = sum(len(g) * (sum(g) / len(g) - grand) ** 2 for g in data)
    ssw = sum(sum((v - sum(g) / len(g)) ** 2 for v in g) for g in data)
    df_between = k - 1
    df_within = n_total - k
    if ssw == 0.0:
        raise DegenerateVarianceError("within-group variance is zero")
    msb = ssb / df_between
    msw = ssw / df_within
    f = msb / msw
    return TestResult(
        kind="one_way_anova",
        statistic=f,
        df=(float(df_between), float(df_within)),
        p_value=f_sf(f, df_between, df_within),
    )


def _midranks(values: Sequence[float]) -> list[float]:
    """Ranks 1..n with ties sharing the mean of their rank block."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mid = (i + j) / 2.0 + 1.0
        for idx in order[i : j + 1]:
            ranks[idx] = mid
        i = j + 1
    return ranks


def kruskal_wallis(groups: Mapping[str, Sequence[float]]) -> TestResult:
    """Kruskal-Wallis rank test with the standard tie correction."""
    data = _validate_groups(groups, min_size=2)
    pooled: list[float] = [v for g in data for v in g]
    n = len(pooled)
    if len(set(pooled)) == 1:
        raise AllTiedError("every observation is identical")
    ranks = _midranks(pooled)
    h = 0.0
    offset = 0
    for g in data:
        r = ranks[offset : offset + len(g)]
        h += (sum(r) ** 2) / len(g)
        offset += len(g)
    h = 12.0 / (n * (n + 1)) * h - 3.0 * (n + 1)
    # Tie correction: divide by 1 - sum(t^3 - t) / (n^3 - n).
    tie_counts: dict[float, int] = {}
    for v in pooled:
        tie_counts[v] = tie_counts.get(v, 0) + 1
    correction = 1.0 - sum(t**3 - t for t in tie_counts.values()) / (n**3 - n)
    h /= correction
    df = len(data) - 1
    return TestResult(
        kind="kruskal_wallis",
        statistic=h,
        df=(float(df),),
        p_value=chi_squared_sf(h, df),
    )


def chi_squared_independence(table: Sequence[Sequence[float]]) -> TestResult:
    """Pearson chi-squared test of independence on a contingency table."""
    rows = [list(map(float, row)) for row in table]
    if len(rows) < 2 or any(len(r) != len(rows[0]) for r in rows) or len(rows[0]) < 2:
        raise ValidationFailureError("table must be rectangular, at least 2x2")
    if any(v < 0 for r in rows for v in r):
        raise ValidationFailureError("counts must be non-negative")
    row_sums = [sum(r) for r in rows]
    col_sums = [sum(r[j] for r in rows) for j in range(len(rows[0]))]
    total = sum(row_sums)
    if total == 0:
        raise ZeroExpectedCellError("table has no observations")
    expected = [[rs * cs / total for cs in col_sums] for rs in row_sums]
    if any(e == 0 for er in expected for e in er):
        raise ZeroExpectedCellError("a zero marginal makes an expected count zero")
    stat = sum(
        (rows[i][j] - expected[i][j]) ** 2 / expected[i][j]
        for i in range(len(rows))
        for j in range(len(rows[0]))
    )
    df = (len(rows) - 1) * (len(rows[0]) - 1)
    return TestResult(
        kind="chi_squared_independence",
        statistic=stat,
        df=(float(df),),
        p_value=chi_squared_sf(stat, df),
        details={"expected": expected},
    )


def cohens_d(a: Sequence[float], b: Sequence[float]) -> float:
    """Cohen's d with the pooled (n-1 weighted) standard deviation."""
    xs = [float(v) for v in a]
    ys = [float(v) for v in b]
    if len(xs) < 2 or len(ys) < 2:
        raise ValidationFailureError("both samples need at least two observations")
    mean_x = sum(xs) / len(xs)
    mean_y = sum(ys) / len(ys)
    var_x = sum((v - mean_x) ** 2 for v in xs) / (len(xs) - 1)
    var_y = sum((v - mean_y) ** 2 for v in ys) / (len(ys) - 1)
    pooled = math.sqrt(
        ((len(xs) - 1) * var_x + (len(ys) - 1) * var_y) / (len(xs) + len(ys) - 2)
    )
    if pooled == 0.0:
        raise ZeroPooledSDError("pooled standard deviation is zero")
    return (mean_x - mean_y) / pooled
