"""Two-sample significance testing and win/loss bookkeeping.

The comparison protocol: run a method and its baseline R times each,
apply a two-tailed unequal-variance (Welch) t-test to the accuracy run
sets, and call the method a win when p < alpha and the mean difference
is positive, a loss when negative, and a tie otherwise. A pooled-variance
test is available behind a flag.

The Student-t tail probability is evaluated through the regularized
incomplete beta function (continued fraction, absolute error below
1e-10), so no stats library is needed at runtime.
"""

import math
from dataclasses import dataclass
from enum import Enum
from statistics import fmean

from .errors import NumericError, TooFewRuns

DEFAULT_ALPHA_SIG = 0.05


class Outcome(str, Enum):
    WIN = "win"
    LOSS = "loss"
    TIE = "tie"


@dataclass(frozen=True)
class Verdict:
    p_value: float
    mean_diff: float
    outcome: Outcome


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 400):
        m2 = 2 * m
        coef = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + coef * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + coef / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        coef = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + coef * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + coef / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            return h
    raise NumericError(f"incomplete beta failed to converge for a={a} b={b} x={x}")


def betainc_reg(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if a <= 0.0 or b <= 0.0:
        raise ValueError(f"a and b must be positive, got a={a} b={b}")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_two_tailed_p(t: float, df: float) -> float:
    """P(|T| >= |t|) for T Student-t with ``df`` degrees of freedom."""
    if df <= 0.0:
        raise ValueError(f"df must be positive, got {df}")
    if math.isinf(t):
        return 0.0
    return betainc_reg(df / 2.0, 0.5, df / (df + t * t))


def _sample_variance(values, mean):
    return sum((v - mean) ** 2 for v in values) / (len(values) - 1)


def welch_ttest(a, b, pooled: bool = False):
    """Two-tailed two-sample t-test: returns (t, df, p).

    By default the unequal-variance form with Welch-Satterthwaite degrees
    of freedom; set ``pooled`` for the classic equal-variance test. Sample
    variances use the n-1 denominator. When both samples have zero
    variance the test is degenerate: p = 1 for equal means, p = 0
    otherwise, by convention.
    """
    a = [float(x) for x in a]
    b = [float(x) for x in b]
    if len(a) < 2 or len(b) < 2:
        raise TooFewRuns(f"need at least 2 runs per side, got {len(a)} and {len(b)}")
    na, nb = len(a), len(b)
    ma, mb = fmean(a), fmean(b)
    va, vb = _sample_variance(a, ma), _sample_variance(b, mb)

    if va == 0.0 and vb == 0.0:
        df = float(na + nb - 2)
        if ma == mb:
            return 0.0, df, 1.0
        return math.copysign(math.inf, ma - mb), df, 0.0

    if pooled:
        sp2 = ((na - 1) * va + (nb - 1) * vb) / (na + nb - 2)
        se = math.sqrt(sp2 * (1.0 / na + 1.0 / nb))
        df = float(na + nb - 2)
    else:
        ra, rb = va / na, vb / nb
        se = math.sqrt(ra + rb)
        # Welch-Satterthwaite with the ratios normalized first, so the
        # squares cannot underflow when one variance is astronomically
        # smaller than the other
        wa, wb = ra / (ra + rb), rb / (ra + rb)
        df = 1.0 / (wa**2 / (na - 1) + wb**2 / (nb - 1))
    t = (ma - mb) / se
    p = student_t_two_tailed_p(t, df)
    return t, df, min(max(p, 0.0), 1.0)


def compare(method, baseline, alpha_sig: float = DEFAULT_ALPHA_SIG,
            pooled: bool = False) -> Verdict:
    """Verdict of a method run set against its baseline run set."""
    _, _, p = welch_ttest(method, baseline, pooled=pooled)
    diff = fmean(method) - fmean(baseline)
    if p < alpha_sig and diff > 0.0:
        outcome = Outcome.WIN
    elif p < alpha_sig and diff < 0.0:
        outcome = Outcome.LOSS
    else:
        outcome = Outcome.TIE
    return Verdict(p_value=p, mean_diff=diff, outcome=outcome)


def tally(verdicts) -> tuple[int, int]:
    """(wins, losses) across verdicts; ties are not counted."""
    wins = sum(1 for v in verdicts if v.outcome is Outcome.WIN)
    losses = sum(1 for v in verdicts if v.outcome is Outcome.LOSS)
    return wins, losses


def heatmap_value(verdict: Verdict) -> float:
    """Signed significance in [-1, 1]: (1 - p) carrying the sign of the
    mean difference, 0 for p = 1 or no difference."""
    if verdict.mean_diff > 0.0:
        return 1.0 - verdict.p_value
    if verdict.mean_diff < 0.0:
        return -(1.0 - verdict.p_value)
    return 0.0


__all__ = [
    "DEFAULT_ALPHA_SIG",
    "Outcome",
    "Verdict",
    "betainc_reg",
    "student_t_two_tailed_p",
    "welch_ttest",
    "compare",
    "tally",
    "heatmap_value",
]
