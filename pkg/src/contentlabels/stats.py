"""Pearson correlation with exact two-sided t-test p-values.

The p-value comes from the regularized incomplete beta function computed
with a modified-Lentz continued fraction, so no statistics library is
needed at runtime.
"""

import math

import numpy as np

from .errors import ConstantInput, LengthMismatch

_BETACF_MAX_ITER = 300
_BETACF_EPS = 3e-16
_FPMIN = 1e-300


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _BETACF_MAX_ITER + 1):
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
        if abs(delta - 1.0) < _BETACF_EPS:
            break
    return h


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def pearson(a, b) -> tuple[float, float]:
    """Pearson r between two vectors plus its two-sided p-value.

    The p-value tests r against zero with the t statistic
    t = r * sqrt((n - 2) / (1 - r^2)) on n - 2 degrees of freedom, which
    reduces to I_{1-r^2}(nu/2, 1/2).

    Raises LengthMismatch for unequal or too-short (< 3) vectors and
    ConstantInput when either vector has zero variance.
    """
    av = np.asarray(a, dtype=np.float64)
    bv = np.asarray(b, dtype=np.float64)
    if av.ndim != 1 or bv.ndim != 1 or av.shape != bv.shape:
        raise LengthMismatch(f"vector shapes differ: {av.shape} vs {bv.shape}")
    n = av.size
    if n < 3:
        raise LengthMismatch(f"need at least 3 observations, got {n}")

    ac = av - av.mean()
    bc = bv - bv.mean()
    ss_a = float(np.dot(ac, ac))
    ss_b = float(np.dot(bc, bc))
    if ss_a == 0.0 or ss_b == 0.0:
        raise ConstantInput("correlation is undefined for a constant vector")

    # sqrt of the product (not a product of sqrts) keeps exact cases exact,
    # e.g. ([1,2,3,4], [1,3,2,4]) -> 4/sqrt(25) == 0.8
    r = float(np.dot(ac, bc)) / math.sqrt(ss_a * ss_b)
    r = max(-1.0, min(1.0, r))

    if abs(r) == 1.0:
        return r, 0.0
    nu = n - 2
    p = regularized_incomplete_beta(nu / 2.0, 0.5, max(0.0, min(1.0, 1.0 - r * r)))
    return r, max(0.0, min(1.0, p))
