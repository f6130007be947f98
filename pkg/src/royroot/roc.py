"""Detector operating characteristics built on the exact eigenvalue CDFs:
false-alarm calibration, detection probability, the closed-form m = n ROC,
optimal sample-count analysis, the low-SNR expansion, and asymptotic ROCs.

Thresholds are calibrated against the null CDF of the test statistic (the
p/n-rescaled largest eigenvalue) and reported in that scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .finite_cdf import (ProblemDims, SpikeParam, cdf_null, cdf_test_statistic,
                         psi_minor_determinant)

__all__ = [
    "BracketingError",
    "RocPoint",
    "RocCurve",
    "calibrate_threshold",
    "detection_probability",
    "roc_closed_form_alpha0",
    "roc_curve",
    "pstar_bounds",
    "pstar_approx",
    "optimize_pstar",
    "low_snr_slope",
    "low_snr_slope_balanced",
    "asymptotic_roc_p_infinity",
    "asymptotic_roc_scaled",
    "snr_from_db",
    "snr_to_db",
]

_PROB_TOL = 1e-12


class BracketingError(RuntimeError):
    """Root bracketing failed; signals out-of-envelope dimensions."""


@dataclass(frozen=True)
class RocPoint:
    p_false_alarm: float
    p_detection: float
    threshold: float

    def __post_init__(self):
        if not 0.0 <= self.p_false_alarm <= 1.0:
            raise ValueError(f"p_false_alarm out of [0,1]: {self.p_false_alarm}")
        if not 0.0 <= self.p_detection <= 1.0:
            raise ValueError(f"p_detection out of [0,1]: {self.p_detection}")
        if not self.threshold > 0:
            raise ValueError(f"threshold must be positive, got {self.threshold}")


@dataclass(frozen=True)
class RocCurve:
    dims: ProblemDims
    gamma: float
    points: tuple

    def __post_init__(self):
        pf = [pt.p_false_alarm for pt in self.points]
        if any(b <= a for a, b in zip(pf, pf[1:])):
            raise ValueError("points must be strictly increasing in p_false_alarm")


def snr_from_db(db: float) -> float:
    return 10.0 ** (db / 10.0)


def snr_to_db(gamma: float) -> float:
    if gamma <= 0:
        raise ValueError(f"linear SNR must be positive to convert to dB, got {gamma}")
    return 10.0 * math.log10(gamma)


def _invert_null_cdf(dims: ProblemDims, prob: float) -> float:
    """Solve cdf_null(dims, T) = prob for T (F-matrix scale).

    Bracketed bisection with a guarded secant refinement each iteration;
    converges to |cdf - prob| <= 1e-12.  Strict monotonicity of the CDF
    makes the root unique.
    """
    def f(t):
        return cdf_null(dims, t) - prob

    lo = hi = 1.0
    flo = fhi = f(1.0)
    for _ in range(80):
        if fhi > 0:
            break
        hi *= 4.0
        fhi = f(hi)
    else:
        raise BracketingError(f"no upper bracket: cdf({hi:.3g}) = {fhi + prob:.6g} < {prob}")
    for _ in range(80):
        if flo < 0:
            break
        lo /= 4.0
        flo = f(lo)
    else:
        raise BracketingError(f"no lower bracket: cdf({lo:.3g}) = {flo + prob:.6g} > {prob}")

    best, fbest = (lo, flo) if abs(flo) < abs(fhi) else (hi, fhi)
    for _ in range(300):
        if abs(fbest) <= _PROB_TOL:
            return best
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if abs(fmid) < abs(fbest):
            best, fbest = mid, fmid
        if fmid < 0:
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
        # secant step inside the updated bracket
        if fhi != flo:
            sec = lo - flo * (hi - lo) / (fhi - flo)
            if lo < sec < hi:
                fsec = f(sec)
                if abs(fsec) < abs(fbest):
                    best, fbest = sec, fsec
                if fsec < 0:
                    lo, flo = sec, fsec
                else:
                    hi, fhi = sec, fsec
        if hi - lo <= 1e-15 * max(1.0, hi):
            break
    if abs(fbest) <= 1e-9:
        return best
    raise BracketingError(
        f"calibration stalled on [{lo:.17g}, {hi:.17g}] with residual {fbest:.3g}")


def calibrate_threshold(dims: ProblemDims, p_false_alarm: float) -> float:
    """Threshold mu with Pr(statistic > mu | no signal) = p_false_alarm.

    Reported in the test-statistic scale; divide out kappa = p/n to land in
    the F-matrix scale.
    """
    if not 0.0 < p_false_alarm < 1.0:
        raise ValueError(f"p_false_alarm must be in (0,1), got {p_false_alarm}")
    return _invert_null_cdf(dims, 1.0 - p_false_alarm) / dims.kappa


def detection_probability(dims: ProblemDims, gamma: float, threshold: float) -> float:
    """Pr(statistic > threshold) under a spike of strength gamma."""
    if not threshold > 0:
        raise ValueError(f"threshold must be positive, got {threshold}")
    return 1.0 - cdf_test_statistic(dims, SpikeParam(gamma), threshold)


def roc_closed_form_alpha0(m: int, p: int, gamma: float, p_false_alarm: float) -> float:
    """Detection probability for the n = m detector in closed form:

        P_D = 1 - (1 - P_F) / (1 + gamma - gamma (1-P_F)^{1/(mp)})^p
    """
    if not 0.0 <= p_false_alarm <= 1.0:
        raise ValueError(f"p_false_alarm out of [0,1]: {p_false_alarm}")
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    q = 1.0 - p_false_alarm
    return 1.0 - q / (1.0 + gamma - gamma * q ** (1.0 / (m * p))) ** p


def roc_curve(dims: ProblemDims, gamma: float, p_false_alarm_grid) -> RocCurve:
    """Calibrate and detect across a strictly increasing grid of P_F values."""
    grid = [float(v) for v in p_false_alarm_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("p_false_alarm grid must be strictly increasing")
    if grid and not (0.0 < grid[0] and grid[-1] < 1.0):
        raise ValueError("p_false_alarm grid must lie inside (0,1)")
    points = []
    for pf in grid:
        mu = calibrate_threshold(dims, pf)
        points.append(RocPoint(pf, detection_probability(dims, gamma, mu), mu))
    return RocCurve(dims, gamma, tuple(points))


def pstar_bounds(nu: float, gamma: float, p_false_alarm: float):
    """(lower, upper) bracket for the sample count maximizing P_D when m = nu*p.

    lower = sqrt(-ln(1-P_F) / (-2 nu ln((g+1)/(g+2)))),
    upper = sqrt(-ln(1-P_F) / (-nu ln((g+2)/(g+4)))); lower < upper always.
    """
    if not (nu > 0 and gamma > 0 and 0.0 < p_false_alarm < 1.0):
        raise ValueError("require nu > 0, gamma > 0 and p_false_alarm in (0,1)")
    top = -math.log1p(-p_false_alarm)
    lower = math.sqrt(top / (-2.0 * nu * math.log((gamma + 1.0) / (gamma + 2.0))))
    upper = math.sqrt(top / (-nu * math.log((gamma + 2.0) / (gamma + 4.0))))
    return lower, upper


def pstar_approx(nu: float, gamma: float, p_false_alarm: float) -> float:
    """Midpoint of pstar_bounds, the working approximation to the optimum."""
    lower, upper = pstar_bounds(nu, gamma, p_false_alarm)
    return 0.5 * (lower + upper)


def _pd_at_continuous_p(p: float, nu: float, gamma: float, p_false_alarm: float) -> float:
    # m = nu * p, so the closed form depends on p only through nu * p^2
    q = 1.0 - p_false_alarm
    return 1.0 - q / (1.0 + gamma - gamma * q ** (1.0 / (nu * p * p))) ** p


def _golden_max(f, lo: float, hi: float, tol: float = 1e-10):
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol * max(1.0, abs(a) + abs(b)):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def optimize_pstar(nu: float, gamma: float, p_false_alarm: float):
    """(continuous, integer) sample counts maximizing the m = nu*p closed form.

    Continuous optimum by golden-section search on [lower/2, 2*upper]; the
    integer optimum is the better of the neighbouring integers (at least 1).
    """
    lower, upper = pstar_bounds(nu, gamma, p_false_alarm)
    f = lambda p: _pd_at_continuous_p(p, nu, gamma, p_false_alarm)
    p_cont = _golden_max(f, lower / 2.0, 2.0 * upper)
    cands = {max(1, math.floor(p_cont)), max(1, math.ceil(p_cont))}
    p_int = max(cands, key=f)
    return p_cont, p_int


def low_snr_slope_balanced(m: int, p: int, p_false_alarm: float) -> float:
    """First-order coefficient of P_D(gamma) - P_F at gamma -> 0 for n = m:

        p [1 - (1-P_F)^{1/(mp)}] (1-P_F)

    evaluated through expm1 so it stays accurate as p grows without bound.
    """
    if not 0.0 < p_false_alarm < 1.0:
        raise ValueError(f"p_false_alarm must be in (0,1), got {p_false_alarm}")
    q = 1.0 - p_false_alarm
    return p * (-math.expm1(math.log1p(-p_false_alarm) / (m * p))) * q


def low_snr_slope(dims: ProblemDims, p_false_alarm: float) -> float:
    """First-order coefficient of P_D(gamma) - P_F at gamma -> 0.

    For n = m this is the closed form of :func:`low_snr_slope_balanced`.
    For n > m it is p times

        z - ((p+n)/(p+m)) w z
          + K(m,p,alpha) (p+n)!/(p+m+1)! w^{m(alpha+beta+m)+1} det[minor]

    with z = 1 - P_F, T the null quantile of the F-matrix eigenvalue at z,
    w = T/(1+T), and the minor the Jacobi-column determinant with the second
    row dropped (the row whose hypergeometric entry carries the first-order
    spike response).
    """
    if not 0.0 < p_false_alarm < 1.0:
        raise ValueError(f"p_false_alarm must be in (0,1), got {p_false_alarm}")
    m, n, p, alpha = dims.m, dims.n, dims.p, dims.alpha
    if alpha == 0:
        return low_snr_slope_balanced(m, p, p_false_alarm)
    z = 1.0 - p_false_alarm
    T = _invert_null_cdf(dims, z)
    w = T / (1.0 + T)
    minor = psi_minor_determinant(dims, T, drop_row=2)
    log_k = sum(math.lgamma(p + m + j) - math.lgamma(p + m + 2 * j + 1)
                for j in range(alpha))
    log_t3 = (log_k + math.lgamma(p + n + 1) - math.lgamma(p + m + 2)
              + (m * (n + p - m) + 1) * math.log(w) + minor.log_magnitude)
    term3 = minor.sign * math.exp(log_t3)
    return p * (z - (p + n) / (p + m) * w * z + term3)


def asymptotic_roc_p_infinity(m: int, gamma: float, p_false_alarm: float) -> float:
    """Large-sample limit of the m = n ROC: P_D = 1 - (1-P_F)^{1 + gamma/m}."""
    if not 0.0 <= p_false_alarm <= 1.0:
        raise ValueError(f"p_false_alarm out of [0,1]: {p_false_alarm}")
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    return -math.expm1((1.0 + gamma / m) * math.log1p(-p_false_alarm))


def asymptotic_roc_scaled(theta: float, p_false_alarm: float) -> float:
    """High-dimensional ROC with the spike scaling like theta * m:
    P_D = 1 - (1-P_F)^{1+theta}, independent of the m/p ratio."""
    if theta < 0:
        raise ValueError(f"theta must be >= 0, got {theta}")
    if not 0.0 <= p_false_alarm <= 1.0:
        raise ValueError(f"p_false_alarm out of [0,1]: {p_false_alarm}")
    return -math.expm1((1.0 + theta) * math.log1p(-p_false_alarm))
