"""Summary statistics across reboots: bias prevalence and one-sample t-tests."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

_EPS = 1e-15
_TINY = 1e-300
_MAX_ITER = 500


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return x
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(log_front)
    # the continued fraction converges fast only for x < (a+1)/(a+b+2)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def t_sf_two_sided(t: float, df: float) -> float:
    """P(|T| >= |t|) for Student's t with ``df`` degrees of freedom."""
    if math.isinf(t):
        return 0.0
    if t == 0.0:
        return 1.0
    return betainc(0.5 * df, 0.5, df / (df + t * t))


def t_cdf(t: float, df: float) -> float:
    tail = 0.5 * t_sf_two_sided(t, df)
    return 1.0 - tail if t > 0 else tail


@dataclass(frozen=True)
class TTestResult:
    mean: float
    sem: float
    t: float
    df: int
    p: float


def one_sample_t(values) -> TTestResult:
    """Two-sided one-sample t-test of the mean against zero.

    A zero-variance sample gives t = ±inf, p = 0 when its mean is
    nonzero, and t = 0, p = 1 when it is exactly zero.
    """
    x = np.asarray(values, dtype=float)
    n = x.size
    if n < 2:
        raise ValueError(f"one_sample_t needs at least 2 values, got {n}")
    df = n - 1
    if np.all(x == x[0]):
        # exact check: summing n copies of c need not give n*c in floating point
        mean, sem = float(x[0]), 0.0
    else:
        mean = float(x.mean())
        sem = float(x.std(ddof=1) / math.sqrt(n))
    if sem == 0.0:
        if mean == 0.0:
            return TTestResult(mean, 0.0, 0.0, df, 1.0)
        return TTestResult(mean, 0.0, math.copysign(math.inf, mean), df, 0.0)
    t = mean / sem
    return TTestResult(mean, sem, t, df, t_sf_two_sided(t, df))


def bias_prevalence(final_values) -> float:
    """Percentage of entries strictly greater than zero."""
    x = np.asarray(final_values, dtype=float)
    if x.size == 0:
        raise ValueError("bias_prevalence needs at least one value")
    return 100.0 * np.count_nonzero(x > 0) / x.size


@dataclass
class SummaryRow:
    scenario: str
    n_reboots: int
    pct_positivity: float
    pct_perseveration: float
    mean_dalpha: float
    sem_dalpha: float
    t_dalpha: float
    p_dalpha: float
    mean_phi: float
    sem_phi: float
    t_phi: float
    p_phi: float
    mean_alpha: float
    mean_beta: float
    mean_tau: float
    # "sem" or "sd": what the sem_* columns hold
    spread: str = "sem"

    def as_dict(self) -> dict:
        return asdict(self)


def summarize_scenario(results, label: str, spread: str = "sem") -> SummaryRow:
    """Prevalence and t-tests of final-generation delta-alpha and phi.

    ``spread="sd"`` reports the across-reboot standard deviation in the
    ``sem_*`` fields instead of the standard error.
    """
    if spread not in ("sem", "sd"):
        raise ValueError(f"spread must be 'sem' or 'sd', got {spread!r}")
    results = list(results)
    if len(results) < 2:
        raise ValueError(f"need at least 2 reboots to summarize, got {len(results)}")
    dalpha = np.array([r.final_delta_alpha for r in results])
    phi = np.array([r.final_phi for r in results])
    td = one_sample_t(dalpha)
    tp = one_sample_t(phi)
    scale = math.sqrt(len(results)) if spread == "sd" else 1.0
    return SummaryRow(
        scenario=label,
        n_reboots=len(results),
        pct_positivity=bias_prevalence(dalpha),
        pct_perseveration=bias_prevalence(phi),
        mean_dalpha=td.mean,
        sem_dalpha=td.sem * scale,
        t_dalpha=td.t,
        p_dalpha=td.p,
        mean_phi=tp.mean,
        sem_phi=tp.sem * scale,
        t_phi=tp.t,
        p_phi=tp.p,
        mean_alpha=float(np.mean([r.final_mean_alpha for r in results])),
        mean_beta=float(np.mean([r.final_means["beta"] for r in results])),
        mean_tau=float(np.mean([r.final_means["tau"] for r in results])),
        spread=spread,
    )


def learning_curve(results, env: str) -> np.ndarray:
    """Final-generation correct-choice rate per trial, averaged over reboots.

    Every reboot runs the same number of agents, so the mean of the
    per-reboot curves equals the mean over all agents and reboots.
    """
    curves = []
    for r in results:
        if env not in r.learning_curves:
            raise KeyError(
                f"no learning curve for environment {env!r} in reboot {r.reboot}; "
                "run with record_learning_curves enabled"
            )
        curves.append(r.learning_curves[env])
    return np.mean(curves, axis=0)


def significance(p: float, mean: float) -> str:
    """Label used in report tables: '+'/'-' when p < 0.001, 'ns' when p > 0.05."""
    if p < 0.001:
        return "+" if mean > 0 else "-"
    if p > 0.05:
        return "ns"
    return "weak"
