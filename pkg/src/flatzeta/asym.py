"""Closed-form asymptotic constants and blow-up limit extraction.

The three laws of Z(sigma) as sigma -> -1/b are calibrated by:

    A        = int_0^inf x^(-a/b) (1 - e^(-1/(q x^p))) dx    (power regime)
    1/(p q)                                                   (log regime)
    L(lambda), M(lambda) and their optimized combinations     (bounded regime)

Limits are pulled out of a sigma-schedule by a least-squares fit whose basis
follows the proof-level corrections: lambda^-X and X^(c X) factors expand to
1 + O(X log X), the rescaled remainder carries an X^kappa term in the power
regime, and the log regime picks up a 1/|log X| correction from the constant
term riding on the (p q)^-1 log X growth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateLowerLimit,
    DomainError,
    IllConditionedFit,
    OptimizerBracketFailure,
    WrongRegime,
)
from .funcs import rho
from .model import (
    DEFAULT_CONFIG,
    FamilyParams,
    NumericConfig,
    RegimeKind,
    SigmaSchedule,
    classify_regime,
)
from .quad import EndpointSpec, integrate_1d, integrate_tail
from .zeta import ZetaSample, _ln_e_arr


class ScalingKind(Enum):
    POWER_LAW = "PowerLaw"
    LOG_LAW = "LogLaw"
    RAW = "Raw"


@dataclass(frozen=True)
class BlowupSequence:
    """Regime-scaled samples S_k along a schedule, ready for extrapolation."""

    schedule: SigmaSchedule
    scaled_values: tuple[float, ...]
    scaling_kind: ScalingKind
    blowup_exponent: float | None = None

    def __post_init__(self):
        if len(self.scaled_values) != len(self.schedule):
            raise DomainError("scaled values and schedule lengths differ")
        if any(s <= 0.0 for s in self.scaled_values):
            raise DomainError("scaled values must be positive")


@dataclass(frozen=True)
class Case3Bounds:
    """Optimized two-sided bracket for the bounded-regime limit of Z."""

    lower: float
    upper: float
    lambda_lower: float
    lambda_upper: float

    def __post_init__(self):
        if not self.lower <= self.upper:
            raise DomainError(f"bracket out of order: {self.lower} > {self.upper}")
        if self.lower <= 0.0:
            raise DomainError("bracket must be positive")


def constant_A(params: FamilyParams, cfg: NumericConfig = DEFAULT_CONFIG) -> float:
    """A = int_0^inf x^(-a/b) (1 - e(x)) dx, finite exactly when p > 1 - a/b.

    Split at x = 1: tanh-sinh on (0, 1] against the x^(-a/b) endpoint, and a
    certified tail with envelope (1/q) x^(-a/b - p) from 1 - e^(-t) <= t.
    """
    regime = classify_regime(params)
    if regime.kind is not RegimeKind.SUPERCRITICAL_FLAT:
        raise WrongRegime(f"A diverges in regime {regime.kind.value}")
    ab = params.a / params.b

    def f(xs):
        ln_es = _ln_e_arr(params, xs)
        with np.errstate(divide="ignore"):
            return np.exp(-ab * np.log(xs)) * (-np.expm1(ln_es))

    head = integrate_1d(f, 0.0, 1.0, EndpointSpec(exponent_lo=-ab),
                        tol=cfg.tol_1d, max_levels=cfg.max_subdivisions)
    gamma = -ab - params.p_float
    tail = integrate_tail(f, 1.0, gamma, envelope_k=1.0 / params.q,
                          tol=cfg.tol_1d, max_levels=cfg.max_subdivisions)
    return head.value + tail.value


def constant_A_closed_form(params: FamilyParams) -> float:
    """Reference value by the substitution t = 1/(q x^p):
    A = c^beta Gamma(1 - beta) / (p beta), c = 1/q, beta = (1 - a/b)/p."""
    regime = classify_regime(params)
    if regime.kind is not RegimeKind.SUPERCRITICAL_FLAT:
        raise WrongRegime("closed form needs the power regime")
    beta = (1.0 - params.a / params.b) / params.p_float
    c = 1.0 / params.q
    return c**beta * math.gamma(1.0 - beta) / (params.p_float * beta)


def constant_L(params: FamilyParams, lam: float,
               cfg: NumericConfig = DEFAULT_CONFIG) -> float:
    """Limit of the monomial-side auxiliary integral in the bounded regime:

        L = rho(lam r2)^(1-a/b)/(1-a/b) * log(lam r2)
            + rho(lam r2)^(1-a/b-p) / (q (1-a/b-p))
    """
    if classify_regime(params).kind is not RegimeKind.SUBCRITICAL_FLAT:
        raise WrongRegime("L(lambda) exists only in the bounded regime")
    if lam <= 0.0:
        raise DomainError("lambda must be positive")
    ab = params.a / params.b
    pf = params.p_float
    rt2 = lam * params.r2
    rho_v = rho(params, rt2, cfg.flat_cutoff_exponent)
    return (rho_v**(1.0 - ab) / (1.0 - ab) * math.log(rt2)
            + rho_v**(1.0 - ab - pf) / (params.q * (1.0 - ab - pf)))


def constant_M(params: FamilyParams, lam: float,
               cfg: NumericConfig = DEFAULT_CONFIG) -> float:
    """Limit of the flat-side auxiliary integral:

        M = b^2/(q(b-a)) lam^(-q/b) rho(lam r2)^(1-a/b)
            + (b/q) r2^(q/b) int_rho^r1 x^(-a/b) exp(1/(b x^p)) dx

    The integrand grows toward the lower limit but rho(lam r2) > 0 keeps it
    finite; DegenerateLowerLimit is raised if rho underflows to 0.
    """
    if lam <= 0.0:
        raise DomainError("lambda must be positive")
    a, b, q = params.a, params.b, params.q
    ab = a / b
    rt2 = lam * params.r2
    rho_v = rho(params, rt2, cfg.flat_cutoff_exponent)
    if rho_v == 0.0:
        raise DegenerateLowerLimit(f"rho({rt2:g}) underflowed to 0")
    first = b * b / (q * (b - a)) * lam**(-q / b) * rho_v**(1.0 - ab)
    second = 0.0
    if rho_v < params.r1:
        def f(xs):
            ln_es = _ln_e_arr(params, xs)
            with np.errstate(divide="ignore"):
                return np.exp(-ab * np.log(xs) - (q / b) * ln_es)

        r = integrate_1d(f, rho_v, params.r1, tol=cfg.tol_1d,
                         max_levels=cfg.max_subdivisions)
        second = b / q * params.r2**(q / b) * r.value
    return first + second


def _golden_section(fn, t_lo: float, t_hi: float, maximize: bool,
                    rel_tol: float = 1e-6):
    """Golden-section search on [t_lo, t_hi]; returns (t_opt, fn(t_opt))."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    sign = -1.0 if maximize else 1.0
    a, b = t_lo, t_hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = sign * fn(c), sign * fn(d)
    f_lo, f_hi = sign * fn(a), sign * fn(b)
    while b - a > rel_tol * (t_hi - t_lo):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = sign * fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = sign * fn(d)
    t = 0.5 * (a + b)
    ft = sign * fn(t)
    if ft >= min(f_lo, f_hi):
        raise OptimizerBracketFailure(
            "objective is monotone over the whole bracket; no interior optimum")
    return t, sign * ft


def case3_bounds(params: FamilyParams, cfg: NumericConfig = DEFAULT_CONFIG,
                 log_lambda_bracket: tuple[float, float] = (-12.0, 12.0)) -> Case3Bounds:
    """Bounded-regime bracket:

        lower = max_lambda  L/(1+lam^q)^(1/b) + M/(1+lam^-q)^(1/b)
        upper = min_lambda  L + M

    The weighted objectives vanish at both bracket ends while L + M diverges
    there, so both optima are interior; found by golden-section on log lambda.
    """
    if classify_regime(params).kind is not RegimeKind.SUBCRITICAL_FLAT:
        raise WrongRegime("case-3 bounds exist only in the bounded regime")
    q, b = params.q, params.b

    def lower_obj(t):
        lam = math.exp(t)
        L, M = constant_L(params, lam, cfg), constant_M(params, lam, cfg)
        return (L / (1.0 + lam**q)**(1.0 / b) + M / (1.0 + lam**(-q))**(1.0 / b))

    def upper_obj(t):
        lam = math.exp(t)
        return constant_L(params, lam, cfg) + constant_M(params, lam, cfg)

    t_max, lower = _golden_section(lower_obj, *log_lambda_bracket, maximize=True)
    t_min, upper = _golden_section(upper_obj, *log_lambda_bracket, maximize=False)
    return Case3Bounds(lower=lower, upper=upper,
                       lambda_lower=math.exp(t_max), lambda_upper=math.exp(t_min))


def scale_sequence(params: FamilyParams, samples: Sequence[ZetaSample]) -> BlowupSequence:
    """Apply the regime scaling to Z samples:

        power regime:  S_k = X_k^kappa Z_k,  kappa = 1 - (1-a/b)/p
        log regime:    S_k = Z_k / |log X_k|
        bounded:       S_k = Z_k
    """
    regime = classify_regime(params)
    xs = tuple(s.X for s in samples)
    sigmas = tuple(s.sigma for s in samples)
    schedule = SigmaSchedule(sigmas=sigmas, xs=xs, b=params.b)
    if regime.kind is RegimeKind.SUPERCRITICAL_FLAT:
        kappa = regime.blowup_exponent
        scaled = tuple(s.X**kappa * s.value for s in samples)
        return BlowupSequence(schedule, scaled, ScalingKind.POWER_LAW, kappa)
    if regime.kind is RegimeKind.CRITICAL_FLAT:
        scaled = tuple(s.value / abs(math.log(s.X)) for s in samples)
        return BlowupSequence(schedule, scaled, ScalingKind.LOG_LAW, None)
    scaled = tuple(s.value for s in samples)
    return BlowupSequence(schedule, scaled, ScalingKind.RAW, None)


def _fit_basis(seq: BlowupSequence, xs: np.ndarray) -> np.ndarray:
    cols = [np.ones_like(xs)]
    if seq.scaling_kind is ScalingKind.POWER_LAW:
        cols.append(xs**seq.blowup_exponent)
    if seq.scaling_kind is ScalingKind.LOG_LAW:
        cols.append(1.0 / np.abs(np.log(xs)))
    cols.append(xs * np.log(xs))
    cols.append(xs)
    return np.column_stack(cols)


def extract_limit(seq: BlowupSequence, n_fit: int | None = None) -> tuple[float, float]:
    """Least-squares limit of S(X) as X -> 0, with an uncertainty estimate.

    Model: S = S_inf + c1 X log X + c2 X, plus X^kappa (power regime) or
    1/|log X| (log regime) correction columns.  Fits the n_fit smallest-X
    points (default: all but the 4 largest, at least 6); the reported
    uncertainty combines the rms residual with the shift under dropping the
    largest fitted X.
    """
    xs_all = np.asarray(seq.schedule.xs, dtype=float)
    ss_all = np.asarray(seq.scaled_values, dtype=float)
    n = len(xs_all)
    if n_fit is None:
        n_fit = max(6, n - 4) if n > 6 else n
    n_fit = min(n_fit, n)
    order = np.argsort(xs_all)          # ascending: smallest X first
    xs = xs_all[order][:n_fit]
    ss = ss_all[order][:n_fit]

    def solve(x, s):
        A = _fit_basis(seq, x)
        if np.linalg.cond(A) > 1e12:
            raise IllConditionedFit(f"design matrix condition {np.linalg.cond(A):.2e}")
        coef, *_ = np.linalg.lstsq(A, s, rcond=None)
        resid = s - A @ coef
        return coef[0], float(np.sqrt(np.mean(resid**2)))

    limit, rms = solve(xs, ss)
    k = _fit_basis(seq, xs).shape[1]
    drop = 0.0
    if n_fit - 1 > k:
        limit_drop, _ = solve(xs[:-1], ss[:-1])
        drop = abs(limit - limit_drop)
    uncertainty = rms + drop
    return float(limit), float(uncertainty)
