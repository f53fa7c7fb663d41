"""Asymptotic constants, case-3 bounds, scaling and limit extraction."""

import math
from fractions import Fraction

import numpy as np
import pytest

from flatzeta.errors import DomainError, WrongRegime
from flatzeta.model import FamilyParams, NumericConfig, PRESETS, make_schedule
from flatzeta.zeta import ZetaSample
from flatzeta.asym import (
    BlowupSequence,
    ScalingKind,
    case3_bounds,
    constant_A,
    constant_A_closed_form,
    constant_L,
    constant_M,
    extract_limit,
    scale_sequence,
)

CFG = NumericConfig()
SUP = PRESETS["supercritical"]
CRIT = PRESETS["critical"]
GREEN = PRESETS["greenblatt"]

# mpmath quadrature of the defining integral agrees with the Gamma-function
# closed form c^beta Gamma(1-beta)/(p beta) to 19 digits for all four cases
A_ORACLES = {
    (0, 2, 2, Fraction(2)): math.sqrt(math.pi / 2.0),
    (0, 2, 1, Fraction(2)): math.sqrt(math.pi),
    (1, 2, 2, Fraction(2)): 2.0608970245899912,
    (0, 3, 2, Fraction(3)): 1.0747641207672393,
}

M_ORACLE_GREEN_LAM1 = 1.3950594060599476


def test_constant_A_values():
    for (a, b, q, p), expect in A_ORACLES.items():
        params = FamilyParams(a, b, q, p)
        got = constant_A(params, CFG)
        assert got == pytest.approx(expect, rel=1e-10)
        assert constant_A_closed_form(params) == pytest.approx(expect, rel=1e-14)


def test_constant_A_regime_gate():
    with pytest.raises(WrongRegime):
        constant_A(CRIT, CFG)       # p = 1 - a/b exactly
    with pytest.raises(WrongRegime):
        constant_A(GREEN, CFG)


def test_constant_A_ignores_box():
    # A never reads (r1, r2)
    p1 = FamilyParams(0, 2, 2, Fraction(2), r1=0.3, r2=0.9)
    p2 = FamilyParams(0, 2, 2, Fraction(2), r1=0.7, r2=0.1)
    assert constant_A(p1, CFG) == constant_A(p2, CFG)


def test_constant_L_hand_example():
    # lam = 2 e^-2 so lam r2 = e^-2, rho = (1/4)^4 = 1/256:
    # L = (1/256)^(1/2) / (1/2) * (-2) + (1/256)^(1/4) / (2 * (1/4))
    #   = -1/4 + 1/2 = 1/4
    lam = 2.0 * math.exp(-2.0)
    assert constant_L(GREEN, lam, CFG) == pytest.approx(0.25, abs=1e-14)


def test_constant_L_saturated_branch():
    # lam r2 >= e(r1): rho = r1
    lam = 2.0
    ab, pf, q = 0.5, 0.25, 2
    r1, rt2 = GREEN.r1, lam * GREEN.r2
    expect = (r1 ** (1 - ab) / (1 - ab) * math.log(rt2)
              + r1 ** (1 - ab - pf) / (q * (1 - ab - pf)))
    assert constant_L(GREEN, lam, CFG) == pytest.approx(expect, rel=1e-14)


def test_constant_L_vanishes_at_zero():
    vals = [constant_L(GREEN, lam, CFG) for lam in (1e-2, 1e-4, 1e-8, 1e-16)]
    assert all(v > 0.0 for v in vals)
    assert all(v2 < v1 for v1, v2 in zip(vals, vals[1:]))


def test_constant_L_regime_gate():
    with pytest.raises(WrongRegime):
        constant_L(SUP, 1.0, CFG)


def test_constant_M_oracle_and_limits():
    assert constant_M(GREEN, 1.0, CFG) == pytest.approx(M_ORACLE_GREEN_LAM1, rel=1e-10)
    # lam large: rho saturates at r1, integral term empty, M -> power decay
    lam = 1e6
    expect = (GREEN.b**2 / (GREEN.q * (GREEN.b - GREEN.a))
              * lam ** (-GREEN.q / GREEN.b) * GREEN.r1 ** 0.5)
    assert constant_M(GREEN, lam, CFG) == pytest.approx(expect, rel=1e-12)
    # lam small: M explodes
    assert constant_M(GREEN, 1e-6, CFG) > 1e2 * constant_M(GREEN, 1.0, CFG)


def test_case3_bounds_ordering_and_endpoint_behavior():
    b3 = case3_bounds(GREEN, CFG)
    assert 0.0 < b3.lower <= b3.upper
    # the lower objective sinks toward 0 at both bracket ends
    def lower_obj(lam):
        return (constant_L(GREEN, lam, CFG) / (1 + lam**2) ** 0.5
                + constant_M(GREEN, lam, CFG) / (1 + lam**-2) ** 0.5)
    assert lower_obj(1e-6) < 0.25 * b3.lower
    assert lower_obj(1e6) < 0.25 * b3.lower
    # the upper objective rises at both ends, so the minimum is interior
    def upper_obj(lam):
        return constant_L(GREEN, lam, CFG) + constant_M(GREEN, lam, CFG)
    assert upper_obj(1e-6) > b3.upper
    assert upper_obj(1e6) > b3.upper
    assert upper_obj(b3.lambda_upper) == pytest.approx(b3.upper, rel=1e-9)


def test_case3_regime_gate():
    with pytest.raises(WrongRegime):
        case3_bounds(SUP, CFG)


def _fake_samples(b, xs, values):
    return [ZetaSample(sigma=(x - 1.0) / b, X=x, value=v, error=0.0)
            for x, v in zip(xs, values)]


def test_scale_sequence_kinds():
    xs = [0.125 * 0.5**k for k in range(6)]
    vals = [2.0 + x for x in xs]
    seq = scale_sequence(SUP, _fake_samples(2, xs, vals))
    assert seq.scaling_kind is ScalingKind.POWER_LAW
    assert seq.blowup_exponent == pytest.approx(0.5)
    assert seq.scaled_values[0] == pytest.approx(xs[0] ** 0.5 * vals[0])
    seq = scale_sequence(CRIT, _fake_samples(2, xs, vals))
    assert seq.scaling_kind is ScalingKind.LOG_LAW
    assert seq.scaled_values[0] == pytest.approx(vals[0] / abs(math.log(xs[0])))
    seq = scale_sequence(GREEN, _fake_samples(2, xs, vals))
    assert seq.scaling_kind is ScalingKind.RAW
    assert seq.scaled_values == tuple(vals)


def test_extract_limit_recovers_exact_model():
    xs = [2.0 ** (-4 - k) for k in range(10)]
    svals = [3.0 + 0.1 * x * math.log(x) for x in xs]
    seq = scale_sequence(GREEN, _fake_samples(2, xs, svals))
    limit, unc = extract_limit(seq)
    assert limit == pytest.approx(3.0, abs=1e-8)
    assert unc < 1e-8


def test_extract_limit_constant_sequence():
    xs = [2.0 ** (-4 - k) for k in range(8)]
    seq = scale_sequence(GREEN, _fake_samples(2, xs, [5.0] * 8))
    limit, unc = extract_limit(seq)
    assert limit == pytest.approx(5.0, abs=1e-12)


def test_extract_limit_power_basis():
    # scaled model with an X^kappa correction, exactly the power-regime basis;
    # the raw Z-values are the scaled model divided by X^kappa
    xs = [2.0 ** (-3 - k) for k in range(12)]
    svals = [1.25 - 0.4 * x**0.5 + 0.05 * x * math.log(x) for x in xs]
    raw = [s / x**0.5 for s, x in zip(svals, xs)]
    seq = scale_sequence(SUP, _fake_samples(2, xs, raw))
    limit, unc = extract_limit(seq)
    assert limit == pytest.approx(1.25, abs=1e-9)


def test_extract_limit_log_basis():
    xs = [2.0 ** (-3 - k) for k in range(12)]
    svals = [0.5 + 0.3 / abs(math.log(x)) for x in xs]
    raw = [s * abs(math.log(x)) for s, x in zip(svals, xs)]
    seq = scale_sequence(CRIT, _fake_samples(2, xs, raw))
    limit, unc = extract_limit(seq)
    assert limit == pytest.approx(0.5, abs=1e-9)


def test_blowup_sequence_validation():
    xs = [0.125, 0.0625]
    with pytest.raises(DomainError):
        # schedule itself requires at least 4 entries
        scale_sequence(GREEN, _fake_samples(2, xs, [1.0, 2.0]))


def test_case3_example_values_bracket_the_limit():
    # The extrapolation target of the raw sequence must live in the bracket;
    # checked end to end (this is the bounded-regime law at desk scale).
    from flatzeta.zeta import zeta_quadrant
    sched = make_schedule(0.125, 0.5, 8, GREEN.b)
    zs = [zeta_quadrant(GREEN, s, CFG).value for s in sched.sigmas]
    b3 = case3_bounds(GREEN, CFG)
    assert b3.lower <= zs[-1] <= b3.upper
