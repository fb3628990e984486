import cmath
import math
import random

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from genw import (
    DomainError,
    ParameterError,
    ParamSet,
    amplitude,
    build_table,
    forward_map,
    coefficient_asymptotic_check,
    conjectured_radius,
    empirical_radius,
    exponent_g,
    log_branch_offsets,
    pochhammer,
    pochhammer_ratio_asymptotic,
    psi_factor,
    radius_report,
    saddle_candidates,
)
from genw.radius import (
    displayed_radius,
    exponent_radius,
    falling_pochhammer_asymptotic,
    plot_data_csv,
    pochhammer_ratio_exact,
    route_check,
    system_residuals,
)
from genw.series import CoefficientTable

EQUAL_CPLX = ParamSet((-1 + 1j,), (-1 + 1j,))
UNIT = ParamSet((1,), (1,))


def ratio(exact, approx):
    return complex(exact / approx)


# -- asymptotic ratios ------------------------------------------------------------


def test_psi_examples():
    assert psi_factor(10, 0.5, 1) == 1
    assert psi_factor(10, 0.5, 1 + 1j) == 1
    assert psi_factor(10, 0.5, -2) == 1
    # the sign matches the exact product (see the middle-case test below)
    assert psi_factor(2, 0.5, -0.25) == pytest.approx(2)
    assert abs(psi_factor(3, 0.5, -1 / 3)) < 1e-15


def test_psi_zero_matches_vanishing_product():
    # n p = -2 is an integer and the product (np)_(n lam) hits 0
    assert pochhammer(6 * (-1 / 3), 3) == 0
    assert abs(psi_factor(6, 0.5, -1 / 3)) < 1e-15


@pytest.mark.parametrize("p, lam", [(1, 0.5), (2, 1.0), (-1 / 3, 0.5), (-0.7, 0.5), (0.5 + 1j, 0.25)])
def test_pochhammer_ratio_asymptotic(p, lam):
    errs = [abs(ratio(pochhammer_ratio_exact(n, lam, p), pochhammer_ratio_asymptotic(n, lam, p)) - 1)
            for n in (100, 200, 400)]
    assert errs[1] < 0.01
    assert errs[0] > errs[1] > errs[2]


def test_middle_case_sign():
    # real p < 0 < p + lam: the asymptotic must carry the sign of the exact product
    p = -1 / math.sqrt(7)
    for n in (50, 100, 200):
        r = ratio(pochhammer_ratio_exact(n, 0.5, p), pochhammer_ratio_asymptotic(n, 0.5, p))
        assert abs(r - 1) < 0.02


def test_falling_pochhammer_asymptotic():
    errs = []
    for n in (100, 200, 400):
        exact = mpmath.mpf(pochhammer(1 - n, n // 2))
        errs.append(abs(float(exact / falling_pochhammer_asymptotic(n, 0.5)) - 1))
    assert errs[1] < 0.01 and errs[0] > errs[1] > errs[2]


def test_asymptotic_degenerate_and_rounding():
    with pytest.raises(DomainError):
        pochhammer_ratio_asymptotic(10, 0.5, -0.5)
    with pytest.warns(UserWarning):
        pochhammer_ratio_asymptotic(7, 0.5, 1.0)


# -- exponent and amplitude ------------------------------------------------------------


def test_exponent_g_trivial():
    assert exponent_g((0j,), EQUAL_CPLX) == 0
    assert exponent_g((0, 0), ParamSet((1, 2j), (0.5, -1))) == 0
    assert exponent_g((), ParamSet((), ())) == 0


def growth_rate_f(params, N=300):
    table = build_table(params, N)
    with np.errstate(divide="ignore"):
        logs = np.log(np.abs(table.f_mantissa)) + table.f_exponent * math.log(2)
    n = np.arange(N // 2, N + 1, dtype=float)
    A = np.column_stack([n, np.ones_like(n), np.log(n)])
    return math.exp(np.linalg.lstsq(A, logs[N // 2 - 1:], rcond=None)[0][0])


@pytest.mark.parametrize("params, phi", [(EQUAL_CPLX, 1 + 1j), (UNIT, (1 + math.sqrt(5)) / 2)])
def test_exponent_g_matches_growth_of_f(params, phi):
    predicted = math.exp(exponent_g((phi,), params).real)
    assert abs(predicted / growth_rate_f(params) - 1) < 0.05


def test_amplitude_examples():
    assert amplitude((), ParamSet((), ())) == 1
    expect = math.sqrt(0.5) * math.sqrt(1 / (2 * math.pi))
    assert amplitude((0.5,), ParamSet((1,), (0.5,))) == pytest.approx(expect)
    with pytest.raises(DomainError):
        amplitude((0,), UNIT)


@pytest.mark.parametrize("p, t", [(1.0, 1.0), (2.0, -1.5), (0.5, 3.0)])
def test_amplitude_extracted_from_exact_terms(p, t):
    params = ParamSet((t,), (p,))
    n, k = 200, 100
    exact, _ = coefficient_asymptotic_check(n, (k,), params)
    lam = (k / n,)
    with mpmath.workdps(30):
        extracted = exact * mpmath.sqrt(n) / mpmath.exp(n * mpmath.mpc(exponent_g(lam, params)))
    assert abs(complex(extracted) / amplitude(lam, params) - 1) < 0.02


def test_coefficient_asymptotic_examples():
    errs = []
    for n in (100, 200):
        exact, approx = coefficient_asymptotic_check(n, (n // 2,), UNIT)
        errs.append(abs(ratio(exact, approx) - 1))
    assert errs[0] < 0.02 and errs[1] < errs[0] * 0.6
    exact, approx = coefficient_asymptotic_check(120, (40, 40), ParamSet((1, -1), (1, 2)))
    assert abs(ratio(exact, approx) - 1) < 0.05


def test_coefficient_asymptotic_monotone():
    params = ParamSet((2 - 1j,), (0.7 + 0.4j,))
    errs = [abs(ratio(*coefficient_asymptotic_check(n, (n // 4,), params)) - 1) for n in (52, 100, 200, 400)]
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_coefficient_asymptotic_rejects_boundary():
    with pytest.raises(ParameterError):
        coefficient_asymptotic_check(50, (0, 10), ParamSet((1, 2), (1, 1)))
    with pytest.raises(ParameterError):
        coefficient_asymptotic_check(50, (50,), UNIT)


# -- saddles ---------------------------------------------------------------------


def test_equal_complex_saddles():
    lams = sorted((sp.lam[0] for sp in saddle_candidates(EQUAL_CPLX)), key=lambda z: z.imag)
    assert len(lams) == 2
    assert abs(lams[0] - (-1j)) < 1e-12
    assert abs(lams[1] - (1 + 1j)) < 1e-12


def test_equal_complex_offsets():
    by_lam = {round(sp.lam[0].real) + 1j * round(sp.lam[0].imag): sp for sp in saddle_candidates(EQUAL_CPLX)}
    assert log_branch_offsets(by_lam[1 + 1j], EQUAL_CPLX) == (0,)
    assert log_branch_offsets(by_lam[-1j], EQUAL_CPLX) != (0,)


def test_real_interior_saddle_has_zero_offset():
    params = ParamSet((-2.0, -3.0), (0.5, 1.5))
    interior = [sp for sp in saddle_candidates(params)
                if all(abs(v.imag) < 1e-12 and 0 < v.real for v in sp.lam) and sum(sp.lam).real < 1]
    assert interior
    for sp in interior:
        assert log_branch_offsets(sp, params) == (0, 0)


def test_generic_quadratic_count():
    rng = random.Random(1)
    for _ in range(10):
        params = ParamSet((complex(rng.gauss(0, 1), rng.gauss(0, 1)),), (complex(rng.gauss(0, 1), rng.gauss(0, 1)),))
        assert len(saddle_candidates(params)) == 2


cplx = st.builds(complex, st.floats(-3, 3), st.floats(-3, 3)).filter(lambda z: abs(z) > 0.05)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda m: st.tuples(st.lists(cplx, min_size=m, max_size=m),
                                                       st.lists(cplx, min_size=m, max_size=m))))
def test_saddle_residuals_and_offsets(tp):
    params = ParamSet(tuple(tp[0]), tuple(tp[1]))
    for sp in saddle_candidates(params):
        if not sp.converged:
            continue
        assert max(system_residuals(sp.lam, params)) <= 1e-10
        assert sp.s == pytest.approx(1 - sum(sp.lam), abs=1e-12)
        s = 1 - sum(sp.lam)
        for li, tj, pj in zip(sp.lam, params.t, params.p):
            if li == 0 or pj + li == 0 or s == 0:
                continue
            val = (cmath.log(s) + cmath.log(pj + li) - cmath.log(-tj * li)) / (2j * math.pi)
            assert abs(val - round(val.real)) <= 1e-6


def test_degenerate_saddle_is_reported():
    # (s - 1)(s + 1) - 2i s has the double root s = i
    sps = saddle_candidates(ParamSet((1,), (2j,)))
    assert len(sps) == 1 and sps[0].degenerate
    assert not any(sp.degenerate for sp in saddle_candidates(EQUAL_CPLX))


# -- radius ------------------------------------------------------------------------


def test_classical_radius():
    report = radius_report(ParamSet((), ()), 300)
    assert report.best.R == pytest.approx(1 / math.e)
    assert report.relative_gap < 0.01


def test_unit_case_within_two_percent():
    report = radius_report(UNIT, 300)
    assert report.relative_gap < 0.02
    sp = report.saddles[report.best.saddle_index]
    # lam = 1.618 corresponds to the critical point z = lam - 1 of the forward map
    assert sp.lam[0].real == pytest.approx((1 + math.sqrt(5)) / 2)
    assert report.best.R == pytest.approx(abs(forward_map(sp.lam[0] - 1, UNIT)), rel=1e-9)
    assert report.best.direct


def test_equal_complex_case_within_five_percent():
    report = radius_report(EQUAL_CPLX, 300)
    assert report.matched and report.relative_gap < 0.05
    assert report.saddles[report.best.saddle_index].lam[0] == pytest.approx(1 + 1j)
    assert report.best.l == (-1,)


def test_displayed_formula_lacks_exponential_factor():
    for sp in saddle_candidates(UNIT):
        for l in (-1, 0, 1):
            ratio_ = conjectured_radius(sp, (l,), UNIT) / displayed_radius(sp, (l,), UNIT)
            assert ratio_ == pytest.approx(math.exp(sp.lam[0].real))


def test_route_consistency():
    rng = random.Random(3)
    cases = [UNIT, EQUAL_CPLX] + [
        ParamSet(tuple(complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(m)),
                 tuple(complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(m)))
        for m in (1, 2, 2, 3)
    ]
    for params in cases:
        for sp in saddle_candidates(params):
            check = route_check(sp, sp.log_branch_offsets, params)
            assert check.consistent, (params, sp.lam, check)


def test_exponent_route_matches_plain_formula_on_real_saddles():
    # with all logs on the principal branch the two routes coincide
    for sp in saddle_candidates(UNIT):
        assert exponent_radius(sp, (0,), UNIT) == pytest.approx(conjectured_radius(sp, (0,), UNIT), rel=1e-12)


def test_empirical_classical():
    table = build_table(ParamSet((), ()), 400)
    assert abs(empirical_radius(table, (100, 200)) * math.e - 1) < 0.01
    errs = [abs(empirical_radius(table, (N // 2, N)) * math.e - 1) for N in (100, 400)]
    assert errs[1] < errs[0]


def test_empirical_monotone_in_root_distance():
    near = empirical_radius(build_table(ParamSet((1,), (1,)), 150))
    far = empirical_radius(build_table(ParamSet((10,), (1,)), 150))
    assert far > near


def synthetic_table(values):
    mant, expo = np.frexp(np.asarray(values, dtype=float))
    mant = mant.astype(complex)
    mant.flags.writeable = False
    expo = expo.astype(np.int64)
    ones = np.full(len(values), 0.5 + 0j)
    return CoefficientTable(ParamSet((), ()), len(values), mant, expo, ones, np.ones(len(values), dtype=np.int64))


def test_envelope_tracks_limsup():
    R = 0.6
    n = np.arange(1, 301)
    # every fourth coefficient is depressed by a factor growing with n
    values = R ** (-n) * np.where(n % 4 == 0, 10.0 ** (-n / 60), 1.0)
    table = synthetic_table(values)
    env = empirical_radius(table, envelope=True)
    plain = empirical_radius(table, envelope=False)
    assert env == pytest.approx(R, rel=1e-3)
    assert 1 / env >= 1 / plain


def test_envelope_on_oscillating_table():
    table = build_table(ParamSet((1,), (-1 / 3,)), 200)
    env, plain = empirical_radius(table), empirical_radius(table, envelope=False)
    logs = table.log_abs_c()
    from genw.radius import running_max
    assert np.all(running_max(logs, 12) >= logs)
    assert abs(env / plain - 1) < 0.01


def test_empirical_rejects_bad_windows():
    table = synthetic_table(np.zeros(20))
    with pytest.raises(ParameterError):
        empirical_radius(table)
    with pytest.raises(ParameterError):
        empirical_radius(build_table(UNIT, 20), (10, 30))


def test_report_two_factors_and_exports():
    report = radius_report(ParamSet((1, -2), (1, 1)), 80)
    assert report.conjectured and all(c.R > 0 for c in report.conjectured)
    gap = abs(report.best.R - report.empirical) / report.empirical
    assert report.relative_gap == pytest.approx(gap)
    rows = report.to_csv().splitlines()
    assert len(rows) == len(report.conjectured) + 1
    d = report.to_dict()
    assert d["best_match"] == report.best_match and "saddles_with_wide_offsets" in d
    plot = plot_data_csv(build_table(UNIT, 5), 0.5).splitlines()
    assert plot[0] == "n,log_abs_c,n_log_inv_R" and len(plot) == 6


def test_report_requires_enough_orders():
    with pytest.raises(ParameterError):
        radius_report(UNIT, 20)
