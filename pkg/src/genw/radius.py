"""Radius of convergence of the inverse series: saddle-point prediction and root test.

The summands ``a_n(k)`` of F_n behave like ``n^(-m/2) prod psi_j f(lam) e^(n g(lam))``
at ``lam = k/n``.  Critical points ``phi`` of ``g`` solve the quadratic system
``(1 - sum lam)(p_i + lam_i) + t_i lam_i = 0``; each, with integer branch
offsets ``l``, gives a candidate radius.  The empirical radius comes from a
root-test fit of ``log|c_n|``.
"""
from __future__ import annotations

import cmath
import csv
import io
import itertools
import math
import warnings
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .errors import DomainError, ParameterError
from .hyper import MultiIndex, pochhammer
from .params import ParamSet
from .series import CoefficientTable, build_table, fmt, plog

TWO_PI_I = 2j * math.pi


# -- asymptotic ratios -------------------------------------------------------


def psi_factor(n: int, lam: float, p: complex) -> complex:
    """Reflection factor of the Pochhammer asymptotic.

    ``-2i sin(n p pi) e^(i pi p n)`` when p is real with ``p < 0 < p + lam``,
    otherwise 1.  The sign pairs with the principal root
    ``sqrt(p) = i sqrt(|p|)`` used in :func:`pochhammer_ratio_asymptotic`;
    with ``+2i`` the asymptotic has the opposite sign to the exact product.
    Non-real p always gives 1.
    """
    p = complex(p)
    if p.imag == 0 and p.real < 0 < p.real + lam:
        x = n * p.real
        return -2j * math.sin(x * math.pi) * cmath.exp(1j * math.pi * x)
    return 1 + 0j


def _steps(n: int, lam: float) -> int:
    k = round(n * lam)
    if abs(k - n * lam) > 1e-9:
        warnings.warn(f"n*lam = {n * lam} is not an integer; using k = {k}", stacklevel=3)
    return k


def pochhammer_ratio_asymptotic(n: int, lam: float, p: complex):
    """Leading asymptotic of ``(n p)_(n lam) / (n lam)!``.

    ``sqrt(p / (2 pi n lam (lam + p))) * ((p+lam)^(p+lam) / (p^p lam^lam))^n * psi``
    with principal values, returned as an mpmath complex. ``n lam`` is
    rounded to the nearest integer ``k`` and ``lam`` replaced by ``k / n``.
    """
    k = _steps(n, lam)
    if k < 1:
        raise ParameterError("n * lam must be at least 1")
    lam = k / n
    p = complex(p)
    if p + lam == 0:
        raise DomainError("lam + p = 0")
    expo = (p + lam) * plog(p + lam) - p * plog(p) - lam * math.log(lam)
    amp = cmath.sqrt(p / (2 * math.pi * n * lam * (lam + p)))
    with mpmath.workdps(30):
        return mpmath.mpc(amp * psi_factor(n, lam, p)) * mpmath.exp(n * mpmath.mpc(expo))


def pochhammer_ratio_exact(n: int, lam: float, p: complex):
    """``(n p)_(n lam) / (n lam)!`` as an exact product (mpmath complex)."""
    k = _steps(n, lam)
    with mpmath.workdps(40):
        return pochhammer(n * mpmath.mpc(p), k) / mpmath.factorial(k)


def falling_pochhammer_asymptotic(n: int, lam: float) -> float:
    """Leading asymptotic of ``(1 - n)_(n lam)``: ``(-1)^k sqrt(1-lam) (n^lam / ((1-lam)^(1-lam) e^lam))^n``."""
    k = _steps(n, lam)
    lam = k / n
    if not 0 < lam < 1:
        raise ParameterError("lam must lie in (0, 1)")
    log_mag = n * (lam * math.log(n) - (1 - lam) * math.log(1 - lam) - lam)
    return (-1) ** k * math.sqrt(1 - lam) * mpmath.exp(log_mag)


def _xlogx(x: complex, log_x: complex) -> complex:
    return 0j if x == 0 else x * log_x


def exponent_g(lam, params: ParamSet) -> complex:
    """``g(lam) = -(1-S) Log(1-S) + sum [(p_i+lam_i) Log(p_i+lam_i) - p_i Log p_i - lam_i Log(-e t_i lam_i)]``.

    ``S = sum lam``; ``x Log x`` terms at ``x = 0`` take their limit 0.
    """
    lam = [complex(v) for v in lam]
    if len(lam) != params.m:
        raise ParameterError("lam must have one entry per factor")
    s = 1 - sum(lam, 0j)
    out = -_xlogx(s, plog(s) if s else 0)
    for li, tj, pj in zip(lam, params.t, params.p):
        q = pj + li
        out += _xlogx(q, plog(q) if q else 0) - pj * plog(pj)
        if li != 0:
            out -= li * plog(-math.e * tj * li)
    return out


def amplitude(lam, params: ParamSet) -> complex:
    """``sqrt(1 - S) * prod sqrt(p_i / (2 pi lam_i (p_i + lam_i)))`` (principal roots)."""
    lam = [complex(v) for v in lam]
    if len(lam) != params.m:
        raise ParameterError("lam must have one entry per factor")
    out = cmath.sqrt(1 - sum(lam, 0j))
    for li, pj in zip(lam, params.p):
        if li == 0 or pj + li == 0:
            raise DomainError("amplitude is singular at lam_i = 0 or p_i + lam_i = 0")
        out *= cmath.sqrt(pj / (2 * math.pi * li * (pj + li)))
    return out


def coefficient_asymptotic_check(n: int, k, params: ParamSet):
    """``(a_n(k), asymptotic)`` for an interior multi-index ``k``.

    The exact summand is a Pochhammer product; the asymptotic value is
    ``amplitude * exp(n g) * prod psi_j * n^(-m/2)`` at ``lam = k / n``.
    Both are returned as mpmath complex numbers so large ``n`` does not
    overflow.
    """
    if not isinstance(k, MultiIndex):
        k = MultiIndex(tuple(k))
    if len(k) != params.m:
        raise ParameterError("multi-index length must equal m")
    if k.weight > n - 1:
        raise ParameterError("weight of k must be at most n - 1")
    if any(v < 1 for v in k.k):
        raise ParameterError("asymptotic form needs every k_i >= 1")
    lam = [v / n for v in k.k]
    with mpmath.workdps(40):
        exact = mpmath.mpf(pochhammer(1 - n, k.weight))
        for ki, tj, pj in zip(k.k, params.t, params.p):
            exact *= pochhammer(n * mpmath.mpc(pj), ki) / (mpmath.factorial(ki) * (n * mpmath.mpc(tj)) ** ki)
        psi = 1
        for li, pj in zip(lam, params.p):
            psi *= psi_factor(n, li, pj)
        g = exponent_g(lam, params)
        approx = (
            mpmath.mpc(amplitude(lam, params) * psi)
            * mpmath.exp(n * mpmath.mpc(g))
            * mpmath.mpf(n) ** (-params.m / 2)
        )
        return +exact, +approx


# -- saddle points ------------------------------------------------------------


def reduced_polynomial(params: ParamSet) -> np.ndarray:
    """Coefficients (highest degree first) of ``(s-1) prod(s+t_j) - s sum_j p_j prod_{k!=j}(s+t_k)``."""
    P = np.polynomial.polynomial
    lin = [np.array([tj, 1], dtype=complex) for tj in params.t]
    full = np.array([1], dtype=complex)
    for c in lin:
        full = P.polymul(full, c)
    poly = P.polymul(np.array([-1, 1], dtype=complex), full)
    for j, pj in enumerate(params.p):
        part = np.array([0, pj], dtype=complex)
        for i, c in enumerate(lin):
            if i != j:
                part = P.polymul(part, c)
        poly = P.polysub(poly, part)
    return np.trim_zeros(poly[::-1], "f")


def aberth_roots(coeffs, tol: float = 1e-15, max_iter: int = 500):
    """All roots of a polynomial by Aberth-Ehrlich simultaneous iteration.

    ``coeffs`` is highest degree first. Returns ``(roots, converged)``.
    """
    a = np.asarray(coeffs, dtype=complex)
    a = a / a[0]
    deg = len(a) - 1
    if deg < 1:
        return np.array([], dtype=complex), True
    da = np.polyder(a)
    # Cauchy bound radius, rotated start to avoid symmetric stalls
    rad = 1 + np.max(np.abs(a[1:]))
    z = 0.5 * rad * np.exp(1j * (2 * np.pi * np.arange(deg) / deg + 0.4))
    done = np.zeros(deg, dtype=bool)
    for _ in range(max_iter):
        pv = np.polyval(a, z)
        dv = np.polyval(da, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(dv != 0, pv / dv, 0)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1)
            inv = 1 / diff
            np.fill_diagonal(inv, 0)
            corr = ratio / (1 - ratio * inv.sum(axis=1))
        corr = np.where(done | ~np.isfinite(corr), 0, corr)
        z = z - corr
        done |= np.abs(corr) <= tol * np.maximum(np.abs(z), 1)
        if done.all():
            return z, True
    return z, False


@dataclass(frozen=True)
class SaddlePoint:
    """A solution ``lam`` of the quadratic system, with diagnostics."""

    lam: tuple[complex, ...]
    s: complex
    residuals: tuple[float, ...]
    g_value: complex
    log_branch_offsets: tuple[int, ...] = ()
    offset_anomaly: bool = False
    degenerate: bool = False
    converged: bool = True

    def to_dict(self) -> dict:
        return {
            "lambda": [[v.real, v.imag] for v in self.lam],
            "s": [self.s.real, self.s.imag],
            "residuals": list(self.residuals),
            "g": [self.g_value.real, self.g_value.imag],
            "log_branch_offsets": list(self.log_branch_offsets),
            "offset_anomaly": self.offset_anomaly,
            "degenerate": self.degenerate,
            "converged": self.converged,
        }


def system_residuals(lam, params: ParamSet) -> list[float]:
    s = 1 - sum(lam, 0j)
    return [abs(s * (pj + li) + tj * li) for li, tj, pj in zip(lam, params.t, params.p)]


def _refine(lam: np.ndarray, params: ParamSet, iters: int = 50) -> tuple[np.ndarray, bool]:
    t = np.array(params.t, dtype=complex)
    p = np.array(params.p, dtype=complex)
    m = len(t)
    for _ in range(iters):
        s = 1 - lam.sum()
        F = s * (p + lam) + t * lam
        if np.max(np.abs(F)) <= 1e-15 * max(1.0, np.max(np.abs(lam))):
            return lam, True
        J = -np.repeat((p + lam)[:, None], m, axis=1) + np.diag(s + t)
        try:
            step = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            return lam, False
        lam = lam + step
        if np.max(np.abs(step)) <= 1e-16 * max(1.0, np.max(np.abs(lam))):
            break
    return lam, bool(max(system_residuals(lam, params)) <= 1e-10)


def hessian_g(lam, params: ParamSet) -> np.ndarray:
    """Second derivatives of g: ``-1/(1-S) + delta_ij (1/(p_i+lam_i) - 1/lam_i)``."""
    lam = np.asarray(lam, dtype=complex)
    s = 1 - lam.sum()
    p = np.array(params.p, dtype=complex)
    H = np.full((len(lam), len(lam)), -1 / s, dtype=complex)
    H += np.diag(1 / (p + lam) - 1 / lam)
    return H


def _is_degenerate(lam, params: ParamSet, rtol: float = 1e-6) -> bool:
    # H is a sum of O(scale) terms; a near-singular H means colliding saddles
    lam_a = np.asarray(lam, dtype=complex)
    s = 1 - lam_a.sum()
    q = np.array(params.p, dtype=complex) + lam_a
    if s == 0 or np.any(q == 0) or np.any(lam_a == 0):
        return True
    scale = max(abs(1 / s), np.max(np.abs(1 / q)), np.max(np.abs(1 / lam_a)))
    sigma = np.linalg.svd(hessian_g(lam_a, params), compute_uv=False)
    return bool(sigma[-1] <= rtol * scale)


def _make_saddle(lam: np.ndarray, params: ParamSet, converged: bool) -> SaddlePoint:
    lam_t = tuple(complex(v) for v in lam)
    base = SaddlePoint(
        lam=lam_t,
        s=1 - sum(lam_t, 0j),
        residuals=tuple(system_residuals(lam_t, params)),
        g_value=exponent_g(lam_t, params),
        converged=converged,
    )
    offsets, anomaly = _offsets(base, params)
    degenerate = _is_degenerate(lam_t, params)
    return SaddlePoint(
        lam=base.lam,
        s=base.s,
        residuals=base.residuals,
        g_value=base.g_value,
        log_branch_offsets=offsets,
        offset_anomaly=anomaly,
        degenerate=degenerate,
        converged=converged,
    )


def saddle_candidates(params: ParamSet) -> list[SaddlePoint]:
    """All solutions of ``(1 - sum lam)(p_i + lam_i) + t_i lam_i = 0``.

    Substituting ``lam_i = -s p_i / (s + t_i)`` with ``s = 1 - sum lam``
    leaves one polynomial of degree ``m + 1`` in ``s``; its roots are found
    together, mapped back to ``lam`` and polished by Newton's method on the
    full system.
    """
    if params.m < 1:
        raise ParameterError("saddle candidates need m >= 1")
    t = np.array(params.t, dtype=complex)
    p = np.array(params.p, dtype=complex)
    roots, ok = aberth_roots(reduced_polynomial(params))
    starts = []
    for s in roots:
        if np.min(np.abs(s + t)) < 1e-12 * max(1.0, abs(s)):
            # lam_i undefined; restart the full system near this root instead
            rng = np.random.default_rng(0)
            for _ in range(4):
                s_eps = s + 1e-6 * (rng.standard_normal() + 1j * rng.standard_normal())
                starts.append(-s_eps * p / (s_eps + t))
            continue
        starts.append(-s * p / (s + t))
    out: list[SaddlePoint] = []
    for lam0 in starts:
        lam, conv = _refine(np.array(lam0, dtype=complex), params)
        # a double root comes back as two copies about sqrt(eps) apart
        if any(
            np.max(np.abs(lam - np.array(sp.lam))) <= (1e-6 if sp.degenerate else 1e-8)
            for sp in out
        ):
            continue
        out.append(_make_saddle(lam, params, conv and ok))
    return out


def _offset_values(sp: SaddlePoint, params: ParamSet) -> list[complex]:
    s = 1 - sum(sp.lam, 0j)
    return [
        (plog(s) + plog(pj + li) - plog(-tj * li)) / TWO_PI_I
        for li, tj, pj in zip(sp.lam, params.t, params.p)
    ]


def _offsets(sp: SaddlePoint, params: ParamSet) -> tuple[tuple[int, ...], bool]:
    vals = _offset_values(sp, params)
    ints = tuple(int(round(v.real)) for v in vals)
    anomaly = any(abs(v - k) > 1e-6 for v, k in zip(vals, ints))
    return ints, anomaly


def log_branch_offsets(sp: SaddlePoint, params: ParamSet) -> tuple[int, ...]:
    """Integers ``l_i = [Log(1-S) + Log(p_i+phi_i) - Log(-t_i phi_i)] / (2 pi i)``.

    On a solution of the quadratic system the bracket is an integer multiple
    of ``2 pi i``; a value farther than 1e-6 from an integer is reported by
    ``SaddlePoint.offset_anomaly``.
    """
    return _offsets(sp, params)[0]


# -- radius formulas ------------------------------------------------------------


def _log_radius_terms(sp: SaddlePoint, params: ParamSet) -> complex:
    # (1-S)^(1-S) prod (t/(p+phi))^(p+phi) p^p phi^phi, as a complex log
    s = 1 - sum(sp.lam, 0j)
    out = _xlogx(s, plog(s) if s else 0)
    for li, tj, pj in zip(sp.lam, params.t, params.p):
        q = pj + li
        if q != 0:
            out += q * plog(tj / q)
        out += pj * plog(pj)
        if li != 0:
            out += li * plog(li)
    return out


def conjectured_radius(sp: SaddlePoint, l, params: ParamSet) -> float:
    """Predicted radius of convergence for saddle ``sp`` and branch offsets ``l``.

    ``R = |exp(2 pi i sum l_j phi_j - 1 + sum phi_j) (1-S)^(1-S)
    prod (t_j/(p_j+phi_j))^(p_j+phi_j) p_j^p_j phi_j^phi_j|``.

    The ``exp(sum phi_j)`` factor comes from the ``e`` in ``(-e t_j phi_j)^phi_j``
    of the exponent ``g``; without it the formula does not reproduce the
    empirical radius (see :func:`displayed_radius`).
    """
    l = _check_l(l, params)
    lead = TWO_PI_I * sum(lj * li for lj, li in zip(l, sp.lam)) - 1 + sum(sp.lam, 0j)
    return math.exp((lead + _log_radius_terms(sp, params)).real)


def displayed_radius(sp: SaddlePoint, l, params: ParamSet) -> float:
    """The same product without the ``exp(sum phi_j)`` factor."""
    l = _check_l(l, params)
    lead = TWO_PI_I * sum(lj * li for lj, li in zip(l, sp.lam)) - 1
    return math.exp((lead + _log_radius_terms(sp, params)).real)


def exponent_radius(sp: SaddlePoint, l, params: ParamSet) -> float:
    """``1 / (e prod|t_i^(-p_i)| |exp(g(phi) + 2 pi i sum l_j phi_j)|)``."""
    l = _check_l(l, params)
    log_inv = 1 + sum((-pj * plog(tj)).real for tj, pj in zip(params.t, params.p))
    log_inv += (exponent_g(sp.lam, params) + TWO_PI_I * sum(lj * li for lj, li in zip(l, sp.lam))).real
    return math.exp(-log_inv)


@dataclass(frozen=True)
class RouteCheck:
    """Comparison of :func:`conjectured_radius` with :func:`exponent_radius`.

    The two differ only through principal-log branch terms:
    ``log R(l) - log R_g(-l) = -sum [2 pi a_j Im(p_j+phi_j) + pi b_j Im(phi_j)]``
    with integers ``a_j`` and odd ``b_j`` read off from the logs.  ``gap`` is
    the relative mismatch left after removing these terms.
    """

    gap: float
    a: tuple[int, ...]
    b: tuple[int, ...]
    consistent: bool


def route_check(sp: SaddlePoint, l, params: ParamSet, tol: float = 1e-8) -> RouteCheck:
    l = _check_l(l, params)
    a_list, b_list = [], []
    integral = True
    predicted = 0.0
    for li, tj, pj in zip(sp.lam, params.t, params.p):
        q = pj + li
        A = (plog(tj / q) + plog(q) - plog(tj)) / TWO_PI_I if q != 0 else 0j
        B = (plog(tj) + plog(li) - plog(-tj * li)) / (1j * math.pi) if li != 0 else 1 + 0j
        a, b = round(A.real), round(B.real)
        integral &= abs(A - a) <= 1e-8 and abs(B - b) <= 1e-8 and b % 2 == 1
        a_list.append(a)
        b_list.append(b)
        predicted -= 2 * math.pi * a * q.imag + math.pi * b * li.imag
    diff = math.log(conjectured_radius(sp, l, params)) - math.log(exponent_radius(sp, [-v for v in l], params))
    gap = abs(math.expm1(diff - predicted))
    return RouteCheck(gap, tuple(a_list), tuple(b_list), bool(integral and gap <= tol))


def _check_l(l, params: ParamSet) -> tuple[int, ...]:
    l = tuple(int(v) for v in l)
    if len(l) != params.m:
        raise ParameterError("need one branch offset per factor")
    return l


# -- root test ------------------------------------------------------------------


def running_max(values: np.ndarray, width: int) -> np.ndarray:
    """Trailing maximum over ``width`` consecutive entries (ignores -inf)."""
    out = np.empty_like(values)
    for j in range(len(values)):
        out[j] = np.max(values[max(0, j - width + 1): j + 1])
    return out


def _window(table: CoefficientTable, fit_window):
    if fit_window is None:
        lo, hi = max(1, table.N // 2), table.N
    else:
        lo, hi = fit_window[0], fit_window[-1]
    if not 1 <= lo < hi <= table.N:
        raise ParameterError(f"fit window [{lo}, {hi}] must lie inside [1, {table.N}]")
    return lo, hi


def empirical_radius(
    table: CoefficientTable,
    fit_window=None,
    envelope: bool = True,
    width: int | None = None,
    log_term: bool = True,
) -> float:
    """Root-test estimate of the radius of convergence from ``table``.

    Least-squares fit of ``log|c_n|`` over ``fit_window`` (default: the upper
    half of the table); the radius is ``exp(-slope)``. With ``log_term`` the
    model is ``a + b n + c log n``, which absorbs the algebraic prefactor
    ``n^c`` that otherwise biases the slope by about ``c / n``. With
    ``envelope`` the sequence is first replaced by its trailing running
    maximum over ``width`` orders, which tracks the limsup when the
    coefficients oscillate or vanish periodically.
    """
    lo, hi = _window(table, fit_window)
    logs = table.log_abs_c()
    if envelope:
        if width is None:
            width = max(4, (hi - lo) // 8)
        logs = running_max(logs, width)
    n = table.orders[lo - 1: hi].astype(float)
    y = logs[lo - 1: hi]
    keep = np.isfinite(y)
    cols = [n, np.ones_like(n)] + ([np.log(n)] if log_term else [])
    if keep.sum() < len(cols) + 1:
        raise ParameterError("too few nonzero coefficients in the fit window")
    A = np.column_stack(cols)[keep]
    slope = np.linalg.lstsq(A, y[keep], rcond=None)[0][0]
    return math.exp(-slope)


# -- report -----------------------------------------------------------------------


@dataclass(frozen=True)
class RadiusCandidate:
    saddle_index: int
    l: tuple[int, ...]
    R: float
    R_displayed: float
    R_exponent: float
    route: RouteCheck
    direct: bool

    def to_dict(self) -> dict:
        return {
            "saddle": self.saddle_index,
            "l": list(self.l),
            "R": self.R,
            "R_displayed": self.R_displayed,
            "R_exponent": self.R_exponent,
            "route_gap": self.route.gap,
            "route_consistent": self.route.consistent,
            "direct_offsets": self.direct,
        }


@dataclass(frozen=True)
class RadiusReport:
    params: ParamSet
    saddles: tuple[SaddlePoint, ...]
    conjectured: tuple[RadiusCandidate, ...]
    empirical: float
    empirical_N: int
    best_match: int
    relative_gap: float
    tolerance: float
    wide_offsets: tuple[int, ...] = field(default=())

    @property
    def matched(self) -> bool:
        return self.relative_gap <= self.tolerance

    @property
    def best(self) -> RadiusCandidate:
        return self.conjectured[self.best_match]

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "saddles": [sp.to_dict() for sp in self.saddles],
            "candidates": [c.to_dict() for c in self.conjectured],
            "empirical": self.empirical,
            "empirical_N": self.empirical_N,
            "best_match": self.best_match,
            "relative_gap": self.relative_gap,
            "tolerance": self.tolerance,
            "matched": self.matched,
            "saddles_with_wide_offsets": list(self.wide_offsets),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["saddle", "re_phi", "im_phi", "l", "R", "R_displayed", "R_exponent",
                    "route_consistent", "direct_offsets", "empirical", "relative_gap"])
        for c in self.conjectured:
            sp = self.saddles[c.saddle_index] if self.saddles else None
            lam = sp.lam if sp else ()
            w.writerow([
                c.saddle_index,
                ";".join(fmt(v.real) for v in lam),
                ";".join(fmt(v.imag) for v in lam),
                ";".join(str(v) for v in c.l),
                fmt(c.R),
                fmt(c.R_displayed),
                fmt(c.R_exponent),
                int(c.route.consistent),
                int(c.direct),
                fmt(self.empirical),
                fmt(abs(c.R - self.empirical) / self.empirical),
            ])
        return buf.getvalue()


def _trivial_saddle() -> SaddlePoint:
    return SaddlePoint(lam=(), s=1 + 0j, residuals=(), g_value=0j)


def radius_report(
    params: ParamSet,
    N: int = 300,
    tolerance: float = 0.05,
    table: CoefficientTable | None = None,
    fit_window=None,
) -> RadiusReport:
    """Compare every (saddle, l) prediction with the empirical radius.

    Offsets ``l`` range over ``{-1, 0, 1}^m`` plus the offsets computed
    directly from principal logs. The best match is the candidate closest to
    the empirical estimate.
    """
    if N < 50:
        raise ParameterError("radius_report needs N >= 50")
    if table is None or table.N < N or table.params != params:
        table = build_table(params, N)
    emp = empirical_radius(table, fit_window if fit_window else (N // 2, N))
    if params.m == 0:
        sp = _trivial_saddle()
        R = math.exp(-1)
        rc = RouteCheck(0.0, (), (), True)
        cands = (RadiusCandidate(0, (), R, R, R, rc, True),)
        saddles: tuple[SaddlePoint, ...] = (sp,)
    else:
        saddles = tuple(saddle_candidates(params))
        cl = []
        for j, sp in enumerate(saddles):
            ls = set(itertools.product((-1, 0, 1), repeat=params.m))
            ls.add(sp.log_branch_offsets)
            for l in sorted(ls):
                try:
                    R = conjectured_radius(sp, l, params)
                    Rd = displayed_radius(sp, l, params)
                    Rg = exponent_radius(sp, l, params)
                    rc = route_check(sp, l, params)
                except (ValueError, ZeroDivisionError, OverflowError):
                    continue
                if not (R > 0 and math.isfinite(R)):
                    continue
                cl.append(RadiusCandidate(j, l, R, Rd, Rg, rc, l == sp.log_branch_offsets))
        cands = tuple(cl)
    if not cands:
        raise ParameterError("no admissible radius candidates")
    gaps = [abs(c.R - emp) / emp for c in cands]
    # offsets do not change R for real saddles; prefer the direct ones on ties
    best = min(
        range(len(cands)),
        key=lambda j: (round(gaps[j], 12), not cands[j].direct, sum(map(abs, cands[j].l))),
    )
    wide = tuple(j for j, sp in enumerate(saddles) if any(abs(v) >= 2 for v in sp.log_branch_offsets))
    return RadiusReport(
        params=params,
        saddles=saddles,
        conjectured=cands,
        empirical=emp,
        empirical_N=table.N,
        best_match=best,
        relative_gap=gaps[best],
        tolerance=tolerance,
        wide_offsets=wide,
    )


def plot_data_csv(table: CoefficientTable, R: float) -> str:
    """Columns n, log|c_n|, n log(1/R) for overlaying the predicted growth."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "log_abs_c", "n_log_inv_R"])
    for n, y in zip(table.orders, table.log_abs_c()):
        w.writerow([int(n), fmt(y), fmt(n * math.log(1 / R))])
    return buf.getvalue()
