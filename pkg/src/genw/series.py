"""Forward map, normal-form reduction and the Taylor series of its inverse.

All complex powers are principal values, ``a**b = exp(b * Log a)`` with
``arg`` in (-pi, pi].  Coefficients of the inverse series are stored as a
complex mantissa and a power-of-two exponent so that root-test diagnostics
survive magnitudes outside the double range.
"""
from __future__ import annotations

import cmath
import csv
import io
import math
import sys
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import DomainError, ParameterError
from .hyper import fn_adaptive
from .params import ParamSet

__all__ = [
    "ParamSet",
    "CoefficientTable",
    "NormalFormTransform",
    "plog",
    "ppow",
    "forward_map",
    "normalize_general_form",
    "taylor_coefficient",
    "build_table",
    "evaluate_series",
]

BRANCHES = ("principal", "series")


def plog(z: complex) -> complex:
    """Principal logarithm with the argument in (-pi, pi]."""
    z = complex(z)
    # adding 0.0 turns a negative zero imaginary part into +0.0
    return cmath.log(complex(z.real, z.imag + 0.0))


def ppow(a: complex, b: complex) -> complex:
    """Principal power ``a**b``."""
    a = complex(a)
    if a == 0:
        b = complex(b)
        if b == 0:
            return 1 + 0j
        if b.real > 0:
            return 0j
        raise DomainError("zero raised to a power with nonpositive real part")
    try:
        return cmath.exp(complex(b) * plog(a))
    except OverflowError:
        raise DomainError(f"{a}**{b} overflows") from None


def _is_integer(z: complex) -> bool:
    z = complex(z)
    return z.imag == 0 and z.real == round(z.real)


def _factor(z: complex, tj: complex, pj: complex, branch: str) -> complex:
    if branch == "principal":
        return ppow(z - tj, pj)
    # continuation of the principal value at z = 0 across the disk |z| < |t_j|
    return ppow(-tj, pj) * ppow(1 - z / tj, pj)


def forward_map(z: complex, params: ParamSet, branch: str = "principal") -> complex:
    """``f(z) = z * prod (z - t_i)**p_i * exp(z)``.

    ``branch="principal"`` uses the principal value of every factor.
    ``branch="series"`` writes ``(z - t)**p`` as ``(-t)**p * (1 - z/t)**p``,
    the branch analytic in ``|z| < |t|`` that the inverse Taylor series
    describes; the two agree near 0 unless a principal cut passes through 0
    (positive real ``t`` with non-integer ``p``).
    """
    if branch not in BRANCHES:
        raise ParameterError(f"unknown branch {branch!r}")
    z = complex(z)
    try:
        out = z * cmath.exp(z)
    except OverflowError:
        raise DomainError(f"exp(z) overflows at z = {z}") from None
    for tj, pj in zip(params.t, params.p):
        if z == tj:
            if not _is_integer(pj):
                raise DomainError(f"z = {tj} is a branch point (p = {pj})")
            if complex(pj).real < 0:
                raise DomainError(f"z = {tj} is a pole (p = {pj})")
        out *= _factor(z, tj, pj, branch)
    return out


def log_derivative(z: complex, params: ParamSet) -> complex:
    """``f'(z) / f(z) = 1/z + sum p_i / (z - t_i) + 1``."""
    z = complex(z)
    return 1 / z + sum(pj / (z - tj) for tj, pj in zip(params.t, params.p)) + 1


def forward_derivative(z: complex, params: ParamSet, branch: str = "principal") -> complex:
    """``f'(z)``, written as ``R(z) e^z (1 + z (sum p_i/(z - t_i) + 1))`` so z = 0 is regular."""
    z = complex(z)
    r = cmath.exp(z)
    s = 1 + 0j
    for tj, pj in zip(params.t, params.p):
        r *= _factor(z, tj, pj, branch)
        s += pj / (z - tj)
    return r * (1 + z * s)


@dataclass(frozen=True)
class NormalFormTransform:
    """Reduction of ``y = (z - t0)^p0 prod (z - t_i)^p_i e^z`` to standard form.

    With ``w = (z - t0) / p0`` the equation becomes
    ``argument_scale * y**root_power = w prod (w - t_i')^p_i' e^w`` where the
    right side is the standard forward map for ``params_out``.  The
    exponential on the right is ``e^(residual_exponent * w)``; the
    substitution gives exactly ``e^w``, so the recorded value is 1.
    """

    params_out: ParamSet
    argument_scale: complex
    root_power: complex
    variable_scale: complex
    variable_shift: complex
    residual_exponent: complex = 1.0

    def standard_argument(self, y: complex) -> complex:
        return self.argument_scale * ppow(y, self.root_power)

    def to_original(self, w: complex) -> complex:
        return self.variable_scale * w + self.variable_shift


def normalize_general_form(t0: complex, p0: complex, params: ParamSet) -> NormalFormTransform:
    t0 = complex(t0)
    p0 = complex(p0)
    if p0 == 0:
        raise ParameterError("p0 must be nonzero")
    for j, tj in enumerate(params.t):
        if tj == t0:
            raise ParameterError(f"t[{j}] coincides with t0")
    new = ParamSet(
        tuple((tj - t0) / p0 for tj in params.t),
        tuple(pj / p0 for pj in params.p),
    )
    # y^(1/p0) = p0^(1 + sum p/p0) e^(t0/p0) * [w prod (w - t')^p' e^w]
    total = sum(params.p, 0j) / p0
    scale = ppow(p0, -(1 + total)) * cmath.exp(-t0 / p0)
    return NormalFormTransform(
        params_out=new,
        argument_scale=scale,
        root_power=1 / p0,
        variable_scale=p0,
        variable_shift=t0,
    )


def _split(z) -> tuple[complex, int]:
    """mpmath complex -> (mantissa, exponent) with |mantissa| in [0.5, 1)."""
    z = mpmath.mpc(z)
    if z == 0:
        return 0j, 0
    e = int(mpmath.floor(mpmath.log(abs(z), 2))) + 1
    m = mpmath.ldexp(z.real, -e), mpmath.ldexp(z.imag, -e)
    return complex(float(m[0]), float(m[1])), e


def _prefactor(n: int, params: ParamSet):
    """``(-n)^(n-1)/n! * prod (-t_i)^(-n p_i)`` (principal powers) in mpmath."""
    out = mpmath.mpf((-n) ** (n - 1)) / mpmath.mpf(math.factorial(n))
    if params.m:
        expo = sum(-n * mpmath.mpc(pj) * mpmath.mpc(plog(-tj)) for tj, pj in zip(params.t, params.p))
        out = out * mpmath.exp(expo)
    return out


def taylor_coefficient(n: int, params: ParamSet) -> complex:
    """c_n, the coefficient of x**n in the inverse series, in double precision."""
    if n < 1:
        raise ParameterError("n must be positive")
    F, _ = fn_adaptive(n, params)
    with mpmath.workdps(30):
        return complex(_prefactor(n, params) * F)


@dataclass(frozen=True, eq=False)
class CoefficientTable:
    """Coefficients c_1..c_N of the inverse series together with F_1..F_N.

    Values are held as ``mantissa * 2**exponent``; :attr:`c` and
    :attr:`f_values` give plain complex arrays (``inf`` where they overflow).
    """

    params: ParamSet
    N: int
    c_mantissa: np.ndarray
    c_exponent: np.ndarray
    f_mantissa: np.ndarray
    f_exponent: np.ndarray

    @staticmethod
    def _expand(mant, expo):
        out = np.empty(len(mant), dtype=complex)
        with np.errstate(over="ignore"):
            out.real = np.ldexp(mant.real, expo)
            out.imag = np.ldexp(mant.imag, expo)
        return out

    @property
    def c(self) -> np.ndarray:
        return self._expand(self.c_mantissa, self.c_exponent)

    @property
    def f_values(self) -> np.ndarray:
        return self._expand(self.f_mantissa, self.f_exponent)

    @property
    def orders(self) -> np.ndarray:
        return np.arange(1, self.N + 1)

    def log_abs_c(self) -> np.ndarray:
        """``log|c_n|`` for n = 1..N; ``-inf`` where c_n vanishes."""
        with np.errstate(divide="ignore"):
            return np.log(np.abs(self.c_mantissa)) + self.c_exponent * math.log(2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "re_c", "im_c", "re_F", "im_F"])
        for j in range(self.N):
            writer.writerow(
                [j + 1]
                + _fmt_scaled(self.c_mantissa[j], int(self.c_exponent[j]))
                + _fmt_scaled(self.f_mantissa[j], int(self.f_exponent[j]))
            )
        return buf.getvalue()

    def to_dict(self) -> dict:
        rows = []
        for j in range(self.N):
            c = _fmt_scaled(self.c_mantissa[j], int(self.c_exponent[j]))
            f = _fmt_scaled(self.f_mantissa[j], int(self.f_exponent[j]))
            rows.append({"n": j + 1, "c": c, "F": f})
        return {"params": self.params.to_dict(), "N": self.N, "coefficients": rows}


def fmt(x: float) -> str:
    """17 significant digits."""
    return format(float(x), ".17g")


def _fmt_scaled(mant: complex, expo: int) -> list[str]:
    out = []
    for part in (float(mant.real), float(mant.imag)):
        try:
            v = math.ldexp(part, expo)
        except OverflowError:
            v = math.inf
        if part == 0 or (math.isfinite(v) and abs(v) >= sys.float_info.min):
            out.append(fmt(v))
        else:
            with mpmath.workdps(20):
                out.append(mpmath.nstr(mpmath.ldexp(mpmath.mpf(part), expo), 17))
    return out


def build_table(params: ParamSet, N: int) -> CoefficientTable:
    """Taylor coefficients c_1..c_N of the inverse of the forward map."""
    if N < 1:
        raise ParameterError("N must be at least 1")
    c_m = np.zeros(N, dtype=complex)
    c_e = np.zeros(N, dtype=np.int64)
    f_m = np.zeros(N, dtype=complex)
    f_e = np.zeros(N, dtype=np.int64)
    dps = 0
    for n in range(1, N + 1):
        # cancellation grows with n, so the previous order's precision is a
        # good starting point; shrink it slightly to allow recovery
        F, used = fn_adaptive(n, params, dps_hint=max(0, dps - 5) if dps else 0)
        dps = used
        f_m[n - 1], f_e[n - 1] = _split(F)
        with mpmath.workdps(30):
            c = _prefactor(n, params) * F
        c_m[n - 1], c_e[n - 1] = _split(c)
    for arr in (c_m, c_e, f_m, f_e):
        arr.flags.writeable = False
    return CoefficientTable(params, N, c_m, c_e, f_m, f_e)


def evaluate_series(x: complex, table: CoefficientTable, n_terms: int | None = None) -> complex:
    """Partial sum ``sum_{n=1}^{n_terms} c_n x**n`` (Horner)."""
    if n_terms is None:
        n_terms = table.N
    if not 1 <= n_terms <= table.N:
        raise ParameterError(f"n_terms must lie in [1, {table.N}]")
    x = complex(x)
    if x == 0:
        return 0j
    c = table.c[:n_terms]
    if np.all(np.isfinite(c)):
        acc = 0j
        for cn in c[::-1]:
            acc = acc * x + complex(cn)
        return acc * x
    # coefficients beyond the double range: sum scaled terms directly
    lx = plog(x)
    acc = 0j
    for j in range(n_terms - 1, -1, -1):
        mant = complex(table.c_mantissa[j])
        if mant == 0:
            continue
        acc += mant * cmath.exp((j + 1) * lx + int(table.c_exponent[j]) * math.log(2))
    return acc


def series_terms(x: complex, table: CoefficientTable) -> np.ndarray:
    """Magnitudes ``|c_n x**n|`` for n = 1..N, computed without overflow."""
    x = complex(x)
    if x == 0:
        return np.zeros(table.N)
    with np.errstate(divide="ignore"):
        logs = table.log_abs_c() + table.orders * math.log(abs(x))
    return np.exp(logs)
