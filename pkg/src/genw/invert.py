"""Numerical inversion of the forward map.

Newton iteration gives an oracle that is independent of the hypergeometric
series; :func:`generalized_w` seeds it with the series to evaluate the branch
of the inverse through 0.  :func:`lagrange_coefficient` recovers Taylor
coefficients of the inverse by contour quadrature, again without touching
the series code.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError
from .params import ParamSet
from .series import (
    BRANCHES,
    CoefficientTable,
    evaluate_series,
    forward_map,
    plog,
    series_terms,
)


class Method(str, enum.Enum):
    SERIES_ONLY = "series_only"
    NEWTON_POLISHED = "newton_polished"


@dataclass(frozen=True)
class InversionResult:
    z: complex
    residual: float
    iterations: int
    method: Method
    converged: bool = True
    branch_jump: bool = False
    branch: str = "principal"
    seed: complex | None = None
    n_terms: int | None = None

    def to_dict(self) -> dict:
        return {
            "z": [self.z.real, self.z.imag],
            "residual": self.residual,
            "iterations": self.iterations,
            "method": self.method.value,
            "converged": self.converged,
            "branch_jump": self.branch_jump,
            "branch": self.branch,
            "n_terms": self.n_terms,
        }


def _branch_args(z: complex, params: ParamSet, branch: str) -> list[float]:
    # argument of the base whose principal power is taken in each factor
    if branch == "principal":
        return [math.atan2((z - tj).imag + 0.0, (z - tj).real) for tj in params.t]
    return [plog(1 - z / tj).imag for tj in params.t]


def _crosses_cut(before, after) -> bool:
    return any(abs(a - b) > math.pi for a, b in zip(before, after))


def newton_invert(
    w: complex,
    z0: complex,
    params: ParamSet,
    tol: float = 1e-13,
    max_iter: int = 60,
    branch: str = "principal",
) -> InversionResult:
    """Solve ``forward_map(z) = w`` by Newton iteration from ``z0``.

    The step uses ``f / f' = 1 / (1/z + sum p_i/(z - t_i) + 1)``, so the
    product is evaluated once per iteration. Stops when the residual is
    at most ``tol``, when the step stalls at rounding level, or after
    ``max_iter`` steps. Non-convergence is reported in the result, not
    raised. A jump of more than pi in the argument of any power base between
    iterates marks a branch-cut crossing.
    """
    if tol <= 0:
        raise ParameterError("tol must be positive")
    if branch not in BRANCHES:
        raise ParameterError(f"unknown branch {branch!r}")
    w = complex(w)
    z = complex(z0)
    fz = forward_map(z, params, branch)
    best = (abs(fz - w), z)
    args = _branch_args(z, params, branch)
    jump = False
    it = 0
    converged = best[0] <= tol
    while not converged and it < max_iter:
        it += 1
        if z == 0:
            dz = -(fz - w) / _fprime_at_zero(params, branch)
        else:
            ld = 1 / z + sum(pj / (z - tj) for tj, pj in zip(params.t, params.p)) + 1
            if fz == 0 or ld == 0:
                break
            dz = -(fz - w) / (fz * ld)
        z_new = z + dz
        try:
            f_new = forward_map(z_new, params, branch)
        except DomainError:
            break
        new_args = _branch_args(z_new, params, branch)
        if _crosses_cut(args, new_args):
            jump = True
        z, fz, args = z_new, f_new, new_args
        r = abs(fz - w)
        if r < best[0]:
            best = (r, z)
        if r <= tol:
            converged = True
        elif abs(dz) <= 4e-16 * max(abs(z), 1e-300):
            converged = r <= max(tol, 1e3 * 2.2e-16 * max(abs(w), 1e-300))
            break
    res, z = best
    return InversionResult(
        z=z,
        residual=abs(forward_map(z, params, branch) - w),
        iterations=it,
        method=Method.NEWTON_POLISHED,
        converged=converged,
        branch_jump=jump,
        branch=branch,
    )


def _fprime_at_zero(params: ParamSet, branch: str) -> complex:
    out = 1 + 0j
    for tj, pj in zip(params.t, params.p):
        out *= cmath.exp(pj * plog(-tj))
    return out


def seed_terms(x: complex, table: CoefficientTable) -> int:
    """Truncation order for a series seed: the position of the smallest nonzero term.

    Inside the disk of convergence the terms shrink and the full table is
    used; outside, this is the usual optimal truncation of a divergent sum.
    """
    mags = series_terms(x, table)
    nz = np.nonzero(mags)[0]
    if nz.size == 0:
        return table.N
    sub = mags[nz]
    # last occurrence of the minimum
    j = nz[len(sub) - 1 - int(np.argmin(sub[::-1]))]
    return int(j) + 1


def generalized_w(
    w: complex,
    params: ParamSet,
    table: CoefficientTable,
    tol: float = 1e-13,
    n_terms: int | None = None,
    branch: str = "series",
    max_iter: int = 60,
) -> InversionResult:
    """The branch of the inverse of the forward map through 0, evaluated at ``w``.

    The Taylor series gives a seed which Newton iteration then polishes on
    the branch of the power factors the series represents (``"series"``).
    ``method`` is ``series_only`` when polishing moved the seed by at most
    ``tol``.
    """
    if table.params != params:
        raise ParameterError("table was built for different parameters")
    w = complex(w)
    if n_terms is None:
        n_terms = seed_terms(w, table)
    seed = evaluate_series(w, table, n_terms)
    res = newton_invert(w, seed, params, tol=tol, max_iter=max_iter, branch=branch)
    moved = abs(res.z - seed)
    method = Method.SERIES_ONLY if moved <= tol else Method.NEWTON_POLISHED
    return InversionResult(
        z=res.z,
        residual=res.residual,
        iterations=res.iterations,
        method=method,
        converged=res.converged,
        branch_jump=res.branch_jump,
        branch=branch,
        seed=seed,
        n_terms=n_terms,
    )


def lagrange_coefficient(n: int, params: ParamSet, radius: float | None = None, nodes: int | None = None) -> complex:
    """c_n from Lagrange inversion by trapezoidal contour quadrature.

    ``c_n = (1/n) [w^(n-1)] (w / f(w))^n``, and the coefficient is the mean
    of ``(w/f(w))^n w^(1-n)`` over equispaced nodes on ``|w| = radius``.
    ``w / f(w) = prod (-t_i)^(-p_i) (1 - w/t_i)^(-p_i) e^(-w)``, the branch
    analytic for ``|w| < min |t_i|``. The default radius is
    ``0.1 * min |t_i|`` (1 when there are no roots).
    """
    if n < 1:
        raise ParameterError("n must be positive")
    if radius is None:
        radius = 0.1 * min((abs(tj) for tj in params.t), default=10.0)
    if nodes is None:
        nodes = max(64, 4 * n + 32)
    theta = 2 * np.pi * np.arange(nodes) / nodes
    wv = radius * np.exp(1j * theta)
    log_h = -wv
    for tj, pj in zip(params.t, params.p):
        log_h = log_h - pj * (plog(-tj) + np.log(1 - wv / tj))
    vals = np.exp(n * log_h + (1 - n) * np.log(wv))
    return complex(np.mean(vals)) / n
