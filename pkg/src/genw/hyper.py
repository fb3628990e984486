"""Pochhammer products and terminating multivariable hypergeometric sums.

Everything here is an exact finite sum. Pochhammer symbols are plain products,
so complex and arbitrary-precision arguments work unchanged and no
gamma-function poles or branch cuts are involved.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import gmpy2
import mpmath

from .errors import (
    CenterParameterError,
    CenterWeightError,
    DomainError,
    ParameterError,
    PochhammerPoleError,
)
from .params import ParamSet


def pochhammer(q, k: int):
    """Rising factorial ``q (q+1) ... (q+k-1)``; ``(q)_0 = 1``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    out = 1
    for j in range(k):
        out = out * (q + j)
    return out


def falling_factorial(x, a: int):
    """Falling factorial ``x (x-1) ... (x-a+1)``; equals ``(-1)**a * pochhammer(-x, a)``."""
    if a < 0:
        raise ValueError("a must be nonnegative")
    out = 1
    for j in range(a):
        out = out * (x - j)
    return out


def _is_pole(c, k: int) -> bool:
    # (c)_k == 0 iff c is in {0, -1, ..., -(k-1)}
    c = complex(c)
    if c.imag != 0 or c.real > 0:
        return False
    r = round(c.real)
    return c.real == r and -r <= k - 1


@dataclass(frozen=True)
class MultiIndex:
    k: tuple[int, ...]
    weight: int = field(init=False)

    def __post_init__(self):
        k = tuple(int(v) for v in self.k)
        if any(v < 0 for v in k):
            raise ValueError(f"negative entry in multi-index {k}")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "weight", sum(k))

    def __len__(self):
        return len(self.k)

    def __iter__(self):
        return iter(self.k)


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of ``parts`` nonnegative integers summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def multi_indices(m: int, max_weight: int) -> Iterator[MultiIndex]:
    """Every m-vector of nonnegative integers with weight <= max_weight, graded by weight."""
    if m < 1:
        raise ValueError("m must be at least 1")
    for w in range(max_weight + 1):
        for k in compositions(w, m):
            yield MultiIndex(k)


@dataclass(frozen=True)
class LauricellaArgs:
    """Arguments of the terminating Lauricella F_D(-k, b; c; x)."""

    k: int
    b: tuple[complex, ...]
    c: complex
    x: tuple[complex, ...]

    def __post_init__(self):
        if self.k < 0:
            raise ParameterError("k must be nonnegative")
        object.__setattr__(self, "b", tuple(self.b))
        object.__setattr__(self, "x", tuple(self.x))
        if len(self.b) != len(self.x):
            raise ParameterError("b and x must have equal length")
        if len(self.b) < 1:
            raise ParameterError("F_D needs at least one variable")

    @property
    def m(self) -> int:
        return len(self.b)


def lauricella_fd(args: LauricellaArgs, side=None) -> complex:
    """Terminating Lauricella F_D^{(m)}(-k, b_1..b_m; c; x_1..x_m).

    The sum runs over multi-indices of weight at most ``k``; beyond that
    ``(-k)_K`` vanishes. Raises :class:`PochhammerPoleError` when ``(c)_j``
    is zero for some ``j <= k``.
    """
    k, b, c, x = args.k, args.b, args.c, args.x
    if _is_pole(c, k):
        raise PochhammerPoleError(f"(c)_j vanishes for c={c} within weight {k}", side=side)
    return _fd_sum(k, b, c, x)


def _fd_sum(k, b, c, x, w0=None):
    # with w0 the weight-K term also carries w0**(k - K), so callers can pass
    # x_i * w0 instead of x_i and skip the overflowing w0**k prefactor
    re_terms, im_terms = [], []
    try:
        for idx in multi_indices(len(b), k):
            K = idx.weight
            term = complex(pochhammer(-k, K)) / complex(pochhammer(c, K))
            if w0 is not None:
                term *= w0 ** (k - K)
            for bi, xi, ki in zip(b, x, idx.k):
                term *= pochhammer(bi, ki) * xi**ki / math.factorial(ki)
            re_terms.append(term.real)
            im_terms.append(term.imag)
        out = complex(math.fsum(re_terms), math.fsum(im_terms))
    except (OverflowError, ValueError) as exc:
        raise DomainError(f"F_D terms overflow double precision: {exc}") from None
    if not cmath.isfinite(out):
        raise DomainError("F_D terms overflow double precision")
    return out


def _fn_sum(n: int, t: Sequence, p: Sequence, one=1.0):
    """Graded streaming sum for F_n; returns ``(terms_by_level, max_abs_term)``.

    ``one`` fixes the arithmetic: ``1.0`` for complex doubles or a gmpy2
    ``mpc`` for extended precision. Each term is derived from a predecessor of
    one lower weight by two multiplications.
    """
    m = len(t)
    # ratio[i][j] = (n p_i + j) / ((j + 1) n t_i): the update for k_i -> k_i + 1
    ratio = [[(n * pj + j) / ((j + 1) * (n * tj)) for j in range(n - 1)] for tj, pj in zip(t, p)]
    zero = (0,) * m
    level = [(zero, m - 1, one * 1)]
    levels = [[one * 1]]
    max_abs = abs(one)
    for K in range(n - 1):
        head = 1 - n + K
        nxt = []
        for k, first, term in level:
            scaled = term * head
            # increment only indices <= the first nonzero one so each
            # composition of weight K+1 is produced exactly once
            for i in range(first + 1):
                ki = k[i]
                nk = k[:i] + (ki + 1,) + k[i + 1:]
                nxt.append((nk, i, scaled * ratio[i][ki]))
        level = nxt
        vals = [v for _, _, v in level]
        levels.append(vals)
        # max(|re|, |im|) is within sqrt(2) of |v| and much cheaper for mpc
        big = max(max(abs(v.real), abs(v.imag)) for v in vals)
        if big > max_abs:
            max_abs = big
    return levels, max_abs


def fn_coefficient(n: int, params: ParamSet) -> complex:
    """F_n, the terminating Kampe de Feriet sum in the inverse's Taylor coefficients.

    ``F_n = sum_k (1-n)_{|k|} prod_i (n p_i)_{k_i} / (k_i! (n t_i)^{k_i})``
    over multi-indices of weight at most ``n - 1``. The terms alternate and
    can cancel by many orders of magnitude, so the sum is accurate to about
    1e-13 relative via :func:`fn_adaptive`.
    """
    if n < 1:
        raise ParameterError("n must be positive")
    return complex(fn_adaptive(n, params)[0])


def _to_mpmath(x):
    if isinstance(x, gmpy2.mpc):
        return mpmath.mpc(_to_mpmath(x.real), _to_mpmath(x.imag))
    if not x:
        return mpmath.mpf(0)
    man, exp = x.as_mantissa_exp()
    return mpmath.mpf((int(man), int(exp)))


def fn_coefficient_mp(n: int, params: ParamSet, dps: int = 50):
    """F_n evaluated with ``dps`` decimal digits of working precision.

    Returns ``(value, max_abs_term)`` as mpmath numbers; the ratio
    ``max_abs_term / |value|`` is the cancellation factor of the sum.
    """
    if n < 1:
        raise ParameterError("n must be positive")
    if params.m == 0:
        return mpmath.mpc(1), mpmath.mpf(1)
    bits = int(dps * 3.33) + 16
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        t = [gmpy2.mpc(v) for v in params.t]
        p = [gmpy2.mpc(v) for v in params.p]
        levels, max_abs = _fn_sum(n, t, p, gmpy2.mpc(1))
        re = gmpy2.fsum([v.real for lev in levels for v in lev])
        im = gmpy2.fsum([v.imag for lev in levels for v in lev])
        total = gmpy2.mpc(re, im)
    with mpmath.workprec(bits):
        return _to_mpmath(total), _to_mpmath(gmpy2.mpfr(max_abs))


def fn_adaptive(n: int, params: ParamSet, rtol: float = 1e-13, dps_hint: int = 0):
    """F_n to relative accuracy about ``rtol``, as an mpmath number.

    Tries double precision first (unless ``dps_hint`` already asks for more)
    and escalates to mpmath with enough digits to absorb the observed
    cancellation ``max|term| / |F_n|``.  Returns ``(value, digits_used)`` with
    ``digits_used = 0`` for the double-precision path.
    """
    if params.m == 0:
        return mpmath.mpc(1), 0
    dps = dps_hint
    if dps <= 0:
        levels, big = _fn_sum(n, params.t, params.p, 1.0 + 0j)
        vals = [v for lev in levels for v in lev]
        s = complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))
        if math.isfinite(big) and cmath.isfinite(s) and s != 0:
            log_cond = math.log10(n) + math.log10(big) - math.log10(abs(s))
            if log_cond + math.log10(2.3e-16) <= math.log10(rtol):
                return mpmath.mpc(s), 0
            dps = 10 - int(math.log10(rtol)) + int(log_cond)
        else:
            dps = 30 + n
    for _ in range(8):
        val, big = fn_coefficient_mp(n, params, dps)
        with mpmath.workdps(dps):
            if val == 0:
                need = dps + 20
            else:
                need = 8 - int(math.log10(rtol)) + int(mpmath.ceil(mpmath.log10(big / abs(val) * n)))
        if need <= dps:
            return val, dps
        if val == 0 and dps > 60 + 4 * n:
            return val, dps
        dps = need + 10
    return val, dps


def fn_term(n: int, k: Sequence[int], params: ParamSet):
    """One summand a_n(k) of F_n, computed from Pochhammer products."""
    K = sum(k)
    out = pochhammer(1 - n, K)
    for ki, tj, pj in zip(k, params.t, params.p):
        out = out * pochhammer(n * pj, ki) / (math.factorial(ki) * (n * tj) ** ki)
    return out


def chu_vandermonde_lhs(k: int, q: Sequence[complex], w: Sequence[complex]) -> complex:
    """Brute-force sum over compositions of ``k``: multinomial * prod (q_j)_{k_j} w_j^{k_j}."""
    if len(q) != len(w) or not q:
        raise ParameterError("q and w must be nonempty and of equal length")
    fk = math.factorial(k)
    re_terms, im_terms = [], []
    for ks in compositions(k, len(q)):
        term = complex(fk)
        for qj, wj, kj in zip(q, w, ks):
            term *= pochhammer(qj, kj) * wj**kj / math.factorial(kj)
        re_terms.append(term.real)
        im_terms.append(term.imag)
    return complex(math.fsum(re_terms), math.fsum(im_terms))


def chu_vandermonde_rhs(k: int, q: Sequence[complex], w: Sequence[complex], center: int) -> complex:
    """Closed form of :func:`chu_vandermonde_lhs` as one F_D centered on ``center``.

    ``w_i^k (sum q)_k F_D^{(r-1)}(-k, q_{j != i}; sum q; 1 - w_{j != i} / w_i)``
    with ``i = center`` (0-based).
    """
    r = len(q)
    if len(w) != r or r == 0:
        raise ParameterError("q and w must be nonempty and of equal length")
    if not 0 <= center < r:
        raise ParameterError(f"center {center} out of range for r={r}")
    qi, wi = q[center], w[center]
    if _is_pole(qi, k):
        raise CenterParameterError(f"q[{center}]={qi} lies in {{0, -1, ..., -{k - 1}}}")
    if wi == 0:
        raise CenterWeightError(f"w[{center}] is zero")
    Q = sum(q)
    scale = complex(pochhammer(Q, k))
    if r == 1:
        return scale * complex(wi) ** k
    if _is_pole(Q, k):
        raise PochhammerPoleError(f"(c)_j vanishes for c={Q} within weight {k}")
    others = [j for j in range(r) if j != center]
    # w_i^k x_j^{k_j} folded as w_i^{k-K} (w_i - w_j)^{k_j}: no overflow for tiny w_i
    return scale * _fd_sum(k, [q[j] for j in others], Q, [wi - w[j] for j in others], w0=complex(wi))


def lauricella_reflection_check(k: int, b: Sequence[complex], c: complex, x: Sequence[complex]):
    """Both sides of the F_D reflection ``x -> 1 - x``.

    Returns ``(lhs, rhs)`` with ``lhs = F_D(-k, b; c; x)`` and
    ``rhs = (c - sum b)_k / (c)_k * F_D(-k, b; 1 + sum b - k - c; 1 - x)``.
    A pole on either side raises :class:`PochhammerPoleError` with ``side``
    set to ``"lhs"`` or ``"rhs"``.
    """
    b = tuple(b)
    x = tuple(x)
    B = sum(b)
    c_ref = 1 + B - k - c
    lhs = lauricella_fd(LauricellaArgs(k, b, c, x), side="lhs")
    if _is_pole(c_ref, k):
        raise PochhammerPoleError(f"reflected c={c_ref} is a pole within weight {k}", side="rhs")
    prefactor = complex(pochhammer(c - B, k)) / complex(pochhammer(c, k))
    rhs = prefactor * lauricella_fd(LauricellaArgs(k, b, c_ref, tuple(1 - v for v in x)), side="rhs")
    return lhs, rhs
