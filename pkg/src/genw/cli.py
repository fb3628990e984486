"""Command line front end: ``genw coeffs|eval|invert|radius|verify|asymptotics``.

Exit status: 0 on success, 1 for invalid input, 2 when a verification suite
reports a failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import random
import sys

import mpmath
from dataclasses import dataclass

from .errors import GenWError, ParameterError
from .hyper import (
    chu_vandermonde_lhs,
    chu_vandermonde_rhs,
    fn_coefficient,
    pochhammer,
    lauricella_reflection_check,
)
from .invert import generalized_w
from .params import ParamSet
from .radius import coefficient_asymptotic_check, plot_data_csv, radius_report
from .series import build_table, evaluate_series, fmt, forward_map

COMMANDS = ("coeffs", "eval", "invert", "radius", "verify", "asymptotics")
DEFAULT_N = {"coeffs": 20, "eval": 40, "invert": 40, "radius": 300, "verify": 8, "asymptotics": 400}

EXIT_OK, EXIT_INVALID, EXIT_VERIFY = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for verification failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class RunConfig:
    params: ParamSet
    command: str
    N: int
    value: complex | None = None
    tol: float = 1e-13
    output_format: str = "json"
    seed: int = 0

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ParameterError(f"unknown command {self.command!r}")
        if self.N < 1:
            raise ParameterError("--n must be at least 1")
        if not self.tol > 0:
            raise ParameterError("--tol must be positive")
        if self.output_format not in ("json", "csv"):
            raise ParameterError("--format must be json or csv")
        if self.command in ("eval", "invert") and self.value is None:
            flag = "--x" if self.command == "eval" else "--w"
            raise ParameterError(f"{self.command} requires {flag}")
        if self.command == "radius" and self.N < 50:
            raise ParameterError("radius requires --n >= 50")


def parse_complex(text: str, name: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise ParameterError(f"{name}: expected 're,im', got {text!r}")


def _parse_list(values, name):
    out = []
    for chunk in values or []:
        for item in chunk.split(";"):
            if item.strip():
                out.append(parse_complex(item.strip(), name))
    return out


def _params_from_args(ns) -> ParamSet:
    if ns.params:
        if ns.t or ns.p:
            raise ParameterError("give either --params or --t/--p, not both")
        try:
            with open(ns.params) as fh:
                text = fh.read()
        except OSError as exc:
            raise ParameterError(f"--params: cannot read {ns.params} ({exc.strerror})") from None
        return ParamSet.from_json(text)
    return ParamSet(tuple(_parse_list(ns.t, "--t")), tuple(_parse_list(ns.p, "--p")))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="genw", description="Generalized Lambert W series, inversion and radius tools.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--params", help="JSON file {\"t\": [[re, im], ...], \"p\": [[re, im], ...]}")
    parser.add_argument("--t", action="append", help="root t_i as re,im (repeat or separate with ';')")
    parser.add_argument("--p", action="append", help="exponent p_i as re,im (repeat or separate with ';')")
    parser.add_argument("--n", type=int, help="series order / table size")
    parser.add_argument("--x", help="series argument re,im (eval)")
    parser.add_argument("--w", help="value to invert re,im (invert)")
    parser.add_argument("--tol", type=float, default=1e-13)
    parser.add_argument("--format", dest="output_format", choices=("json", "csv"), default="json")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", help="output file (default stdout)")
    parser.add_argument("--plot-out", help="radius: also write plot data CSV here")
    return parser


def config_from_args(ns) -> RunConfig:
    params = _params_from_args(ns)
    value = None
    if ns.command == "eval" and ns.x is not None:
        value = parse_complex(ns.x, "--x")
    if ns.command == "invert" and ns.w is not None:
        value = parse_complex(ns.w, "--w")
    N = ns.n if ns.n is not None else DEFAULT_N[ns.command]
    return RunConfig(params, ns.command, N, value, ns.tol, ns.output_format, ns.seed)


def _pair(z: complex) -> list[float]:
    return [z.real, z.imag]


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _rows_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# -- commands ---------------------------------------------------------------


def _cmd_coeffs(cfg: RunConfig):
    table = build_table(cfg.params, cfg.N)
    if cfg.output_format == "csv":
        return table.to_csv(), EXIT_OK
    return _dump(table.to_dict()), EXIT_OK


def _cmd_eval(cfg: RunConfig):
    table = build_table(cfg.params, cfg.N)
    z = evaluate_series(cfg.value, table)
    residual = abs(forward_map(z, cfg.params, branch="series") - cfg.value)
    if cfg.output_format == "csv":
        return _rows_csv(["re_x", "im_x", "re_z", "im_z", "residual", "n_terms"],
                         [[fmt(cfg.value.real), fmt(cfg.value.imag), fmt(z.real), fmt(z.imag),
                           fmt(residual), cfg.N]]), EXIT_OK
    return _dump({"x": _pair(cfg.value), "z": _pair(z), "residual": residual, "n_terms": cfg.N}), EXIT_OK


def _cmd_invert(cfg: RunConfig):
    table = build_table(cfg.params, cfg.N)
    res = generalized_w(cfg.value, cfg.params, table, tol=cfg.tol)
    if cfg.output_format == "csv":
        return _rows_csv(
            ["re_w", "im_w", "re_z", "im_z", "residual", "iterations", "method", "converged", "branch_jump"],
            [[fmt(cfg.value.real), fmt(cfg.value.imag), fmt(res.z.real), fmt(res.z.imag),
              fmt(res.residual), res.iterations, res.method.value, int(res.converged), int(res.branch_jump)]],
        ), EXIT_OK
    out = {"w": _pair(cfg.value)}
    out.update(res.to_dict())
    return _dump(out), EXIT_OK


def _cmd_radius(cfg: RunConfig, plot_out=None):
    table = build_table(cfg.params, cfg.N)
    report = radius_report(cfg.params, cfg.N, table=table)
    if plot_out:
        with open(plot_out, "w") as fh:
            fh.write(plot_data_csv(table, report.best.R))
    if cfg.output_format == "csv":
        return report.to_csv(), EXIT_OK
    return _dump(report.to_dict()), EXIT_OK


def _rel(a: complex, b: complex) -> float:
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def verification_suites(seed: int, max_k: int = 8, cases: int = 200):
    """Yield ``(suite, case, lhs, rhs, rel_err, status)`` rows.

    ``status`` is ``pass``, ``fail`` or ``invalid`` (a sampled instance that
    violates a precondition; tabulated, not counted as failure).
    """
    rng = random.Random(seed)

    def rc(scale=2.0):
        return complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale))

    for case in range(cases):
        r = rng.randint(1, 4)
        k = rng.randint(1, max_k)
        q = [rc() for _ in range(r)]
        w = [rc() for _ in range(r)]
        center = rng.randrange(r)
        try:
            lhs = chu_vandermonde_lhs(k, q, w)
            rhs = chu_vandermonde_rhs(k, q, w, center)
        except GenWError as exc:
            yield "chu_vandermonde", case, None, None, None, f"invalid: {exc}"
            continue
        err = _rel(lhs, rhs)
        yield "chu_vandermonde", case, lhs, rhs, err, "pass" if err <= 1e-9 else "fail"

    for case in range(cases):
        m = rng.randint(1, 3)
        k = rng.randint(1, max_k)
        b = [rc() for _ in range(m)]
        x = [rc(1.5) for _ in range(m)]
        try:
            lhs, rhs = lauricella_reflection_check(k, b, rc(), x)
        except GenWError as exc:
            yield "lauricella_reflection", case, None, None, None, f"invalid: {exc}"
            continue
        err = _rel(lhs, rhs)
        yield "lauricella_reflection", case, lhs, rhs, err, "pass" if err <= 1e-9 else "fail"

    for case in range(cases // 4):
        m = rng.randint(1, 3)
        n = rng.randint(1, 10)
        params = ParamSet(tuple(rc() or 1 for _ in range(m)), tuple(rc() or 1 for _ in range(m)))
        fast = fn_coefficient(n, params)
        brute = _fn_bruteforce(n, params)
        err = _rel(fast, brute)
        yield "fn_bruteforce", case, fast, brute, err, "pass" if err <= 1e-12 else "fail"


def _fn_bruteforce(n: int, params: ParamSet) -> complex:
    # nested loops over the full box, 40-digit terms
    with mpmath.workdps(40):
        t = [mpmath.mpc(v) for v in params.t]
        p = [mpmath.mpc(v) for v in params.p]
        total = mpmath.mpc(0)
        for k in itertools.product(range(n), repeat=params.m):
            if sum(k) > n - 1:
                continue
            term = pochhammer(1 - n, sum(k))
            for ki, tj, pj in zip(k, t, p):
                term = term * pochhammer(n * pj, ki) / (math.factorial(ki) * (n * tj) ** ki)
            total += term
        return complex(total)


def _cmd_verify(cfg: RunConfig):
    rows = list(verification_suites(cfg.seed, max_k=min(cfg.N, 12)))
    failed = sum(1 for r in rows if r[5] == "fail")
    code = EXIT_VERIFY if failed else EXIT_OK
    if cfg.output_format == "csv":
        body = [
            [s, c,
             "" if l is None else fmt(l.real), "" if l is None else fmt(l.imag),
             "" if r is None else fmt(r.real), "" if r is None else fmt(r.imag),
             "" if e is None else fmt(e), st]
            for s, c, l, r, e, st in rows
        ]
        return _rows_csv(["suite", "case", "re_lhs", "im_lhs", "re_rhs", "im_rhs", "rel_err", "status"], body), code
    summary = {}
    for s, _, _, _, _, st in rows:
        d = summary.setdefault(s, {"pass": 0, "fail": 0, "invalid": 0})
        d[st.split(":")[0]] += 1
    cases = [
        {"suite": s, "case": c, "lhs": None if l is None else _pair(l), "rhs": None if r is None else _pair(r),
         "rel_err": e, "status": st}
        for s, c, l, r, e, st in rows
    ]
    return _dump({"seed": cfg.seed, "summary": summary, "failed": failed, "cases": cases}), code


def _cmd_asymptotics(cfg: RunConfig):
    if cfg.params.m < 1:
        raise ParameterError("asymptotics needs at least one factor (--t/--p)")
    m = cfg.params.m
    rows = []
    for n in sorted({max(m + 2, cfg.N // 8), max(m + 2, cfg.N // 4), max(m + 2, cfg.N // 2), cfg.N}):
        k = tuple(max(1, round(n / (m + 1))) for _ in range(m))
        exact, approx = coefficient_asymptotic_check(n, k, cfg.params)
        ratio = complex(exact / approx) if approx != 0 else complex("nan")
        rows.append((n, k, ratio))
    if cfg.output_format == "csv":
        return _rows_csv(["n", "k", "re_ratio", "im_ratio", "abs_ratio_minus_1"],
                         [[n, ";".join(map(str, k)), fmt(r.real), fmt(r.imag), fmt(abs(r - 1))]
                          for n, k, r in rows]), EXIT_OK
    return _dump([{"n": n, "k": list(k), "ratio": _pair(r), "error": abs(r - 1)} for n, k, r in rows]), EXIT_OK


def run(cfg: RunConfig, plot_out=None) -> tuple[str, int]:
    """Execute one command; returns ``(serialized output, exit status)``."""
    if cfg.command == "radius":
        return _cmd_radius(cfg, plot_out)
    handler = {
        "coeffs": _cmd_coeffs,
        "eval": _cmd_eval,
        "invert": _cmd_invert,
        "verify": _cmd_verify,
        "asymptotics": _cmd_asymptotics,
    }[cfg.command]
    return handler(cfg)


_VALUE_FLAGS = ("--t", "--p", "--x", "--w")


def _join_negative_values(argv):
    # "--t -1,1" would otherwise be read as an unknown option
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            elif nxt.startswith("-") and nxt[1:2] in set("0123456789."):
                out.append(f"{tok}={nxt}")
            else:
                out.extend([tok, nxt])
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        ns = build_parser().parse_args(_join_negative_values(argv))
    except SystemExit as exc:
        return exc.code
    try:
        cfg = config_from_args(ns)
        text, code = run(cfg, ns.plot_out)
    except (GenWError, ValueError) as exc:
        print(f"genw: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if ns.out:
        with open(ns.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
