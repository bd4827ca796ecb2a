"""``weylab`` command-line interface.

Exit codes: 0 success, 1 bad input (parse errors, violated preconditions),
2 partial numerical failure (NonConvergence, Indeterminate), 3 Distinct.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from .classify import STANDARD_GRID, classify_lsystem, impedance_verdicts
from .errors import (EqualParamsRequired, Indeterminate, IntegrationFailure, NonConvergence,
                     PoleError, SpecParseError, WeylabError)
from .lsystem import LSystemParams, impedance_from_m, quasi_kernel_xi, transfer_from_m
from .mobius import ext_from_json, ext_to_json, parse_complex, tan_ext
from .potential import on_cut, parse_potential_spec
from .uniqueness import DISTINCT, impedance_match, shares_main_operator
from .verify import SUITES, run_suite
from .weyl import SolverConfig, m_alpha_from_m, m_inf_many

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_DISTINCT = 0, 1, 2, 3


class CliError(Exception):
    """Bad user input; reported on stderr with exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# -- argument parsing -------------------------------------------------------------

def parse_grid(text: str) -> np.ndarray:
    """``z=<a+bi>;<a+bi>;...`` or ``re=<a>:<b>:<n>,im=<a>:<b>:<n>``."""
    text = text.strip()
    if text.startswith("z="):
        items = [t for t in text[2:].split(";") if t.strip()]
        if not items:
            raise SpecParseError("empty grid", text, 2)
        pts, pos = [], 2
        for item in text[2:].split(";"):
            if item.strip():
                try:
                    pts.append(parse_complex(item))
                except ValueError:
                    raise SpecParseError(f"bad complex literal {item.strip()!r}", text, pos) from None
            pos += len(item) + 1
        return np.array(pts, dtype=complex)
    axes, pos = {}, 0
    for part in text.split(","):
        key, eq, rng = part.partition("=")
        key = key.strip()
        if not eq or key not in ("re", "im") or key in axes:
            raise SpecParseError("expected re=<a>:<b>:<n>,im=<a>:<b>:<n> or z=<list>", text, pos)
        bits = rng.split(":")
        try:
            a, b, n = float(bits[0]), float(bits[1]), int(bits[2])
            if len(bits) != 3 or n < 1:
                raise ValueError
        except (ValueError, IndexError):
            raise SpecParseError(f"bad range {rng!r} (want a:b:n, n >= 1)", text,
                                 pos + len(part) - len(rng)) from None
        axes[key] = np.linspace(a, b, n)
        pos += len(part) + 1
    if set(axes) != {"re", "im"}:
        raise SpecParseError("product grid needs both re= and im=", text, len(text))
    return np.array([complex(x, y) for x in axes["re"] for y in axes["im"]])


def _complex_arg(text):
    try:
        return parse_complex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _ext_arg(text):
    try:
        return ext_from_json(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _load_system(text: str) -> LSystemParams:
    """A system JSON object, given inline or as a file path."""
    try:
        obj = json.loads(text) if text.lstrip().startswith("{") else \
            json.loads(Path(text).read_text())
        return LSystemParams.from_json(obj)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise CliError(f"cannot load system {text!r}: {exc}") from exc


def _config(args) -> SolverConfig:
    kwargs = {}
    if getattr(args, "tol", None) is not None:
        kwargs["rel_tol"] = args.tol
    return SolverConfig.from_env(**kwargs)


# -- output -----------------------------------------------------------------------

def _num(x):
    """JSON-safe float; non-finite values become null."""
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _emit(payload: dict, rows: list, columns: list, fmt: str, header: dict = None):
    if fmt == "json":
        json.dump(payload, sys.stdout, indent=2)
        sys.stdout.write("\n")
        return
    for key, value in (header or {}).items():
        sys.stdout.write(f"# {key}={json.dumps(value)}\n")
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow(["" if row[c] is None else repr(row[c]) if isinstance(row[c], float)
                    else str(row[c]).lower() if isinstance(row[c], bool) else row[c]
                    for c in columns])


def _check_grid(grid):
    bad = [z for z in grid if on_cut(z)]
    if bad:
        raise CliError(f"grid point {bad[0]} lies on the cut [0, inf)")


def _evaluations(p, grid, cfg):
    return m_inf_many(p, grid, cfg, raise_on_failure=False)


def _apply(fn, m):
    """fn(m) or None at a pole."""
    try:
        return complex(fn(m))
    except PoleError:
        return None


def _cplx_fields(prefix, value, row):
    row[f"{prefix}_re"] = None if value is None else _num(value.real)
    row[f"{prefix}_im"] = None if value is None else _num(value.imag)


# -- commands ---------------------------------------------------------------------

M_COLUMNS = ["z_re", "z_im", "m_re", "m_im", "est_error", "L", "converged"]


def cmd_m(args) -> int:
    p = parse_potential_spec(args.potential)
    grid = parse_grid(args.grid) if args.grid else STANDARD_GRID
    _check_grid(grid)
    evs = _evaluations(p, grid, _config(args))
    rows, status = [], EXIT_OK
    for ev in evs:
        m = ev.m if args.alpha is None else _apply(lambda v: m_alpha_from_m(v, args.alpha), ev.m)
        row = {"z_re": ev.z.real, "z_im": ev.z.imag}
        _cplx_fields("m", m, row)
        row.update(est_error=_num(ev.est_error), L=ev.truncation_length,
                   converged=ev.converged and m is not None)
        if not row["converged"]:
            status = EXIT_NUMERIC
        rows.append(row)
    payload = {"command": "m", "potential": p.spec(),
               "function": "m_inf" if args.alpha is None else "m_alpha",
               "alpha": args.alpha, "rows": rows}
    _emit(payload, rows, M_COLUMNS, args.out,
          {"potential": p.spec(), "alpha": args.alpha})
    return status


IMP_COLUMNS = ["z_re", "z_im", "V_re", "V_im", "W_re", "W_im", "est_error", "L", "converged"]


def cmd_impedance(args) -> int:
    p = parse_potential_spec(args.potential)
    if not args.h.imag > 0:
        raise CliError(f"Im h must be > 0 (got h={args.h})")
    sys_ = LSystemParams(p, args.mu, args.h)
    grid = parse_grid(args.grid) if args.grid else STANDARD_GRID
    _check_grid(grid)
    evs = _evaluations(p, grid, _config(args))
    qk = quasi_kernel_xi(sys_)
    rows, status = [], EXIT_OK
    for ev in evs:
        v = _apply(lambda m: impedance_from_m(m, sys_.mu, sys_.h), ev.m)
        w = _apply(lambda m: transfer_from_m(m, sys_.mu, sys_.h), ev.m)
        row = {"z_re": ev.z.real, "z_im": ev.z.imag}
        _cplx_fields("V", v, row)
        _cplx_fields("W", w, row)
        row.update(est_error=_num(ev.est_error), L=ev.truncation_length,
                   converged=ev.converged and v is not None and w is not None)
        if not row["converged"]:
            status = EXIT_NUMERIC
        rows.append(row)
    payload = {"command": "impedance", "system": sys_.to_json(),
               "xi": ext_to_json(qk.xi), "quasi_kernel": qk.to_json(), "rows": rows}
    _emit(payload, rows, IMP_COLUMNS, args.out,
          {"system": sys_.to_json(), "xi": ext_to_json(qk.xi), "boundary": qk.describe()})
    return status


def cmd_classify(args) -> int:
    p = parse_potential_spec(args.potential)
    if not args.h.imag > 0:
        raise CliError(f"Im h must be > 0 (got h={args.h})")
    mu = args.mu if args.alpha is None else tan_ext(args.alpha)
    sys_ = LSystemParams(p, mu, args.h)
    cfg = _config(args)
    status = EXIT_OK
    try:
        report = classify_lsystem(sys_, cfg)
        indeterminate = False
    except Indeterminate as exc:
        report, indeterminate, status = exc.report, True, EXIT_NUMERIC
    out = {"command": "classify", "system": sys_.to_json(), "indeterminate": indeterminate}
    out.update(report.to_dict())
    verdict_kw = {} if args.verdict_tol is None else {"tol": args.verdict_tol}
    try:
        herglotz, stieltjes = impedance_verdicts(sys_, cfg, **verdict_kw)
        out["impedance_herglotz"] = herglotz.to_dict()
        out["impedance_stieltjes"] = stieltjes.to_dict()
    except (NonConvergence, IntegrationFailure, PoleError) as exc:
        out["impedance_herglotz"] = out["impedance_stieltjes"] = None
        out["verdict_error"] = str(exc)
        status = EXIT_NUMERIC
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return status


def cmd_match(args) -> int:
    a, b = _load_system(args.sys_a), _load_system(args.sys_b)
    cfg = _config(args)
    if args.mode == "equal":
        kw = {} if args.match_tol is None else {"tol": args.match_tol}
        rep = impedance_match(a, b, cfg=cfg, **kw)
    else:
        kw = {} if args.match_tol is None else {"tol": args.match_tol}
        rep = shares_main_operator(a, b, cfg=cfg, **kw)
    out = {"command": "match", "mode": args.mode}
    out.update(rep.to_dict())
    out["max_residual"] = _num(out["max_residual"])
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_DISTINCT if rep.verdict == DISTINCT else EXIT_OK


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    results = run_suite(args.suite)
    elapsed = time.perf_counter() - t0
    width = max(len(r.name) for r in results)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  {r.detail}")
    n_pass = sum(r.passed for r in results)
    print(f"{n_pass}/{len(results)} checks passed in {elapsed:.1f}s")
    return EXIT_OK if n_pass == len(results) else EXIT_INPUT


# -- entry point ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="weylab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, out=True):
        sp.add_argument("--potential", required=True,
                        help="zero:l=<l> | bessel:nu=<nu>[,l=<l>] | table:<path>[,l=<l>,tail=<q>]")
        sp.add_argument("--tol", type=float, default=None,
                        help="relative tolerance of the L-doubling protocol")
        if out:
            sp.add_argument("--grid", default=None,
                            help="z=<a+bi>;... or re=<a>:<b>:<n>,im=<a>:<b>:<n> "
                                 "(default: 35-point standard grid)")
            sp.add_argument("--out", choices=("json", "csv"), default="json")

    sp = sub.add_parser("m", help="evaluate m_inf (or m_alpha) on a grid")
    common(sp)
    sp.add_argument("--alpha", type=float, default=None, help="evaluate m_alpha instead")
    sp.set_defaults(func=cmd_m)

    sp = sub.add_parser("impedance", help="impedance V and transfer W of Theta(mu, h)")
    common(sp)
    sp.add_argument("--mu", type=_ext_arg, required=True, help="real number or inf")
    sp.add_argument("--h", type=_complex_arg, required=True, help="a+bi with b > 0")
    sp.set_defaults(func=cmd_impedance)

    sp = sub.add_parser("classify", help="accretive/sectorial classification of Theta(mu, h)")
    common(sp, out=False)
    sp.add_argument("--h", type=_complex_arg, required=True, help="a+bi with b > 0")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--mu", type=_ext_arg, help="real number or inf")
    g.add_argument("--alpha", type=float, help="sets mu = tan(alpha)")
    sp.add_argument("--verdict-tol", type=float, default=None,
                    help="tolerance of the sampled Herglotz/Stieltjes checks")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("match", help="compare two systems by their impedance functions")
    sp.add_argument("--sys-a", required=True, help="system JSON (inline or file path)")
    sp.add_argument("--sys-b", required=True, help="system JSON (inline or file path)")
    sp.add_argument("--mode", choices=("equal", "shared-operator"), default="equal")
    sp.add_argument("--tol", type=float, default=None,
                    help="relative tolerance of the L-doubling protocol")
    sp.add_argument("--match-tol", type=float, default=None, help="matching tolerance")
    sp.set_defaults(func=cmd_match)

    sp = sub.add_parser("verify", help="run a built-in verification suite")
    sp.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits on --help and on usage errors
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    try:
        return args.func(args)
    except (CliError, SpecParseError, EqualParamsRequired) as exc:
        print(f"weylab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NonConvergence, IntegrationFailure) as exc:
        print(f"weylab {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (WeylabError, ValueError) as exc:
        print(f"weylab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
