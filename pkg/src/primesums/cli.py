"""Command-line front end: experiment orchestration and CSV emission.

One subcommand per theorem or lemma family, so the verification suite can
be run piecewise.  Every run is seed-free (the package contains no random
number generation); identical configuration and input files produce
byte-identical CSV output.

Exit codes: 0 success, 2 validation failure, 3 accuracy failure,
4 output I/O failure.
"""

import argparse
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .analysis import (MeanSquareReport, fourth_moment, laplace_segment_check,
                       line_integral_laplace, mean_square_classical,
                       mean_square_tilde, omega_mean_square)
from .arith import ProblemKind, build_sieve
from .errors import AccuracyError, SieveRangeError, ZeroTableError
from .explicit import (FormulaReport, goldbach_average, goldbach_cesaro,
                       goldston_yang, hl_cesaro, short_interval_report)
from .expsum import ComplexParam, ExpSumConfig, linnik_approx, s_tilde
from .special import bessel_j_series, bessel_j_sonine, theta_modular_residual
from .zeros import default_zeros_path, load_zeros, truncate

FORMULA_COLUMNS = ["problem", "N", "k", "H", "T", "lhs", "main",
                   "secondary_main", "zero_sum_1", "zero_sum_2",
                   "double_zero_sum", "bessel_sum", "bessel_zero_sum",
                   "residual", "reference_bound", "ratio"]
MEANSQUARE_COLUMNS = ["N", "ell", "xi", "integral", "bound", "ratio", "bound_kind"]

_EXIT_VALIDATION = 2
_EXIT_ACCURACY = 3
_EXIT_IO = 4


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _formula_row(r: FormulaReport) -> list:
    t = r.terms
    return [r.problem.name, r.N, r.k, r.H, r.T, r.lhs, t.get("main"),
            t.get("secondary_main"), t.get("zero_sum_1"), t.get("zero_sum_2"),
            t.get("double_zero_sum"), t.get("bessel_sum"),
            t.get("bessel_zero_sum"), r.residual, r.reference_bound, r.ratio]


def _meansquare_row(r: MeanSquareReport) -> list:
    return [r.N, r.ell, r.xi, r.integral_value, r.reference_bound, r.ratio,
            r.bound_kind]


def write_rows(header, rows, path):
    """RFC-4180-style CSV with 17-significant-digit numbers, written
    atomically (temp file plus rename) so failures leave no partial file."""
    text = "\r\n".join(
        [",".join(header)] + [",".join(_fmt(v) for v in row) for row in rows]
    ) + "\r\n"
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit_csv(reports, path=None):
    """Serialize a homogeneous sequence of formula or mean-square reports."""
    reports = list(reports)
    if not reports:
        write_rows(FORMULA_COLUMNS, [], path)
        return
    if isinstance(reports[0], FormulaReport):
        if not all(isinstance(r, FormulaReport) for r in reports):
            raise ValueError("mixed report kinds in one CSV")
        write_rows(FORMULA_COLUMNS, [_formula_row(r) for r in reports], path)
    elif isinstance(reports[0], MeanSquareReport):
        if not all(isinstance(r, MeanSquareReport) for r in reports):
            raise ValueError("mixed report kinds in one CSV")
        write_rows(MEANSQUARE_COLUMNS, [_meansquare_row(r) for r in reports], path)
    else:
        raise ValueError(f"cannot serialize {type(reports[0]).__name__}")


def _parallel(fn, grid, workers):
    """Map over grid points; rows come back in grid order regardless of
    completion order."""
    if workers <= 1 or len(grid) <= 1:
        return [fn(g) for g in grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, grid))


def _float_list(text: str):
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _int_list(text: str):
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _load_zero_table(args):
    path = args.zeros or default_zeros_path()
    table = load_zeros(path)
    if getattr(args, "height", None):
        table = truncate(table, args.height)
    return table


def _sieve_for(args, minimum):
    limit = args.sieve_limit or minimum
    if limit < minimum:
        raise ValueError(
            f"--sieve-limit {limit} is below the required {minimum}"
        )
    return build_sieve(limit)


def _tail_limit(N: int, ell: int = 1) -> int:
    return ExpSumConfig(ell=ell).n_max(N) + 1


# ---------------------------------------------------------------- commands


def cmd_build_sieve(args):
    sieve = _sieve_for(args, args.limit)
    rows = []
    for x in (100, 1000, 10**4, 10**5, 10**6, 10**7):
        if x > sieve.limit:
            break
        psi = sieve.psi(x)
        rows.append([x, psi, psi - x, 3.0 * math.sqrt(x) * math.log(x) ** 2])
    write_rows(["x", "psi", "delta", "chebyshev_bound"], rows, args.output)
    return 0


def cmd_verify_goldbach(args):
    zeros = _load_zero_table(args)
    sieve = _sieve_for(args, max(args.n))
    reports = _parallel(lambda N: goldbach_average(N, zeros, sieve),
                        args.n, args.workers)
    emit_csv(reports, args.output)
    return 0


def cmd_verify_cesaro(args):
    zeros = _load_zero_table(args)
    sieve = _sieve_for(args, max(args.n))
    pair_height = args.pair_height or (zeros.height if len(zeros) else 1.0)
    reports = _parallel(
        lambda N: goldbach_cesaro(N, args.k, zeros, sieve, pair_height),
        args.n, args.workers)
    for r in reports:
        if r.validity_warning:
            print(f"warning: k={r.k} outside the proven range k > 1",
                  file=sys.stderr)
    emit_csv(reports, args.output)
    return 0


def cmd_verify_gy(args):
    zeros = _load_zero_table(args)
    sieve = _sieve_for(args, max(args.n))
    reports = _parallel(lambda N: goldston_yang(N, zeros, sieve),
                        args.n, args.workers)
    emit_csv(reports, args.output)
    return 0


def cmd_verify_hl(args):
    zeros = _load_zero_table(args)
    sieve = _sieve_for(args, max(args.n))
    reports = _parallel(
        lambda N: hl_cesaro(N, args.k, zeros, sieve, args.ell_max),
        args.n, args.workers)
    emit_csv(reports, args.output)
    return 0


_KIND_NAMES = {k.value: k for k in ProblemKind}


def cmd_verify_shortinterval(args):
    kind = _KIND_NAMES[args.kind]
    sieve = _sieve_for(args, args.n + max(args.h))
    reports = _parallel(lambda H: short_interval_report(kind, args.n, H, sieve),
                        args.h, args.workers)
    emit_csv(reports, args.output)
    return 0


def cmd_meansquare(args):
    cfg = ExpSumConfig(ell=args.ell)
    if args.which == "omega":
        sieve = _sieve_for(args, _tail_limit(args.n, args.ell))
        runs = _parallel(
            lambda xi: omega_mean_square(cfg, args.n, xi, sieve=sieve),
            args.xi_grid, args.workers)
    elif args.which == "classical":
        sieve = _sieve_for(args, args.n)
        runs = _parallel(
            lambda xi: mean_square_classical(cfg, args.n, xi, sieve,
                                             bound_kind=args.bound_kind,
                                             c1=args.c1),
            args.xi_grid, args.workers)
    else:
        sieve = _sieve_for(args, _tail_limit(args.n, args.ell))
        runs = _parallel(
            lambda xi: mean_square_tilde(cfg, args.n, xi, sieve,
                                         bound_kind=args.bound_kind,
                                         c1=args.c1),
            args.xi_grid, args.workers)
    emit_csv(runs, args.output)
    return 0


def cmd_fourthmoment(args):
    sieve = _sieve_for(args, _tail_limit(max(args.n), 2))
    runs = _parallel(lambda N: fourth_moment(N, sieve), args.n, args.workers)
    emit_csv(runs, args.output)
    return 0


def cmd_expsum_compare(args):
    sieve = _sieve_for(args, _tail_limit(args.n, args.ell))
    full = _load_zero_table(args)
    cfg = ExpSumConfig(ell=args.ell)
    rows = []
    for T in args.height_grid:
        zeros = truncate(full, T)
        for alpha in args.alpha_grid:
            p = ComplexParam.from_alpha(args.n, alpha)
            exact = s_tilde(cfg, p, sieve)
            approx = linnik_approx(cfg, p, zeros)
            err = abs(approx - exact)
            rows.append([alpha, T, exact.real, exact.imag, approx.real,
                         approx.imag, err, err / abs(exact)])
    write_rows(["alpha", "T", "s_tilde_re", "s_tilde_im", "approx_re",
                "approx_im", "abs_err", "rel_err"], rows, args.output)
    return 0


def cmd_laplace_check(args):
    rows = []
    for D in args.d_grid:
        v = line_integral_laplace(args.s, args.a, D)
        if D > 0:
            closed = D ** (args.s - 1.0) * math.exp(-args.a * D) / math.gamma(args.s)
        elif D < 0:
            closed = 0.0
        else:
            closed = 0.5 if args.s == 1.0 else 0.0
        rows.append(["line", args.s, args.a, D, v.real, v.imag, closed,
                     abs(v - closed)])
    for n in args.n_grid:
        num, closed = laplace_segment_check(args.mu, n, args.big_n)
        rows.append(["segment", args.mu, args.big_n, n, num.real, num.imag,
                     closed, abs(num - closed)])
    write_rows(["family", "s_or_mu", "a_or_N", "D_or_n", "numeric_re",
                "numeric_im", "closed_form", "abs_diff"], rows, args.output)
    return 0


def cmd_theta_check(args):
    rows = []
    for z in _theta_sample(args.samples):
        rows.append([z.real, z.imag, theta_modular_residual(z)])
    rows.append([math.pi, 0.0, theta_modular_residual(complex(math.pi))])
    write_rows(["z_re", "z_im", "modular_residual"], rows, args.output)
    return 0


def _theta_sample(count: int):
    """Deterministic low-discrepancy sample of Re(z) in [0.05, 5],
    |Im(z)| <= Re(z)/2."""
    out = []
    for i in range(count):
        u = (i * 0.6180339887498949) % 1.0
        v = (i * 0.7548776662466927 + 0.5) % 1.0
        re = 0.05 + (5.0 - 0.05) * u
        out.append(complex(re, (v - 0.5) * re))
    return out


def cmd_bessel_check(args):
    rho1 = 0.5 + 14.134725141734693j
    orders = [0.0, 0.5, 2.0 + 3.0j, 2.5 + rho1]
    rows = []
    for nu in orders:
        for u in args.u_grid:
            a = bessel_j_series(nu, u)
            b = bessel_j_sonine(nu, u)
            d = abs(a - b)
            rows.append([complex(nu).real, complex(nu).imag, u, a.real, a.imag,
                         b.real, b.imag, d, d / max(1.0, abs(a))])
    write_rows(["nu_re", "nu_im", "u", "series_re", "series_im", "sonine_re",
                "sonine_im", "abs_diff", "rel_diff"], rows, args.output)
    return 0


# ------------------------------------------------------------------ parser


def _add_common(sub, zeros=False):
    sub.add_argument("--sieve-limit", type=int, default=None,
                     help="override the automatically sized sieve")
    sub.add_argument("--output", default=None,
                     help="CSV output path (stdout when omitted)")
    sub.add_argument("--workers", type=int, default=os.cpu_count() or 1,
                     help="worker threads for parameter grids")
    if zeros:
        sub.add_argument("--zeros", default=None,
                         help="zero-ordinate file (packaged table by default)")
        sub.add_argument("--height", type=float, default=None,
                         help="zero truncation height T")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="primesums",
        description="Numerical experiments on additive prime problems "
                    "(seed-free; flags > config file > defaults)")
    parser.add_argument("--config", default=None,
                        help="JSON file of defaults for any long option")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-sieve", help="build a sieve and report psi checkpoints")
    p.add_argument("--limit", type=int, required=True)
    _add_common(p)
    p.set_defaults(fn=cmd_build_sieve)

    p = sub.add_parser("verify-goldbach", help="long Goldbach average vs explicit formula")
    p.add_argument("--n", type=int, nargs="+", required=True)
    _add_common(p, zeros=True)
    p.set_defaults(fn=cmd_verify_goldbach)

    p = sub.add_parser("verify-cesaro", help="Cesaro Goldbach average with double zero sum")
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--k", type=float, default=2.0)
    p.add_argument("--pair-height", type=float, default=None,
                   help="double-sum truncation height T2")
    _add_common(p, zeros=True)
    p.set_defaults(fn=cmd_verify_cesaro)

    p = sub.add_parser("verify-gy", help="linear-weight Goldbach average")
    p.add_argument("--n", type=int, nargs="+", required=True)
    _add_common(p, zeros=True)
    p.set_defaults(fn=cmd_verify_gy)

    p = sub.add_parser("verify-hl", help="prime-plus-square Cesaro formula (Bessel terms)")
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--k", type=float, default=2.0)
    p.add_argument("--ell-max", type=int, default=50)
    _add_common(p, zeros=True)
    p.set_defaults(fn=cmd_verify_hl)

    p = sub.add_parser("verify-shortinterval", help="short-interval counts vs main terms")
    p.add_argument("--kind", choices=sorted(k.value for k in ProblemKind
                                            if k not in (ProblemKind.GOLDBACH, ProblemKind.HL)),
                   required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", type=int, nargs="+", required=True)
    _add_common(p)
    p.set_defaults(fn=cmd_verify_shortinterval)

    p = sub.add_parser("meansquare", help="truncated mean-square experiments")
    p.add_argument("--which", choices=["tilde", "classical", "omega"], default="tilde")
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--xi-grid", type=_float_list, required=True)
    p.add_argument("--bound-kind", choices=["RH", "UNCONDITIONAL"], default="RH")
    p.add_argument("--c1", type=float, default=1.0)
    _add_common(p)
    p.set_defaults(fn=cmd_meansquare)

    p = sub.add_parser("fourthmoment", help="fourth moment of the ell=2 weighted sum")
    p.add_argument("--n", type=int, nargs="+", required=True)
    _add_common(p)
    p.set_defaults(fn=cmd_fourthmoment)

    p = sub.add_parser("expsum-compare", help="weighted sum vs explicit-formula approximation")
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha-grid", type=_float_list, required=True)
    p.add_argument("--height-grid", type=_float_list, default=[10**4])
    _add_common(p, zeros=True)
    p.set_defaults(fn=cmd_expsum_compare)

    p = sub.add_parser("laplace-check", help="Laplace line integral and segment identities")
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--d-grid", type=_float_list, default=[0.0, -1.0, 1.0])
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--n-grid", type=_int_list, default=[100, 1000, 10000])
    p.add_argument("--big-n", type=int, default=10000)
    _add_common(p)
    p.set_defaults(fn=cmd_laplace_check)

    p = sub.add_parser("theta-check", help="theta modular-transformation residuals")
    p.add_argument("--samples", type=int, default=20)
    _add_common(p)
    p.set_defaults(fn=cmd_theta_check)

    p = sub.add_parser("bessel-check", help="Bessel cross-method agreement grid")
    p.add_argument("--u-grid", type=_float_list, default=[0.5, 2.0, 5.0, 20.0])
    _add_common(p)
    p.set_defaults(fn=cmd_bessel_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args, _ = parser.parse_known_args(argv)
    if args.config:
        with open(args.config) as fh:
            defaults = json.load(fh)
        parser.set_defaults(**defaults)
        args = parser.parse_args(argv)
    else:
        args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, ZeroTableError, SieveRangeError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_VALIDATION
    except AccuracyError as exc:
        print(f"accuracy error: {exc}", file=sys.stderr)
        return _EXIT_ACCURACY
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return _EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
