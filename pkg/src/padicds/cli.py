"""Command-line front end.

Every subcommand prints one JSON object (default) or CSV rows on stdout.
Rationals are serialized as ``"num/den"`` strings; floats appear only in
fields that are approximate by nature (``stderr``, ``loglog_x``, ...).

Exit status: 0 on success, 2 for invalid input, 3 for computation errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import arithmetic, montecarlo, padic_sets, real_sets
from .padic_core import PAdicDomainError, PrecisionError
from .psi import PsiSpec, PsiSpecError, format_rational, kn, loads, make_psi_x

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_COMPUTE = 3


class InputError(ValueError):
    pass


R = format_rational


def _balls(u) -> list[list[int]]:
    return [[b.depth, b.residue] for b in u.balls]


def _prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not arithmetic.is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not prime")
    return p


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def _rational(text: str) -> Fraction:
    try:
        if "/" not in text:
            return Fraction(int(text))
        num, den = text.split("/")
        return Fraction(int(num), int(den))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational 'num/den': {text!r}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}")


def _bits(text: str) -> list[int]:
    if not text or any(c not in "01" for c in text):
        raise argparse.ArgumentTypeError(f"bits must be a 0/1 string, got {text!r}")
    return [int(c) for c in text]


def load_psi(source: str) -> PsiSpec:
    """Inline JSON when ``source`` starts with ``{``, else a path to a JSON file."""
    text = source.strip()
    if not text.startswith("{"):
        path = Path(source)
        if not path.is_file():
            raise InputError(f"psi file not found: {source}")
        text = path.read_text()
    return loads(text)


# --- commands -------------------------------------------------------------

def cmd_measure(args) -> tuple[dict, list[dict]]:
    psi = load_psi(args.psi)
    u = padic_sets.build(args.p, args.n, psi, args.set)
    k = kn(psi, args.n, args.p)
    out = {
        "command": "measure",
        "p": args.p,
        "n": args.n,
        "set": args.set,
        "psi": psi.to_dict(),
        "psi_n": R(psi(args.n)),
        "measure": R(u.measure()),
        "balls": _balls(u),
        "kn": k,
        "series_term": R(real_sets.series_term(psi, args.n)),
    }
    row = {k_: out[k_] for k_ in ("p", "n", "set", "psi_n", "measure", "series_term")}
    row["ball_count"] = len(u)
    return out, [row]


def _monotone(rows) -> bool:
    ordered = sorted(rows, key=lambda r: r.start)
    return all(a.measure >= b.measure for a, b in zip(ordered, ordered[1:]))


def cmd_window(args) -> tuple[dict, list[dict]]:
    psi = load_psi(args.psi)
    ladder = args.ladder or [1]
    report = padic_sets.limsup_ladder(args.p, psi, args.set, args.N, ladder)
    rows = [
        {"start": r.start, "end": r.end, "measure": R(r.measure), "balls": _balls(r.union)}
        for r in report.rows
    ]
    out = {
        "command": "window",
        "p": args.p,
        "set": args.set,
        "N": args.N,
        "psi": psi.to_dict(),
        "rows": rows,
        "stabilized": report.stabilized,
        "monotone": _monotone(report.rows),
    }
    csv_rows = [{"start": r["start"], "end": r["end"], "measure": r["measure"],
                 "ball_count": len(r["balls"])} for r in rows]
    return out, csv_rows


def cmd_spectrum(args) -> tuple[dict, list[dict]]:
    psi = make_psi_x(args.p, args.bits)
    predicted = padic_sets.predicted_spectrum_set(args.p, args.bits)
    window = padic_sets.window_union(args.p, psi, "B", args.m, args.N)
    out = {
        "command": "spectrum",
        "p": args.p,
        "bits": "".join(map(str, args.bits)),
        "m": args.m,
        "N": args.N,
        "predicted": R(predicted.measure()),
        "window": R(window.measure()),
        "equal": predicted == window,
        "predicted_balls": _balls(predicted),
        "window_balls": _balls(window),
    }
    row = {k: out[k] for k in ("p", "bits", "m", "N", "predicted", "window", "equal")}
    return out, [row]


def cmd_lambda(args) -> tuple[dict, list[dict]]:
    psi = load_psi(args.psi)
    u = real_sets.build_A_inf(args.n, psi)
    lam = u.lam()
    formula = (2 - (args.n == 1)) * real_sets.series_term(psi, args.n)
    out = {
        "command": "lambda",
        "n": args.n,
        "psi": psi.to_dict(),
        "lambda": R(lam),
        "formula": R(formula),
        "equal": lam == formula,
        "intervals": [[R(lo), R(hi)] for lo, hi in u.intervals],
    }
    row = {k: out[k] for k in ("n", "lambda", "formula", "equal")}
    return out, [row]


def cmd_qia(args) -> tuple[dict, list[dict]]:
    psi = load_psi(args.psi)
    sets = real_sets.RealSets(psi)
    rows = []
    for K in range(1, args.K + 1):
        N = real_sets.find_NK(psi, K, args.cap)
        partial = sum((real_sets.series_term(psi, n) for n in range(1, N + 1)), Fraction(0))
        stat = real_sets.qia_statistic(psi, N, sets)
        rows.append({"K": K, "N": N, "partial_sum": R(partial), "statistic": R(stat)})
    out = {"command": "qia", "psi": psi.to_dict(), "rows": rows}
    return out, rows


def cmd_pv(args) -> tuple[dict, list[dict]]:
    psi = load_psi(args.psi)
    grid = real_sets.pv_grid(psi, args.nmax, args.nmin)
    rows = []
    for r in grid.rows:
        rows.append({
            "m": r.m, "n": r.n, "overlap": R(r.overlap), "ratio": R(r.ratio), "rhs": R(r.rhs),
            "ratio_over_rhs": R(r.ratio / r.rhs) if r.rhs else None,
        })
    mx = grid.max_ratio
    out = {
        "command": "pv",
        "psi": psi.to_dict(),
        "nmin": args.nmin,
        "nmax": args.nmax,
        "pairs": len(rows),
        "max_ratio_over_rhs": R(mx) if mx is not None else None,
        "violations": [[v.m, v.n] for v in grid.violations],
        "rows": rows,
    }
    return out, rows


def cmd_et(args) -> tuple[dict, list[dict]]:
    psi = load_psi(args.psi)
    pairs, total = arithmetic.et_enumerate(args.X, args.Y, args.t, psi, args.threshold)
    ordered = sorted(pairs)
    out = {
        "command": "et",
        "X": args.X,
        "Y": args.Y,
        "t": R(args.t),
        "threshold": R(args.threshold),
        "psi": psi.to_dict(),
        "count": len(ordered),
        "weighted_sum": R(total),
        "pairs": [list(pw) for pw in ordered],
    }
    if args.K is not None:
        out["K"] = args.K
        out["rescale_contained"] = arithmetic.rescale_containment_check(
            args.X, args.Y, args.t, psi, args.K, args.threshold
        )
    rows = [{"v": v, "w": w} for v, w in ordered]
    return out, rows


def cmd_mertens(args) -> tuple[dict, list[dict]]:
    b = arithmetic.MERTENS_B
    rows = []
    for x in args.x:
        if x < 2:
            raise InputError(f"mertens needs x >= 2, got {x}")
        s = arithmetic.mertens_sum(x)
        lnln = math.log(math.log(x))
        residual = float(s) - lnln - b
        rows.append({
            "x": x,
            "sum": R(s),
            "sum_float": float(s),
            "loglog_x": lnln,
            "b": b,
            "residual": residual,
            "bound": 0.5 / math.log(x),
        })
    return {"command": "mertens", "b": b, "rows": rows}, rows


def cmd_simulate(args) -> tuple[dict, list[dict]]:
    psi = load_psi(args.psi)
    u = padic_sets.window_union(args.p, psi, args.set, args.m, args.N)
    est = montecarlo.estimate_union(u, args.trials, args.seed)
    exact = u.measure()
    out = {
        "command": "simulate",
        "p": args.p,
        "set": args.set,
        "m": args.m,
        "N": args.N,
        "psi": psi.to_dict(),
        "seed": args.seed,
        "precision": max(1, u.max_depth),
        "hits": est.hits,
        "trials": est.trials,
        "point": R(est.point),
        "stderr": est.stderr,
        "exact": R(exact),
        "within_5se": est.within(exact),
    }
    row = {k: out[k] for k in ("p", "set", "m", "N", "seed", "hits", "trials",
                               "point", "stderr", "exact", "within_5se")}
    return out, [row]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="padicds", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        return sp

    def padic(sp, with_set=True):
        sp.add_argument("--p", type=_prime, required=True)
        if with_set:
            sp.add_argument("--set", choices=("A", "B"), default="B")

    sp = add("measure", cmd_measure, "Haar measure of A_n or B_n for one n")
    padic(sp)
    sp.add_argument("--n", type=_positive, required=True)
    sp.add_argument("--psi", required=True, help="inline JSON psi spec or path to one")

    sp = add("window", cmd_window, "window unions over [m, N] for a ladder of starts")
    padic(sp)
    sp.add_argument("--psi", required=True)
    sp.add_argument("--N", type=_positive, required=True)
    sp.add_argument("--ladder", type=_int_list, help="comma-separated window starts (default 1)")

    sp = add("spectrum", cmd_spectrum, "predicted annulus union for psi^x vs the window union")
    padic(sp, with_set=False)
    sp.add_argument("--bits", type=_bits, required=True, help="x_1 x_2 ... as a 0/1 string")
    sp.add_argument("--m", type=_positive, default=1)
    sp.add_argument("--N", type=_positive, required=True)

    sp = add("lambda", cmd_lambda, "Lebesgue measure of the real set A_n^inf")
    sp.add_argument("--n", type=_positive, required=True)
    sp.add_argument("--psi", required=True)

    sp = add("qia", cmd_qia, "QIA statistic along the N_K ladder")
    sp.add_argument("--psi", required=True)
    sp.add_argument("--K", type=_positive, default=5, help="largest K")
    sp.add_argument("--cap", type=_positive, default=10**5)

    sp = add("pv", cmd_pv, "overlap ratios against the indicator-times-product bound")
    sp.add_argument("--psi", required=True)
    sp.add_argument("--nmax", type=_positive, required=True)
    sp.add_argument("--nmin", type=_positive, default=1)

    sp = add("et", cmd_et, "enumerate the pair set E_t on [X, Y]^2")
    sp.add_argument("--psi", required=True)
    sp.add_argument("--X", type=_positive, required=True)
    sp.add_argument("--Y", type=_positive, required=True)
    sp.add_argument("--t", type=_rational, default=Fraction(1))
    sp.add_argument("--threshold", type=_rational, default=Fraction(10))
    sp.add_argument("--K", type=_positive, help="also check containment under psi -> psi/K")

    sp = add("mertens", cmd_mertens, "prime reciprocal sums vs log log x + b")
    sp.add_argument("--x", type=_int_list, required=True, help="comma-separated x values")

    sp = add("simulate", cmd_simulate, "Monte Carlo estimate of a window union's measure")
    padic(sp)
    sp.add_argument("--psi", required=True)
    sp.add_argument("--m", type=_positive, default=1)
    sp.add_argument("--N", type=_positive, required=True)
    sp.add_argument("--trials", type=_positive, default=10**5)
    sp.add_argument("--seed", type=_nonneg, default=0)
    return parser


def _render(payload: dict, rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2) + "\n"
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v
                             for k, v in row.items()})
    return buf.getvalue()


_INPUT_ERRORS = (
    InputError,
    PsiSpecError,
    PAdicDomainError,
    padic_sets.WindowError,
    real_sets.RealSetError,
    arithmetic.ArithmeticDomainError,
)
_COMPUTE_ERRORS = (
    PrecisionError,
    real_sets.NotFoundError,
    real_sets.UndefinedStatisticError,
    arithmetic.SieveLimitError,
)


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    if args.command == "et" and args.X > args.Y:
        print(f"error: need X <= Y, got X={args.X}, Y={args.Y}", file=stderr)
        return EXIT_INPUT
    try:
        payload, rows = args.func(args)
    except _COMPUTE_ERRORS as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_COMPUTE
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    stdout.write(_render(payload, rows, args.format))
    return EXIT_OK


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
