"""Command-line front end.

Exit codes: 0 success, 2 undefinable verdict, 64 usage error.
JSON output carries ``"schema": "isl/1"``.  The default seed is 0, or the
value of the ``ISL_SEED`` environment variable when set.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
import tempfile
from fractions import Fraction

import numpy as np

from . import chsh
from .bitstring import BitString, EOperator, apply_E
from .dynsys import (
    CantorSpec,
    EmbeddingSpec,
    LimitCycle,
    Lorenz,
    box_counting_dimension,
    cantor_intervals,
    cantor_sample,
    correlation_dimension,
    first_autocorrelation_minimum,
    integrate,
    lorenz_attractor_sample,
    polar_to_cartesian,
    takens_embed,
)
from .hilbert import Undefinable, e_to_state, state_to_e
from .numkit import BitBudget, Dyadic, RationalAngle, RationalCos, doubling_sequence, niven_classify

SCHEMA = "isl/1"
SEED_ENV = "ISL_SEED"

EXIT_OK = 0
EXIT_UNDEFINABLE = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # let "-1/2" through as a value, not an option
        self._negative_number_matcher = re.compile(r"^-\d+$|^-\d*\.\d+$|^-\d+/\d+$")

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"malformed fraction {text!r}")


def _angle(text: str) -> RationalAngle:
    return RationalAngle.from_fraction(_fraction(text))


def _resolve_seed(args) -> tuple[int, str]:
    if args.seed is not None:
        return args.seed, "flag"
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env), "env"
        except ValueError:
            raise UsageError(f"{SEED_ENV}={env!r} is not an integer")
    return 0, "default"


def _check_n(n: int) -> int:
    try:
        return BitBudget(n).n
    except ValueError as exc:
        raise UsageError(str(exc))


def _emit(args, payload, csv_text: str | None = None):
    """Write JSON (or CSV where the command supports it) to ``--out`` or stdout."""
    if args.format == "csv" and csv_text is not None:
        text = csv_text
    else:
        payload = {"schema": SCHEMA, **payload}
        text = json.dumps(payload, indent=2, sort_keys=False) + "\n"
    if args.out in (None, "-"):
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(args.out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".isl-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, args.out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _meta(args, **extra) -> dict:
    seed, source = _resolve_seed(args)
    meta = {"command": args.command_name, "seed": seed, "seed_source": source}
    meta.update(extra)
    return meta


# ---------------------------------------------------------------------------
# chsh

def cmd_chsh_run(args) -> int:
    n = _check_n(args.n_bits)
    seed, _ = _resolve_seed(args)
    if args.cosines is not None:
        cos = dict(zip(chsh.CORRELATION_PAIRS, args.cosines))
        result = chsh.run_chsh_from_cosines(cos, n, seed)
        if isinstance(result, dict):
            _emit(args, {
                "meta": _meta(args, N=n),
                "verdict": "Undefinable",
                "undefinable": {p: u.reason for p, u in result.items()},
            })
            return EXIT_UNDEFINABLE
        report = result
    else:
        apex = args.apex
        report = chsh.run_chsh(tuple(args.angles), n, seed, apex=apex)
    payload = {"meta": _meta(args, N=n), "report": report.to_json()}
    rows = io.StringIO()
    w = csv.writer(rows, lineterminator="\n")
    w.writerow(("pair", "correlation", "correlation_float", "seed"))
    for p in chsh.CORRELATION_PAIRS:
        c = report.correlations[p]
        w.writerow((p, str(c), repr(float(c)), report.seeds[p]))
    _emit(args, payload, rows.getvalue())
    return EXIT_OK


def cmd_chsh_definability(args) -> int:
    n = _check_n(args.n_bits)
    if args.pair_data is not None:
        a1a2, b1b2, chosen_cos, opposite = args.pair_data
        try:
            cfg = chsh.CHSHConfig.from_pair_data(
                a1a2, b1b2, chosen_cos, opposite, n,
                apex_alice=args.apex_alice, apex_bob=args.apex_bob, chosen=args.chosen,
            )
        except chsh.ConfigError as exc:
            raise UsageError(str(exc))
    else:
        apex = args.apex_alice
        cfg = chsh.CHSHConfig.from_angles(*args.angles, n_bits=n, chosen=args.chosen, apex=apex)
    report = chsh.joint_definability(cfg)
    _emit(args, {"meta": _meta(args, N=n), "definability": report.to_json()})
    return EXIT_OK


# ---------------------------------------------------------------------------
# qubit, niven, doubling

def cmd_qubit_map(args) -> int:
    n = _check_n(args.n_bits)
    if args.alpha is not None:
        try:
            e = EOperator(Dyadic.from_fraction(args.alpha), Dyadic.from_fraction(args.beta or 0), n)
        except ValueError as exc:
            raise UsageError(str(exc))
    else:
        if args.cos_half_sq is None:
            raise UsageError("give --alpha/--beta or --cos-half-sq/--phase")
        try:
            e = state_to_e(args.cos_half_sq, args.phase or Fraction(0), n)
        except ValueError as exc:
            raise UsageError(str(exc))
        if isinstance(e, Undefinable):
            _emit(args, {"meta": _meta(args, N=n), "verdict": "Undefinable", "reason": e.reason})
            return EXIT_UNDEFINABLE
    state = e_to_state(e)
    s = apply_E(e, BitString.zeros(n))
    _emit(args, {
        "meta": _meta(args, N=n),
        "operator": {"alpha": str(e.alpha), "beta": str(e.beta), "N": n},
        "state": state.to_json(),
        "string_hex": s.to_hex(),
    })
    return EXIT_OK


def cmd_niven(args) -> int:
    if args.q == 0:
        raise UsageError("denominator must be non-zero")
    r = RationalAngle(args.p, args.q)
    verdict = niven_classify(r)
    if isinstance(verdict, RationalCos):
        sys.stdout.write(f"rational: {verdict.value}\n")
    else:
        sys.stdout.write("irrational\n")
    return EXIT_OK


def cmd_doubling(args) -> int:
    if args.q == 0 or args.k_max < 1:
        raise UsageError("need q != 0 and --k-max >= 1")
    seq = doubling_sequence(RationalAngle(args.p, args.q), args.k_max)
    _emit(args, {
        "meta": _meta(args),
        "phi_over_pi": str(seq.angle),
        "k_max": args.k_max,
        "distinct": seq.distinct,
        "values": [float(v) for v in seq.values],
    })
    return EXIT_OK


# ---------------------------------------------------------------------------
# dynsys

def _trajectory_output(args, traj, extra_meta):
    _emit(args, {
        "meta": _meta(args, **extra_meta),
        "columns": ["t", *traj.columns],
        "rows": len(traj),
        "final": traj.final.tolist(),
    }, traj.to_csv())
    return EXIT_OK


def cmd_limit_cycle(args) -> int:
    traj = integrate(LimitCycle(), (args.r0, args.theta0), args.step, args.horizon)
    return _trajectory_output(args, traj, {"system": "limit-cycle", "step": traj.step})


def cmd_lorenz(args) -> int:
    sys_ = Lorenz(args.sigma, args.r, args.b)
    traj = integrate(sys_, tuple(args.x0), args.step, args.horizon)
    return _trajectory_output(args, traj, {"system": "lorenz", "step": traj.step,
                                           "sigma": args.sigma, "r": args.r, "b": args.b})


def cmd_cantor(args) -> int:
    try:
        spec = CantorSpec(args.base, tuple(args.digits), args.depth)
        iv = cantor_intervals(spec)
    except (ValueError, OverflowError) as exc:
        raise UsageError(str(exc))
    _emit(args, {
        "meta": _meta(args),
        "base": spec.base,
        "allowed_digits": list(spec.allowed),
        "depth": spec.depth,
        "count": len(iv),
        "measure": f"{iv.measure.numerator}/{iv.measure.denominator}",
        "intervals": [[str(a), str(b)] for a, b in iv.intervals()],
    })
    return EXIT_OK


def _read_series(path: str, column: str) -> np.ndarray:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if column not in (reader.fieldnames or []):
            raise UsageError(f"column {column!r} not in {path}")
        return np.array([float(row[column]) for row in reader])


def cmd_takens(args) -> int:
    if args.input:
        series = _read_series(args.input, args.column)
    else:
        series = lorenz_attractor_sample(horizon=args.horizon).states[:, 0]
    delay = args.delay or first_autocorrelation_minimum(series)
    try:
        spec = EmbeddingSpec(delay, args.dimension)
        pts = takens_embed(series, spec)
    except ValueError as exc:
        raise UsageError(str(exc))
    rows = io.StringIO()
    w = csv.writer(rows, lineterminator="\n")
    w.writerow([f"s_t-{k}tau" if k else "s_t" for k in range(spec.dimension)])
    for p in pts[:: args.stride]:
        w.writerow([repr(float(v)) for v in p])
    _emit(args, {
        "meta": _meta(args),
        "delay": delay,
        "dimension": spec.dimension,
        "points": int(len(pts)),
        "sample": pts[:: args.stride][:10].tolist(),
    }, rows.getvalue())
    return EXIT_OK


def cmd_dimension(args) -> int:
    seed, _ = _resolve_seed(args)
    if args.system == "lorenz":
        pts = lorenz_attractor_sample(horizon=args.horizon).states
    elif args.system == "limit-cycle":
        traj = integrate(LimitCycle(), (0.1, 0.0), 1e-2, args.horizon + 50.0).after(50.0)
        pts = polar_to_cartesian(traj.states)
    else:
        pts = cantor_sample(CantorSpec(3, (0, 2), args.depth), args.points, seed)
    if args.method == "box":
        if args.scales:
            scales = np.array(args.scales, dtype=float)
        elif args.system == "lorenz":
            scales = np.geomspace(4.0, 0.5, 7)
        elif args.system == "limit-cycle":
            scales = np.geomspace(0.5, 0.01, 8)
        else:
            scales = 3.0 ** -np.arange(1, args.depth + 1)
        try:
            fit = box_counting_dimension(pts, scales, origin=0.0 if args.system == "cantor" else None)
        except ValueError as exc:
            raise UsageError(str(exc))
    else:
        if args.system == "lorenz":
            pts = pts[:: max(1, len(pts) // 10000)]
        fit = correlation_dimension(pts, min_points=min(5000, len(pts)))
    _emit(args, {"meta": _meta(args, system=args.system, method=args.method), "fit": fit.to_json()})
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--n-bits", type=int, default=20, help="bit budget N (string length 2^N)")
    common.add_argument("--seed", type=int, default=None, help=f"seed (default ${SEED_ENV} or 0)")
    common.add_argument("--format", choices=("json", "csv"), default=None,
                        help="json, or csv where supported (trajectory commands default to csv)")
    common.add_argument("--out", default=None, help="output file (written atomically); stdout if omitted")

    parser = _Parser(prog="isl", description="Invariant-set laboratory: CHSH, qubit strings, fractal dynamics.")
    sub = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    # chsh
    p_chsh = sub.add_parser("chsh", help="CHSH experiments")
    chsh_sub = p_chsh.add_subparsers(dest="action", required=True, parser_class=_Parser)

    p = chsh_sub.add_parser("run", parents=[common], help="four disjoint sub-experiments and S")
    p.add_argument("--angles", nargs=4, type=float, metavar=("A1", "A2", "B1", "B2"),
                   default=list(chsh.STANDARD_ANGLES), help="directions in degrees")
    p.add_argument("--cosines", nargs=4, type=_fraction, metavar=("C11", "C12", "C21", "C22"),
                   help="exact cosines instead of angles; non-dyadic values are undefinable")
    p.add_argument("--apex", type=_angle, default=None, help="apex angle / pi for the common-ensemble analysis")
    p.set_defaults(func=cmd_chsh_run, command_name="chsh run")

    p = chsh_sub.add_parser("definability", parents=[common], help="common-ensemble definability verdicts")
    p.add_argument("--angles", nargs=4, type=float, metavar=("A1", "A2", "B1", "B2"),
                   default=list(chsh.STANDARD_ANGLES))
    p.add_argument("--pair-data", nargs=4, type=_fraction,
                   metavar=("COS_A1A2", "COS_B1B2", "COS_CHOSEN", "COS_OPPOSITE"),
                   help="exact cosines instead of angles")
    p.add_argument("--chosen", choices=chsh.CORRELATION_PAIRS, default="a1b1")
    p.add_argument("--apex-alice", type=_angle, default=None, help="apex / pi at Alice's chosen direction")
    p.add_argument("--apex-bob", type=_angle, default=None, help="apex / pi at Bob's chosen direction")
    p.set_defaults(func=cmd_chsh_definability, command_name="chsh definability")

    # qubit
    p_q = sub.add_parser("qubit", help="E operator <-> qubit descriptor")
    q_sub = p_q.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = q_sub.add_parser("map", parents=[common])
    p.add_argument("--alpha", type=_fraction)
    p.add_argument("--beta", type=_fraction)
    p.add_argument("--cos-half-sq", type=_fraction)
    p.add_argument("--phase", type=_fraction, help="phi / pi")
    p.set_defaults(func=cmd_qubit_map, command_name="qubit map")

    p = sub.add_parser("niven", parents=[common], help="is cos(pi p/q) rational?")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.set_defaults(func=cmd_niven, command_name="niven")

    p = sub.add_parser("doubling", parents=[common], help="values of 2 cos(2^k pi p/q)")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.add_argument("--k-max", type=int, default=20)
    p.set_defaults(func=cmd_doubling, command_name="doubling")

    # dynsys
    p_d = sub.add_parser("dynsys", help="dynamical-systems toolkit")
    d_sub = p_d.add_subparsers(dest="action", required=True, parser_class=_Parser)

    p = d_sub.add_parser("limit-cycle", parents=[common],
                         help="RK4 trajectory; CSV columns t,r,theta (one row per step)")
    p.add_argument("--r0", type=float, default=0.1)
    p.add_argument("--theta0", type=float, default=0.0)
    p.add_argument("--step", type=float, default=1e-2)
    p.add_argument("--horizon", type=float, default=100.0)
    p.set_defaults(func=cmd_limit_cycle, command_name="dynsys limit-cycle", preferred_format="csv")

    p = d_sub.add_parser("lorenz", parents=[common],
                         help="RK4 trajectory; CSV columns t,X,Y,Z (horizon/step rows)")
    p.add_argument("--sigma", type=float, default=10.0)
    p.add_argument("--r", type=float, default=28.0)
    p.add_argument("--b", type=float, default=8.0 / 3.0)
    p.add_argument("--x0", type=float, nargs=3, default=[1.0, 1.0, 1.0])
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--horizon", type=float, default=50.0)
    p.set_defaults(func=cmd_lorenz, command_name="dynsys lorenz", preferred_format="csv")

    p = d_sub.add_parser("cantor", parents=[common], help="depth-k intervals and exact measure (JSON)")
    p.add_argument("--base", type=int, default=3)
    p.add_argument("--digits", type=int, nargs="+", default=[0, 2])
    p.add_argument("--depth", type=int, default=2)
    p.set_defaults(func=cmd_cantor, command_name="dynsys cantor")

    p = d_sub.add_parser("takens", parents=[common],
                         help="delay embedding; CSV columns s_t, s_t-1tau, ...")
    p.add_argument("--input", help="CSV file to read the series from (default: Lorenz X)")
    p.add_argument("--column", default="X")
    p.add_argument("--delay", type=int, default=None, help="samples (default: first autocorrelation minimum)")
    p.add_argument("--dimension", type=int, default=3)
    p.add_argument("--horizon", type=float, default=100.0)
    p.add_argument("--stride", type=int, default=1, help="write every k-th point")
    p.set_defaults(func=cmd_takens, command_name="dynsys takens", preferred_format="csv")

    p = d_sub.add_parser("dimension", parents=[common], help="box-counting or correlation dimension (JSON)")
    p.add_argument("--system", choices=("lorenz", "limit-cycle", "cantor"), default="cantor")
    p.add_argument("--method", choices=("box", "correlation"), default="box")
    p.add_argument("--scales", type=float, nargs="+")
    p.add_argument("--horizon", type=float, default=2000.0)
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--points", type=int, default=20000)
    p.set_defaults(func=cmd_dimension, command_name="dynsys dimension")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = getattr(args, "preferred_format", "json")
    try:
        return args.func(args)
    except BrokenPipeError:
        # reader went away (e.g. piped into head); not an error of ours
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK
    except (UsageError, ValueError, ArithmeticError, OSError) as exc:
        # bad parameters that only surface at run time (e.g. a diverging step) are usage errors too
        sys.stderr.write(f"isl: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
