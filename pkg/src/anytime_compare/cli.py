"""Command line front end: compare forecast streams or simulate new ones.

Two subcommands share one inference pipeline:

* ``compare`` reads a CSV of forecasts and outcomes and emits one output
  row per input row, strictly online (row t depends only on rows <= t).
* ``simulate`` plays two named forecasters against the changepoint
  reality, writes the raw game to one file and the inference output,
  extended with the simulator's true moving target, to another.

Input schemas (selected with --schema, binary is the default):

* binary: header ``t,p,q,y`` with probabilities p, q and y in {0,1}.
* binary with --odds: header ``t,odds_p,odds_q,y``; the two columns are
  American moneylines for the two sides of one market.  Each is converted
  to its implied probability and the pair is rescaled to sum to one, so
  forecaster p is the market's view of the event and q is the complement.
* kstep: header ``t,p1..pK,q1..qK,y``; K forecasts per side are scored
  against the same binary outcome with uniform weights 1/K.
* categorical: header ``t,p_1..p_K,q_1..q_K,y``; each side is a length-K
  probability vector and y is the 1-based class index.

Output columns: t, delta_hat, vhat, lcb, ucb, width, e_pq, e_qp, p_pq,
p_qp, decision.  Floats are printed at 9 significant digits; --json emits
one object per line with the same keys.  E-values are capped at 1e308 and
p-values never print as 0.  The summary line (final decision plus the
first time the interval excluded zero, if ever) goes to stderr so stdout
stays machine readable.

Exit codes: 0 success, 1 usage error, 2 data error.  The environment
variable ANYTIME_COMPARE_SEED overrides --seed for reproducibility
harnesses.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .boundaries import (
    UniformBoundary,
    exponential_cgf,
    gamma_exponential_boundary,
    normal_cgf,
    normal_mixture_boundary,
    rho_for_vopt,
    stitched95_boundary,
)
from .confseq import UNDECIDED, ComparisonState, cs_eb, cs_hoeffding, decide, running_intersection
from .eprocess import EvidenceState, log_e_mixture, p_process
from .forecasters import (
    FORECASTER_NAMES,
    changepoint_reality,
    forecaster_from_name,
    rescale_pair,
    run_pair,
    sample_outcomes,
)
from .scoring import (
    KStepWeights,
    brier,
    categorical_score,
    kstep_score,
    pointwise_diff,
    rule_from_name,
    winkler,
)

__all__ = [
    "main",
    "run_compare",
    "american_odds_to_prob",
    "RunConfig",
    "OutputRow",
    "DataError",
]

EXIT_USAGE = 1
EXIT_DATA = 2

OUTPUT_COLUMNS = (
    "t",
    "delta_hat",
    "vhat",
    "lcb",
    "ucb",
    "width",
    "e_pq",
    "e_qp",
    "p_pq",
    "p_qp",
    "decision",
)

_E_CAP = 1e308
_SCORE_NAMES = ("brier", "spherical", "zero_one", "log")
_SCHEMAS = ("binary", "kstep", "categorical")


class DataError(Exception):
    """Bad input data (as opposed to bad flags); exits with status 2."""


@dataclass(frozen=True)
class OutputRow:
    t: int
    delta_hat: float
    vhat: float
    lcb: float
    ucb: float
    width: float
    e_pq: float
    e_qp: float
    p_pq: float
    p_qp: float
    decision: str

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in OUTPUT_COLUMNS}


@dataclass(frozen=True)
class RunConfig:
    """Everything the inference pipeline needs, resolved from flags."""

    rule: object
    bound: float
    c: float
    alpha: float
    cs_kind: str
    boundary: UniformBoundary
    rho_e: float
    gamma_mode: str
    intersect: bool


def american_odds_to_prob(odds: float) -> float:
    """Implied probability of an American moneyline quote."""
    if odds >= 0:
        return 100.0 / (100.0 + odds)
    return -odds / (100.0 - odds)


def _parser() -> argparse.ArgumentParser:
    parser = _Cli(
        prog="anytime-compare",
        description="Anytime-valid comparison of probability forecasters.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    compare = sub.add_parser(
        "compare", help="compare two forecast streams from a CSV", description=__doc__
    )
    compare.add_argument(
        "input", nargs="?", default=None, help="input CSV path, or - for stdin"
    )
    compare.add_argument("--schema", choices=_SCHEMAS, default="binary")
    compare.add_argument(
        "--odds",
        action="store_true",
        help="binary schema carries American odds columns odds_p,odds_q",
    )
    _add_inference_flags(compare)
    compare.add_argument("--out", default="-", help="output path (default stdout)")
    compare.add_argument(
        "--pairs",
        help="manifest of 'label,input.csv' lines; runs each pair concurrently",
    )
    compare.add_argument(
        "--out-dir", default=".", help="directory for per-pair outputs with --pairs"
    )

    simulate = sub.add_parser(
        "simulate", help="play two named forecasters against simulated reality"
    )
    simulate.add_argument("--p", required=True, help=f"one of {FORECASTER_NAMES}")
    simulate.add_argument("--q", required=True, help=f"one of {FORECASTER_NAMES}")
    simulate.add_argument("-T", "--rounds", type=int, required=True)
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument(
        "--no-noise", action="store_true", help="disable reality noise"
    )
    simulate.add_argument("--data-out", required=True, help="raw game CSV path")
    simulate.add_argument(
        "--results-out", required=True, help="inference CSV path (adds delta_true)"
    )
    _add_inference_flags(simulate)
    return parser


class _Cli(argparse.ArgumentParser):
    # argparse exits 2 on usage problems by default; this artifact reserves
    # 2 for data errors
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_inference_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--score", choices=_SCORE_NAMES, default=None)
    p.add_argument(
        "--log-eps",
        type=float,
        default=0.01,
        help="truncation for the log score (default 0.01)",
    )
    p.add_argument(
        "--winkler-q0",
        type=float,
        default=None,
        help="baseline probability; switches scoring to the Winkler skill score",
    )
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--cs", choices=("eb", "hoeffding"), default="eb")
    p.add_argument(
        "--boundary",
        choices=("gamma-exp", "normal-mixture", "stitched95"),
        default=None,
        help="default: gamma-exp for --cs eb, normal-mixture for --cs hoeffding",
    )
    p.add_argument("--gamma", choices=("mean", "zero"), default="mean")
    p.add_argument("--rho", type=float, default=None)
    p.add_argument(
        "--v-opt",
        type=float,
        default=None,
        help="intrinsic time the boundary is tuned for (default 10)",
    )
    p.add_argument(
        "--c",
        type=float,
        default=None,
        help="override the sub-exponential scale; rows must keep |dhat| <= c/2",
    )
    p.add_argument("--json", action="store_true", help="emit JSON lines, not CSV")
    p.add_argument(
        "--intersect",
        action="store_true",
        help="report the running intersection of intervals",
    )


def _resolve(args, parser, k_classes: int | None = None) -> RunConfig:
    if not 0.0 < args.alpha < 1.0:
        parser.error(f"--alpha must lie in (0, 1), got {args.alpha}")
    if getattr(args, "odds", False) and getattr(args, "schema", "binary") != "binary":
        parser.error("--odds only applies to the binary schema")
    if args.winkler_q0 is not None:
        if args.score not in (None, "brier"):
            parser.error("--winkler-q0 replaces --score; only brier base is supported")
        try:
            rule = winkler(brier(), args.winkler_q0)
        except ValueError as exc:
            parser.error(str(exc))
    else:
        try:
            rule = rule_from_name(args.score or "brier", eps=args.log_eps)
        except (KeyError, ValueError) as exc:
            parser.error(str(exc))

    schema = getattr(args, "schema", "binary")
    if schema == "kstep":
        bound = rule.diff_bound  # uniform weights sum to one
    elif schema == "categorical":
        if rule.kind == "winkler":
            parser.error("the winkler score has no categorical form")
        # quadratic distance between probability vectors can reach 2
        bound = 2.0 if rule.kind == "brier" else rule.diff_bound
    else:
        bound = rule.diff_bound

    if args.c is not None:
        if not args.c > 0.0:
            parser.error(f"--c must be positive, got {args.c}")
        bound = args.c / 2.0
    c = 2.0 * bound

    boundary_name = args.boundary
    if boundary_name is None:
        boundary_name = "gamma-exp" if args.cs == "eb" else "normal-mixture"
    if args.cs == "eb" and boundary_name == "normal-mixture":
        parser.error("--cs eb needs a sub-exponential boundary, not normal-mixture")
    if args.cs == "hoeffding" and boundary_name == "gamma-exp":
        parser.error("--cs hoeffding needs a sub-Gaussian boundary, not gamma-exp")
    if boundary_name == "stitched95" and args.alpha != 0.05:
        parser.error("the stitched boundary is only available at alpha 0.05")

    if args.rho is not None and args.v_opt is not None:
        parser.error("give at most one of --rho and --v-opt")
    if args.rho is not None and not args.rho > 0.0:
        parser.error(f"--rho must be positive, got {args.rho}")
    v_opt = 10.0 if args.v_opt is None else args.v_opt
    if not v_opt > 0.0:
        parser.error(f"--v-opt must be positive, got {v_opt}")

    alpha_side = args.alpha / 2.0
    rho_e = (
        args.rho
        if args.rho is not None
        else rho_for_vopt(v_opt, exponential_cgf(c), alpha_side)
    )
    if boundary_name == "gamma-exp":
        boundary = gamma_exponential_boundary(alpha_side, rho_e, c)
    elif boundary_name == "normal-mixture":
        rho_n = (
            args.rho
            if args.rho is not None
            else rho_for_vopt(v_opt, normal_cgf(), alpha_side)
        )
        boundary = normal_mixture_boundary(alpha_side, rho_n)
    else:
        boundary = stitched95_boundary()

    return RunConfig(
        rule=rule,
        bound=bound,
        c=c,
        alpha=args.alpha,
        cs_kind=args.cs,
        boundary=boundary,
        rho_e=rho_e,
        gamma_mode=args.gamma,
        intersect=args.intersect,
    )


# ---------------------------------------------------------------------------
# input parsing


def _data_error(line_no: int, message: str) -> DataError:
    return DataError(f"line {line_no}: {message}")


def _parse_int(text: str, line_no: int, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise _data_error(line_no, f"{what} must be an integer, got {text!r}") from None


def _parse_float(text: str, line_no: int, what: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise _data_error(line_no, f"{what} must be a number, got {text!r}") from None
    if math.isnan(value):
        raise _data_error(line_no, f"{what} is NaN")
    return value


def _parse_prob(text: str, line_no: int, what: str) -> float:
    value = _parse_float(text, line_no, what)
    if not 0.0 <= value <= 1.0:
        raise _data_error(line_no, f"{what} must lie in [0, 1], got {value}")
    return value


def _parse_outcome(text: str, line_no: int) -> int:
    if text not in ("0", "1"):
        raise _data_error(line_no, f"y must be 0 or 1, got {text!r}")
    return int(text)


class _MonotoneT:
    def __init__(self):
        self.prev = None

    def check(self, t: int, line_no: int) -> int:
        if self.prev is not None and t <= self.prev:
            raise _data_error(
                line_no, f"t must be strictly increasing, got {t} after {self.prev}"
            )
        self.prev = t
        return t


def _expect_header(got, want, what: str) -> None:
    if got != want:
        raise DataError(f"expected {what} header {','.join(want)}, got {got}")


def _iter_csv(fh):
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("input is empty") from None
    return [h.strip() for h in header], reader


def parse_binary(fh, rule, odds: bool):
    """Yield (t, dhat) pairs from a binary-schema CSV."""
    header, reader = _iter_csv(fh)
    want = ["t", "odds_p", "odds_q", "y"] if odds else ["t", "p", "q", "y"]
    _expect_header(header, want, "binary" + (" odds" if odds else ""))
    mono = _MonotoneT()
    got_rows = False
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 4:
            raise _data_error(line_no, f"expected 4 fields, got {len(row)}")
        t = mono.check(_parse_int(row[0], line_no, "t"), line_no)
        if odds:
            tilde_p = american_odds_to_prob(_parse_float(row[1], line_no, "odds_p"))
            tilde_q = american_odds_to_prob(_parse_float(row[2], line_no, "odds_q"))
            p, q = rescale_pair(tilde_p, tilde_q)
        else:
            p = _parse_prob(row[1], line_no, "p")
            q = _parse_prob(row[2], line_no, "q")
        y = _parse_outcome(row[3], line_no)
        got_rows = True
        yield t, pointwise_diff(rule, p, q, y).value
    if not got_rows:
        raise DataError("no data rows")


def _wide_headers(k: int, schema: str):
    if schema == "kstep":
        ps = [f"p{i}" for i in range(1, k + 1)]
        qs = [f"q{i}" for i in range(1, k + 1)]
    else:
        ps = [f"p_{i}" for i in range(1, k + 1)]
        qs = [f"q_{i}" for i in range(1, k + 1)]
    return ["t"] + ps + qs + ["y"]


def _infer_k(header, schema: str) -> int:
    n = len(header)
    if n < 4 or n % 2 != 0:
        raise DataError(f"{schema} schema needs columns t,<K p's>,<K q's>,y")
    k = (n - 2) // 2
    _expect_header(header, _wide_headers(k, schema), schema)
    return k


def parse_kstep(fh, rule):
    """Yield (t, dhat) from a k-step schema; uniform horizon weights."""
    header, reader = _iter_csv(fh)
    k = _infer_k(header, "kstep")
    weights = KStepWeights(tuple(1.0 / k for _ in range(k)))
    mono = _MonotoneT()
    got_rows = False
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 2 * k + 2:
            raise _data_error(line_no, f"expected {2 * k + 2} fields, got {len(row)}")
        t = mono.check(_parse_int(row[0], line_no, "t"), line_no)
        ps = [_parse_prob(row[1 + i], line_no, f"p{i + 1}") for i in range(k)]
        qs = [_parse_prob(row[1 + k + i], line_no, f"q{i + 1}") for i in range(k)]
        y = _parse_outcome(row[-1], line_no)
        got_rows = True
        yield t, kstep_score(rule, weights, ps, y) - kstep_score(rule, weights, qs, y)
    if not got_rows:
        raise DataError("no data rows")


def parse_categorical(fh, rule):
    """Yield (t, dhat) from a categorical schema; y is a 1-based class."""
    header, reader = _iter_csv(fh)
    k = _infer_k(header, "categorical")
    mono = _MonotoneT()
    got_rows = False
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 2 * k + 2:
            raise _data_error(line_no, f"expected {2 * k + 2} fields, got {len(row)}")
        t = mono.check(_parse_int(row[0], line_no, "t"), line_no)
        ps = [_parse_float(row[1 + i], line_no, f"p_{i + 1}") for i in range(k)]
        qs = [_parse_float(row[1 + k + i], line_no, f"q_{i + 1}") for i in range(k)]
        y = _parse_int(row[-1], line_no, "y")
        if not 1 <= y <= k:
            raise _data_error(line_no, f"y must name a class in 1..{k}, got {y}")
        onehot = [1.0 if i == y - 1 else 0.0 for i in range(k)]
        try:
            dhat = categorical_score(rule, ps, onehot) - categorical_score(
                rule, qs, onehot
            )
        except ValueError as exc:
            raise _data_error(line_no, str(exc)) from None
        got_rows = True
        yield t, dhat
    if not got_rows:
        raise DataError("no data rows")


# ---------------------------------------------------------------------------
# the pipeline


def run_compare(config: RunConfig, records):
    """Fold (t, dhat) records into OutputRows, strictly online."""
    state = ComparisonState(bound=config.bound, centering=config.gamma_mode)
    ev_pq = EvidenceState("pq")
    ev_qp = EvidenceState("qp")
    cs_fn = cs_eb if config.cs_kind == "eb" else cs_hoeffding
    acc = None
    for t, dhat in records:
        state = state.update(dhat)
        ci = cs_fn(state, config.boundary)
        if config.intersect:
            acc = running_intersection(acc, ci)
            ci = acc
        log_pq = log_e_mixture(state, config.rho_e, config.c, "pq")
        log_qp = log_e_mixture(state, config.rho_e, config.c, "qp")
        ev_pq = ev_pq.record_log(log_pq)
        ev_qp = ev_qp.record_log(log_qp)
        yield OutputRow(
            t=t,
            delta_hat=state.delta_hat,
            vhat=state.vhat,
            lcb=ci.lower,
            ucb=ci.upper,
            width=ci.width,
            e_pq=_cap_e(log_pq),
            e_qp=_cap_e(log_qp),
            p_pq=p_process(ev_pq),
            p_qp=p_process(ev_qp),
            decision=decide(ci),
        )


def _cap_e(log_e: float) -> float:
    if log_e >= 709.0:
        return _E_CAP
    return min(math.exp(log_e), _E_CAP)


def _fmt(value) -> str:
    if isinstance(value, float):
        return "%.9g" % value
    return str(value)


def write_rows(rows, fh, as_json: bool):
    """Emit rows and return (final_decision, first_decision_time)."""
    final = UNDECIDED
    first_t = None
    if as_json:
        for row in rows:
            fh.write(json.dumps(row.as_dict()) + "\n")
            final = row.decision
            if first_t is None and row.decision != UNDECIDED:
                first_t = row.t
    else:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(OUTPUT_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(getattr(row, c)) for c in OUTPUT_COLUMNS])
            final = row.decision
            if first_t is None and row.decision != UNDECIDED:
                first_t = row.t
    return final, first_t


def parse_output_rows(fh):
    """Read back a CSV produced by write_rows."""
    header, reader = _iter_csv(fh)
    _expect_header(header, list(OUTPUT_COLUMNS), "output")
    rows = []
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(OUTPUT_COLUMNS):
            raise _data_error(line_no, f"expected {len(OUTPUT_COLUMNS)} fields")
        rows.append(
            OutputRow(
                t=_parse_int(row[0], line_no, "t"),
                delta_hat=_parse_float(row[1], line_no, "delta_hat"),
                vhat=_parse_float(row[2], line_no, "vhat"),
                lcb=_parse_float(row[3], line_no, "lcb"),
                ucb=_parse_float(row[4], line_no, "ucb"),
                width=_parse_float(row[5], line_no, "width"),
                e_pq=_parse_float(row[6], line_no, "e_pq"),
                e_qp=_parse_float(row[7], line_no, "e_qp"),
                p_pq=_parse_float(row[8], line_no, "p_pq"),
                p_qp=_parse_float(row[9], line_no, "p_qp"),
                decision=row[10],
            )
        )
    return rows


def _summary(final: str, first_t) -> str:
    if first_t is None:
        return f"final: {final} (no decision)"
    return f"final: {final} (first decision at t={first_t})"


# ---------------------------------------------------------------------------
# commands


def _records_for(args, config, fh):
    schema = getattr(args, "schema", "binary")
    if schema == "binary":
        return parse_binary(fh, config.rule, args.odds)
    if schema == "kstep":
        return parse_kstep(fh, config.rule)
    return parse_categorical(fh, config.rule)


def _compare_one(args, config, input_path: str, out_path: str) -> str:
    if input_path == "-":
        rows = run_compare(config, _records_for(args, config, sys.stdin))
        final, first_t = _write_to(out_path, rows, args.json)
    else:
        with open(input_path, newline="") as fh:
            rows = run_compare(config, _records_for(args, config, fh))
            final, first_t = _write_to(out_path, rows, args.json)
    return _summary(final, first_t)


def _write_to(out_path: str, rows, as_json: bool):
    if out_path == "-":
        return write_rows(rows, sys.stdout, as_json)
    with open(out_path, "w", newline="") as fh:
        return write_rows(rows, fh, as_json)


def _cmd_compare(args, parser) -> int:
    if args.pairs is not None and args.input is not None:
        parser.error("give either an input file or --pairs, not both")
    if args.pairs is None and args.input is None:
        parser.error("an input file (or --pairs) is required")
    config = _resolve(args, parser)
    if args.pairs:
        return _cmd_pairs(args, parser, config)
    summary = _compare_one(args, config, args.input, args.out)
    print(summary, file=sys.stderr)
    return 0


def _cmd_pairs(args, parser, config) -> int:
    with open(args.pairs) as fh:
        jobs = []
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            label, _, path = line.partition(",")
            label, path = label.strip(), path.strip()
            if not label or not path:
                raise _data_error(line_no, "pairs lines are 'label,input.csv'")
            if os.sep in label or label in (".", ".."):
                raise _data_error(line_no, f"label {label!r} is not a plain name")
            jobs.append((label, path))
    if not jobs:
        raise DataError("pairs manifest has no jobs")
    os.makedirs(args.out_dir, exist_ok=True)
    ext = "jsonl" if args.json else "csv"

    def one(job):
        label, path = job
        out = os.path.join(args.out_dir, f"{label}.{ext}")
        return label, _compare_one(args, config, path, out)

    with ThreadPoolExecutor(max_workers=min(8, len(jobs))) as pool:
        for label, summary in pool.map(one, jobs):
            print(f"{label}: {summary}", file=sys.stderr)
    return 0


def _cmd_simulate(args, parser) -> int:
    config = _resolve(args, parser)
    seed = args.seed
    env_seed = os.environ.get("ANYTIME_COMPARE_SEED")
    if env_seed is not None:
        try:
            seed = int(env_seed)
        except ValueError:
            parser.error(f"ANYTIME_COMPARE_SEED must be an integer, got {env_seed!r}")
    if args.rounds < 1:
        parser.error(f"-T must be at least 1, got {args.rounds}")
    try:
        p_fc = forecaster_from_name(args.p)
        q_fc = forecaster_from_name(args.q)
    except ValueError as exc:
        parser.error(str(exc))

    reality = changepoint_reality(args.rounds, seed, noise=not args.no_noise)
    outcomes = sample_outcomes(reality, seed)
    run = run_pair(p_fc, q_fc, reality, outcomes, config.rule)

    with open(args.data_out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "p", "q", "y"])
        for i in range(args.rounds):
            # full precision: this file replayed through compare must
            # reproduce the results file bit for bit
            writer.writerow(
                [
                    i + 1,
                    repr(float(run.forecasts_p[i])),
                    repr(float(run.forecasts_q[i])),
                    int(run.outcomes[i]),
                ]
            )

    records = ((i + 1, float(run.diffs[i])) for i in range(args.rounds))
    target = run.true_average_path()
    rows = run_compare(config, records)
    final = UNDECIDED
    first_t = None
    with open(args.results_out, "w", newline="") as fh:
        if args.json:
            for row in rows:
                body = row.as_dict()
                body["delta_true"] = float(target[row.t - 1])
                fh.write(json.dumps(body) + "\n")
                final = row.decision
                if first_t is None and row.decision != UNDECIDED:
                    first_t = row.t
        else:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(list(OUTPUT_COLUMNS) + ["delta_true"])
            for row in rows:
                writer.writerow(
                    [_fmt(getattr(row, c)) for c in OUTPUT_COLUMNS]
                    + [_fmt(float(target[row.t - 1]))]
                )
                final = row.decision
                if first_t is None and row.decision != UNDECIDED:
                    first_t = row.t
    print(_summary(final, first_t), file=sys.stderr)
    return 0


def main(argv=None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "compare":
            return _cmd_compare(args, parser)
        return _cmd_simulate(args, parser)
    except DataError as exc:
        print(f"anytime-compare: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        # bad magnitudes reaching the state layer are data problems too
        print(f"anytime-compare: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"anytime-compare: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
