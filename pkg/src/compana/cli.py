"""Command-line surface tying the four computation routes together.

Subcommands:

  exact     exact multiplicity-event probabilities by enumeration (small n)
  prob      occurrence probability of one (n, k, m) by series and/or
            dominant-root approximation
  predict   limit-law prediction for the multiplicity event
  sample    seeded Monte Carlo estimate vs. the prediction
  distinct  distribution of the number of distinct part sizes, with the
            exact window lower bound
  compare   cross-route comparison table over a list of n
  rho       dominant denominator root for one k
  mellin    harmonic sum by direct summation and by residue series

Output is CSV (default) or JSON (``--format json``), to stdout or ``--out``.
Every sampling command is deterministic for a fixed (seed, workers) pair.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from compana import asymptotics, compositions, series, singularity
from compana.compositions import EnumerationCapError
from compana.singularity import NumericalInstabilityError

SERIES_MAX_N = 10_000
DEFAULT_PRECISION = 12

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

COMPARE_COLUMNS = [
    "n",
    "m",
    "exact",
    "series",
    "singularity",
    "prediction",
    "mc",
    "mc_stderr",
    "rel_err_series_exact",
    "rel_err_pred_mc",
]


@dataclass(frozen=True)
class RunConfig:
    """Common execution knobs shared by the sampling commands."""

    seed: int = 0
    trials: int = 100_000
    workers: int = 1
    fmt: str = "csv"
    precision: int = DEFAULT_PRECISION
    out: str | None = None

    def __post_init__(self) -> None:
        if self.trials < 0:
            raise ValueError("trials must be >= 0")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.fmt not in ("csv", "json"):
            raise ValueError("format must be csv or json")


@dataclass
class ComparisonRow:
    """One cross-route comparison line.

    ``exact`` and ``series`` carry the exact expected number of part sizes
    with multiplicity m (enumeration and coefficient routes, identical where
    both are feasible); ``singularity`` its dominant-root approximation;
    ``prediction`` and ``mc`` the multiplicity-event probability by the limit
    law and by Monte Carlo.
    """

    n: int
    m: int
    k: int | None = None
    exact_rational: Fraction | None = None
    exact: float | None = None
    series: float | None = None
    singularity: float | None = None
    prediction: float | None = None
    mc: float | None = None
    mc_stderr: float | None = None
    rel_err_series_exact: float | None = None
    rel_err_pred_mc: float | None = None


def parse_count(text: str) -> int:
    """Positive integer; scientific (1e6, 2.5e3) and power (10^6) forms
    accepted."""
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    if "^" in text:
        base_text, _, exp_text = text.partition("^")
        return int(base_text) ** int(exp_text)
    value = float(text)
    if not value.is_integer() or abs(value) > 2**53:
        raise argparse.ArgumentTypeError(f"{text!r} is not an exactly-representable integer")
    return int(value)


def parse_count_list(text: str) -> list[int]:
    """Comma list of counts; ``A..B`` expands by doubling from A up to B."""
    out: list[int] = []
    for token in text.split(","):
        token = token.strip()
        if ".." in token:
            lo_text, hi_text = token.split("..", 1)
            lo, hi = parse_count(lo_text), parse_count(hi_text)
            if lo < 1 or hi < lo:
                raise argparse.ArgumentTypeError(f"bad range {token!r}")
            value = lo
            while value < hi:
                out.append(value)
                value *= 2
            out.append(hi)
        elif token:
            out.append(parse_count(token))
    if not out:
        raise argparse.ArgumentTypeError("empty n list")
    return out


def _fmt_value(value: Any, precision: int) -> Any:
    if value is None:
        return None
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return format(value, f".{precision}g")
    return value


def emit(
    rows: list[dict[str, Any]],
    columns: list[str],
    config: RunConfig,
    extra: dict[str, Any] | None = None,
) -> None:
    """Render rows as CSV or JSON with the configured precision."""
    if config.fmt == "json":
        payload: dict[str, Any] = {
            "rows": [
                {c: _fmt_value(r.get(c), config.precision) for c in columns} for r in rows
            ]
        }
        if extra:
            payload.update(extra)
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = [",".join(columns)]
        for r in rows:
            cells = []
            for c in columns:
                v = _fmt_value(r.get(c), config.precision)
                cells.append("" if v is None else str(v))
            lines.append(",".join(cells))
        text = "\n".join(lines) + "\n"
    if config.out:
        with open(config.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _config_from(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        seed=getattr(args, "seed", 0),
        trials=getattr(args, "trials", 100_000),
        workers=getattr(args, "workers", 1),
        fmt=args.format,
        precision=args.precision,
        out=args.out,
    )


def _rel_err(value: float | None, reference: float | None) -> float | None:
    if value is None or reference is None or reference == 0:
        return None
    return abs(value - reference) / abs(reference)


def distinct_window(n: int) -> tuple[int, int]:
    """Window [a, b] around log2(n) expected to contain the distinct-size
    count: offsets of ceil(log log n) (natural logs) on each side."""
    if n < 2:
        return 1, max(1, n)
    width = math.ceil(math.log(math.log(n))) if n > 2 else 0
    center = math.floor(math.log2(n))
    lo = max(1, center - width)
    hi = min(n, max(lo, center + width))
    return lo, hi


def cmd_exact(args: argparse.Namespace) -> int:
    config = _config_from(args)
    n = args.n
    rows = []
    if args.m is not None:
        values = [(args.m, compositions.exact_event_probability(n, args.m))]
    else:
        values = []
        for m in range(1, n + 1):
            p = compositions.exact_event_probability(n, m)
            if p:
                values.append((m, p))
    for m, p in values:
        rows.append({"m": m, "probability": p, "decimal": float(p)})
    emit(rows, ["m", "probability", "decimal"], config)
    return EXIT_OK


def cmd_prob(args: argparse.Namespace) -> int:
    config = _config_from(args)
    n, k, m = args.n, args.k, args.m
    row: dict[str, Any] = {"n": n, "k": k, "m": m}
    exact_value: float | None = None
    if args.route in ("series", "both"):
        p = series.prob_multiplicity(n, k, m)
        row["series_rational"] = p
        row["series"] = float(p)
        exact_value = float(p)
    if args.route in ("singularity", "both"):
        row["singularity"] = singularity.prob_multiplicity_singularity(n, k, m).value
    if args.route == "both":
        row["rel_err_singularity_series"] = _rel_err(row.get("singularity"), exact_value)
    emit(
        [row],
        ["n", "k", "m", "series_rational", "series", "singularity", "rel_err_singularity_series"],
        config,
    )
    return EXIT_OK


def cmd_predict(args: argparse.Namespace) -> int:
    config = _config_from(args)
    n, m = args.n, args.m
    frac = math.log2(n) % 1.0
    wobble = asymptotics.fluctuation(frac, m)
    row = {
        "n": n,
        "m": m,
        "prediction": asymptotics.predict_event_probability(n, m),
        "scaled_value": 1.0 / m + wobble,
        "frac_log2_n": frac,
        "fluctuation": wobble,
    }
    emit([row], ["n", "m", "prediction", "scaled_value", "frac_log2_n", "fluctuation"], config)
    return EXIT_OK


def cmd_sample(args: argparse.Namespace) -> int:
    config = _config_from(args)
    n, m = args.n, args.m
    estimate = compositions.mc_event_probability(
        n, m, config.trials, config.seed, config.workers
    )
    prediction = asymptotics.predict_event_probability(n, m) if n >= 3 else None
    row = {
        "n": n,
        "m": m,
        "trials": estimate.trials,
        "seed": estimate.seed,
        "workers": estimate.workers,
        "mc": estimate.value,
        "mc_stderr": estimate.stderr,
        "prediction": prediction,
        "rel_err_pred_mc": _rel_err(prediction, estimate.value),
    }
    emit(
        [row],
        ["n", "m", "trials", "seed", "workers", "mc", "mc_stderr", "prediction", "rel_err_pred_mc"],
        config,
    )
    return EXIT_OK


def cmd_distinct(args: argparse.Namespace) -> int:
    config = _config_from(args)
    n = args.n
    lo, hi = distinct_window(n)
    hist = compositions.distinct_size_histogram(n, config.trials, config.seed, config.workers)
    trials = int(hist.sum())
    in_window = int(hist[lo : hi + 1].sum())
    p_window = in_window / trials
    window_stderr = math.sqrt(max(0.0, p_window * (1.0 - p_window)) / trials)
    counts = [(d, int(c)) for d, c in enumerate(hist) if c]
    mean = sum(d * c for d, c in counts) / trials
    var = sum(c * (d - mean) ** 2 for d, c in counts) / max(1, trials - 1)
    bound = series.window_lower_bound(n, lo, hi)
    row = {
        "n": n,
        "trials": trials,
        "seed": config.seed,
        "workers": config.workers,
        "window_lo": lo,
        "window_hi": hi,
        "empirical_window_prob": p_window,
        "window_prob_stderr": window_stderr,
        "exact_lower_bound": float(bound),
        "mean_distinct": mean,
        "mean_distinct_stderr": math.sqrt(var / trials),
    }
    columns = [
        "n",
        "trials",
        "seed",
        "workers",
        "window_lo",
        "window_hi",
        "empirical_window_prob",
        "window_prob_stderr",
        "exact_lower_bound",
        "mean_distinct",
        "mean_distinct_stderr",
    ]
    extra = None
    if config.fmt == "json":
        extra = {"histogram": {str(d): c for d, c in counts}}
    emit([row], columns, config, extra=extra)
    if args.hist_out:
        with open(args.hist_out, "w", encoding="utf-8") as handle:
            handle.write("distinct,count\n")
            for d, c in counts:
                handle.write(f"{d},{c}\n")
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    config = _config_from(args)
    m = args.m
    cap = compositions.enumeration_cap()
    rows = []
    for n in args.n:
        row = ComparisonRow(n=n, m=m)
        if n <= cap:
            row.exact_rational = compositions.exact_expected_sizes_with_multiplicity(n, m)
            row.exact = float(row.exact_rational)
        if n <= SERIES_MAX_N:
            row.series = float(series.expected_sizes_with_multiplicity(n, m))
        row.singularity = singularity.expected_sizes_with_multiplicity_singularity(n, m)
        if n >= 3:
            row.prediction = asymptotics.predict_event_probability(n, m)
        if config.trials > 0:
            estimate = compositions.mc_event_probability(
                n, m, config.trials, config.seed, config.workers
            )
            row.mc = estimate.value
            row.mc_stderr = estimate.stderr
        row.rel_err_series_exact = _rel_err(row.series, row.exact)
        row.rel_err_pred_mc = _rel_err(row.prediction, row.mc)
        rows.append(
            {
                "n": row.n,
                "m": row.m,
                "exact": row.exact,
                "series": row.series,
                "singularity": row.singularity,
                "prediction": row.prediction,
                "mc": row.mc,
                "mc_stderr": row.mc_stderr,
                "rel_err_series_exact": row.rel_err_series_exact,
                "rel_err_pred_mc": row.rel_err_pred_mc,
            }
        )
    emit(rows, COMPARE_COLUMNS, config)
    return EXIT_OK


def cmd_rho(args: argparse.Namespace) -> int:
    config = _config_from(args)
    root = singularity.solve_dominant_root(args.k)
    row = {
        "k": root.k,
        "rho": root.value,
        "bracket_lo": root.bracket_lo,
        "bracket_hi": root.bracket_hi,
        "residual": root.residual,
        "method": root.method,
    }
    emit([row], ["k", "rho", "bracket_lo", "bracket_hi", "residual", "method"], config)
    return EXIT_OK


def cmd_mellin(args: argparse.Namespace) -> int:
    config = _config_from(args)
    result = asymptotics.harmonic_sum_result(args.n, args.m, args.p_max)
    row = {
        "n": result.n,
        "m": result.m,
        "direct": result.direct,
        "residue": result.residue,
        "rel_diff": abs(result.direct - result.residue) / result.direct,
        "k_lo": result.k_lo,
        "k_hi": result.k_hi,
        "p_max": result.p_max,
    }
    emit(
        [row],
        ["n", "m", "direct", "residue", "rel_diff", "k_lo", "k_hi", "p_max"],
        config,
    )
    return EXIT_OK


def _add_output_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--out", default=None, help="write output to this file")
    parser.add_argument(
        "--precision", type=int, default=DEFAULT_PRECISION, help="significant digits for floats"
    )


def _add_sampling_options(parser: argparse.ArgumentParser, trials_default: int) -> None:
    parser.add_argument("--trials", type=parse_count, default=trials_default)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="compana",
        description="Multiplicity statistics of uniform random integer compositions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", help="exact event probabilities by enumeration")
    p.add_argument("--n", type=parse_count, required=True)
    p.add_argument("--m", type=parse_count, default=None)
    _add_output_options(p)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("prob", help="occurrence probability of one (n, k, m)")
    p.add_argument("--n", type=parse_count, required=True)
    p.add_argument("--k", type=parse_count, required=True)
    p.add_argument("--m", type=parse_count, required=True)
    p.add_argument("--route", choices=("series", "singularity", "both"), default="series")
    _add_output_options(p)
    p.set_defaults(func=cmd_prob)

    p = sub.add_parser("predict", help="limit-law prediction for the event probability")
    p.add_argument("--n", type=parse_count, required=True)
    p.add_argument("--m", type=parse_count, required=True)
    _add_output_options(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("sample", help="Monte Carlo estimate of the event probability")
    p.add_argument("--n", type=parse_count, required=True)
    p.add_argument("--m", type=parse_count, required=True)
    _add_sampling_options(p, trials_default=100_000)
    _add_output_options(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("distinct", help="distribution of the distinct part-size count")
    p.add_argument("--n", type=parse_count, required=True)
    p.add_argument("--hist-out", default=None, help="also write the histogram CSV here")
    _add_sampling_options(p, trials_default=100_000)
    _add_output_options(p)
    p.set_defaults(func=cmd_distinct)

    p = sub.add_parser("compare", help="cross-route comparison table")
    p.add_argument("--n", type=parse_count_list, required=True, help="comma list; A..B doubles")
    p.add_argument("--m", type=parse_count, required=True)
    _add_sampling_options(p, trials_default=0)
    _add_output_options(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("rho", help="dominant denominator root for one k")
    p.add_argument("--k", type=parse_count, required=True)
    _add_output_options(p)
    p.set_defaults(func=cmd_rho)

    p = sub.add_parser("mellin", help="harmonic sum, direct vs. residue series")
    p.add_argument("--n", type=parse_count, required=True)
    p.add_argument("--m", type=parse_count, required=True)
    p.add_argument("--p-max", type=parse_count, default=asymptotics.DEFAULT_HARMONICS)
    _add_output_options(p)
    p.set_defaults(func=cmd_mellin)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EnumerationCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalInstabilityError as exc:
        print(f"numerical instability: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())
