"""Command-line front end.

    stlandscape generate {sine,sine-jump,selkov} --out series.csv
    stlandscape landscape series.csv --out land.json
    stlandscape distance a.json b.json --p inf
    stlandscape mean a.json b.json ... --out mean.json
    stlandscape plot land.json --k 1 --out land.svg

Exit codes: 0 success, 2 usage error, 3 data or shape error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import pipeline
from .landscape import distance_p, mean, read_landscape
from .plotting import write_layer
from .signals import read_csv, write_csv

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_IO = 0, 2, 3, 4

log = logging.getLogger("stlandscape")


class UsageError(Exception):
    pass


def _float(s: str) -> float:
    if s.strip().lower() in ("inf", "+inf", "infinity"):
        return math.inf
    return float(s)


def read_config(path) -> dict:
    """``key = value`` lines; ``#`` starts a comment; keys may use dashes."""
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{n}: expected key = value")
        key = key.strip().replace("-", "_")
        if key not in pipeline.PipelineConfig.field_names():
            raise UsageError(f"{path}:{n}: unknown key {key!r}")
        out[key] = value.strip().strip('"').strip("'")
    return out


def build_config(args) -> pipeline.PipelineConfig:
    values: dict = {}
    if args.config:
        values.update(read_config(args.config))
    for name in pipeline.PipelineConfig.field_names():
        v = getattr(args, name, None)
        if v is not None:
            values[name] = v
    for name in ("windows", "points_per_window", "embed_dim", "delay", "hom_dim", "k_max", "seed", "threads"):
        if name in values:
            try:
                values[name] = int(values[name])
            except (TypeError, ValueError):
                raise UsageError(f"{name} must be an integer, got {values[name]!r}") from None
    try:
        return pipeline.PipelineConfig(**values)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- subcommands -------------------------------------------------------------

def cmd_generate(args) -> int:
    if args.kind == "selkov":
        n = int(round((args.b_stop - args.b_start) / args.b_step)) + 1
        if n < 1:
            raise UsageError("empty b range")
        bs = tuple(round(args.b_start + i * args.b_step, 10) for i in range(n))
        ts = pipeline.selkov_series(
            args.snr, args.seed, bs=bs, a=args.a, t_end=args.t_end, dt=args.dt, stride=args.stride
        )
        log.info("selkov: %d segments of %d samples", n, len(ts) // n)
    else:
        kw = dict(t0=args.t0, t1=args.t1, rate=args.rate, freq=args.freq)
        if args.kind == "sine":
            kw["offset"] = args.offset
        else:
            kw.update(offset_before=args.offset_before, offset_after=args.offset_after)
        ts = pipeline.sine_series(args.kind == "sine-jump", args.snr, args.seed, **kw)
    write_csv(ts, args.out, time_column=args.time_column)
    print(f"wrote {len(ts)} samples x {ts.channels} channel(s) to {args.out}")
    return EXIT_OK


def cmd_landscape(args) -> int:
    cfg = build_config(args)
    ts = read_csv(args.input, time_column=args.time_column)
    if args.channels is not None and ts.channels != args.channels:
        raise ValueError(f"{args.input}: expected {args.channels} channel(s), found {ts.channels}")
    land, grid = pipeline.run(ts, cfg)
    land.write(args.out)
    # delimited summary, one line per layer
    print("k,max,argmax_col,argmax_row,nonzero_cells")
    for k in range(1, land.k_max + 1):
        z = land.layer(k)
        r, c = np.unravel_index(int(np.argmax(z)), z.shape)
        print(f"{k},{int(z.max())},{c},{r},{int(np.count_nonzero(z))}")
    return EXIT_OK


def cmd_distance(args) -> int:
    a, b = read_landscape(args.a), read_landscape(args.b)
    print(f"{distance_p(a, b, args.p):.6f}")
    return EXIT_OK


def cmd_mean(args) -> int:
    m = mean([read_landscape(p) for p in args.inputs])
    m.write(args.out)
    print(f"averaged {len(args.inputs)} landscape(s) into {args.out}")
    return EXIT_OK


def cmd_plot(args) -> int:
    land = read_landscape(args.input)
    if not 1 <= args.k <= land.k_max:
        raise UsageError(f"--k must lie in 1..{land.k_max}")
    fmt = write_layer(land, args.k, args.out, args.format)
    print(f"wrote {fmt} heatmap of lambda_{args.k} to {args.out}")
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stlandscape", description="Spatiotemporal persistence landscapes of time series.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a synthetic time series as CSV")
    g.add_argument("kind", choices=["sine", "sine-jump", "selkov"])
    g.add_argument("--out", required=True)
    g.add_argument("--snr", type=_float, default=math.inf, help="dB; inf means no noise")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--time-column", action="store_true")
    g.add_argument("--t0", type=float, default=pipeline.SINE_SPAN[0])
    g.add_argument("--t1", type=float, default=pipeline.SINE_SPAN[1])
    g.add_argument("--rate", type=float, default=pipeline.SINE_RATE)
    g.add_argument("--freq", type=float, default=pipeline.SINE_FREQ)
    g.add_argument("--offset", type=float, default=0.0)
    g.add_argument("--offset-before", type=float, default=pipeline.JUMP_OFFSETS[0])
    g.add_argument("--offset-after", type=float, default=pipeline.JUMP_OFFSETS[1])
    g.add_argument("--a", type=float, default=pipeline.SELKOV_A)
    g.add_argument("--b-start", type=float, default=pipeline.SELKOV_BS[0])
    g.add_argument("--b-stop", type=float, default=pipeline.SELKOV_BS[-1])
    g.add_argument("--b-step", type=float, default=0.05)
    g.add_argument("--t-end", type=float, default=pipeline.SELKOV_T_END)
    g.add_argument("--dt", type=float, default=pipeline.SELKOV_DT)
    g.add_argument("--stride", type=int, default=pipeline.SELKOV_STRIDE)
    g.set_defaults(func=cmd_generate)

    l = sub.add_parser("landscape", help="compute a landscape from a CSV series")
    l.add_argument("input")
    l.add_argument("--out", required=True)
    l.add_argument("--config", help="key = value file; flags win")
    l.add_argument("--windows", type=int)
    l.add_argument("--points-per-window", type=int)
    l.add_argument("--embed-dim", type=int)
    l.add_argument("--delay", type=int)
    l.add_argument("--epsilons", help="comma list or auto:N")
    l.add_argument("--hom-dim", type=int)
    l.add_argument("--k-max", type=int)
    l.add_argument("--seed", type=int)
    l.add_argument("--threads", type=int)
    l.add_argument("--channels", type=int, help="expected number of CSV columns")
    l.add_argument("--time-column", action="store_true", help="first CSV column is time")
    l.set_defaults(func=cmd_landscape)

    d = sub.add_parser("distance", help="L^p distance between two landscapes")
    d.add_argument("a")
    d.add_argument("b")
    d.add_argument("--p", type=_float, default=2.0)
    d.set_defaults(func=cmd_distance)

    m = sub.add_parser("mean", help="pointwise mean of landscapes")
    m.add_argument("inputs", nargs="+")
    m.add_argument("--out", required=True)
    m.set_defaults(func=cmd_mean)

    pl = sub.add_parser("plot", help="heatmap of one landscape layer")
    pl.add_argument("input")
    pl.add_argument("--k", type=int, default=1)
    pl.add_argument("--out", required=True)
    pl.add_argument("--format", choices=["svg", "pgm", "png", "pdf"], help="default: from the file suffix")
    pl.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"stlandscape: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"stlandscape: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, ArithmeticError) as exc:
        print(f"stlandscape: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
