"""Command-line front end.

Subcommands ``capacity``, ``fidelity``, ``crossover`` and ``verify``. Data
goes to ``--out`` (or stdout) as CSV with a header line, or as JSON with a
metadata block. Exit codes: 0 success, 1 invalid input, 2 failed
verification.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from memdeph import __version__, analysis, engine
from memdeph.errormodel import ChannelParams, ParameterError

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_VERIFY_FAILED = 2

METHODS = ("closed", "exact", "mc")
FIGURE1_EPS = 1e-3
FIGURE1_POINTS = 201


class UsageError(Exception):
    pass


@dataclass
class SweepSpec:
    param: str
    start: float
    stop: float
    points: int
    fixed: float
    codes: list = field(default_factory=lambda: list(analysis.CODE_NAMES))
    methods: list = field(default_factory=lambda: ["closed"])
    n_samples: int = 10_000
    seed: int | None = None
    fmt: str = "csv"
    out: str | None = None

    def __post_init__(self):
        if self.param not in ("mu", "p0"):
            raise UsageError(f"can only sweep mu or p0, not {self.param!r}")
        if self.points < 2:
            raise UsageError("a sweep needs at least 2 points")
        if not 0.0 <= self.start < self.stop <= 1.0:
            raise UsageError(f"sweep range must satisfy 0 <= start < stop <= 1, got {self.start}:{self.stop}")
        if not 0.0 <= self.fixed <= 1.0:
            raise UsageError(f"fixed parameter must lie in [0, 1], got {self.fixed}")

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)

    def params_at(self, value: float) -> ChannelParams:
        if self.param == "mu":
            return ChannelParams(self.fixed, value)
        return ChannelParams(value, self.fixed)

    @property
    def fixed_name(self) -> str:
        return "p0" if self.param == "mu" else "mu"


def fmt_number(x) -> str:
    return format(float(x), ".17g")


def _parse_sweep(text: str):
    parts = text.split(":")
    if len(parts) != 4:
        raise UsageError(f"--sweep expects param:start:stop:points, got {text!r}")
    try:
        return parts[0], float(parts[1]), float(parts[2]), int(parts[3])
    except ValueError:
        raise UsageError(f"could not parse --sweep {text!r}") from None


def _parse_list(text: str, allowed, what: str) -> list:
    items = [t.strip() for t in text.split(",") if t.strip()]
    if not items:
        raise UsageError(f"no {what} given")
    for item in items:
        if item not in allowed:
            raise UsageError(f"unknown {what} {item!r}; choose from {', '.join(allowed)}")
    return items


def _sweep_from_args(args) -> SweepSpec:
    param, start, stop, points = _parse_sweep(args.sweep)
    fixed_name = "p0" if param == "mu" else "mu"
    fixed = getattr(args, fixed_name)
    if fixed is None:
        raise UsageError(f"sweeping {param} requires --{fixed_name}")
    kwargs = dict(param=param, start=start, stop=stop, points=points, fixed=fixed, fmt=args.format, out=args.out)
    if hasattr(args, "codes"):
        kwargs.update(
            codes=_parse_list(args.codes, analysis.CODE_NAMES, "code"),
            methods=_parse_list(args.method, METHODS, "method"),
            n_samples=args.samples,
            seed=args.seed,
        )
    return SweepSpec(**kwargs)


def _emit(header, rows, spec: SweepSpec, metadata: dict) -> None:
    if spec.fmt == "csv":
        lines = [",".join(header)]
        lines += [",".join(fmt_number(v) for v in row) for row in rows]
        text = "\n".join(lines) + "\n"
    else:
        payload = {
            "metadata": metadata,
            "columns": list(header),
            "rows": [dict(zip(header, (float(v) for v in row))) for row in rows],
        }
        text = json.dumps(payload, indent=2) + "\n"
    if spec.out:
        with open(spec.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _metadata(command: str, spec: SweepSpec, **extra) -> dict:
    meta = {
        "tool": "memdeph",
        "version": __version__,
        "command": command,
        "sweep": {"param": spec.param, "start": spec.start, "stop": spec.stop, "points": spec.points},
        spec.fixed_name: spec.fixed,
    }
    meta.update(extra)
    return meta


def capacity_table(spec: SweepSpec):
    header = [spec.param, "Q"]
    rows = [(v, analysis.capacity(spec.params_at(v)).Q) for v in spec.values]
    return header, rows


def fidelity_table(spec: SweepSpec):
    """Header and rows of error probabilities, one column per (code, method)."""
    if "mc" in spec.methods and spec.seed is None:
        raise UsageError("method mc needs --seed for reproducible output")
    if "mc" in spec.methods and spec.n_samples < engine.MIN_SAMPLES:
        raise UsageError(f"--samples must be at least {engine.MIN_SAMPLES}")
    header = [spec.param]
    for code in spec.codes:
        for method in spec.methods:
            header.append(f"Pe_{code}_{method}")
            if method == "mc":
                header.append(f"stderr_{code}_mc")
    rows = []
    for v in spec.values:
        params = spec.params_at(v)
        row = [v]
        for code in spec.codes:
            for method in spec.methods:
                if method == "closed":
                    row.append(analysis.fe_closed(code, params).Pe)
                elif method == "exact":
                    row.append(1.0 - engine.fe_exact(code, params))
                else:
                    est, err = engine.fe_monte_carlo(code, params, spec.n_samples, spec.seed)
                    row += [1.0 - est, err]
        rows.append(row)
    return header, rows


def figure1_spec(args) -> SweepSpec:
    return SweepSpec(
        param="mu",
        start=0.0,
        stop=1.0,
        points=FIGURE1_POINTS,
        fixed=1.0 - FIGURE1_EPS,
        codes=list(analysis.CODE_NAMES),
        methods=["closed"],
        fmt=args.format,
        out=args.out,
    )


def cmd_capacity(args) -> int:
    spec = _sweep_from_args(args)
    header, rows = capacity_table(spec)
    _emit(header, rows, spec, _metadata("capacity", spec))
    return EXIT_OK


def cmd_fidelity(args) -> int:
    spec = figure1_spec(args) if args.figure1 else _sweep_from_args(args)
    header, rows = fidelity_table(spec)
    meta = _metadata(
        "fidelity",
        spec,
        codes=spec.codes,
        methods=spec.methods,
        seed=spec.seed,
        n_samples=spec.n_samples if "mc" in spec.methods else None,
    )
    _emit(header, rows, spec, meta)
    return EXIT_OK


def cmd_crossover(args) -> int:
    p0 = 1.0 - FIGURE1_EPS if args.p0 is None else args.p0
    if not 0.0 < p0 <= 1.0:
        raise UsageError("--p0 must lie in (0, 1]")
    result = {
        "p0": p0,
        "small_eps_crossover": analysis.c2_beats_c1_crossover(),
        "c2_beats_uncoded_threshold": analysis.c2_beats_uncoded_threshold(p0),
    }
    try:
        result["exact_crossover"] = analysis.exact_crossover(p0)
    except ValueError:
        result["exact_crossover"] = None
    if args.format == "json":
        sys.stdout.write(json.dumps(result, indent=2) + "\n")
    else:
        for key, value in result.items():
            sys.stdout.write(f"{key},{'' if value is None else fmt_number(value)}\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    from memdeph import verify

    results = verify.run_all()
    for r in results:
        print(r.line())
    ok = verify.all_passed(results)
    print("all checks passed" if ok else "VERIFICATION FAILED")
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def _add_output(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="memdeph", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("capacity", help="quantum capacity along a parameter sweep")
    p.add_argument("--p0", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--sweep", default="mu:0:1:101", help="param:start:stop:points")
    _add_output(p)
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("fidelity", help="error probability Pe = 1 - Fe along a sweep")
    p.add_argument("--p0", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--sweep", default="mu:0:1:101", help="param:start:stop:points")
    p.add_argument("--codes", default=",".join(analysis.CODE_NAMES))
    p.add_argument("--method", default="closed", help="comma list of closed, exact, mc")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--figure1", action="store_true", help="p0 = 1 - 1e-3, 201 mu points, all codes, closed form")
    _add_output(p)
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("crossover", help="c1/c2 crossover and c2 threshold")
    p.add_argument("--p0", type=float)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_crossover)

    p = sub.add_parser("verify", help="run the built-in consistency checks")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors; 2 is reserved for failed verification here
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    try:
        return args.func(args)
    except (UsageError, ParameterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
