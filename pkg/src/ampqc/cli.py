"""Command-line front end.

Exit codes: 0 success, 1 configuration error, 2 protocol aborted
(eavesdropper detected or singlet test failed), 3 swap-check mismatch.
The default seed is read from ``AMPQC_SEED`` when ``--seed`` is absent.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from ampqc import analysis, apps
from ampqc.channel import EveModel
from ampqc.errors import AmpqcError, CapabilityError, ProtocolAborted
from ampqc.functions import SymmetricFunction
from ampqc.protocol_one import ProtocolOneConfig, run_protocol_one
from ampqc.protocol_two import ProtocolTwoConfig, run_protocol_two
from ampqc.swap import run_swap_check

EXIT_OK, EXIT_CONFIG, EXIT_ABORT, EXIT_MISMATCH = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


class ConfigError(Exception):
    pass


def parse_data_file(path: str | Path) -> list[list[int]]:
    """One participant per line, space-separated non-negative integers.

    An empty line is a participant with no data; lines starting with ``#``
    are comments.
    """
    rows = []
    for line in Path(path).read_text().splitlines():
        if line.lstrip().startswith("#"):
            continue
        try:
            row = [int(tok) for tok in line.split()]
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from None
        if any(x < 0 for x in row):
            raise ConfigError(f"{path}: values must be non-negative")
        rows.append(row)
    return rows


def parse_values(text: str) -> list[list[int]]:
    """``"2,0,5"`` or ``"1,1,3;3"`` (participants separated by ``;``)."""
    try:
        if ";" in text:
            return [[int(t) for t in part.split(",") if t.strip()] for part in text.split(";")]
        return [[int(t)] for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse values {text!r}: {exc}") from None


def _default_seed() -> int:
    env = os.environ.get("AMPQC_SEED")
    return int(env) if env else 0


def _d_arg(text: str):
    if text == "auto":
        return None
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("d must be an integer or 'auto'") from None


def _add_protocol_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, help="number of participants (inferred from data when given)")
    p.add_argument("--xi", type=int, help="largest data value for protocol one")
    p.add_argument("--d", type=_d_arg, default=None, help="qudit dimension or 'auto' (default)")
    p.add_argument("--strict-d", action="store_true", help="protocol one: require d > sum of list lengths")
    p.add_argument("--tau", type=int, default=2, help="singlet tests per participant (protocol two)")
    p.add_argument("--decoys", type=int, help="decoys per channel (default: payload length)")
    p.add_argument("--threshold", type=int, default=0, help="abort when mismatches exceed this")
    p.add_argument("--eve", default="none", help="none | intercept | fixed-computational | fixed-fourier")
    p.add_argument("--engine", default="auto", choices=["auto", "label", "dense"])
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--f", default="sum", help="sum | max | min | sorted | histogram | mean")


def _load_inputs(args) -> list[list[int]] | None:
    if getattr(args, "data", None) and getattr(args, "values", None):
        raise ConfigError("give either --data or --values, not both")
    if getattr(args, "data", None):
        return parse_data_file(args.data)
    if getattr(args, "values", None):
        return parse_values(args.values)
    return None


def _build(args, rows, rng):
    """Protocol config and inputs; random demo inputs when none are given."""
    if args.protocol == "one":
        if rows is None:
            n = args.n or 2
            xi = 3 if args.xi is None else args.xi
            rows = [list(map(int, rng.integers(0, xi + 1, size=int(rng.integers(0, 4))))) for _ in range(n)]
        xi = args.xi if args.xi is not None else max((max(r) for r in rows if r), default=0)
        n = len(rows)
        if args.n is not None and args.n != n:
            raise ConfigError(f"--n {args.n} but {n} participants supplied")
        cfg = ProtocolOneConfig(n, xi, args.d, args.strict_d, args.decoys, args.threshold, args.engine, args.seed)
        return cfg, rows
    if rows is None:
        n = args.n or 3
        values = [int(x) for x in rng.integers(0, 8, size=n)]
    else:
        if any(len(r) != 1 for r in rows):
            raise ConfigError("protocol two takes exactly one value per participant")
        values = [r[0] for r in rows]
    if args.n is not None and args.n != len(values):
        raise ConfigError(f"--n {args.n} but {len(values)} values supplied")
    cfg = ProtocolTwoConfig(len(values), args.d, args.tau, args.decoys, args.threshold, args.engine, args.seed)
    return cfg, values


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_run(args) -> int:
    args.seed = _default_seed() if args.seed is None else args.seed
    rng = np.random.default_rng(args.seed)
    eve = EveModel.parse(args.eve)
    f = SymmetricFunction.parse(args.f)
    cfg, inputs = _build(args, _load_inputs(args), rng)
    if args.protocol == "one":
        res = run_protocol_one(cfg, inputs, f, eve, rng)
    else:
        res = run_protocol_two(cfg, inputs, f, eve, rng)
    _emit(res.transcript.to_json(), args.output)
    if res.aborted:
        print(f"aborted: {res.transcript.abort_reason}", file=sys.stderr)
        return EXIT_ABORT
    if args.output:
        print(f"f={json.dumps(res.value)}", file=sys.stderr)
    return EXIT_OK


def cmd_swapcheck(args) -> int:
    seed = _default_seed() if args.seed is None else args.seed
    report = run_swap_check(
        args.d, args.m, exhaustive=args.exhaustive, samples=args.samples, rng=np.random.default_rng(seed)
    )
    _emit(json.dumps(report, indent=2) + "\n", args.output)
    print(f"{report['cases'] - report['failures']}/{report['cases']} cases agree", file=sys.stderr)
    return EXIT_MISMATCH if report["failures"] else EXIT_OK


def cmd_experiment(args) -> int:
    seed = _default_seed() if args.seed is None else args.seed
    if args.protocol == "detection":
        dims = [int(x) for x in args.dims.split(",")]
        report = analysis.detection_experiment(dims, args.decoys or 5000, seed, EveModel.parse(
            "intercept" if args.eve == "none" else args.eve))
    else:
        if args.trials <= 0:
            raise ConfigError("--trials must be positive")
        args.seed = seed
        rows = _load_inputs(args)
        cfg, inputs = _build(args, rows, np.random.default_rng(seed)) if rows is not None else (None, None)
        if cfg is None:
            if args.protocol == "one":
                cfg = ProtocolOneConfig(args.n or 2, 3 if args.xi is None else args.xi, args.d, args.strict_d,
                                        args.decoys, args.threshold, args.engine, seed)
            else:
                cfg = ProtocolTwoConfig(args.n or 3, args.d, args.tau, args.decoys, args.threshold, args.engine, seed)
        report = analysis.run_experiment(
            args.protocol, cfg, args.trials, seed, inputs=inputs,
            eve=EveModel.parse(args.eve), f=SymmetricFunction.parse(args.f),
        )
    _emit(json.dumps(report.to_dict(), indent=2) + "\n", args.output)
    return EXIT_OK


def _app_config(args) -> apps.AppConfig:
    seed = _default_seed() if args.seed is None else args.seed
    return apps.AppConfig(args.d, args.tau, args.decoys, args.threshold, EveModel.parse(args.eve), seed)


def _app_inputs(args):
    rows = _load_inputs(args)
    if rows is None:
        raise ConfigError("give --data or --values")
    if all(len(r) == 1 for r in rows) and not getattr(args, "lists", False):
        return [r[0] for r in rows]
    return rows


def cmd_vote(args) -> int:
    rows = _load_inputs(args)
    if rows is None:
        raise ConfigError("give --data or --values")
    ballots = [r[0] for r in rows] if args.mode == "one-vote" else rows
    if args.mode == "one-vote" and any(len(r) != 1 for r in rows):
        raise ConfigError("one-vote mode takes exactly one candidate per voter")
    tally = apps.anonymous_vote(ballots, args.m, args.mode, _app_config(args))
    _emit(json.dumps({"tally": list(tally)}) + "\n", args.output)
    return EXIT_OK


def cmd_rank(args) -> int:
    res = apps.anonymous_rank(_app_inputs(args), _app_config(args))
    out = {"ranking": list(res.values), "multiplicities": [list(p) for p in res.multiplicities]}
    _emit(json.dumps(out) + "\n", args.output)
    return EXIT_OK


def cmd_survey(args) -> int:
    total = apps.anonymous_survey(_app_inputs(args), _app_config(args))
    _emit(json.dumps({"sum": total}) + "\n", args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ampqc", description="Anonymous multi-party quantum computation simulator")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="run one protocol instance and write its transcript")
    p.add_argument("--protocol", required=True, choices=["one", "two"])
    p.add_argument("--values", help="'2,0,5' or '1,1,3;3' for per-participant lists")
    p.add_argument("--data", help="data file: one participant per line")
    p.add_argument("--output", help="transcript path (default: stdout)")
    _add_protocol_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("swapcheck", help="compare label engine with dense oracle")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True, help="number of cat-state particles")
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output")
    p.set_defaults(func=cmd_swapcheck)

    p = sub.add_parser("experiment", help="Monte Carlo sweep")
    p.add_argument("--protocol", required=True, choices=["one", "two", "detection"])
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--dims", default="2,3,5", help="detection sweep dimensions")
    p.add_argument("--values")
    p.add_argument("--data")
    p.add_argument("--output")
    _add_protocol_flags(p)
    p.set_defaults(func=cmd_experiment)

    for name, func in (("vote", cmd_vote), ("rank", cmd_rank), ("survey", cmd_survey)):
        p = sub.add_parser(name, help=f"anonymous {name}")
        p.add_argument("--values")
        p.add_argument("--data")
        p.add_argument("--output")
        p.add_argument("--d", type=_d_arg, default=None)
        p.add_argument("--tau", type=int, default=2)
        p.add_argument("--decoys", type=int)
        p.add_argument("--threshold", type=int, default=0)
        p.add_argument("--eve", default="none")
        p.add_argument("--seed", type=int, default=None)
        if name == "vote":
            p.add_argument("--m", type=int, required=True, help="number of candidates")
            p.add_argument("--mode", default="one-vote", choices=["one-vote", "multi-vote"])
        else:
            p.add_argument("--lists", action="store_true", help="treat every line as a list (protocol one)")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    try:
        return args.func(args)
    except ProtocolAborted as exc:
        print(f"aborted: {exc}", file=sys.stderr)
        return EXIT_ABORT
    except (ConfigError, CapabilityError, AmpqcError, OSError) as exc:
        print(f"ampqc: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
