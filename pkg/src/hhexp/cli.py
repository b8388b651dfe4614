"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 domain error (degenerate input),
3 infeasible design.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, efficiency, theory
from .errors import DesignError, DomainError
from .estimators import EstimatorKind, estimate_record
from .montecarlo import DEFAULT_KINDS, SimConfig, enumerate_exact, run_simulation
from .population import (
    LITERATURE_SAMPLE_SIZE,
    compute_params,
    literature_params,
    read_params_json,
    read_population_csv,
)
from .sampling import DesignConfig, SampleData, draw_sample

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_DESIGN = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def jsonable(obj):
    """Recursively convert reports to JSON-native values; NaN becomes null."""
    if isinstance(obj, dict):
        return {(k.value if isinstance(k, EstimatorKind) else str(k)): jsonable(v)
                for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, EstimatorKind):
        return obj.value
    if isinstance(obj, Path):
        return str(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        obj = float(obj)
        return None if not math.isfinite(obj) else obj
    return obj


def manifest(command: str, args: argparse.Namespace) -> dict:
    # worker count is an execution detail: results never depend on it
    echo = {k: v for k, v in sorted(vars(args).items())
            if k not in ("func", "out", "command", "workers")}
    return {
        "command": command,
        "parameters": jsonable(echo),
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }


def _kinds(text: str | None, default):
    if not text:
        return tuple(default)
    try:
        return tuple(EstimatorKind(k.strip().upper()) for k in text.split(",") if k.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _floats(text: str):
    return [float(v) for v in text.split(",") if v.strip()]


def _params(args):
    if getattr(args, "params", None):
        return read_params_json(args.params)
    if getattr(args, "population", None):
        return compute_params(read_population_csv(args.population))
    return literature_params()


def cmd_params(args):
    return compute_params(read_population_csv(args.csv)).to_dict()


def cmd_estimate(args):
    kinds = _kinds(args.kinds, ())
    if args.sample:
        s = SampleData.from_dict(json.loads(Path(args.sample).read_text(encoding="utf-8")))
        if args.xbar is None:
            raise DomainError("--xbar is required with --sample")
        Xbar = args.xbar
    else:
        if not args.population or args.n is None:
            raise DomainError("either --sample or --population with --n is required")
        pop = read_population_csv(args.population)
        Xbar = pop.mean_x if args.xbar is None else args.xbar
        s = draw_sample(pop, DesignConfig(args.n, args.f, args.seed))
    if args.regime:
        s = s.project(args.regime)
    if not kinds:
        kinds = tuple(k for k in DEFAULT_KINDS if k.regime in (None, s.regime))
    return [estimate_record(k, s, Xbar) for k in kinds]


def cmd_theory(args):
    p = _params(args)
    kinds = _kinds(args.kinds, efficiency.TABLE_KINDS)
    return [theory.theory_report(p, args.n, args.f, args.w, k).to_dict() for k in kinds]


def cmd_efficiency(args):
    p = _params(args)
    return [c.to_dict() for c in efficiency.conditions(p, args.n, args.f, args.w)]


def cmd_pre_table(args):
    p = _params(args)
    return efficiency.pre_table(p, args.n, _floats(args.w), _floats(args.f))


def cmd_simulate(args):
    pop = read_population_csv(args.population)
    cfg = SimConfig(
        replications=args.replications,
        design=DesignConfig(args.n, args.f),
        estimators=_kinds(args.kinds, DEFAULT_KINDS),
        regime=args.regime,
        master_seed=args.seed,
    )
    return run_simulation(pop, cfg, workers=args.workers).to_dict()


def cmd_exact(args):
    pop = read_population_csv(args.population)
    return enumerate_exact(pop, args.n, args.f, _kinds(args.kinds, DEFAULT_KINDS)).to_dict()


def cmd_replicate(args):
    return efficiency.replication_report()


def _emit(result, args, command):
    fmt = args.format
    man = manifest(command, args)
    if isinstance(result, efficiency.PreTable):
        if fmt == "csv":
            head = "".join(f"# {k}: {json.dumps(v)}\n" for k, v in man.items())
            return head + result.to_csv()
        if fmt == "text":
            return result.to_text()
        result = {"n": result.n, "grid": result.records()}
    elif fmt == "text" and isinstance(result, dict) and "text_table" in result:
        return result["text_table"]
    elif fmt != "json":
        raise argparse.ArgumentTypeError(f"--format {fmt} is not available for '{command}'")
    return json.dumps({"manifest": man, "result": jsonable(result)}, indent=2) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hhexp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", type=Path)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help):
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(func=func)
        return p

    def param_source(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--params", type=Path, help="params JSON")
        g.add_argument("--population", type=Path, help="population CSV")
        p.add_argument("--n", type=int, default=LITERATURE_SAMPLE_SIZE)

    p = add("params", cmd_params, "population parameters of a CSV")
    p.add_argument("csv", type=Path)

    p = add("estimate", cmd_estimate, "draw a sample and evaluate estimators")
    p.add_argument("--population", type=Path)
    p.add_argument("--sample", type=Path, help="sample JSON instead of drawing one")
    p.add_argument("--n", type=int)
    p.add_argument("--f", type=float, default=1.0)
    p.add_argument("--xbar", type=float, help="known population mean of x")
    p.add_argument("--regime", choices=("A", "B"))
    p.add_argument("--kinds")

    p = add("theory", cmd_theory, "closed-form bias and MSE")
    param_source(p)
    p.add_argument("--f", type=float, default=1.0)
    p.add_argument("--w", type=float)
    p.add_argument("--kinds")

    p = add("efficiency", cmd_efficiency, "efficiency conditions against HH")
    param_source(p)
    p.add_argument("--f", type=float, default=1.0)
    p.add_argument("--w", type=float)

    p = add("pre-table", cmd_pre_table, "PRE grid over w and f")
    param_source(p)
    p.add_argument("--w", default=",".join(map(str, efficiency.PUBLISHED_W)))
    p.add_argument("--f", default=",".join(map(str, efficiency.PUBLISHED_F)))

    p = add("simulate", cmd_simulate, "Monte Carlo check of the theory")
    p.add_argument("--population", type=Path, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--f", type=float, default=1.0)
    p.add_argument("-R", "--replications", type=int, default=10_000)
    p.add_argument("--regime", choices=("auto", "A", "B"), default="auto")
    p.add_argument("--kinds")
    p.add_argument("--workers", type=int, default=1)

    p = add("exact", cmd_exact, "exact design moments by enumeration")
    p.add_argument("--population", type=Path, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--f", type=float, default=1.0)
    p.add_argument("--kinds")

    add("replicate", cmd_replicate, "recompute the published PRE table")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = _emit(args.func(args), args, args.command)
    except argparse.ArgumentTypeError as exc:
        print(f"hhexp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DesignError as exc:
        print(f"hhexp: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DESIGN
    except DomainError as exc:
        print(f"hhexp: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (OSError, ValueError) as exc:
        print(f"hhexp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
