from __future__ import annotations

import argparse
import asyncio
import json
import logging
import sys
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from functools import partial
from pathlib import Path
from typing import Any, TypeVar

import trafaret as t
from neuro_logging import init_logging, trace

from . import airy_fn, evolution, transforms, verify
from .config import (
    Config,
    EnvironConfigFactory,
    OutputFormat,
    OutputSpec,
    QuadratureConfig,
)
from .errors import AirykitError, DomainError, NonConvergence
from .hermite_poly import PolyIndex, hermite_eval
from .integrand import (
    Integrand,
    SampledIntegrand,
    exponential,
    gaussian,
    monomial,
    polynomial,
)
from .quadrature import FunctionValue

logger = logging.getLogger(__name__)

T = TypeVar("T")

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_NONCONVERGENCE = 3

FIGURE_START = -10.0
FIGURE_STOP = 4.0
FIGURE_STEP = 0.05
# Ai7 is real; a larger imaginary part signals a quadrature problem.
FIGURE_IMAG_LIMIT = 1e-8


class Command(str, Enum):
    EVAL = "eval"
    TABLE = "table"
    TRANSFORM = "transform"
    EVOLVE = "evolve"
    EXPAND = "expand"
    VERIFY = "verify"
    FIGURE = "figure"


class UsageError(DomainError):
    pass


FUNCTION_PARAMS = {
    "airy": t.Dict({t.Key("t", optional=True): t.ToFloat()}),
    "airy2": t.Dict({t.Key("x", optional=True): t.ToFloat(), "y": t.ToFloat(gt=0)}),
    "generalized": t.Dict(
        {"q": t.ToInt(gte=3), t.Key("x", optional=True): t.ToFloat()}
    ),
    "generalized2": t.Dict(
        {
            "q": t.ToInt(gte=3),
            t.Key("x", optional=True): t.ToFloat(),
            "y": t.ToFloat(gt=0),
        }
    ),
    "watson": t.Dict({t.Key("x", optional=True): t.ToFloat()}),
    "hermite": t.Dict(
        {
            "m": t.ToInt(gte=2),
            "n": t.ToInt(gte=0),
            t.Key("x", optional=True): t.ToFloat(),
            "y": t.ToFloat(),
        }
    ),
}

LATTICE_PARAMS = t.Dict(
    {
        "x_min": t.ToFloat(),
        "x_max": t.ToFloat(),
        t.Key("step", default=0.1): t.ToFloat(gt=0),
    }
)

TRANSFORM_PARAMS = t.Dict(
    {
        "x": t.ToFloat(),
        "y": t.ToFloat(),
        t.Key("p", optional=True): t.ToInt(gte=1),
    }
)

GRID_PARAMS = t.Dict(
    {"x_min": t.ToFloat(), "x_max": t.ToFloat(), "n": t.ToInt(gte=64)}
)

EVOLVE_PARAMS = {
    "propagate": t.Dict({"m": t.ToInt(gte=2), "y": t.ToFloat()}),
    "airy-pde": t.Dict({"y": t.ToFloat(gt=0)}),
    "schrodinger": t.Dict(
        {"tau": t.ToFloat(), "b": t.ToFloat(), t.Key("p", default=1): t.ToInt(gte=1)}
    ),
    "watson-j": GRID_PARAMS,
}


def parse_pairs(pairs: Sequence[str]) -> dict[str, str]:
    out: dict[str, str] = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key:
            raise UsageError(f"expected key=value, got {pair!r}")
        if key in out:
            raise UsageError(f"parameter {key!r} given twice")
        out[key] = value
    return out


def check_params(validator: t.Trafaret, pairs: Sequence[str]) -> dict[str, Any]:
    try:
        return validator.check(parse_pairs(pairs))
    except t.DataError as exc:
        problems = exc.as_dict()
        if isinstance(problems, dict):
            message = "; ".join(f"{k}: {v}" for k, v in problems.items())
        else:
            message = str(problems)
        raise UsageError(f"invalid parameters: {message}") from exc


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", type=Path, help="output file (default stdout)")
    parser.add_argument("--format", choices=[f.value for f in OutputFormat])
    parser.add_argument("--precision", type=int)
    parser.add_argument("--config", type=Path, help="key=value defaults file")


def _add_choice_flags(
    group: argparse._MutuallyExclusiveGroup, dest: str, choices: Iterable[str]
) -> None:
    for name in choices:
        group.add_argument(f"--{name}", dest=dest, action="store_const", const=name)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="airykit",
        description="Airy-type functions, higher-order Hermite polynomials "
        "and the transforms and evolutions built on them.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p_eval = commands.add_parser(Command.EVAL.value, help="evaluate one function")
    _add_choice_flags(
        p_eval.add_mutually_exclusive_group(required=True), "function", FUNCTION_PARAMS
    )
    p_eval.add_argument(
        "--order", type=int, default=0, help="derivative order taken under the integral"
    )
    p_eval.add_argument("params", nargs="*", metavar="key=value")

    p_table = commands.add_parser(Command.TABLE.value, help="tabulate on a lattice")
    _add_choice_flags(
        p_table.add_mutually_exclusive_group(required=True), "function", FUNCTION_PARAMS
    )
    p_table.add_argument("params", nargs="*", metavar="key=value")

    p_transform = commands.add_parser(
        Command.TRANSFORM.value, help="apply an integral transform"
    )
    _add_choice_flags(
        p_transform.add_mutually_exclusive_group(required=True),
        "kind",
        [kind.value for kind in transforms.TransformKind],
    )
    source = p_transform.add_mutually_exclusive_group(required=True)
    source.add_argument("--poly-degree", type=int)
    source.add_argument(
        "--input", help="gaussian, exp:<rate>, poly:<c0,c1,...> or a grid CSV file"
    )
    p_transform.add_argument("params", nargs="*", metavar="key=value")

    p_evolve = commands.add_parser(
        Command.EVOLVE.value, help="evolve a sampled function"
    )
    _add_choice_flags(
        p_evolve.add_mutually_exclusive_group(required=True), "evolution", EVOLVE_PARAMS
    )
    p_evolve.add_argument("--input", type=Path, help="grid function CSV")
    p_evolve.add_argument("params", nargs="*", metavar="key=value")

    p_expand = commands.add_parser(
        Command.EXPAND.value, help="expansion in H_n^(3)(x, -yabs)"
    )
    p_expand.add_argument(
        "--input", required=True, help="gaussian, exp:<rate> or poly:<c0,c1,...>"
    )
    p_expand.add_argument("--yabs", type=float, required=True)
    p_expand.add_argument("--N", type=int, required=True)

    p_verify = commands.add_parser(Command.VERIFY.value, help="run invariant suites")
    p_verify.add_argument("suite", choices=[s.value for s in verify.Suite])

    p_figure = commands.add_parser(Command.FIGURE.value, help="emit figure data")
    p_figure.add_argument("name", choices=["fig1", "fig2"])

    for sub in (p_eval, p_table, p_transform, p_evolve, p_expand, p_verify, p_figure):
        _add_output_flags(sub)
    return parser


PointFunction = Callable[[float], FunctionValue]


def _function(
    name: str, params: dict[str, Any], order: int, cfg: QuadratureConfig
) -> PointFunction:
    if name == "airy":
        return lambda x: airy_fn.airy(x, cfg, order=order)
    if name == "airy2":
        return lambda x: airy_fn.airy_two_var(x, params["y"], cfg, order=order)
    if name == "generalized":
        return lambda x: airy_fn.airy_generalized(params["q"], x, cfg, order=order)
    if name == "generalized2":
        return lambda x: airy_fn.airy_generalized_two_var(
            params["q"], x, params["y"], cfg, order=order
        )
    if name == "watson":
        if order:
            raise UsageError("--order is not available for the Watson function")
        return lambda x: airy_fn.watson_w(x, cfg)
    index = PolyIndex(params["m"], params["n"])
    return lambda x: FunctionValue(hermite_eval(index, x, params["y"]), 0.0)


def _point(name: str) -> str:
    return "t" if name == "airy" else "x"


class Writer:
    def __init__(self, spec: OutputSpec) -> None:
        self._spec = spec

    def number(self, value: float) -> str:
        return self._spec.format_number(value)

    def json_number(self, value: float) -> float:
        return float(self.number(value))

    def emit(self, text: str) -> None:
        if not text.endswith("\n"):
            text += "\n"
        if self._spec.path is None:
            sys.stdout.write(text)
        else:
            self._spec.path.write_text(text, encoding="utf-8")

    def rows(self, header: Sequence[str], rows: Sequence[Sequence[float]]) -> None:
        if self._spec.format == OutputFormat.JSON:
            payload = [
                {h: self.json_number(v) for h, v in zip(header, row)} for row in rows
            ]
            self.emit(json.dumps(payload))
            return
        lines = [",".join(header)]
        lines.extend(",".join(self.number(v) for v in row) for row in rows)
        self.emit("\n".join(lines))


@trace
async def sweep(
    func: Callable[[float], T], points: Sequence[float], workers: int
) -> list[T]:
    """Evaluate func on every point in a thread pool; output keeps input order."""
    loop = asyncio.get_running_loop()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [loop.run_in_executor(pool, func, x) for x in points]
        return list(await asyncio.gather(*futures))


def lattice(start: float, stop: float, step: float) -> list[float]:
    if not stop >= start:
        raise UsageError(f"x_max must not be below x_min, got [{start}, {stop}]")
    count = int(round((stop - start) / step)) + 1
    return [start + i * step for i in range(count)]


def _evaluate_all(
    func: Callable[[float], FunctionValue], points: Sequence[float], workers: int
) -> list[FunctionValue]:
    def guarded(x: float) -> FunctionValue:
        try:
            return func(x)
        except NonConvergence as exc:
            exc.inputs.setdefault("node", x)
            raise

    return asyncio.run(sweep(guarded, points, workers))


def cmd_eval(args: argparse.Namespace, config: Config) -> int:
    params = check_params(FUNCTION_PARAMS[args.function], args.params)
    if args.order < 0:
        raise UsageError(f"--order must be >= 0, got {args.order}")
    func = _function(args.function, params, args.order, config.quadrature)
    result = func(params.get(_point(args.function), 0.0))
    writer = Writer(config.output)
    if config.output.format == OutputFormat.JSON:
        writer.emit(
            json.dumps(
                {
                    "value": writer.json_number(result.value),
                    "est_error": writer.json_number(result.est_error),
                }
            )
        )
    else:
        writer.emit(writer.number(result.value))
    return EXIT_OK


def cmd_table(args: argparse.Namespace, config: Config) -> int:
    raw = parse_pairs(args.params)
    lattice_keys = {"x_min", "x_max", "step"}
    bounds = check_params(
        LATTICE_PARAMS, [f"{k}={v}" for k, v in raw.items() if k in lattice_keys]
    )
    params = check_params(
        FUNCTION_PARAMS[args.function],
        [f"{k}={v}" for k, v in raw.items() if k not in lattice_keys],
    )
    func = _function(args.function, params, 0, config.quadrature)
    points = lattice(bounds["x_min"], bounds["x_max"], bounds["step"])
    values = _evaluate_all(func, points, config.workers)
    Writer(config.output).rows(
        [_point(args.function), "value", "est_error"],
        [(x, v.value, v.est_error) for x, v in zip(points, values)],
    )
    return EXIT_OK


def _named_integrand(spec: str) -> Integrand:
    name, _, arg = spec.partition(":")
    if name == "gaussian":
        return gaussian(float(arg) if arg else 1.0)
    if name == "exp":
        return exponential(float(arg) if arg else 1.0)
    if name == "poly":
        coeffs = [float(c) for c in arg.split(",") if c]
        if not coeffs:
            raise UsageError("poly: needs at least one coefficient")
        return polynomial(coeffs)
    path = Path(spec)
    if path.exists():
        gf = evolution.GridFunction.from_csv(path.read_text(encoding="utf-8"))
        return SampledIntegrand.from_grid_function(gf)
    raise UsageError(f"unknown input {spec!r}")


def cmd_transform(args: argparse.Namespace, config: Config) -> int:
    params = check_params(TRANSFORM_PARAMS, args.params)
    kind = transforms.TransformKind(args.kind)
    transform = transforms.Transform(kind, params["y"], params.get("p"))
    if args.poly_degree is not None:
        if args.poly_degree < 0:
            raise UsageError(f"--poly-degree must be >= 0, got {args.poly_degree}")
        f: Integrand = monomial(args.poly_degree)
    else:
        f = _named_integrand(args.input)
    value = transform.apply(f, params["x"], config.quadrature)
    writer = Writer(config.output)
    if config.output.format == OutputFormat.JSON:
        writer.emit(json.dumps({"value": writer.json_number(value)}))
    else:
        writer.emit(writer.number(value))
    return EXIT_OK


def cmd_evolve(args: argparse.Namespace, config: Config) -> int:
    params = check_params(EVOLVE_PARAMS[args.evolution], args.params)
    if args.evolution == "watson-j":
        grid = evolution.Grid1D(params["x_min"], params["x_max"], params["n"])
        result = evolution.watson_j(grid, config.quadrature)
    else:
        if args.input is None:
            raise UsageError(f"--{args.evolution} needs --input <grid csv>")
        try:
            text = args.input.read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read {str(args.input)!r}: {exc}") from exc
        f = evolution.GridFunction.from_csv(text)
        if args.evolution == "propagate":
            prop = evolution.SpectralPropagator(params["m"], params["y"])
            result = evolution.propagate(prop, f)
        elif args.evolution == "airy-pde":
            result = evolution.airy_pde_solve(f, params["y"])
        else:
            result = evolution.schrodinger_evolve_general(
                f, evolution.SchrodingerParams(params["tau"], params["b"]), params["p"]
            )
    Writer(config.output).emit(result.to_csv(config.output.precision))
    return EXIT_OK


def cmd_expand(args: argparse.Namespace, config: Config) -> int:
    f = _named_integrand(args.input)
    coefficients = transforms.expansion_coefficients(
        f, args.yabs, args.N, config.quadrature
    )
    writer = Writer(config.output)
    writer.emit(json.dumps([writer.json_number(a) for a in coefficients]))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, config: Config) -> int:
    results = verify.run_suite(verify.Suite(args.suite), config.quadrature)
    Writer(config.output).emit(verify.format_table(results))
    if verify.all_passed(results):
        return EXIT_OK
    for r in results:
        if r.counts and not r.passed:
            print(f"FAILED {r.suite.value}/{r.name}: {r.detail}", file=sys.stderr)
    return EXIT_VERIFY_FAILED


def monitor_imag(
    name: str, points: Sequence[float], values: Sequence[FunctionValue]
) -> float:
    worst, where = max(
        ((abs(v.imag), x) for x, v in zip(points, values)), default=(0.0, 0.0)
    )
    if worst > FIGURE_IMAG_LIMIT:
        logger.warning(
            "%s has imaginary part %.3g at x=%g (limit %.0e)",
            name,
            worst,
            where,
            FIGURE_IMAG_LIMIT,
        )
    return worst


def cmd_figure(args: argparse.Namespace, config: Config) -> int:
    cfg = config.quadrature
    points = lattice(FIGURE_START, FIGURE_STOP, FIGURE_STEP)
    other: PointFunction
    if args.name == "fig1":
        header = ["x", "Ai", "Ai7"]
        other = partial(airy_fn.airy_generalized, 7, cfg=cfg)
    else:
        header = ["x", "Ai", "W"]
        other = partial(airy_fn.watson_w, cfg=cfg)
    first = _evaluate_all(partial(airy_fn.airy, cfg=cfg), points, config.workers)
    second = _evaluate_all(other, points, config.workers)
    if args.name == "fig1":
        monitor_imag("Ai7", points, second)
    Writer(config.output).rows(
        header, [(x, a.value, b.value) for x, a, b in zip(points, first, second)]
    )
    return EXIT_OK


HANDLERS: dict[Command, Callable[[argparse.Namespace, Config], int]] = {
    Command.EVAL: cmd_eval,
    Command.TABLE: cmd_table,
    Command.TRANSFORM: cmd_transform,
    Command.EVOLVE: cmd_evolve,
    Command.EXPAND: cmd_expand,
    Command.VERIFY: cmd_verify,
    Command.FIGURE: cmd_figure,
}


def main(argv: Sequence[str] | None = None) -> int:
    init_logging()

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        config = EnvironConfigFactory().create(
            config_path=args.config,
            overrides={
                "precision": args.precision,
                "format": args.format,
                "out": args.out,
            },
        )
        logger.debug("Loaded config: %r", config)
        return HANDLERS[Command(args.command)](args, config)
    except NonConvergence as exc:
        print(f"airykit: no convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (AirykitError, ValueError) as exc:
        print(f"airykit: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
