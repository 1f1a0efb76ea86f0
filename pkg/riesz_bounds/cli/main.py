#
# Copyright (C) 2023 Intel Corporation
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
"""
riesz-bounds command line.

Exit codes: 0 success, 1 numerical failure, 2 usage or parameter range, 3 bad input data, 4 verification failure.
"""
import argparse
import json
import sys
from typing import Callable, Dict, List, Optional, Sequence, TextIO, Tuple

from pydantic import ValidationError

from riesz_bounds import __version__
from riesz_bounds.bounds import SHAPE_KINDS, N_alpha, ShapeFunctionTable
from riesz_bounds.cli.config import CommandConfig, OutputFormat
from riesz_bounds.cli.density_file import dump_density, load_density
from riesz_bounds.cli.output import emit_record, emit_table, structured_value
from riesz_bounds.exceptions import (
    AdmissibilityError,
    DensityFileError,
    DomainError,
    RieszBoundsError,
    SupportError,
    UnknownSuite,
)
from riesz_bounds.log import configure_cli_logging, get_logger
from riesz_bounds.moments import PLAIN_MEASURE_NOTE, MomentSeq, check_critical_inequalities, step_moments
from riesz_bounds.potentials import Density, density_functionals
from riesz_bounds.verify.suites import SUITE_NAMES, run_suite

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_VERIFICATION = 4

# moments printed by the moments subcommand for interval input
MOMENT_RANGE = range(-2, 3)
# failing cases listed in the human verify summary
SHOWN_FAILURES = 20

TABLE_ARGUMENT = {"M": "v", "Phi": "s", "psi": "s", "f": "t", "h": "t"}


def _interval(text: str) -> Tuple[float, float, float]:
    parts = text.split(":")
    try:
        if len(parts) not in (2, 3):
            raise ValueError
        a, b = float(parts[0]), float(parts[1])
        w = float(parts[2]) if len(parts) == 3 else 1.0
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a:b or a:b:w, got {text!r}") from None
    return a, b, w


def _moment(text: str) -> Tuple[int, float]:
    k, _, value = text.partition("=")
    try:
        return int(k), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected k=value, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="increase log verbosity (-vv for debug)")
    common.add_argument(
        "--format", choices=[f.value for f in OutputFormat], default=OutputFormat.human.value, help="output format"
    )
    common.add_argument("--threads", type=int, help="worker threads (default: $RIESZ_BOUNDS_THREADS or CPU count)")
    common.add_argument("--tolerance", type=float, help="slack below -tolerance counts as a violation")

    parser = argparse.ArgumentParser(prog="riesz-bounds", description="Sharp gradient bounds for Riesz potentials.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    bound = subparsers.add_parser("bound", parents=[common], help="evaluate N_alpha(u, v) and its witness ball")
    bound.add_argument("--n", type=int, help="dimension")
    bound.add_argument("--alpha", type=float, help="order in (0, 2]")
    bound.add_argument("--u", type=float, help="value of I_alpha")
    bound.add_argument("--v", type=float, help="value of I_(alpha-2)")
    bound.add_argument("--witness-file", help="write the extremal ball as a density file")

    evaluate = subparsers.add_parser("eval", parents=[common], help="functionals of a density file and bound slack")
    evaluate.add_argument("--density", help="density file (JSON)")
    evaluate.add_argument("--alpha", type=float, help="order in (0, 2]")

    table = subparsers.add_parser("table", parents=[common], help="tabulate a shape function")
    table.add_argument("--kind", choices=SHAPE_KINDS)
    table.add_argument("--n", type=int, help="dimension")
    table.add_argument("--alpha", type=float, help="order, for psi, f and h")
    table.add_argument("--min", type=float, help="first argument (default 0, or 1 for f and h)")
    table.add_argument("--max", type=float, help="last argument")
    table.add_argument("--step", type=float, help="argument spacing")
    table.add_argument("--adaptive", action="store_true", help="log-spaced samples refined to --tolerance")

    verify = subparsers.add_parser("verify", parents=[common], help="run a verification suite")
    verify.add_argument("--suite", help=f"one of {', '.join(SUITE_NAMES)}, or all")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--scale", type=float, default=1.0, help="multiplier on the number of random cases")
    verify.add_argument("--output", help="also write the structured report to this file")

    moments = subparsers.add_parser("moments", parents=[common], help="critical-exponent moment inequalities")
    moments.add_argument("--interval", type=_interval, action="append", default=[], help="step a:b[:w], repeatable")
    moments.add_argument("--moment", type=_moment, action="append", default=[], help="moment k=value, repeatable")
    moments.add_argument("--plain-measure", action="store_true", help="--moment values are taken with plain dx")
    moments.add_argument("--L", type=float, default=1.0, help="upper bound of the density, for --moment input")
    return parser


def parse_config(argv: Optional[Sequence[str]] = None) -> CommandConfig:
    parser = build_parser()
    args = vars(parser.parse_args(argv))
    args = {key: value for key, value in args.items() if value is not None}
    if "moment" in args:
        args["moment"] = dict(args["moment"])
    try:
        return CommandConfig(**args)
    except ValidationError as e:
        messages = "; ".join(error["msg"] for error in e.errors())
        parser.error(messages)
        raise  # unreachable, parser.error exits


def cmd_bound(config: CommandConfig, stream: TextIO) -> int:
    assert config.n is not None and config.alpha is not None and config.u is not None and config.v is not None
    result = N_alpha(config.n, config.alpha, config.u, config.v)
    witness = result.witness
    record = {
        "n": result.n,
        "alpha": result.alpha,
        "u": result.u,
        "v": result.v,
        "t0": result.t0,
        "sigma0": result.sigma0,
        "value": result.value,
        "gradient_bound": result.gradient_bound,
        "cauchy_bound": result.cauchy_bound,
        "witness_tau": witness.tau if witness is not None else None,
        "witness_sigma": witness.sigma if witness is not None else None,
    }
    if config.witness_file is not None:
        rho = Density.single(witness) if witness is not None else Density(config.n)
        dump_density(rho, config.witness_file)
    emit_record(record, config.format, stream)
    return EXIT_OK


def cmd_eval(config: CommandConfig, stream: TextIO) -> int:
    assert config.density is not None and config.alpha is not None
    rho = load_density(config.density)
    values = density_functionals(rho, config.alpha)
    bound = N_alpha(rho.n, config.alpha, values.u, values.v)
    slack = bound.value - values.H**2
    record = {
        "n": rho.n,
        "alpha": config.alpha,
        "components": len(rho.components),
        "u": values.u,
        "v": values.v,
        "H": values.H,
        "bound": bound.value,
        "slack": slack,
        "cauchy_bound": bound.cauchy_bound,
    }
    emit_record(record, config.format, stream)
    if slack < -config.tolerance * max(1.0, bound.value):
        logger.error("Sharp bound violated", slack=slack, density=str(config.density))
        return EXIT_VERIFICATION
    return EXIT_OK


def cmd_table(config: CommandConfig, stream: TextIO) -> int:
    assert config.kind is not None and config.n is not None and config.min is not None and config.max is not None
    if config.adaptive:
        table = ShapeFunctionTable.adaptive(
            config.kind, config.n, config.min, config.max, config.alpha, config.tolerance, max_threads=config.threads
        )
    else:
        table = ShapeFunctionTable.from_arguments(
            config.kind, config.n, config.table_arguments(), config.alpha, max_threads=config.threads
        )
    emit_table((TABLE_ARGUMENT[config.kind], config.kind), table.rows, config.format, stream)
    return EXIT_OK


def cmd_verify(config: CommandConfig, stream: TextIO) -> int:
    assert config.suite is not None
    report = run_suite(config.suite, config.seed, config.scale, config.threads)
    if config.output is not None:
        config.output.write_text(report.to_json() + "\n")
    if config.format == OutputFormat.json:
        stream.write(report.to_json() + "\n")
    else:
        parts = report.parts or [report]
        rows = [(part.suite, part.seed, part.cases, part.max_residual, len(part.failures)) for part in parts]
        emit_table(("suite", "seed", "cases", "max_residual", "failures"), rows, config.format, stream)
        if config.format == OutputFormat.human:
            for failure in report.failures[:SHOWN_FAILURES]:
                stream.write(f"FAIL {json.dumps(failure, sort_keys=True)}\n")
            if len(report.failures) > SHOWN_FAILURES:
                stream.write(f"... {len(report.failures) - SHOWN_FAILURES} more failures\n")
    return EXIT_OK if report.ok else EXIT_VERIFICATION


def cmd_moments(config: CommandConfig, stream: TextIO) -> int:
    if config.interval:
        # negative moments diverge for steps starting at 0
        touches_origin = any(a <= 0.0 for a, _, _ in config.interval)
        s = step_moments(config.interval, range(0, 3) if touches_origin else MOMENT_RANGE)
    elif config.plain_measure:
        s = MomentSeq.from_plain(config.moment, config.L)
    else:
        s = MomentSeq(config.moment, config.L)
    report = check_critical_inequalities(s, tolerance=config.tolerance)
    moment_rows = [(k, s[k]) for k in sorted(s.s)]
    check_rows = [(check.name, check.lhs, check.rhs, check.slack) for check in report.checks]
    check_columns = ("inequality", "lhs", "rhs", "slack")
    if config.format == OutputFormat.json:
        document = {
            "L": s.L,
            "moments": {str(k): structured_value(value) for k, value in moment_rows},
            "checks": [dict(zip(check_columns, map(structured_value, row))) for row in check_rows],
            "skipped": report.skipped,
            "ok": report.ok,
        }
        stream.write(json.dumps(document, indent=2) + "\n")
    else:
        emit_table(("k", "s_k"), moment_rows, config.format, stream)
        stream.write("\n")
        emit_table(check_columns, check_rows, config.format, stream)
        if config.format == OutputFormat.human:
            for name in report.skipped:
                stream.write(f"skipped {name}: moments missing\n")
            if config.plain_measure:
                stream.write(f"note: {PLAIN_MEASURE_NOTE}\n")
    for violation in report.violations:
        logger.error("Critical-exponent inequality violated", inequality=violation.name, slack=violation.slack)
    return EXIT_OK if report.ok else EXIT_VERIFICATION


COMMANDS: Dict[str, Callable[[CommandConfig, TextIO], int]] = {
    "bound": cmd_bound,
    "eval": cmd_eval,
    "table": cmd_table,
    "verify": cmd_verify,
    "moments": cmd_moments,
}


def _fail(code: int, error: Exception) -> int:
    print(f"riesz-bounds: error: {error}", file=sys.stderr)
    logger.debug("Command failed", exc_info=True, exit_code=code)
    return code


def run(argv: Optional[Sequence[str]] = None, stream: TextIO = None) -> int:
    """Run one command and return its exit code; usage errors exit through argparse."""
    config = parse_config(argv)
    configure_cli_logging(config.verbose)
    stream = stream if stream is not None else sys.stdout
    try:
        return COMMANDS[config.command](config, stream)
    except (DensityFileError, AdmissibilityError, SupportError) as e:
        return _fail(EXIT_DATA, e)
    except (DomainError, UnknownSuite) as e:
        # RangeError is a DomainError
        return _fail(EXIT_USAGE, e)
    except RieszBoundsError as e:
        return _fail(EXIT_FAILURE, e)


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))
