# SPDX-FileCopyrightText: Copyright (c) 2024 NVIDIA CORPORATION & AFFILIATES. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Entrypoint for the command line tools.

Subcommands build codes into alist files, check them, simulate and sweep block error rates, search for the noise
level at a target error rate, tabulate benchmark curves and print the syndrome tables of the small demo codes.

Exit status is 0 on success, 1 when a code or file fails validation and 2 on a usage error.
"""

import argparse
import csv
import logging
import os
import sys
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from dotenv import load_dotenv

from css_ldpc import analysis, bootstrap_logging, channels, constructions, designsets, gf2core, pauli
from css_ldpc.configuration import DECODER_KINDS, AppConfig, DecoderConfig
from css_ldpc.errors import (
    AlistParseError,
    CssLdpcError,
    InvalidArgumentError,
    PreconditionError,
    SearchFailureError,
    StabilizerValidationError,
)
from css_ldpc.harness import files, simulation

_LOGGER = logging.getLogger(__name__)
FAMILIES = ("bicycle", "unicycle", "construction-n", "construction-m", "regular")
_VALIDATION_ERRORS = (PreconditionError, AlistParseError, StabilizerValidationError, SearchFailureError)


def _add_decoder_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--decoder", choices=DECODER_KINDS, default=None, help="decoder to run")
    parser.add_argument("--max-iter", type=int, default=None, help="sum-product iteration cap")


def _add_run_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("code", metavar="ALIST", help="the code's alist file")
    parser.add_argument("--seed", type=int, default=None, help="base seed of the trial streams")
    parser.add_argument("--trials", type=int, default=None, help="trials per noise point")
    parser.add_argument("--workers", type=int, default=None, help="worker processes")
    parser.add_argument("-o", "--out", metavar="CSV", default=None, help="write to this file instead of stdout")
    _add_decoder_args(parser)


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser.

    :returns: The parser with one subparser per subcommand.
    :rtype: argparse.ArgumentParser
    """
    parser = argparse.ArgumentParser(prog="css_ldpc", description="Dual-containing sparse-graph quantum codes")
    parser.add_argument(
        "--help-config",
        action="store_true",
        default=False,
        help="show the configuration help text",
    )
    parser.add_argument(
        "-c",
        "--config",
        metavar="CONFIGURATION_FILE",
        default="/dev/null",
        help="path to the configuration file (json or yaml)",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=1,
        help="increase output verbosity",
    )
    parser.add_argument(
        "-q",
        "--quiet",
        action="count",
        default=0,
        help="decrease output verbosity",
    )
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")

    construct = commands.add_parser("construct", help="build a code and write it as alist plus metadata")
    construct.add_argument("family", choices=FAMILIES)
    construct.add_argument("-o", "--out", metavar="ALIST", required=True, help="output alist file")
    construct.add_argument("--n", type=int, help="blocklength (bicycle, regular)")
    construct.add_argument("--m", type=int, help="number of checks or cyclic block size")
    construct.add_argument("--k", type=int, help="row weight (bicycle, regular)")
    construct.add_argument("--j", type=int, help="column weight (regular)")
    construct.add_argument("--q", type=int, help="field order (unicycle)")
    construct.add_argument("--sets", type=int, default=4, help="number of cyclic blocks (construction-n)")
    construct.add_argument("--size", type=int, default=5, help="elements per set (construction-n)")
    construct.add_argument("--seed", type=int, default=None, help="search seed")

    check = commands.add_parser("check", help="validate a code and audit it for low-weight codewords")
    check.add_argument("code", metavar="ALIST")
    check.add_argument("--max-weight", type=int, default=None, help="heaviest word the audit reports")

    simulate = commands.add_parser("simulate", help="estimate the block error rate at one noise point")
    _add_run_args(simulate)
    simulate.add_argument("--channel", required=True, help="e.g. bscpair:fm=0.02, 4ary:f=0.03, gauss:sigma=1.0")
    simulate.add_argument("--fixed-weight", type=int, default=None, help="flip exactly this many bits per component")

    sweep = commands.add_parser("sweep", help="estimate block error rates along a noise grid")
    _add_run_args(sweep)
    sweep.add_argument("--family", choices=channels.CHANNEL_FAMILIES, default="bscpair")
    sweep.add_argument("--grid", required=True, help="comma separated marginal flip probabilities")

    threshold = commands.add_parser("threshold", help="find the noise level at a target block error rate")
    _add_run_args(threshold)
    threshold.add_argument("--family", choices=channels.CHANNEL_FAMILIES, default="bscpair")
    threshold.add_argument("--target", type=float, default=0.1, help="target block error rate")
    threshold.add_argument("--rel-tol", type=float, default=0.1, help="relative width of the final bracket")
    threshold.add_argument("--budget", type=int, default=100_000, help="total trials allowed")
    threshold.add_argument("--low", type=float, default=1e-3, help="lower end of the initial bracket")
    threshold.add_argument("--high", type=float, default=0.25, help="upper end of the initial bracket")

    curves = commands.add_parser("curves", help="tabulate a benchmark rate curve as CSV")
    curves.add_argument("name", choices=analysis.CURVE_NAMES)
    curves.add_argument("--start", type=float, default=0.0)
    curves.add_argument("--stop", type=float, default=0.5)
    curves.add_argument("--step", type=float, default=0.01)

    demo = commands.add_parser("demo", help="print the single-qubit syndrome table of a small code")
    demo.add_argument("name", choices=("shor", "steane", "five-qubit"))
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """Parse command-line arguments for the program.

    :returns: A namespace containing the parsed arguments.
    :rtype: argparse.Namespace
    """
    parser = build_parser()
    cliargs = parser.parse_args(argv)
    if cliargs.help_config:
        sys.stdout.write("\nconfiguration file format:\n")
        AppConfig.print_help(sys.stdout.write)
        sys.exit(0)
    if cliargs.command is None:
        parser.error("a subcommand is required")
    return cliargs


def _pick(value: Optional[int], default: int) -> int:
    return default if value is None else value


def _decoder_config(args: argparse.Namespace, config: AppConfig) -> DecoderConfig:
    return DecoderConfig(
        kind=args.decoder or config.decoder.kind,
        max_iter=_pick(args.max_iter, config.decoder.max_iter),
    )


def _require(args: argparse.Namespace, *names: str) -> None:
    missing = [f"--{name}" for name in names if getattr(args, name) is None]
    if missing:
        raise InvalidArgumentError(f"{args.family} needs {', '.join(missing)}")


def _construct(args: argparse.Namespace, config: AppConfig) -> int:
    seed = _pick(args.seed, config.simulation.seed)
    budgets = config.search
    if args.family == "bicycle":
        _require(args, "n", "m", "k")
        code = constructions.bicycle(args.n, args.m, args.k, seed, budgets.difference_set_budget)
    elif args.family == "unicycle":
        _require(args, "q")
        code = constructions.unicycle(args.q)
    elif args.family == "construction-n":
        _require(args, "m")
        sets = designsets.matched_pair_search(args.m, args.sets, args.size, seed, budgets.matched_budget)
        code = constructions.construction_n(args.m, sets)
    elif args.family == "construction-m":
        _require(args, "m")
        parent = constructions.parent_difference_set(args.m, seed, budgets.difference_set_budget)
        code = constructions.construction_m(args.m, parent)
    else:
        _require(args, "j", "k", "n", "m")
        code = constructions.regular(args.j, args.k, args.n, args.m, seed, budgets.regular_budget)
    files.save_code(code, args.out)
    sys.stdout.write(f"{code.code_id}: N={code.n} M={code.m} rank={code.rank_h} quantum_rate={code.quantum_rate:.6f}\n")
    return 0


def _profile(weights: np.ndarray) -> str:
    values, counts = np.unique(weights, return_counts=True)
    return " ".join(f"{v}x{c}" for v, c in zip(values.tolist(), counts.tolist()))


def _check(args: argparse.Namespace, config: AppConfig) -> int:
    code = files.load_code(args.code)
    h = code.h
    max_weight = _pick(args.max_weight, int(h.row_weights.max(initial=0)) * 2)
    report = constructions.audit_low_weight(code, max_weight, config.search.audit_effort, config.simulation.seed)
    lines = [
        f"code: {code.code_id}",
        f"self_orthogonal: {str(gf2core.is_self_orthogonal(h)).lower()}",
        f"shape: {h.n_rows}x{h.n_cols}",
        f"rank: {code.rank_h}",
        f"classical_rate: {code.classical_rate:.6f}",
        f"quantum_rate: {code.quantum_rate:.6f}",
        f"row_weights: {_profile(h.row_weights)}",
        f"column_weights: {_profile(h.column_weights)}",
        f"connected: {str(gf2core.is_connected(h)).lower()}",
    ]
    lines += [f"audit_{key}: {value}" for key, value in report.summary().items()]
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def _emit_csv(args: argparse.Namespace, points: Sequence[simulation.TrialSummary]) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as stream:
            files.write_sweep_csv(points, stream)
    else:
        files.write_sweep_csv(points, sys.stdout)


def _simulate(args: argparse.Namespace, config: AppConfig) -> int:
    code = files.load_code(args.code)
    summary = simulation.run_trials(
        code,
        channels.parse_channel(args.channel),
        _decoder_config(args, config),
        _pick(args.trials, config.simulation.trials),
        _pick(args.seed, config.simulation.seed),
        workers=_pick(args.workers, config.simulation.workers),
        fixed_weight=args.fixed_weight,
    )
    _emit_csv(args, [summary])
    return 0


def _parse_grid(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as err:
        raise InvalidArgumentError(f"cannot parse noise grid {text!r}") from err


def _sweep(args: argparse.Namespace, config: AppConfig) -> int:
    code = files.load_code(args.code)
    result = simulation.sweep(
        code,
        args.family,
        _parse_grid(args.grid),
        _pick(args.trials, config.simulation.trials),
        _pick(args.seed, config.simulation.seed),
        _decoder_config(args, config),
        workers=_pick(args.workers, config.simulation.workers),
        early_stop_failures=config.simulation.early_stop_failures,
    )
    _emit_csv(args, result.points)
    return 0


def _threshold(args: argparse.Namespace, config: AppConfig) -> int:
    code = files.load_code(args.code)
    estimate = simulation.find_noise_at_target(
        code,
        args.family,
        _decoder_config(args, config),
        args.target,
        args.rel_tol,
        args.budget,
        _pick(args.seed, config.simulation.seed),
        bracket=(args.low, args.high),
        workers=_pick(args.workers, config.simulation.workers),
        early_stop_failures=config.simulation.early_stop_failures,
    )
    lines = [
        f"code: {code.code_id}",
        f"target: {estimate.target:g}",
        f"measured_target: {estimate.measured_target:g}",
        f"per_constituent: {str(estimate.per_constituent).lower()}",
        f"f_m: {estimate.f_m:.6g}",
        f"interval: {estimate.low:.6g} {estimate.high:.6g}",
        f"trials: {estimate.trials_used}",
        f"inconclusive: {str(estimate.inconclusive).lower()}",
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    if args.out:
        _emit_csv(args, estimate.points)
    return 0


def _curves(args: argparse.Namespace, _: AppConfig) -> int:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(("f_m", args.name))
    for point in analysis.curve_points(args.name, args.start, args.stop, args.step):
        writer.writerow((f"{point.f_m:.6g}", f"{point.value:.9g}"))
    return 0


def _demo(args: argparse.Namespace, _: AppConfig) -> int:
    stabilizers = pauli.demo_code(args.name)
    errors = [("I", pauli.PauliOperator.identity(stabilizers.n))] + pauli.single_qubit_errors(stabilizers.n)
    table = pauli.syndrome_table(stabilizers, errors)
    width = max(len(label) for label, _ in errors)
    sys.stdout.write(" " * (stabilizers.n + 1) + " ".join(label.rjust(width) for label, _ in errors) + "\n")
    for generator, signs in table:
        cells = " ".join(("+1" if sign > 0 else "-1").rjust(width) for sign in signs)
        sys.stdout.write(f"{generator.lstrip('+')} {cells}\n")
    return 0


_COMMANDS: Dict[str, Callable[[argparse.Namespace, AppConfig], int]] = {
    "construct": _construct,
    "check": _check,
    "simulate": _simulate,
    "sweep": _sweep,
    "threshold": _threshold,
    "curves": _curves,
    "demo": _demo,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand and return the exit status."""
    load_dotenv()
    args = parse_args(argv)
    os.environ["CSSLDPC_VERBOSITY"] = f"{args.verbose - args.quiet}"
    config = AppConfig.from_file(args.config)
    if not config:
        bootstrap_logging(args.verbose - args.quiet)
        return 1
    bootstrap_logging(args.verbose - args.quiet, config.log.file or None)

    try:
        return _COMMANDS[args.command](args, config)
    except _VALIDATION_ERRORS as err:
        _LOGGER.error("%s", err)
        return 1
    except InvalidArgumentError as err:
        _LOGGER.error("%s", err)
        return 2
    except CssLdpcError as err:
        _LOGGER.error("%s", err)
        return 1
    except OSError as err:
        _LOGGER.error("%s", err)
        return 1


if __name__ == "__main__":
    sys.exit(main())
