"""
Command line entry point: fdnoma-sim run | sweep | serve.
"""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from errors import FdNomaError
from harness.exports import write_outputs, write_sweep
from harness.replication import run_replication
from harness.sweep import SWEEP_AXES, aggregate_sweep, run_sweep
from logger import log_error, log_header, log_info, log_success, set_log_level
from network.config import load_scenario
from network.consts import SCHEME_PROPOSED, SCHEMES


def _add_scenario_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scenario", help="named scenario from the catalogue")
    parser.add_argument("--config", type=Path, help="YAML file of ScenarioConfig fields")
    parser.add_argument(
        "--full-scale", action="store_true", help="10 SBSs, 10 users per SBS, 4000 subframes, 30 topologies"
    )
    parser.add_argument("--seed", type=int, help="master seed (default: the scenario's rng_seed)")
    parser.add_argument("--subframes", type=int, help="subframes per replication")
    parser.add_argument("--out", type=Path, default=Path("results"), help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fdnoma-sim", description="IBFD + NOMA small-cell network simulator")
    parser.add_argument("--log-level", default=None, help="debug, info, warning, error or silent")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="simulate one replication of one scheme")
    _add_scenario_arguments(run)
    run.add_argument("--scheme", choices=SCHEMES, default=SCHEME_PROPOSED)

    sweep = commands.add_parser("sweep", help="sweep one parameter over schemes and replications")
    _add_scenario_arguments(sweep)
    sweep.add_argument("--axis", choices=SWEEP_AXES, required=True)
    sweep.add_argument(
        "--values", type=float, nargs="+", required=True, help="kb for traffic, SBS count for density, dB for si"
    )
    sweep.add_argument("--schemes", choices=SCHEMES, nargs="+", default=list(SCHEMES))
    sweep.add_argument("--replications", type=int)
    sweep.add_argument("--workers", type=int, help="worker processes for replications")

    serve = commands.add_parser("serve", help="start the HTTP API")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _load(args: argparse.Namespace):
    return load_scenario(
        args.scenario,
        config_file=args.config,
        full_scale=args.full_scale,
        rng_seed=args.seed,
        num_subframes=args.subframes,
        workers=getattr(args, "workers", None),
    )


def command_run(args: argparse.Namespace) -> None:
    config = _load(args)
    log_header(f"Running {args.scheme} for {config.num_subframes} subframes")
    result = run_replication(config, args.scheme)
    report = result.report
    write_outputs(result, args.out)
    log_info(
        f"Packet throughput {report.mean_packet_throughput:.6g} b/s over {report.completed_packets} packets; "
        f"mode shares {report.mode_shares}"
    )


def command_sweep(args: argparse.Namespace) -> None:
    config = _load(args)
    rows = run_sweep(config, args.axis, args.values, args.schemes, replications=args.replications)
    write_sweep(rows, args.out)
    table = aggregate_sweep(rows)
    log_info("\n" + table[["value", "scheme", "mean_packet_throughput_mean", "share_fd_mean"]].to_string(index=False))


def command_serve(args: argparse.Namespace) -> None:
    import uvicorn

    log_success(f"Serving on http://{args.host}:{args.port}")
    uvicorn.run("backend.api:app", host=args.host, port=args.port)


COMMANDS = {"run": command_run, "sweep": command_sweep, "serve": command_serve}


def cli(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.log_level:
        set_log_level(args.log_level)
    try:
        COMMANDS[args.command](args)
    except FdNomaError as e:
        log_error(str(e))
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(cli())
