"""
wprobe command line.

    wprobe respond --config resources/configs/accelerated_unruh.json --out output
    wprobe reconstruct --config resources/configs/accelerated_unruh.json
    wprobe scaling --config resources/configs/scaling_3d.json
    wprobe sweep --config resources/configs/single_mode.json

Exit codes: 0 success, 2 validation error, 3 numerical failure.
"""
from typing import Optional
import argparse
import sys
from .conf import WPROBE_THREADS, logging
from .exceptions import WProbeException
from .models import load_config
from .runner import COMMANDS, ExperimentRunner
from .version import __version__


logger = logging.getLogger("WProbe.CLI")

EXIT_OK = 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wprobe",
        description="Unruh-DeWitt detector experiments with delta-comb switching."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "respond": "excitation probability of a comb and its local/non-local split",
        "reconstruct": "Wightman reconstruction over protocol.zeta_grid",
        "scaling": "single-kick log-log scaling per scaling.dims",
        "sweep": "η-sweep of the non-local term with extrapolation",
    }
    for command in COMMANDS:
        cmd = sub.add_parser(command, help=helps[command])
        cmd.add_argument("--config", required=True, help="path to the JSON experiment config")
        cmd.add_argument("--out", default=None, help="output directory (overrides output.directory)")
        cmd.add_argument(
            "--threads", type=int, default=WPROBE_THREADS, help="worker threads for independent integrals"
        )
        cmd.add_argument("--seed", type=int, default=None, help="reserved; no stochastic components")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        print("wprobe: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        config = load_config(args.config)
        runner = ExperimentRunner(config, out=args.out, threads=args.threads, seed=args.seed)
        manifest = runner.run(args.command)
    except WProbeException as err:
        logger.error(str(err))
        print(f"wprobe {args.command}: {err}", file=sys.stderr)
        return err.exit_code
    logger.info(f"{args.command} finished in {manifest.duration:.2f}s: {', '.join(manifest.outputs)}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
