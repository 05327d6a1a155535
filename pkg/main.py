"""SPA channeling - single-photon annihilation of planar-channeled positrons.

This module contains only the command-line wiring. Business logic lives in:
- spa_channeling/crystal.py, bands.py - potential and transverse bands
- spa_channeling/kshell.py, integrals.py, xsection.py - cross-section pipeline
- spa_channeling/atomref.py - free-atom reference formulas and fits
- spa_channeling/commands/ - one module per subcommand
"""

import argparse
import logging
import sys

from spa_channeling.commands.angular import run_angular_distribution
from spa_channeling.commands.atom_ref import run_atom_reference
from spa_channeling.commands.bands import run_band_dump
from spa_channeling.commands.sigma_max import run_sigma_max_scan
from spa_channeling.config import CONFIG_ENV_VAR, DEFAULTS, load_config
from spa_channeling.errors import ConfigError, SpaError

logger = logging.getLogger("spa_channeling")

COMMANDS = {
    "angular": (run_angular_distribution, "photon angular distribution (angular.csv, screen.csv)"),
    "sigma-max": (run_sigma_max_scan, "dsigma_max versus energy, entry angle and band (sigma_max.csv, fit.csv)"),
    "atom-ref": (run_atom_reference, "free-atom reference maxima (atom_ref.csv)"),
    "bands": (run_band_dump, "transverse band diagram (bands.csv)"),
}


# -----------------------------------------------------------------------------
# Parser
# -----------------------------------------------------------------------------


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help=f"YAML config file (default: ${CONFIG_ENV_VAR} or spa-channeling.yaml)")
    common.add_argument("--json", action="store_true", help="also write a JSON mirror of every CSV")
    common.add_argument("--threads", dest="threads", metavar="N", help="worker threads for scan grid points")
    common.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    overrides = common.add_argument_group("config overrides (values parsed as YAML)")
    for key in DEFAULTS:
        if key != "threads":
            overrides.add_argument(f"--{key}", dest=key, metavar="VALUE")

    parser = _Parser(prog="spa-channeling", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def _overrides(args: argparse.Namespace) -> dict[str, str]:
    return {key: getattr(args, key) for key in DEFAULTS if getattr(args, key, None) is not None}


# -----------------------------------------------------------------------------
# Run
# -----------------------------------------------------------------------------


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as e:
        print(f"error: UsageError: {e}", file=sys.stderr)
        return 2

    logging.basicConfig(level=args.log_level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    run, _ = COMMANDS[args.command]
    try:
        config = load_config(args.config, _overrides(args))
        written = run(config, json_mirror=args.json)
    except ConfigError as e:
        print(f"error: ConfigError: {e}", file=sys.stderr)
        return 2
    except (SpaError, OSError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1

    for path in written:
        logger.info("wrote %s", path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
