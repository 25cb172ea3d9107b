"""Command-line entry point: ``kickwalk --experiment ... [--config file]``."""
from __future__ import annotations

import argparse
import json
import logging
import sys

from .errors import KickwalkError
from .harness import EXPERIMENTS, build_config, load_config_file, run
from .walk import POLICIES


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kickwalk",
                                description="Kicked rotor / quantum walk experiments.")
    p.add_argument("--config", help="flat key = value file; command-line flags take precedence")
    p.add_argument("--experiment", choices=EXPERIMENTS)
    p.add_argument("--kappa", type=float)
    p.add_argument("--hbar-eff", type=float)
    p.add_argument("--rho", type=int)
    p.add_argument("--policy", choices=POLICIES)
    p.add_argument("--lattice-size", type=int)
    p.add_argument("--steps", type=int)
    p.add_argument("--ensemble", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--m0", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--out")
    p.add_argument("--kappas", help="lo:hi:step or a comma list (kappa-scan)")
    p.add_argument("--systems", help="comma list of kr, kr+hadamard, kr+disorder, kr+diffusive")
    p.add_argument("--input", help="histogram file (fit-shape)")
    p.add_argument("--fit-scale", choices=("linear", "log"))
    p.add_argument("--dump-coins", action="store_const", const=True, default=None)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    overrides = {k: v for k, v in vars(args).items() if k not in ("config", "verbose")}
    try:
        file_values = load_config_file(args.config) if args.config else {}
        cfg = build_config(file_values, overrides)
        manifest = run(cfg)
    except KickwalkError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    print(json.dumps(manifest.results, indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
