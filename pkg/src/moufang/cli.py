"""Scenario-driven command line interface.

  moufang verify <scenario.json> [--seed N] [--samples N] [--output PATH]
  moufang epi <scenario.json> --element <coords> [--kind point|line]
  moufang compat <scenario.json> [--seed N] [--samples N] [--output PATH]
  moufang factor <scenario.json> [--seed N] [--samples N] [--output PATH]

Exit codes: 0 all checks pass, 1 a check failed, 2 scenario or usage error.
"""

from __future__ import annotations

import argparse
import sys

from .epi import CompatibilityFailure, EpiError
from .runner import REGISTRY, child_rng, render_report, run_checks
from .scenario import ScenarioContext, SchemaError, load_scenario


def _common_args(sub):
    sub.add_argument("scenario", help="path to a scenario JSON file")
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--samples", type=int, default=None)
    sub.add_argument("--output", default=None, help="report path (default: stdout)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="moufang",
        description="Exact verification suites for polygon and building "
                    "epimorphisms derived from field valuations.")
    subs = parser.add_subparsers(dest="command", required=True)
    _common_args(subs.add_parser("verify", help="run the scenario's check list"))
    epi_p = subs.add_parser("epi", help="print the image of one element")
    epi_p.add_argument("scenario")
    epi_p.add_argument("--element", required=True,
                       help="comma-separated coordinates; rows split by ';'")
    epi_p.add_argument("--kind", choices=["point", "line"], default="point")
    epi_p.add_argument("--seed", type=int, default=None)
    _common_args(subs.add_parser("compat", help="run only the compat checks"))
    _common_args(subs.add_parser("factor",
                                 help="check the factorization through the coarsening"))
    return parser


def _emit(report, output):
    text = render_report(report)
    if output:
        with open(output, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _run(args, only=None):
    scenario = load_scenario(args.scenario)
    report, passed = run_checks(scenario, seed=args.seed, samples=args.samples,
                                only=only)
    _emit(report, args.output)
    return 0 if passed else 1


def _cmd_verify(args):
    return _run(args)


def _cmd_compat(args):
    scenario = load_scenario(args.scenario)
    names = [n for n in scenario["checks"]
             if n.startswith("compat-") or n == "rank1-strengthened"]
    if not names:
        names = [n for n in REGISTRY if n.startswith("compat-")
                 and n[len("compat-"):].lower() == scenario.get("compat", {}).get(
                     "class", "").lower()]
    if not names:
        raise SchemaError("scenario requests no compat checks")
    report, passed = run_checks(scenario, seed=args.seed, samples=args.samples,
                                only=names)
    _emit(report, args.output)
    return 0 if passed else 1


def _cmd_factor(args):
    scenario = load_scenario(args.scenario)
    report, passed = run_checks(scenario, seed=args.seed, samples=args.samples,
                                only=["factor"])
    _emit(report, args.output)
    return 0 if passed else 1


def _cmd_epi(args):
    scenario = load_scenario(args.scenario)
    ctx = ScenarioContext(scenario, seed=args.seed)
    rng = child_rng(ctx.seed, "epi-element")
    e = ctx.epimorphism(rng)
    element = e.source.parse_element(args.kind, args.element)
    image = e.map_element(element)
    sys.stdout.write(e.target.format_element(image) + "\n")
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"verify": _cmd_verify, "epi": _cmd_epi,
                "compat": _cmd_compat, "factor": _cmd_factor}
    try:
        return handlers[args.command](args)
    except SchemaError as exc:
        sys.stderr.write(f"scenario error: {exc}\n")
        return 2
    except CompatibilityFailure as exc:
        sys.stderr.write(f"compatibility failure: {exc}\n")
        return 1
    except EpiError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
