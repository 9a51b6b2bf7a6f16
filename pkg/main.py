"""Command-line front end for nilsoliton"""
import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, TextIO, Tuple

from catalog import (THEOREM_FAMILIES, ConstraintViolation, SignatureNotLorentz, UnknownFamily, families,
                     family, group, groups, metric)
from config import Config
from curvature import oracle_agrees, oracle_points
from flow import CSV_HEADER, DegenerateMetric, FlowConfig, FlowState, integrate, to_json, write_csv, write_json
from forms import UnknownGroup
from logger import get_logger
from report import Report, build_report, certificate_dict, check_report, solve_report, validate_dict
from ring import EngineError, ParseError, parse_rational
from soliton import THEOREMS, AnsatzTooLarge, NoSolution, check_theorem, solve_soliton
from utils import parse_floats, parse_param_flags, render_value

logger = get_logger()

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILURE = 2
EXIT_ANSATZ = 3
EXIT_DEGENERATE = 4

# errors caused by what was asked for rather than by the engine
USAGE_ERRORS = (ParseError, ConstraintViolation, SignatureNotLorentz, UnknownFamily, UnknownGroup)


class UsageError(Exception):
    pass


class ArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors raised instead of exiting with status 2"""

    def error(self, message: str):
        raise UsageError(message)


# -- workers (module level so they pickle) -----------------------------------------

def _report_worker(job: Tuple[str, Tuple[Tuple[str, Fraction], ...], bool]) -> Dict[str, Any]:
    family_id, binding, oracle = job
    report = build_report(family_id, dict(binding))
    if oracle:
        report.add_section("oracle", oracle_section(family_id, dict(binding)))
    return report.to_dict()


def _check_worker(job: Tuple[int, Optional[str]]) -> List[Dict[str, Any]]:
    n, variant = job
    return [certificate_dict(c) for c in check_theorem(n) if variant is None or c.family == variant]


def fan_out(worker: Callable, jobs: Sequence, workers: int) -> List:
    """Run jobs serially or on a process pool; results keep the order of jobs"""
    if workers <= 1 or len(jobs) <= 1:
        return [worker(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, jobs))


def oracle_section(family_id: str, binding: Dict[str, Fraction]) -> Dict[str, Any]:
    """Finite-difference cross-check at random points; unbound parameters take sample values"""
    config = Config.from_env()
    fam = family(family_id)
    used = {**fam.sample_binding, **binding}
    points = oracle_points(config.ORACLE_POINTS, config.ORACLE_SEED)
    agrees = oracle_agrees(metric(family_id, used), points, config.FD_STEP, config.ORACLE_RTOL)
    logger.check(f"finite-difference oracle on {family_id}", agrees)
    return {
        "binding": {k: render_value(v) for k, v in sorted(used.items())},
        "points": len(points),
        "step": config.FD_STEP,
        "agrees": agrees,
    }


# -- commands --------------------------------------------------------------------------

class CommandLine:
    """Dispatches subcommands and renders their output"""

    def __init__(self, config: Config, out: TextIO = None):
        self.config = config
        self.out = out or sys.stdout

    def emit(self, text: str):
        self.out.write(text + "\n")

    def emit_json(self, payload: Any):
        self.emit(json.dumps(payload, indent=2, ensure_ascii=False))

    def validate(self, payloads: Sequence[Dict[str, Any]]):
        if self.config.VALIDATE_REPORTS:
            for payload in payloads:
                validate_dict(payload)

    def cmd_list(self, args) -> int:
        """Groups, metric families, constraints and theorems"""
        if args.theorems:
            rows = [{"theorem": n, "families": list(THEOREM_FAMILIES[n])} for n in THEOREMS]
            if args.json:
                self.emit_json(rows)
            else:
                for row in rows:
                    self.emit(f"Theorem {row['theorem']}: {', '.join(row['families'])}")
            return EXIT_OK

        group_ids = [args.group] if args.group else groups(include_reference=args.all)
        for group_id in group_ids:
            group(group_id)
        listing = []
        for group_id in group_ids:
            spec = group(group_id)
            listing.append({
                "group": group_id,
                "description": spec.description,
                "families": [{
                    "id": fam.id,
                    "title": fam.title,
                    "params": list(fam.params),
                    "constraints": fam.describe_constraints(),
                    "reference": fam.reference,
                } for fam in families(group_id, include_reference=args.all)],
            })
        if args.json:
            self.emit_json(listing)
            return EXIT_OK
        for entry in listing:
            self.emit(f"{entry['group']}: {entry['description']}")
            for fam in entry["families"]:
                params = ", ".join(fam["params"]) or "-"
                self.emit(f"  {fam['id']:<16} {fam['title']:<28} params: {params:<10} constraints: {fam['constraints']}")
        return EXIT_OK

    def cmd_report(self, args) -> int:
        """Curvature report for one family, or every printed family with --all"""
        binding = parse_param_flags(args.param)
        if args.all:
            family_ids = [fam.id for fam in families()]
        elif args.family:
            family(args.family)
            family_ids = [args.family]
        else:
            raise UsageError("report needs a family id or --all")
        jobs = [(family_id, tuple(sorted(binding.items())), args.oracle) for family_id in family_ids]
        payloads = fan_out(_report_worker, jobs, args.jobs or self.config.JOBS)
        self.validate(payloads)
        if args.json:
            self.emit_json(payloads if args.all else payloads[0])
        else:
            for payload in payloads:
                self.emit(Report.from_dict(payload).summary())
        return EXIT_OK

    def cmd_check(self, args) -> int:
        """Verify the printed solitons of one theorem, or all of them"""
        flags = [flag for flag in args.param if not flag.startswith("variant=")]
        variants = [flag.split("=", 1)[1] for flag in args.param if flag.startswith("variant=")]
        if flags:
            raise UsageError("check takes only variant=<family id> as --param")
        variant = variants[-1] if variants else None
        if args.all:
            theorems = list(THEOREMS)
        elif args.theorem is not None:
            if args.theorem not in THEOREMS:
                raise UsageError(f"no soliton theorem {args.theorem}; known: {', '.join(map(str, THEOREMS))}")
            theorems = [args.theorem]
        else:
            raise UsageError("check needs a theorem id or --all")
        if variant is not None:
            family(variant)
            theorems = [n for n in theorems if variant in THEOREM_FAMILIES[n]]
            if not theorems:
                raise UsageError(f"{variant} is not covered by the selected theorems")

        batches = fan_out(_check_worker, [(n, variant) for n in theorems], args.jobs or self.config.JOBS)
        certificates = [c for batch in batches for c in batch]
        report = check_report(certificates)
        payload = report.to_dict()
        self.validate([payload])
        if args.json:
            self.emit_json(payload)
        else:
            self.emit(report.summary())
        failed = [c for c in certificates if not c["verified"]]
        for c in failed:
            logger.error(f"theorem {c['theorem']} on {c['family']} is not verified")
        return EXIT_OK if not failed else EXIT_FAILURE

    def cmd_solve(self, args) -> int:
        """Solve the soliton equation over a polynomial ansatz"""
        binding = parse_param_flags(args.param)
        alpha = None if args.alpha == "unknown" else parse_rational(args.alpha)
        g = metric(args.family, binding)
        cap = self.config.ANSATZ_MAX_UNKNOWNS
        try:
            space = solve_soliton(g, args.degree, args.trig, alpha, max_unknowns=cap)
        except NoSolution as exc:
            logger.warning(str(exc))
            if args.json:
                self.emit_json({"family": args.family, "solution": None, "error": str(exc)})
            else:
                self.emit(f"No solution: {exc}")
            return EXIT_OK
        report = solve_report(space)
        payload = report.to_dict()
        self.validate([payload])
        if args.json:
            self.emit_json(payload)
        else:
            self.emit(report.summary())
        verified = payload["sections"]["solution_space"]["verified"]
        logger.check(f"solution space of {args.family}", verified)
        return EXIT_OK if verified else EXIT_FAILURE

    def cmd_flow(self, args) -> int:
        """Integrate the Ricci flow of the diagonal family"""
        initial = parse_floats(args.initial)
        if len(initial) != 4:
            raise UsageError("--initial needs four comma-separated values f1,f2,f3,f4")
        cfg = FlowConfig(step=args.step, t_end=args.t_end,
                         degeneracy_tolerance=self.config.DEGENERACY_TOL, sample_every=args.sample_every)
        states = integrate(FlowState(0.0, tuple(initial)), cfg)
        if args.out:
            if args.out.endswith(".json"):
                write_json(states, args.out)
            else:
                write_csv(states, args.out)
            logger.success(f"Trajectory with {len(states)} samples written to {args.out}")
        elif args.json:
            self.emit(to_json(states))
        else:
            self.emit(",".join(CSV_HEADER))
            for state in states:
                self.emit(",".join(repr(v) for v in (state.t,) + state.f))
        return EXIT_OK


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="nilsoliton",
        description="Exact curvature and Ricci soliton verification for Lorentz metrics on H3xR and G4",
    )
    parser.add_argument("--verbose", action="store_true", help="Show debug logging")
    parser.add_argument("--quiet", action="store_true", help="Only show warnings and errors")
    sub = parser.add_subparsers(dest="command", parser_class=ArgumentParser)

    p = sub.add_parser("list", help="List groups, metric families and theorems")
    p.add_argument("--group", help="Only families of this group")
    p.add_argument("--theorems", action="store_true", help="List soliton theorems and their metrics")
    p.add_argument("--all", action="store_true", help="Include reference groups and families")
    p.add_argument("--json", action="store_true", help="Machine-readable output")

    p = sub.add_parser("report", help="Curvature report for a metric family")
    p.add_argument("family", nargs="?", help="Family id, see `list`")
    p.add_argument("--param", action="append", default=[], help="Bind a parameter, e.g. --param lambda=2")
    p.add_argument("--all", action="store_true", help="Report every printed family")
    p.add_argument("--oracle", action="store_true", help="Add the finite-difference Ricci cross-check")
    p.add_argument("--jobs", type=int, default=0, help="Worker processes for --all")
    p.add_argument("--json", action="store_true", help="Machine-readable output")

    p = sub.add_parser("check", help="Verify printed soliton fields")
    p.add_argument("theorem", nargs="?", type=int, help="Theorem id, see `list --theorems`")
    p.add_argument("--param", action="append", default=[], help="variant=<family id> selects one metric")
    p.add_argument("--all", action="store_true", help="Check every theorem")
    p.add_argument("--jobs", type=int, default=0, help="Worker processes for --all")
    p.add_argument("--json", action="store_true", help="Machine-readable output")

    p = sub.add_parser("solve", help="Solve the soliton equation for a family")
    p.add_argument("family", help="Family id, see `list`")
    p.add_argument("--param", action="append", default=[], help="Bind a parameter, e.g. --param mu=2")
    p.add_argument("--degree", type=int, default=Config.DEFAULT_DEGREE, help="Polynomial degree bound")
    p.add_argument("--alpha", default="unknown", help="'unknown' or a rational value")
    p.add_argument("--trig", action="store_true", help="Add cos(w) and sin(w) to the ansatz")
    p.add_argument("--json", action="store_true", help="Machine-readable output")

    p = sub.add_parser("flow", help="Ricci flow of f1 ω1² + f2 ω2² + f3 ω3² + f4 ω4²")
    p.add_argument("--initial", required=True, help="f1,f2,f3,f4 at t = 0")
    p.add_argument("--step", type=float, default=Config.FLOW_STEP, help="RK4 step size")
    p.add_argument("--t-end", type=float, default=Config.FLOW_T_END, help="Integration time")
    p.add_argument("--sample-every", type=int, default=Config.FLOW_SAMPLE_EVERY, help="Keep every n-th step")
    p.add_argument("--out", help="Write the trajectory to a .csv or .json file")
    p.add_argument("--json", action="store_true", help="Print JSON instead of CSV")
    return parser


def main(argv: Optional[Sequence[str]] = None, out: TextIO = None) -> int:
    """Entry point; returns the process exit status"""
    config = Config.from_env()
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        logger.error(str(exc))
        return EXIT_USAGE
    if args.command is None:
        build_parser().print_help(out or sys.stdout)
        return EXIT_USAGE
    if args.verbose:
        logger.set_level("DEBUG")
    elif args.quiet:
        logger.set_level("WARNING")

    cli = CommandLine(config, out)
    command = getattr(cli, f"cmd_{args.command}")
    try:
        return command(args)
    except (UsageError, ValueError) + USAGE_ERRORS as exc:
        logger.error(str(exc))
        return EXIT_USAGE
    except AnsatzTooLarge as exc:
        logger.error(str(exc))
        return EXIT_ANSATZ
    except DegenerateMetric as exc:
        logger.error(f"Flow stopped: {exc}")
        return EXIT_DEGENERATE
    except EngineError as exc:
        logger.error(f"Engine failure: {exc}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
