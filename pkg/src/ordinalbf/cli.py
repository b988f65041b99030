"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 invalid data/plan/IO, 3 computational
failure (degenerate Monte Carlo counts, oracle disagreement or failure).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import replace
from pathlib import Path

import yaml

from . import __version__
from .betabinom import BetaParams, update_posterior
from .constraints import ConstraintSet, full_order
from .engine import DegenerateCountError, McSettings, proportion_in_region
from .oracle import OracleError, exact_pairwise_order_prob, grid_order_prob
from .pipeline import (
    DataError,
    PlanError,
    apply_prior_knowledge,
    density_grid,
    ingest_trials,
    load_counts,
    load_plan,
    plan_fingerprint,
    read_trials_csv,
    run_analysis,
)
from .rng import RngStream

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_COMPUTE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _pair(kind):
    def parse(text: str):
        parts = text.split(",")
        if len(parts) != 2:
            raise argparse.ArgumentTypeError(f"expected two comma-separated values, got {text!r}")
        try:
            return tuple(kind(p) for p in parts)
        except ValueError:
            raise argparse.ArgumentTypeError(f"cannot parse {text!r}") from None

    return parse


def _common_flags() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--seed", type=_u64, help="override the Monte Carlo seed (unsigned 64-bit); recorded in the report")
    g.add_argument("--samples", type=_positive, help="override both prior and posterior sample counts (I = J)")
    g.add_argument("--output", type=Path, help="write the machine-readable result to this path")
    g.add_argument("--quiet", action="store_true", help="suppress the human-readable table and warnings")
    g.add_argument("--workers", type=_positive, default=1, help="threads for chunked sampling; results do not depend on it")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ordinalbf", description="Bayes factors for ordered binomial success probabilities.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    common = _common_flags()

    p = sub.add_parser("analyze", parents=[common], help="run an analysis plan on trial data or aggregated counts")
    p.add_argument("--plan", type=Path, required=True, help="analysis plan (YAML/JSON)")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--data", type=Path, help="trial-level CSV with header participant_id,measure,correct")
    src.add_argument("--counts", type=Path, help="aggregated counts document {measure: {successes, trials}}")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser(
        "replicate", parents=[common], help="analyse a replication using the original study's posterior as prior"
    )
    p.add_argument("--original-plan", type=Path, required=True, help="plan of the original study (priors before any data)")
    p.add_argument("--original-counts", type=Path, required=True, help="aggregated counts of the original study")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--replication-data", type=Path, help="trial-level CSV of the replication")
    src.add_argument("--replication-counts", type=Path, help="aggregated counts of the replication")
    p.set_defaults(func=cmd_replicate)

    p = sub.add_parser("oracle-check", parents=[common], help="compare a Monte Carlo region probability with an exact oracle")
    p.add_argument("--shape", type=_pair(float), action="append", metavar="A,B", help="Beta shapes of one parameter; repeat for K <= 3")
    p.add_argument("--relation", type=_pair(int), action="append", metavar="I,J", help="constraint theta[I] < theta[J]; repeat; default full order")
    p.add_argument("--config", type=Path, help="YAML with 'shapes: [[a, b], ...]' and optional 'relations: [[i, j], ...]'")
    p.add_argument("--resolution", type=_positive, default=500, help="grid resolution for K = 3 or multi-relation checks (default 500)")
    p.add_argument("--expected", type=float, help="compare against this probability instead of the oracle value")
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("densities", parents=[common], help="export prior/posterior density grids for plotting")
    p.add_argument("--plan", type=Path, required=True, help="analysis plan (YAML/JSON)")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--data", type=Path, help="trial-level CSV")
    src.add_argument("--counts", type=Path, help="aggregated counts document")
    p.add_argument("--resolution", type=int, default=512, help="grid points are i/resolution for i = 1..resolution-1 (default 512)")
    p.set_defaults(func=cmd_densities)

    p = sub.add_parser("validate-plan", parents=[common], help="check a plan document and print its fingerprint")
    p.add_argument("--plan", type=Path, required=True, help="analysis plan (YAML/JSON)")
    p.set_defaults(func=cmd_validate_plan)
    return parser


def _say(args, text: str = "") -> None:
    if not args.quiet:
        print(text)


def _warn(args, text: str) -> None:
    if not args.quiet:
        print(f"warning: {text}", file=sys.stderr)


def _effective_plan(plan, args):
    mc = plan.mc
    if args.seed is not None:
        mc = replace(mc, seed=args.seed)
    if args.samples is not None:
        mc = replace(mc, prior_samples=args.samples, posterior_samples=args.samples)
    return replace(plan, mc=mc)


def _observations(plan, data_path, counts_path):
    if data_path is not None:
        ingestion = ingest_trials(read_trials_csv(data_path), plan)
        return ingestion.counts, ingestion.excluded, ingestion.participants
    counts = load_counts(counts_path, plan)
    return counts, {}, None


def _write(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _emit_report(args, report) -> None:
    if args.output is not None:
        _write(args.output, report.to_json())
    _say(args, report.format_table().rstrip("\n"))
    for note in report.notes:
        _warn(args, note)


def cmd_analyze(args) -> int:
    plan = _effective_plan(load_plan(args.plan), args)
    counts, excluded, _ = _observations(plan, args.data, args.counts)
    report = run_analysis(plan, counts, workers=args.workers, excluded=excluded)
    _emit_report(args, report)
    return EXIT_OK


def cmd_replicate(args) -> int:
    original = load_plan(args.original_plan)
    original_counts = load_counts(args.original_counts, original)
    plan = _effective_plan(apply_prior_knowledge(original, original_counts), args)
    plan = replace(plan, name=(original.name + "-replication") if original.name else "replication")
    counts, excluded, participants = _observations(plan, args.replication_data, args.replication_counts)
    if participants == 0 or all(c.trials == 0 for c in counts):
        _warn(args, "replication data contains no usable trials")
    report = run_analysis(
        plan,
        counts,
        workers=args.workers,
        excluded=excluded,
        original_counts=original_counts,
        original_priors=original.priors,
    )
    _emit_report(args, report)
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    shapes = args.shape
    relations = args.relation
    if args.config is not None:
        doc = yaml.safe_load(args.config.read_text(encoding="utf-8")) or {}
        if not isinstance(doc, dict) or "shapes" not in doc:
            raise DataError(f"{args.config}: expected a mapping with 'shapes'")
        shapes = [tuple(s) for s in doc["shapes"]]
        relations = [tuple(r) for r in doc.get("relations", [])] or None
    if not shapes:
        raise UsageError("give --shape at least twice or --config")
    k = len(shapes)
    if not 2 <= k <= 3:
        raise UsageError(f"oracle-check supports 2 <= K <= 3 parameters, got K={k}")
    params = [BetaParams(a, b) for a, b in shapes]
    cs = ConstraintSet(k, tuple(relations)) if relations else full_order(k)

    if k == 2 and len(cs.relations) == 1:
        (i, j), = cs.relations
        reference = exact_pairwise_order_prob(params[i], params[j])
        oracle_method, oracle_tol = "quadrature", 1e-8
    else:
        reference = grid_order_prob(params, cs, args.resolution)
        coarse = grid_order_prob(params, cs, max(100, args.resolution // 2))
        oracle_method, oracle_tol = f"grid@{args.resolution}", abs(reference - coarse)
    if args.expected is not None:
        reference, oracle_method, oracle_tol = args.expected, "expected", 0.0

    n = args.samples or 1_000_000
    seed = 4491 if args.seed is None else args.seed
    p_hat, count = proportion_in_region(params, cs, n, RngStream(seed), workers=args.workers)
    p_ref = min(max(reference, 1.0 / n), 1.0 - 1.0 / n)
    se = math.sqrt(p_ref * (1.0 - p_ref) / n)
    diff = p_hat - reference
    passed = abs(diff) <= 3.0 * se + oracle_tol
    result = {
        "shapes": [[p.alpha, p.beta] for p in params],
        "relations": [list(r) for r in cs.relations],
        "samples": n,
        "seed": seed,
        "mc_estimate": p_hat,
        "mc_count": count,
        "reference": reference,
        "reference_method": oracle_method,
        "reference_tolerance": oracle_tol,
        "se": se,
        "difference": diff,
        "verdict": "PASS" if passed else "FAIL",
    }
    if args.output is not None:
        _write(args.output, json.dumps(result, indent=2) + "\n")
    _say(args, f"MC estimate   {p_hat:.6f}  ({count}/{n}, seed {seed})")
    _say(args, f"reference     {reference:.6f}  [{oracle_method}, tol {oracle_tol:.2g}]")
    _say(args, f"SE            {se:.3g}")
    _say(args, f"|difference|  {abs(diff):.3g}  vs 3*SE + tol = {3 * se + oracle_tol:.3g}")
    print(f"verdict: {result['verdict']}")
    return EXIT_OK if passed else EXIT_COMPUTE


def cmd_densities(args) -> int:
    plan = load_plan(args.plan)
    if args.resolution < 2:
        raise UsageError(f"--resolution must be >= 2, got {args.resolution}")
    counts, _, _ = _observations(plan, args.data, args.counts)
    posteriors = [update_posterior(p, c) for p, c in zip(plan.priors, counts)]
    rows = density_grid(plan.priors, posteriors, args.resolution, plan.measures)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["measure", "theta", "prior_density", "posterior_density"])
    for name, theta, prior_d, post_d in rows:
        writer.writerow([name, repr(theta), repr(prior_d), repr(post_d)])
    if args.output is not None:
        _write(args.output, buf.getvalue())
        _say(args, f"wrote {len(rows)} rows to {args.output}")
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def cmd_validate_plan(args) -> int:
    plan = load_plan(args.plan)
    _say(args, f"plan OK: {plan.name or args.plan}")
    _say(args, f"measures: {', '.join(plan.measures)}")
    if plan.restriction is not None:
        rels = ", ".join(f"{plan.measures[i]} < {plan.measures[j]}" for i, j in plan.restriction.relations)
        _say(args, f"restriction: {rels}")
    if plan.point_null is not None:
        _say(args, "point null: " + ", ".join(f"{m} = {v:g}" for m, v in zip(plan.measures, plan.point_null.values)))
    _say(args, f"target: {'BF_' + plan.target if plan.target else '(all)'}")
    print(plan_fingerprint(plan))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ordinalbf {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DegenerateCountError, OracleError) as exc:
        print(f"ordinalbf {args.command}: computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except (PlanError, DataError, ValueError, TypeError, OSError, yaml.YAMLError) as exc:
        print(f"ordinalbf {args.command}: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
