"""Study-level analysis: plans, trial ingestion, replication priors and reports.

Plan documents are YAML (JSON is accepted too)::

    schema: 1
    name: wyman-vyse-reanalysis
    measures: [psy, astro]
    priors:
      psy: {alpha: 1, beta: 1}
      astro: {alpha: 1, beta: 1}
    hypotheses:
      point_null: {psy: 0.5, astro: 0.5}
      restriction: [[astro, psy]]     # each pair [a, b] reads "a < b"
      target: r0
    mc: {prior_samples: 1000000, posterior_samples: 1000000, seed: 4491, chunk_size: 65536}
    exclusions:
      - {rule: require_all_measures}

``target`` names the headline comparison as numerator then denominator over
the hypotheses ``e`` (encompassing), ``r`` (restriction) and ``0`` (point
null). Comparisons between ``r`` and ``0`` are composed from the other two.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import yaml

from . import __version__
from .betabinom import BetaParams, BinomialObservation, log_beta_pdf, update_posterior
from .constraints import ConstraintSet, CycleError, PointNull, find_cycle
from .engine import (
    BayesFactorEstimate,
    McSettings,
    compose,
    encompassing_bf,
    savage_dickey_bf,
)

__all__ = [
    "SCHEMA_VERSION",
    "PlanError",
    "DataError",
    "ExclusionRule",
    "AnalysisPlan",
    "TrialRecord",
    "Ingestion",
    "StudyReport",
    "plan_from_dict",
    "plan_to_dict",
    "load_plan",
    "plan_fingerprint",
    "counts_from_dict",
    "load_counts",
    "parse_trials_csv",
    "read_trials_csv",
    "ingest_trials",
    "apply_prior_knowledge",
    "run_analysis",
    "density_grid",
    "evidence_label",
]

SCHEMA_VERSION = 1
HYPOTHESES = ("e", "r", "0")
EXCLUSION_KINDS = ("require_all_measures", "require_measures", "exclude_participants")


class PlanError(ValueError):
    """An analysis plan is malformed or internally inconsistent."""


class DataError(ValueError):
    """Trial or count data cannot be used with the plan."""


@dataclass(frozen=True)
class ExclusionRule:
    """A declarative per-participant exclusion predicate.

    ``require_all_measures`` drops participants lacking a trial on any plan
    measure, ``require_measures`` only checks the listed ones, and
    ``exclude_participants`` drops the listed ids.
    """

    rule: str
    measures: tuple[str, ...] = ()
    participants: tuple[str, ...] = ()

    def __post_init__(self):
        if self.rule not in EXCLUSION_KINDS:
            raise PlanError(f"unknown exclusion rule {self.rule!r}; expected one of {', '.join(EXCLUSION_KINDS)}")
        object.__setattr__(self, "measures", tuple(self.measures))
        object.__setattr__(self, "participants", tuple(str(p) for p in self.participants))

    def excludes(self, participant_id: str, observed: set[str], plan_measures: Sequence[str]) -> bool:
        if self.rule == "require_all_measures":
            return not set(plan_measures) <= observed
        if self.rule == "require_measures":
            return not set(self.measures) <= observed
        return participant_id in self.participants

    def describe(self) -> str:
        if self.rule == "require_measures":
            return f"require_measures({', '.join(self.measures)})"
        if self.rule == "exclude_participants":
            return "exclude_participants"
        return self.rule

    def to_dict(self) -> dict:
        out: dict = {"rule": self.rule}
        if self.measures:
            out["measures"] = list(self.measures)
        if self.participants:
            out["participants"] = list(self.participants)
        return out


@dataclass(frozen=True)
class AnalysisPlan:
    measures: tuple[str, ...]
    priors: tuple[BetaParams, ...]
    mc: McSettings
    point_null: PointNull | None = None
    restriction: ConstraintSet | None = None
    target: str | None = None
    exclusions: tuple[ExclusionRule, ...] = ()
    name: str = ""

    def __post_init__(self):
        k = len(self.measures)
        if k < 1:
            raise PlanError("a plan needs at least one measure")
        if len(set(self.measures)) != k:
            raise PlanError(f"measure names must be unique, got {list(self.measures)}")
        if len(self.priors) != k:
            raise PlanError(f"{len(self.priors)} priors for {k} measures")
        if self.point_null is not None and self.point_null.k != k:
            raise PlanError(f"point null has {self.point_null.k} values for {k} measures")
        if self.restriction is not None and self.restriction.k != k:
            raise PlanError(f"restriction is over {self.restriction.k} parameters for {k} measures")
        if self.point_null is None and self.restriction is None:
            raise PlanError("a plan must declare a point null, a restriction, or both")
        if self.target is not None:
            _check_target(self.target, self.point_null is not None, self.restriction is not None)
        for rule in self.exclusions:
            unknown = set(rule.measures) - set(self.measures)
            if unknown:
                raise PlanError(f"exclusion rule {rule.describe()} names unknown measures {sorted(unknown)}")

    @property
    def k(self) -> int:
        return len(self.measures)

    def index(self, measure: str) -> int:
        try:
            return self.measures.index(measure)
        except ValueError:
            raise PlanError(f"unknown measure {measure!r}; plan measures are {list(self.measures)}") from None


def _check_target(target: str, has_null: bool, has_restriction: bool) -> None:
    if len(target) != 2 or target[0] not in HYPOTHESES or target[1] not in HYPOTHESES or target[0] == target[1]:
        raise PlanError(f"target must be two distinct letters from 'e', 'r', '0' (e.g. 'r0'), got {target!r}")
    needs_null = "0" in target
    needs_restriction = "r" in target
    if needs_null and not has_null:
        raise PlanError(f"target BF_{target} needs a point null hypothesis")
    if needs_restriction and not has_restriction:
        raise PlanError(f"target BF_{target} needs a restriction")


@dataclass(frozen=True)
class TrialRecord:
    participant_id: str
    measure: str
    correct: bool
    line: int | None = None


@dataclass(frozen=True)
class Ingestion:
    """Per-measure counts plus the participants dropped by exclusion rules."""

    counts: tuple[BinomialObservation, ...]
    excluded: dict[str, tuple[str, ...]] = field(default_factory=dict)
    participants: int = 0


# --------------------------------------------------------------------------
# Plan (de)serialisation
# --------------------------------------------------------------------------


def _require(doc: dict, key: str, where: str = "plan"):
    if key not in doc:
        raise PlanError(f"{where} is missing required field {key!r}")
    return doc[key]


def _as_int(value, name: str) -> int:
    if isinstance(value, bool):
        raise PlanError(f"{name} must be an integer, got {value!r}")
    if isinstance(value, float) and value.is_integer():
        value = int(value)
    if not isinstance(value, int):
        raise PlanError(f"{name} must be an integer, got {value!r}")
    return value


def plan_from_dict(doc: dict) -> AnalysisPlan:
    """Build and validate a plan from its document form."""
    if not isinstance(doc, dict):
        raise PlanError("plan document must be a mapping")
    schema = _require(doc, "schema")
    if schema != SCHEMA_VERSION:
        raise PlanError(f"unsupported plan schema {schema!r}; this version reads schema {SCHEMA_VERSION}")
    measures = _require(doc, "measures")
    if not isinstance(measures, list) or not all(isinstance(m, str) for m in measures):
        raise PlanError("measures must be a list of names")
    measures = tuple(measures)

    prior_doc = _require(doc, "priors")
    if not isinstance(prior_doc, dict):
        raise PlanError("priors must map each measure to {alpha, beta}")
    missing = [m for m in measures if m not in prior_doc]
    extra = [m for m in prior_doc if m not in measures]
    if missing or extra:
        raise PlanError(f"priors do not match measures (missing {missing}, unknown {extra})")
    try:
        priors = tuple(
            BetaParams(_require(prior_doc[m], "alpha", f"prior {m}"), _require(prior_doc[m], "beta", f"prior {m}"))
            for m in measures
        )
    except (TypeError, ValueError) as exc:
        raise PlanError(f"invalid prior: {exc}") from exc

    hyp = _require(doc, "hypotheses")
    if not isinstance(hyp, dict):
        raise PlanError("hypotheses must be a mapping")
    point_null = None
    if hyp.get("point_null") is not None:
        null_doc = hyp["point_null"]
        if not isinstance(null_doc, dict) or set(null_doc) != set(measures):
            raise PlanError("point_null must give a value for every measure")
        try:
            point_null = PointNull(len(measures), tuple(null_doc[m] for m in measures))
        except (TypeError, ValueError) as exc:
            raise PlanError(f"invalid point null: {exc}") from exc

    restriction = None
    if hyp.get("restriction") is not None:
        pairs = hyp["restriction"]
        if not isinstance(pairs, list):
            raise PlanError("restriction must be a list of [lesser, greater] measure-name pairs")
        relations = []
        for pair in pairs:
            if not isinstance(pair, list) or len(pair) != 2:
                raise PlanError(f"restriction entry {pair!r} is not a [lesser, greater] pair")
            for name in pair:
                if name not in measures:
                    raise PlanError(f"restriction names unknown measure {name!r}")
            relations.append((measures.index(pair[0]), measures.index(pair[1])))
        cycle = find_cycle(len(measures), relations)
        if cycle is not None:
            raise CycleError(cycle, measures)
        try:
            restriction = ConstraintSet(len(measures), tuple(relations))
        except CycleError:
            raise
        except ValueError as exc:
            raise PlanError(f"invalid restriction: {exc}") from exc

    mc_doc = _require(doc, "mc")
    if not isinstance(mc_doc, dict):
        raise PlanError("mc must be a mapping")
    try:
        mc = McSettings(
            prior_samples=_as_int(_require(mc_doc, "prior_samples", "mc"), "prior_samples"),
            posterior_samples=_as_int(_require(mc_doc, "posterior_samples", "mc"), "posterior_samples"),
            seed=_as_int(_require(mc_doc, "seed", "mc"), "seed"),
            chunk_size=_as_int(mc_doc.get("chunk_size", McSettings.chunk_size), "chunk_size"),
        )
    except ValueError as exc:
        raise PlanError(f"invalid mc settings: {exc}") from exc

    exclusions = []
    for entry in doc.get("exclusions") or []:
        if not isinstance(entry, dict) or "rule" not in entry:
            raise PlanError(f"exclusion entry {entry!r} must be a mapping with a 'rule' field")
        exclusions.append(
            ExclusionRule(entry["rule"], tuple(entry.get("measures", ())), tuple(entry.get("participants", ())))
        )

    return AnalysisPlan(
        measures=measures,
        priors=priors,
        mc=mc,
        point_null=point_null,
        restriction=restriction,
        target=hyp.get("target"),
        exclusions=tuple(exclusions),
        name=str(doc.get("name", "")),
    )


def plan_to_dict(plan: AnalysisPlan) -> dict:
    """Canonical document form; ``plan_from_dict(plan_to_dict(p)) == p``."""
    hyp: dict = {}
    if plan.point_null is not None:
        hyp["point_null"] = {m: v for m, v in zip(plan.measures, plan.point_null.values)}
    if plan.restriction is not None:
        hyp["restriction"] = [[plan.measures[i], plan.measures[j]] for i, j in plan.restriction.relations]
    if plan.target is not None:
        hyp["target"] = plan.target
    return {
        "schema": SCHEMA_VERSION,
        "name": plan.name,
        "measures": list(plan.measures),
        "priors": {m: {"alpha": p.alpha, "beta": p.beta} for m, p in zip(plan.measures, plan.priors)},
        "hypotheses": hyp,
        "mc": {
            "prior_samples": plan.mc.prior_samples,
            "posterior_samples": plan.mc.posterior_samples,
            "seed": plan.mc.seed,
            "chunk_size": plan.mc.chunk_size,
        },
        "exclusions": [rule.to_dict() for rule in plan.exclusions],
    }


def plan_fingerprint(plan: AnalysisPlan) -> str:
    """SHA-256 over the canonical JSON serialisation of the plan."""
    canonical = json.dumps(plan_to_dict(plan), sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _load_document(path) -> object:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise DataError(f"{path}: not a valid YAML/JSON document: {exc}") from exc


def load_plan(path) -> AnalysisPlan:
    doc = _load_document(path)
    try:
        return plan_from_dict(doc)
    except PlanError as exc:
        raise PlanError(f"{path}: {exc}") from exc


# --------------------------------------------------------------------------
# Data input
# --------------------------------------------------------------------------


def counts_from_dict(doc: dict, plan: AnalysisPlan) -> tuple[BinomialObservation, ...]:
    """Aggregated counts ``{measure: {successes, trials}}`` in plan order."""
    if not isinstance(doc, dict):
        raise DataError("counts document must map each measure to {successes, trials}")
    missing = [m for m in plan.measures if m not in doc]
    extra = [m for m in doc if m not in plan.measures]
    if missing or extra:
        raise DataError(f"counts do not match plan measures (missing {missing}, unknown {extra})")
    out = []
    for m in plan.measures:
        entry = doc[m]
        if not isinstance(entry, dict) or "successes" not in entry or "trials" not in entry:
            raise DataError(f"counts for {m!r} need 'successes' and 'trials'")
        try:
            out.append(BinomialObservation(entry["successes"], entry["trials"]))
        except (TypeError, ValueError) as exc:
            raise DataError(f"counts for {m!r}: {exc}") from exc
    return tuple(out)


def load_counts(path, plan: AnalysisPlan) -> tuple[BinomialObservation, ...]:
    try:
        return counts_from_dict(_load_document(path), plan)
    except DataError as exc:
        raise DataError(f"{path}: {exc}") from exc


_TRUE = {"1", "true"}
_FALSE = {"0", "false"}
TRIAL_HEADER = ["participant_id", "measure", "correct"]


def parse_trials_csv(text: str, source: str = "<trials>") -> list[TrialRecord]:
    """Parse ``participant_id,measure,correct`` rows; ``correct`` is 0/1/true/false."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise DataError(f"{source}: empty file, expected header {','.join(TRIAL_HEADER)}") from None
    if [h.strip() for h in header] != TRIAL_HEADER:
        raise DataError(f"{source}:1: expected header {','.join(TRIAL_HEADER)}, got {','.join(header)}")
    records = []
    for row in reader:
        line = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 3:
            raise DataError(f"{source}:{line}: expected 3 fields, got {len(row)}")
        pid, measure, correct = (cell.strip() for cell in row)
        if not pid or not measure:
            raise DataError(f"{source}:{line}: empty participant_id or measure")
        flag = correct.lower()
        if flag in _TRUE:
            value = True
        elif flag in _FALSE:
            value = False
        else:
            raise DataError(f"{source}:{line}: correct must be 0, 1, true or false, got {correct!r}")
        records.append(TrialRecord(pid, measure, value, line))
    return records


def read_trials_csv(path) -> list[TrialRecord]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise DataError(f"{path}: not UTF-8 text: {exc}") from exc
    return parse_trials_csv(text, str(path))


def ingest_trials(records: Iterable[TrialRecord], plan: AnalysisPlan) -> Ingestion:
    """Aggregate trial records into per-measure counts after exclusions.

    A participant is dropped when any exclusion rule fires; every firing
    rule is listed, so the result does not depend on rule order.
    """
    by_participant: dict[str, dict[str, bool]] = {}
    for rec in records:
        where = f"line {rec.line}" if rec.line is not None else f"participant {rec.participant_id!r}"
        if rec.measure not in plan.measures:
            raise DataError(f"{where}: unknown measure {rec.measure!r}; plan measures are {list(plan.measures)}")
        trials = by_participant.setdefault(rec.participant_id, {})
        if rec.measure in trials:
            raise DataError(f"{where}: duplicate trial for participant {rec.participant_id!r}, measure {rec.measure!r}")
        trials[rec.measure] = rec.correct

    excluded: dict[str, tuple[str, ...]] = {}
    successes = dict.fromkeys(plan.measures, 0)
    totals = dict.fromkeys(plan.measures, 0)
    for pid in sorted(by_participant):
        trials = by_participant[pid]
        fired = sorted(
            {rule.describe() for rule in plan.exclusions if rule.excludes(pid, set(trials), plan.measures)}
        )
        if fired:
            excluded[pid] = tuple(fired)
            continue
        for measure, correct in trials.items():
            totals[measure] += 1
            successes[measure] += int(correct)

    counts = tuple(BinomialObservation(successes[m], totals[m]) for m in plan.measures)
    return Ingestion(counts=counts, excluded=excluded, participants=len(by_participant))


def apply_prior_knowledge(plan: AnalysisPlan, original_counts: Sequence[BinomialObservation]) -> AnalysisPlan:
    """Replace each prior by its posterior given the original study's counts."""
    if len(original_counts) != plan.k:
        raise DataError(f"original study has {len(original_counts)} counts for {plan.k} plan measures")
    priors = tuple(update_posterior(p, c) for p, c in zip(plan.priors, original_counts))
    return replace(plan, priors=priors)


# --------------------------------------------------------------------------
# Analysis and reporting
# --------------------------------------------------------------------------

_EVIDENCE_BANDS = ((100.0, "extreme"), (30.0, "very strong"), (10.0, "strong"), (3.0, "moderate"), (1.0, "anecdotal"))


def evidence_label(estimate: BayesFactorEstimate) -> str:
    """Qualitative strength on the Jeffreys-style scale (Lee & Wagenmakers bands)."""
    num, den = estimate.direction
    log_bf = estimate.log_bf
    if log_bf == 0.0:
        return "no evidence either way"
    favoured = num if log_bf > 0 else den
    strength = abs(log_bf)
    for threshold, word in _EVIDENCE_BANDS:
        if strength >= math.log(threshold):
            return f"{word} evidence for H_{favoured}"
    return f"anecdotal evidence for H_{favoured}"


@dataclass(frozen=True)
class StudyReport:
    plan: AnalysisPlan
    counts: tuple[BinomialObservation, ...]
    posteriors: tuple[BetaParams, ...]
    estimates: tuple[BayesFactorEstimate, ...]
    fingerprint: str
    target: str | None = None
    excluded: dict[str, tuple[str, ...]] = field(default_factory=dict)
    original_counts: tuple[BinomialObservation, ...] | None = None
    original_priors: tuple[BetaParams, ...] | None = None
    notes: tuple[str, ...] = ()
    version: str = __version__

    @property
    def seed(self) -> int:
        return self.plan.mc.seed

    @property
    def priors(self) -> tuple[BetaParams, ...]:
        return self.plan.priors

    def estimate(self, label: str) -> BayesFactorEstimate:
        """Look up an estimate by label, e.g. ``"BF_r0"`` or ``"r0"``."""
        label = label if label.startswith("BF_") else f"BF_{label}"
        for est in self.estimates:
            if est.label == label:
                return est
        raise KeyError(f"report has no {label}; available: {[e.label for e in self.estimates]}")

    def to_dict(self) -> dict:
        def shapes(params):
            return {m: {"alpha": p.alpha, "beta": p.beta} for m, p in zip(self.plan.measures, params)}

        def counts(obs):
            return {m: {"successes": c.successes, "trials": c.trials} for m, c in zip(self.plan.measures, obs)}

        doc = {
            "software": {"name": "ordinalbf", "version": self.version},
            "plan_fingerprint": self.fingerprint,
            "seed": self.seed,
            "plan": plan_to_dict(self.plan),
            "counts": counts(self.counts),
            "priors": shapes(self.plan.priors),
            "posteriors": shapes(self.posteriors),
            "target": None if self.target is None else f"BF_{self.target}",
            "bayes_factors": [_estimate_to_dict(e) for e in self.estimates],
            "excluded_participants": {pid: list(rules) for pid, rules in self.excluded.items()},
            "notes": list(self.notes),
        }
        if self.original_counts is not None:
            doc["original_study"] = {
                "counts": counts(self.original_counts),
                "priors": shapes(self.original_priors),
            }
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    def format_table(self) -> str:
        lines = []
        title = self.plan.name or "analysis"
        lines.append(f"{title}  [{self.fingerprint[:19]}]  seed={self.seed}")
        lines.append("")
        lines.append(f"{'measure':<12} {'x/n':>9} {'prior':>16} {'posterior':>18}")
        for m, c, pr, po in zip(self.plan.measures, self.counts, self.plan.priors, self.posteriors):
            lines.append(f"{m:<12} {f'{c.successes}/{c.trials}':>9} {str(pr):>16} {str(po):>18}")
        lines.append("")
        lines.append(f"{'':2}{'BF':<7} {'value':>12} {'log BF':>11} {'MC SE(log)':>11}  {'method':<15} evidence")
        for est in self.estimates:
            marker = "*" if self.target is not None and est.label == f"BF_{self.target}" else " "
            value = "> 1.8e308" if est.overflow else f"{est.bf:.6g}"
            se = "exact" if est.exact else f"{est.mc_log_se:.3g}"
            lines.append(
                f"{marker} {est.label:<7} {value:>12} {est.log_bf:>11.5f} {se:>11}  {est.method:<15} {evidence_label(est)}"
            )
        if self.excluded:
            lines.append("")
            lines.append(f"excluded participants: {len(self.excluded)}")
        for note in self.notes:
            lines.append(f"note: {note}")
        return "\n".join(lines) + "\n"


def _estimate_to_dict(est: BayesFactorEstimate) -> dict:
    out = {
        "label": est.label,
        "numerator": f"H_{est.direction[0]}",
        "denominator": f"H_{est.direction[1]}",
        "bf": None if est.overflow else est.bf,
        "bf_exceeds_linear_range": est.overflow,
        "log_bf": est.log_bf,
        "mc_log_se": "exact" if est.exact else est.mc_log_se,
        "method": est.method,
        "evidence": evidence_label(est),
    }
    if est.method == "encompassing_mc":
        out.update(
            p_prior_hat=est.p_prior_hat,
            p_post_hat=est.p_post_hat,
            prior_count=est.prior_count,
            posterior_count=est.posterior_count,
            prior_samples=est.prior_samples,
            posterior_samples=est.posterior_samples,
            seed=est.seed,
        )
    return out


def run_analysis(
    plan: AnalysisPlan,
    counts: Sequence[BinomialObservation],
    workers: int = 1,
    excluded: dict[str, tuple[str, ...]] | None = None,
    original_counts: Sequence[BinomialObservation] | None = None,
    original_priors: Sequence[BetaParams] | None = None,
) -> StudyReport:
    """Compute every Bayes factor the plan's hypotheses allow.

    A point null yields the Savage-Dickey pair ``BF_e0``/``BF_0e``; a
    restriction yields the encompassing pair ``BF_er``/``BF_re``; with both,
    ``BF_0r = BF_0e * BF_er`` and its reciprocal are added.
    """
    counts = tuple(counts)
    if len(counts) != plan.k:
        raise DataError(f"{len(counts)} counts for {plan.k} plan measures")
    posteriors = tuple(update_posterior(p, c) for p, c in zip(plan.priors, counts))

    notes = []
    if all(c.trials == 0 for c in counts):
        notes.append("no trials observed: posteriors equal priors, so every Bayes factor is 1 up to Monte Carlo error")

    estimates = []
    bf_e0 = bf_er = None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if plan.point_null is not None:
            bf_e0 = savage_dickey_bf(plan.priors, counts, plan.point_null)
            estimates += [bf_e0, bf_e0.inverse()]
        if plan.restriction is not None:
            bf_er = encompassing_bf(plan.priors, counts, plan.restriction, plan.mc, workers=workers)
            estimates += [bf_er, bf_er.inverse()]
    notes.extend(str(w.message) for w in caught)
    if bf_e0 is not None and bf_er is not None:
        bf_0r = compose(bf_e0.inverse(), bf_er)
        estimates += [bf_0r, bf_0r.inverse()]

    return StudyReport(
        plan=plan,
        counts=counts,
        posteriors=posteriors,
        estimates=tuple(estimates),
        fingerprint=plan_fingerprint(plan),
        target=plan.target,
        excluded=dict(excluded or {}),
        original_counts=None if original_counts is None else tuple(original_counts),
        original_priors=None if original_priors is None else tuple(original_priors),
        notes=tuple(notes),
    )


def density_grid(
    priors: Sequence[BetaParams],
    posteriors: Sequence[BetaParams],
    resolution: int,
    measures: Sequence[str] | None = None,
) -> list[tuple[str, float, float, float]]:
    """Rows ``(measure, theta, prior_density, posterior_density)``.

    ``theta`` runs over ``i / resolution`` for ``i = 1 .. resolution - 1``, so
    the endpoints 0 and 1 are never emitted.
    """
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    if len(priors) != len(posteriors):
        raise ValueError(f"{len(priors)} priors but {len(posteriors)} posteriors")
    if measures is None:
        measures = [f"theta{k}" for k in range(len(priors))]
    thetas = [i / resolution for i in range(1, resolution)]
    rows = []
    for name, prior, post in zip(measures, priors, posteriors):
        prior_d = [math.exp(v) for v in log_beta_pdf(prior, thetas)]
        post_d = [math.exp(v) for v in log_beta_pdf(post, thetas)]
        rows.extend((name, t, a, b) for t, a, b in zip(thetas, prior_d, post_d))
    return rows
