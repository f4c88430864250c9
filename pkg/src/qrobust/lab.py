"""Monte Carlo experiment harness.

Experiments are described declaratively (JSON-friendly dictionaries) and
produce a ResultTable: rows of (experiment, member, n, statistic, value,
standard error, seed, family descriptor) plus a JSON manifest carrying the
config echo and hash, tool version, reference-law accuracy notes, and the
wall-clock timestamp. The CSV is bit-identical across reruns of the same
config (floats serialize at 17 significant digits; the timestamp lives in
the manifest only, which is what makes byte-identical reruns possible).

Seeding: replicate r of member m at sample size n draws its own generator
from the hashed key (master_seed, stream, m, n, r), so replicates and
members can execute concurrently (thread count via QROBUST_THREADS,
default: available parallelism) with no shared state; rows are merged in
deterministic sorted order regardless of completion order.

Reference marginals: the stationary law of a linear process with Gaussian
(or degenerate) noise is known in closed form and used directly; other
noise kinds fall back to a million-draw empirical reference per member
(seeded separately, accuracy note recorded in the manifest).

Experiment kinds:

* ``ugc``: per class member and sample size, the frequency of
  d(empirical law of the path, member marginal) >= delta, plus the supremum
  across the class; the built-in check asserts the sup decays monotonically
  in n within two standard errors.
* ``robustness``: two members P and Q; per n, the plug-in estimator laws
  under both (as finitely supported laws, thinned to at most 2000 atoms by
  quantile-midpoint strata) and the Prohorov / Lévy / Kolmogorov distances
  between them, plus a same-law noise floor from an independent run of P.
* ``rio-check``: empirical exceedance of the maximal partial-sum deviation
  against the maximal-inequality bound on an x grid.
* ``lln-check``: empirical tail frequency of the gauge average against the
  truncation bound.
* ``bracket-check``: builds the bracket family per member, validates its
  invariants, and tests the sample-wise empirical-process domination.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .distributions import (
    Distribution,
    EmpiricalMeasure,
    FoldedDistribution,
    absolute_law,
    distribution_from_config,
    quantile_transform,
)
from .errors import ConfigError, NotIntegrableError, QrobustError
from .functionals import Functional, parse_functional, plugin
from .metrics import (
    DenseFamily,
    GaugeFunction,
    kolmogorov_phi,
    levy,
    parse_gauge,
    psi_levy,
    psi_vague,
    vague_distance,
    weighted_gap_sup,
)
from .processes import LinearProcessSpec, default_s_max, mixing_profile, simulate_linear, spec_from_config
from .prohorov import FiniteLaw, prohorov_distance
from .theory import build_brackets, lln_tail_bound, rio_bound

__all__ = [
    "ExperimentConfig",
    "ResultTable",
    "MetricHandle",
    "parse_metric",
    "arma_class_members",
    "run_ugc",
    "run_robustness",
    "run_rio_check",
    "run_lln_check",
    "run_bracket_check",
    "run_experiment",
]

SCHEMA_VERSION = "qrobust-result-v1"
REFERENCE_SAMPLE_SIZE = 1_000_000
ESTIMATOR_LAW_CAP = 2_000
_SE_BATCHES = 10

# stream tags feeding the hashed seed keys
_STREAM_MAIN = 0
_STREAM_REFERENCE = 1
_STREAM_NOISE_FLOOR = 2
_STREAM_COUPLING = 3

_EXPERIMENT_KINDS = ("ugc", "robustness", "rio-check", "lln-check", "bracket-check")


def _rng_for(master_seed: int, stream: int, member: int, n: int, replicate: int) -> np.random.Generator:
    return np.random.default_rng(
        np.random.SeedSequence([int(master_seed), stream, member, n, replicate])
    )


def _thread_count() -> int:
    env = os.environ.get("QROBUST_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


def arma_class_members(c: float, size: int, margin: float = 0.01) -> list[tuple[float, float]]:
    """Deterministic low-discrepancy sample of (phi1, theta1) pairs from the
    square [-c, c]^2, skipping the degenerate diagonal phi1 = -theta1 with
    the given margin (Kronecker sequence from the plastic number)."""
    if not 0.0 < c < 1.0:
        raise ConfigError("arma-class needs c strictly inside (0, 1)")
    if size < 1:
        raise ConfigError("arma-class needs a positive grid size")
    g = 1.32471795724474602596
    a1, a2 = 1.0 / g, 1.0 / g**2
    members: list[tuple[float, float]] = []
    i = 0
    while len(members) < size:
        i += 1
        phi1 = (2.0 * ((0.5 + a1 * i) % 1.0) - 1.0) * c
        theta1 = (2.0 * ((0.5 + a2 * i) % 1.0) - 1.0) * c
        if abs(phi1 + theta1) < margin:
            continue
        members.append((phi1, theta1))
    return members


@dataclass
class ExperimentConfig:
    """Declarative experiment description; see the README for the JSON
    schema. ``process_class`` is either a list of process configs or an
    arma-class descriptor {"kind": "arma-class", "c": ..., "size": ...}."""

    kind: str
    process_class: object
    metric: str = "kolmogorov-phi:one"
    functional: str = "mean"
    n_grid: tuple[int, ...] = (256,)
    delta: float = 0.1
    eps: float = 0.1
    replicates: int = 100
    master_seed: int = 0
    x_grid: tuple[float, ...] = ()
    k_trunc: float | None = None

    def __post_init__(self):
        if self.kind not in _EXPERIMENT_KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}")
        if self.replicates < 1:
            raise ConfigError("replicates must be >= 1")
        self.n_grid = tuple(int(n) for n in self.n_grid)
        if not self.n_grid or any(n < 1 for n in self.n_grid):
            raise ConfigError("n_grid must hold positive sample sizes")
        if any(b <= a for a, b in zip(self.n_grid, self.n_grid[1:])):
            raise ConfigError("n_grid must be strictly increasing")
        self.x_grid = tuple(float(x) for x in self.x_grid)
        self.members()  # validates the class description

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        if not isinstance(raw, dict):
            raise ConfigError("experiment config must be a JSON object")
        known = {
            "kind", "process_class", "metric", "functional", "n_grid", "delta",
            "eps", "replicates", "master_seed", "x_grid", "k_trunc",
        }
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        missing = {"kind", "process_class"} - set(raw)
        if missing:
            raise ConfigError(f"config misses required fields: {sorted(missing)}")
        kwargs = dict(raw)
        for grid_key in ("n_grid", "x_grid"):
            if grid_key in kwargs:
                kwargs[grid_key] = tuple(kwargs[grid_key])
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        return cls.from_dict(raw)

    def members(self) -> list[tuple[str, LinearProcessSpec]]:
        """(member id, process spec) pairs of the class, in deterministic
        order."""
        pc = self.process_class
        try:
            if isinstance(pc, dict) and pc.get("kind") == "arma-class":
                noise = distribution_from_config(
                    pc.get("noise", {"kind": "gaussian", "mean": 0.0, "sd": 1.0})
                )
                pairs = arma_class_members(float(pc["c"]), int(pc["size"]),
                                           float(pc.get("margin", 0.01)))
                specs = [LinearProcessSpec.arma([p], [t], noise) for p, t in pairs]
            elif isinstance(pc, (list, tuple)) and pc:
                specs = [spec_from_config(item) for item in pc]
            else:
                raise ConfigError("process_class must be a nonempty list or an arma-class")
        except QrobustError:
            raise
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"bad process class: {exc}") from exc
        return [(f"m{i:02d}", spec) for i, spec in enumerate(specs)]

    def canonical_dict(self) -> dict:
        return {
            "kind": self.kind,
            "process_class": self.process_class,
            "metric": self.metric,
            "functional": self.functional,
            "n_grid": list(self.n_grid),
            "delta": self.delta,
            "eps": self.eps,
            "replicates": self.replicates,
            "master_seed": self.master_seed,
            "x_grid": list(self.x_grid),
            "k_trunc": self.k_trunc,
        }

    def sha256(self) -> str:
        text = json.dumps(self.canonical_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()


# ---------------------------------------------------------------------------
# metric handles
# ---------------------------------------------------------------------------


@dataclass
class _PreparedReference:
    law: Distribution
    psi_moment: float | None = None
    vague_integrals: np.ndarray | None = None


class MetricHandle:
    """A metric descriptor bound to its gauge and test family, with an exact
    indicator shortcut for threshold queries (the Lévy part is resolved only
    when the Kolmogorov domination and the moment gap cannot already decide
    the comparison; both prunings are exact inequalities)."""

    def __init__(self, kind: str, gauge: GaugeFunction | None, family: DenseFamily | None):
        self.kind = kind
        self.gauge = gauge
        self.family = family

    @property
    def descriptor(self) -> str:
        parts = [self.kind]
        if self.gauge is not None:
            parts.append(self.gauge.descriptor)
        name = ":".join(parts)
        if self.family is not None:
            name += "|" + self.family.descriptor
        return name

    def value(self, mu: Distribution, nu: Distribution) -> float:
        if self.kind == "kolmogorov-phi":
            return kolmogorov_phi(mu, nu, self.gauge)
        if self.kind == "levy":
            return levy(mu, nu)
        if self.kind == "psi-vague":
            return psi_vague(mu, nu, self.gauge, self.family)
        return psi_levy(mu, nu, self.gauge)

    # -- prepared-reference path (hot loop of the ugc experiment) ---------

    def prepare(self, ref: Distribution) -> _PreparedReference:
        prep = _PreparedReference(ref)
        if self.kind in ("psi-vague", "psi-levy"):
            prep.psi_moment = self.gauge.moment(ref)
            if not math.isfinite(prep.psi_moment):
                raise NotIntegrableError("reference marginal has infinite psi-moment")
        if self.kind == "psi-vague":
            vals = []
            for k in range(1, self.family.k_max + 1):
                fn, _, kinks = self.family.function(k)
                vals.append(ref.integral(fn, breakpoints=list(kinks)))
            prep.vague_integrals = np.asarray(vals)
        return prep

    def indicator(self, emp: EmpiricalMeasure, prep: _PreparedReference, delta: float) -> int:
        ref = prep.law
        if self.kind == "kolmogorov-phi":
            return int(kolmogorov_phi(emp, ref, self.gauge) >= delta)
        if self.kind == "levy":
            if _kolmogorov_one(emp, ref) < delta:
                return 0
            return int(levy(emp, ref) >= delta)
        if self.kind == "psi-levy":
            gap = abs(self.gauge.moment(emp) - prep.psi_moment)
            if gap >= delta:
                return 1
            if gap + _kolmogorov_one(emp, ref) < delta:
                return 0
            return int(gap + levy(emp, ref) >= delta)
        # psi-vague: the vague series against the prepared reference integrals
        gap = abs(self.gauge.moment(emp) - prep.psi_moment)
        total = gap
        for k in range(1, self.family.k_max + 1):
            fn, _, kinks = self.family.function(k)
            g = abs(emp.integral(fn, breakpoints=list(kinks)) - prep.vague_integrals[k - 1])
            total += 2.0 ** (-k) * min(1.0, g)
        return int(total >= delta)


_ONE = parse_gauge("one")


def _kolmogorov_one(mu: Distribution, nu: Distribution) -> float:
    return kolmogorov_phi(mu, nu, _ONE)


def parse_metric(descriptor: str) -> MetricHandle:
    """Metric handle from its config descriptor: "kolmogorov-phi:GAUGE",
    "levy", "psi-vague:GAUGE", "psi-levy:GAUGE"."""
    kind, _, gauge_part = descriptor.partition(":")
    if kind == "levy":
        if gauge_part:
            raise ConfigError("the Lévy metric takes no gauge")
        return MetricHandle("levy", None, None)
    if kind not in ("kolmogorov-phi", "psi-vague", "psi-levy"):
        raise ConfigError(f"unknown metric kind {kind!r}")
    if not gauge_part:
        raise ConfigError(f"metric {kind!r} needs a gauge, e.g. {kind}:one")
    try:
        gauge = parse_gauge(gauge_part)
    except QrobustError as exc:
        raise ConfigError(str(exc)) from exc
    if kind == "kolmogorov-phi" and not gauge.is_u_shaped:
        raise ConfigError(f"{gauge_part!r} is not u-shaped; kolmogorov-phi needs one/power gauges")
    family = DenseFamily(40) if kind == "psi-vague" else None
    return MetricHandle(kind, gauge, family)


# ---------------------------------------------------------------------------
# result table
# ---------------------------------------------------------------------------


@dataclass
class ResultTable:
    """Persisted experiment output: deterministic rows plus manifest data."""

    experiment: str
    master_seed: int
    family: str
    config: ExperimentConfig
    rows: list[tuple] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)
    created_at: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds")
    )

    def add(self, member: str, n: int, statistic: str, value: float,
            std_error: float = 0.0) -> None:
        self.rows.append((self.experiment, member, int(n), statistic,
                          float(value), float(std_error), self.master_seed, self.family))

    def get(self, member: str, n: int, statistic: str) -> tuple[float, float]:
        for row in self.rows:
            if row[1] == member and row[2] == int(n) and row[3] == statistic:
                return row[4], row[5]
        raise KeyError((member, n, statistic))

    def sorted_rows(self) -> list[tuple]:
        return sorted(self.rows, key=lambda r: (r[1], r[2], r[3]))

    def to_csv_text(self) -> str:
        lines = ["experiment,member,n,statistic,value,std_error,seed,family"]
        for exp, member, n, stat, value, se, seed, family in self.sorted_rows():
            lines.append(
                f"{exp},{member},{n},{stat},{value:.17g},{se:.17g},{seed},{family}"
            )
        return "\n".join(lines) + "\n"

    def manifest_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "tool_version": __version__,
            "experiment": self.experiment,
            "config": self.config.canonical_dict(),
            "config_sha256": self.config.sha256(),
            "master_seed": self.master_seed,
            "family_descriptor": self.family,
            "reference_notes": self.notes,
            "violations": self.violations,
            "created_at": self.created_at,
            "row_count": len(self.rows),
        }

    def write(self, csv_path: str, manifest_path: str | None = None) -> None:
        with open(csv_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv_text())
        if manifest_path is None:
            manifest_path = csv_path + ".manifest.json"
        with open(manifest_path, "w", encoding="utf-8") as fh:
            json.dump(self.manifest_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _binomial_se(p: float, reps: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / reps)


def _monotone_violations(label: str, series: list[tuple[int, float, float]]) -> list[str]:
    """Flags increases beyond two combined standard errors along n."""
    out = []
    for (n0, v0, s0), (n1, v1, s1) in zip(series, series[1:]):
        slack = 2.0 * math.sqrt(s0 * s0 + s1 * s1)
        if v1 > v0 + slack:
            out.append(f"{label}: value rose from {v0:.6g} (n={n0}) to {v1:.6g} (n={n1}) "
                       f"beyond the 2-s.e. slack {slack:.6g}")
    return out


# ---------------------------------------------------------------------------
# reference marginals
# ---------------------------------------------------------------------------


def _reference_marginal(spec: LinearProcessSpec, cfg: ExperimentConfig,
                        member_idx: int, notes: list[str], member_id: str) -> Distribution:
    law = spec.marginal_law()
    if law is not None:
        notes.append(f"{member_id}: closed-form stationary marginal {law.to_config()}")
        return law
    s_max = default_s_max(spec)
    a = spec.generator.coeffs(s_max)
    rng = _rng_for(cfg.master_seed, _STREAM_REFERENCE, member_idx, 0, 0)
    chunks = []
    remaining = REFERENCE_SAMPLE_SIZE
    while remaining > 0:
        block = min(remaining, 65_536)
        z = spec.noise.sample(rng, block * (s_max + 1)).reshape(block, s_max + 1)
        chunks.append(z @ a[::-1])
        remaining -= block
    sample = np.concatenate(chunks)
    # Dvoretzky-Kiefer-Wolfowitz: sup-norm CDF error below eps with
    # probability 1 - 2 exp(-2 N eps^2)
    eps99 = math.sqrt(math.log(2.0 / 0.01) / (2.0 * REFERENCE_SAMPLE_SIZE))
    notes.append(
        f"{member_id}: {REFERENCE_SAMPLE_SIZE}-draw empirical reference marginal; "
        f"DKW 99% sup-CDF accuracy {eps99:.2e}"
    )
    return EmpiricalMeasure(sample)


def _simulate_member(spec: LinearProcessSpec, cfg: ExperimentConfig, stream: int,
                     member_idx: int, n: int, replicate: int, s_max: int) -> np.ndarray:
    rng = _rng_for(cfg.master_seed, stream, member_idx, n, replicate)
    return simulate_linear(spec, n, rng, s_max=s_max)


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------


def run_ugc(config: ExperimentConfig) -> ResultTable:
    """Estimates sup over the class of P[d(empirical law, marginal) >= delta]
    per sample size."""
    metric = parse_metric(config.metric)
    members = config.members()
    table = ResultTable("ugc", config.master_seed, metric.descriptor, config)

    def member_task(item):
        mi, (member_id, spec) = item
        rows = []
        notes: list[str] = []
        try:
            ref = _reference_marginal(spec, config, mi, notes, member_id)
            prep = metric.prepare(ref)
            s_max = default_s_max(spec)
        except QrobustError as exc:
            return [(member_id, 0, "failure", math.nan, math.nan)], [f"{member_id}: {exc}"], notes
        for n in config.n_grid:
            hits = 0
            for r in range(config.replicates):
                path = _simulate_member(spec, config, _STREAM_MAIN, mi, n, r, s_max)
                hits += metric.indicator(EmpiricalMeasure(path), prep, config.delta)
            p = hits / config.replicates
            rows.append((member_id, n, "exceedance", p, _binomial_se(p, config.replicates)))
        return rows, [], notes

    failures: list[str] = []
    with ThreadPoolExecutor(max_workers=_thread_count()) as pool:
        results = list(pool.map(member_task, enumerate(members)))
    for rows, errs, notes in results:
        for row in rows:
            table.add(*row)
        failures.extend(errs)
        table.notes.extend(notes)
    table.violations.extend(failures)

    sup_series = []
    for n in config.n_grid:
        per_member = [
            (row[4], row[5]) for row in table.rows
            if row[2] == n and row[3] == "exceedance"
        ]
        if not per_member:
            continue
        value, se = max(per_member)
        table.add("sup", n, "sup-exceedance", value, se)
        sup_series.append((n, value, se))
    table.violations.extend(_monotone_violations("sup-exceedance", sup_series))
    return table


def _thin_values(values: np.ndarray, cap: int = ESTIMATOR_LAW_CAP) -> np.ndarray:
    """Deterministic stratified thinning: quantile midpoints of the sorted
    values, one per stratum."""
    values = np.sort(values, kind="stable")
    if values.size <= cap:
        return values
    idx = np.floor((np.arange(cap) + 0.5) * values.size / cap).astype(int)
    return values[idx]


def _batch_se(values_a: np.ndarray, values_b: np.ndarray,
              dist_fn: Callable[[np.ndarray, np.ndarray], float]) -> float:
    """Conservative spread estimate: the distance recomputed on matched
    replicate batches (their dispersion over batches, scaled by 1/sqrt(B))."""
    splits_a = np.array_split(values_a, _SE_BATCHES)
    splits_b = np.array_split(values_b, _SE_BATCHES)
    vals = [dist_fn(a, b) for a, b in zip(splits_a, splits_b)]
    return float(np.std(vals, ddof=1) / math.sqrt(len(vals)))


def run_robustness(config: ExperimentConfig) -> ResultTable:
    """Two laws P and Q: distance between the plug-in estimator laws per
    sample size, with a same-law noise floor from an independent run of P."""
    members = config.members()
    if len(members) != 2:
        raise ConfigError("robustness experiments need exactly two class members")
    metric = parse_metric(config.metric)
    functional = parse_functional(config.functional)
    table = ResultTable("robustness", config.master_seed, metric.descriptor, config)
    (id_p, spec_p), (id_q, spec_q) = members

    ref_p = _reference_marginal(spec_p, config, 0, table.notes, id_p)
    ref_q = _reference_marginal(spec_q, config, 1, table.notes, id_q)
    table.add("P-vs-Q", 0, "marginal-distance", metric.value(ref_p, ref_q))

    s_max_p = default_s_max(spec_p)
    s_max_q = default_s_max(spec_q)

    def estimates(spec, stream, mi, n, s_max):
        out = np.empty(config.replicates)
        for r in range(config.replicates):
            path = _simulate_member(spec, config, stream, mi, n, r, s_max)
            out[r] = plugin(functional, EmpiricalMeasure(path))
        return out

    def n_task(n: int):
        est_p = estimates(spec_p, _STREAM_MAIN, 0, n, s_max_p)
        est_q = estimates(spec_q, _STREAM_MAIN, 1, n, s_max_q)
        est_p2 = estimates(spec_p, _STREAM_NOISE_FLOOR, 0, n, s_max_p)
        law = lambda v: FiniteLaw.from_sample(_thin_values(v))
        emp = lambda v: EmpiricalMeasure(v)
        d_proh = prohorov_distance(law(est_p), law(est_q))
        d_floor = prohorov_distance(law(est_p), law(est_p2))
        d_levy = levy(emp(est_p), emp(est_q))
        d_kolm = _kolmogorov_one(emp(est_p), emp(est_q))
        proh_fn = lambda a, b: prohorov_distance(FiniteLaw.from_sample(a), FiniteLaw.from_sample(b))
        rows = [
            ("P-vs-Q", n, "prohorov-estimator-laws", d_proh, _batch_se(est_p, est_q, proh_fn)),
            ("P-vs-P", n, "prohorov-noise-floor", d_floor, _batch_se(est_p, est_p2, proh_fn)),
            ("P-vs-Q", n, "levy-estimator-laws", d_levy,
             _batch_se(est_p, est_q, lambda a, b: levy(EmpiricalMeasure(a), EmpiricalMeasure(b)))),
            ("P-vs-Q", n, "kolmogorov-estimator-laws", d_kolm,
             _batch_se(est_p, est_q, lambda a, b: _kolmogorov_one(EmpiricalMeasure(a), EmpiricalMeasure(b)))),
            (id_p, n, "estimator-mean", float(est_p.mean()),
             float(est_p.std(ddof=1) / math.sqrt(len(est_p))) if len(est_p) > 1 else 0.0),
            (id_q, n, "estimator-mean", float(est_q.mean()),
             float(est_q.std(ddof=1) / math.sqrt(len(est_q))) if len(est_q) > 1 else 0.0),
            (id_p, n, "estimator-sd", float(est_p.std(ddof=1)) if len(est_p) > 1 else 0.0, 0.0),
            (id_q, n, "estimator-sd", float(est_q.std(ddof=1)) if len(est_q) > 1 else 0.0, 0.0),
        ]
        violations = []
        if d_levy > d_kolm + 1e-12:
            violations.append(
                f"n={n}: Lévy distance {d_levy:.6g} exceeds Kolmogorov distance {d_kolm:.6g}"
            )
        return rows, violations

    with ThreadPoolExecutor(max_workers=_thread_count()) as pool:
        results = list(pool.map(n_task, config.n_grid))
    series = []
    for n, (rows, violations) in zip(config.n_grid, results):
        for row in rows:
            table.add(*row)
        table.violations.extend(violations)
        value, se = table.get("P-vs-Q", n, "prohorov-estimator-laws")
        series.append((n, value, se))
    table.violations.extend(_monotone_violations("prohorov-estimator-laws", series))
    return table


def run_rio_check(config: ExperimentConfig) -> ResultTable:
    """Empirical exceedance of the maximal partial-sum deviation against the
    maximal-inequality bound, on the configured x grid."""
    members = config.members()
    if len(members) != 1:
        raise ConfigError("rio-check needs exactly one class member")
    if not config.x_grid or any(x <= 0 for x in config.x_grid):
        raise ConfigError("rio-check needs a positive x_grid")
    member_id, spec = members[0]
    table = ResultTable("rio-check", config.master_seed, "partial-sum", config)
    marginal = _reference_marginal(spec, config, 0, table.notes, member_id)
    abs_marginal = absolute_law(marginal) if marginal.is_discrete() else FoldedDistribution(marginal)
    profile = mixing_profile(spec)
    mean = marginal.mean()
    s_max = default_s_max(spec)

    for n in config.n_grid:
        sups = np.empty(config.replicates)
        for r in range(config.replicates):
            path = _simulate_member(spec, config, _STREAM_MAIN, 0, n, r, s_max)
            sums = np.cumsum(path - mean)
            sups[r] = float(np.max(np.abs(sums)))
        for xi, x in enumerate(config.x_grid):
            freq = float(np.mean(sups >= 2.0 * x))
            se = _binomial_se(freq, config.replicates)
            bound = rio_bound(abs_marginal, profile, n, x)
            table.add(member_id, n, f"exceedance@x{xi:02d}", freq, se)
            table.add(member_id, n, f"bound@x{xi:02d}", bound)
            if freq > bound + 3.0 * se:
                table.violations.append(
                    f"{member_id} n={n} x={x:g}: frequency {freq:.6g} above bound {bound:.6g} "
                    f"+ 3 s.e."
                )
    return table


def run_lln_check(config: ExperimentConfig) -> ResultTable:
    """Empirical tail frequency of |mean of gauge(X_i) - expectation| >= delta
    against the truncation bound, per class member and sample size."""
    metric = parse_metric(config.metric)
    if metric.gauge is None:
        raise ConfigError("lln-check reads its gauge from the metric descriptor, e.g. psi-levy:square")
    gauge = metric.gauge
    members = config.members()
    table = ResultTable("lln-check", config.master_seed, f"gauge:{gauge.descriptor}", config)

    def pick_k(marginals: list[Distribution]) -> float:
        if config.k_trunc is not None:
            return float(config.k_trunc)
        K = 1.0
        while K < 2.0**64:
            worst = max(gauge.tail_moment(m, K, strict=True) for m in marginals)
            if worst < config.delta / 3.0:
                return K
            K *= 2.0
        raise ConfigError("no truncation level satisfies the tail condition")

    prepared = []
    for mi, (member_id, spec) in enumerate(members):
        marginal = _reference_marginal(spec, config, mi, table.notes, member_id)
        prepared.append((mi, member_id, spec, marginal, mixing_profile(spec),
                         gauge.moment(marginal), default_s_max(spec)))
    K = pick_k([p[3] for p in prepared])
    table.notes.append(f"truncation level K = {K:g}")

    def member_task(item):
        mi, member_id, spec, marginal, profile, expectation, s_max = item
        rows = []
        for n in config.n_grid:
            hits = 0
            for r in range(config.replicates):
                path = _simulate_member(spec, config, _STREAM_MAIN, mi, n, r, s_max)
                if abs(float(np.mean(gauge.fn(path))) - expectation) >= config.delta:
                    hits += 1
            freq = hits / config.replicates
            bound = lln_tail_bound(marginal, profile, n, config.delta, K, gauge=gauge)
            rows.append((member_id, n, freq, _binomial_se(freq, config.replicates), bound))
        return rows

    with ThreadPoolExecutor(max_workers=_thread_count()) as pool:
        results = list(pool.map(member_task, prepared))
    for rows in results:
        for member_id, n, freq, se, bound in rows:
            table.add(member_id, n, "exceedance", freq, se)
            table.add(member_id, n, "bound", bound)
            if freq > bound + 3.0 * se:
                table.violations.append(
                    f"{member_id} n={n}: frequency {freq:.6g} above bound {bound:.6g} + 3 s.e."
                )
    sup_series = []
    for n in config.n_grid:
        per_member = [
            (row[4], row[5]) for row in table.rows
            if row[2] == n and row[3] == "exceedance"
        ]
        value, se = max(per_member)
        table.add("sup", n, "sup-exceedance", value, se)
        sup_series.append((n, value, se))
    table.violations.extend(_monotone_violations("sup-exceedance", sup_series))
    return table


def run_bracket_check(config: ExperimentConfig) -> ResultTable:
    """Builds the bracket family per member marginal, validates the bracket
    invariants, and tests the sample-wise empirical-process domination on
    simulated paths (via the quantile coupling)."""
    metric = parse_metric(config.metric)
    if metric.gauge is None or not metric.gauge.is_u_shaped:
        raise ConfigError("bracket-check needs a u-shaped gauge, e.g. kolmogorov-phi:power:2")
    gauge = metric.gauge
    members = config.members()
    table = ResultTable("bracket-check", config.master_seed, f"gauge:{gauge.descriptor}", config)
    n = config.n_grid[-1]

    for mi, (member_id, spec) in enumerate(members):
        marginal = _reference_marginal(spec, config, mi, table.notes, member_id)
        family = build_brackets(marginal, gauge, config.eps)
        try:
            family.validate()
        except QrobustError as exc:
            table.violations.append(f"{member_id}: bracket invariants failed: {exc}")
        table.add(member_id, 0, "bracket-count", family.bracket_count)
        table.add(member_id, 0, "max-bracket-integral", family.max_bracket_integral())
        s_max = default_s_max(spec)
        bad = 0
        for r in range(config.replicates):
            path = _simulate_member(spec, config, _STREAM_MAIN, mi, n, r, s_max)
            us = quantile_transform(path, marginal,
                                    _rng_for(config.master_seed, _STREAM_COUPLING, mi, n, r))
            lhs = weighted_gap_sup(EmpiricalMeasure(path), marginal, gauge, y_max=0.0)
            rhs = family.domination_bound(us)
            if lhs > rhs + 1e-9:
                bad += 1
                table.violations.append(
                    f"{member_id} replicate {r}: domination fails ({lhs:.6g} > {rhs:.6g})"
                )
        table.add(member_id, n, "domination-violations", bad)
    return table


_RUNNERS = {
    "ugc": run_ugc,
    "robustness": run_robustness,
    "rio-check": run_rio_check,
    "lln-check": run_lln_check,
    "bracket-check": run_bracket_check,
}


def run_experiment(config: ExperimentConfig) -> ResultTable:
    return _RUNNERS[config.kind](config)
