"""Chance-corrected inter-rater agreement for two annotators, per tier.

The agreement value is gamma = 1 - observed/expected disorder. Observed
disorder is the cost of the best alignment between the two annotators'
units, where aligned units pay a positional distance plus a categorical
distance and unaligned units pay a fixed empty-unit cost. Expected
disorder is estimated by Monte Carlo: unit sets are redrawn from the real
annotators and circularly shifted around a uniformly random split point,
and the best-alignment disorder of each resampled pair is averaged.

The alignment optimum is exact: each annotator's unit list is padded with
empty slots to a square cost matrix and solved as a minimum-cost
assignment, which ranges over every alignment that permits unaligned
units.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import parsers
from .scheme import CheckingScheme, ValidationReport, validate
from .textgrid import TextGrid, Unit, annotated_units


class EmptyContinuum(Exception):
    """Neither annotator produced any unit."""


class NonConforming(Exception):
    """Agreement was requested for files that fail their scheme."""

    def __init__(self, reports: dict[str, ValidationReport]):
        names = {k: len(r) for k, r in reports.items() if not r.ok}
        super().__init__(f"non-conforming input(s): {names}")
        self.reports = reports


@dataclass(frozen=True, slots=True)
class Continuum:
    """All units from both annotators for a single tier."""

    xmin: float
    xmax: float
    units_a: tuple[Unit, ...]
    units_b: tuple[Unit, ...]
    annotator_a: str = "A"
    annotator_b: str = "B"

    def __post_init__(self) -> None:
        if self.xmin > self.xmax:
            raise ValueError(f"xmin {self.xmin} > xmax {self.xmax}")
        for label, raw in (("A", self.units_a), ("B", self.units_b)):
            units = tuple(sorted(raw, key=lambda u: (u.start, u.end)))
            object.__setattr__(self, "units_a" if label == "A" else "units_b", units)
            for u in units:
                if u.start < self.xmin or u.end > self.xmax:
                    raise ValueError(
                        f"unit [{u.start}, {u.end}] outside range "
                        f"[{self.xmin}, {self.xmax}]"
                    )
            for prev, nxt in zip(units, units[1:]):
                if prev.end > nxt.start:
                    raise ValueError(
                        f"annotator {label}: overlapping units "
                        f"[{prev.start}, {prev.end}] and [{nxt.start}, {nxt.end}]"
                    )

    @property
    def empty(self) -> bool:
        return not self.units_a and not self.units_b


@dataclass(frozen=True, slots=True)
class Alignment:
    """Unitary pairs covering every unit of both annotators exactly once;
    a None side marks an unaligned unit."""

    pairs: tuple[tuple[Optional[Unit], Optional[Unit]], ...]


@dataclass(frozen=True, slots=True)
class GammaConfig:
    empty_unit_cost: float = 1.0
    positional_weight: float = 1.0
    categorical_weight: float = 1.0
    n_samples: int = 30
    seed: int = 0
    category_parser: str | None = None  # None -> 0/1 indicator distance
    average_by_units: bool = False  # divide disorders by mean units/annotator
    shared_split: bool = False  # one split position per resample, not per side

    def __post_init__(self) -> None:
        if self.empty_unit_cost < 0 or self.positional_weight < 0 or self.categorical_weight < 0:
            raise ValueError("costs and weights must be >= 0")
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")

    def to_doc(self) -> dict[str, Any]:
        return {
            "empty_unit_cost": self.empty_unit_cost,
            "positional_weight": self.positional_weight,
            "categorical_weight": self.categorical_weight,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "category_parser": self.category_parser,
            "average_by_units": self.average_by_units,
            "shared_split": self.shared_split,
        }

    @staticmethod
    def from_doc(doc: dict[str, Any]) -> "GammaConfig":
        return GammaConfig(**doc)


@dataclass(frozen=True, slots=True)
class GammaResult:
    gamma: float
    observed_disorder: float
    expected_disorder: float
    n_samples: int
    seed: int
    sample_disorders: tuple[float, ...] = ()

    def to_doc(self) -> dict[str, Any]:
        return {
            "gamma": self.gamma,
            "observed_disorder": self.observed_disorder,
            "expected_disorder": self.expected_disorder,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "sample_disorders": list(self.sample_disorders),
        }

    @staticmethod
    def from_doc(doc: dict[str, Any]) -> "GammaResult":
        return GammaResult(
            gamma=doc["gamma"],
            observed_disorder=doc["observed_disorder"],
            expected_disorder=doc["expected_disorder"],
            n_samples=doc["n_samples"],
            seed=doc["seed"],
            sample_disorders=tuple(doc.get("sample_disorders", ())),
        )


@dataclass(frozen=True, slots=True)
class TierGamma:
    """Per-tier agreement outcome; ``result`` is None when neither
    annotator put a single unit on the tier."""

    tier: str
    n_units_a: int
    n_units_b: int
    result: GammaResult | None

    def to_doc(self) -> dict[str, Any]:
        return {
            "tier": self.tier,
            "n_units_a": self.n_units_a,
            "n_units_b": self.n_units_b,
            "result": self.result.to_doc() if self.result else None,
        }

    @staticmethod
    def from_doc(doc: dict[str, Any]) -> "TierGamma":
        result = doc.get("result")
        return TierGamma(
            tier=doc["tier"],
            n_units_a=doc["n_units_a"],
            n_units_b=doc["n_units_b"],
            result=GammaResult.from_doc(result) if result else None,
        )


#: Column order of the per-task gamma CSV rows.
GAMMA_CSV_COLUMNS = (
    "campaign",
    "task",
    "file",
    "tier",
    "gamma",
    "observed_disorder",
    "expected_disorder",
    "n_units_a",
    "n_units_b",
    "n_samples",
    "seed",
)


# ---------------------------------------------------------------------------
# Dissimilarities
# ---------------------------------------------------------------------------


def d_pos(u: Unit, v: Unit) -> float:
    """Positional distance: endpoint differences relative to the combined
    length of both units, squared."""
    num = abs(u.start - v.start) + abs(u.end - v.end)
    den = (u.end - u.start) + (v.end - v.start)
    return (num / den) ** 2


def d_cat(u: Unit, v: Unit, cfg: GammaConfig) -> float:
    """Categorical distance: 0/1 indicator, or the configured parser's
    distance between the two annotation strings."""
    if cfg.category_parser is None:
        return 0.0 if u.category == v.category else 1.0
    return float(parsers.get_parser(cfg.category_parser).distance(u.category, v.category))


def dissimilarity(u: Optional[Unit], v: Optional[Unit], cfg: GammaConfig) -> float:
    if u is None and v is None:
        raise ValueError("a unitary alignment pairs at most one empty side")
    if u is None or v is None:
        return cfg.empty_unit_cost
    return cfg.positional_weight * d_pos(u, v) + cfg.categorical_weight * d_cat(u, v, cfg)


# ---------------------------------------------------------------------------
# Best alignment
# ---------------------------------------------------------------------------


def _disorder_scale(cfg: GammaConfig, n: int, m: int) -> float:
    if cfg.average_by_units and (n + m) > 0:
        return 2.0 / (n + m)
    return 1.0


def best_alignment(c: Continuum, cfg: GammaConfig) -> tuple[Alignment, float]:
    """Globally minimal-disorder alignment via square assignment.

    Rows are A's units plus one empty slot per B unit; columns are B's
    units plus one empty slot per A unit. Pairing two empty slots is free,
    so the assignment optimum ranges over every alignment that leaves any
    subset of units unaligned.
    """
    a, b = c.units_a, c.units_b
    n, m = len(a), len(b)
    if n == 0 and m == 0:
        raise EmptyContinuum("both annotators are empty")

    size = n + m
    cost = np.zeros((size, size))
    for i, u in enumerate(a):
        for j, v in enumerate(b):
            cost[i, j] = dissimilarity(u, v, cfg)
    cost[:n, m:] = cfg.empty_unit_cost
    cost[n:, :m] = cfg.empty_unit_cost

    rows, cols = linear_sum_assignment(cost)
    pairs: list[tuple[Optional[Unit], Optional[Unit]]] = []
    disorder = 0.0
    for i, j in zip(rows, cols):
        if i < n and j < m:
            pairs.append((a[i], b[j]))
        elif i < n:
            pairs.append((a[i], None))
        elif j < m:
            pairs.append((None, b[j]))
        else:
            continue  # empty slot paired with empty slot
        disorder += cost[i, j]

    return Alignment(tuple(pairs)), float(disorder) * _disorder_scale(cfg, n, m)


# ---------------------------------------------------------------------------
# Chance model
# ---------------------------------------------------------------------------


def _circular_shift(units: tuple[Unit, ...], xmin: float, xmax: float, p: float) -> tuple[Unit, ...]:
    """Exchange the annotation segments before and after ``p``; a unit
    straddling ``p`` splits at ``p`` and wraps around the range."""
    left_shift = p - xmin  # applied to units after the split
    right_shift = xmax - p  # applied to units before the split
    out: list[Unit] = []
    for u in units:
        if u.start >= p:
            out.append(Unit(u.start - left_shift, u.end - left_shift, u.category))
        elif u.end <= p:
            out.append(Unit(u.start + right_shift, u.end + right_shift, u.category))
        else:
            out.append(Unit(xmin, xmin + (u.end - p), u.category))
            out.append(Unit(xmax - (p - u.start), xmax, u.category))
    return tuple(sorted(out, key=lambda u: (u.start, u.end)))


def _resample(c: Continuum, rng: np.random.Generator, cfg: GammaConfig) -> Continuum:
    sides = (c.units_a, c.units_b)
    sources = [int(rng.integers(2)) for _ in range(2)]
    if cfg.shared_split:
        p = float(rng.uniform(c.xmin, c.xmax))
        splits = [p, p]
    else:
        splits = [float(rng.uniform(c.xmin, c.xmax)) for _ in range(2)]
    shifted = [
        _circular_shift(sides[src], c.xmin, c.xmax, p)
        for src, p in zip(sources, splits)
    ]
    return Continuum(c.xmin, c.xmax, shifted[0], shifted[1])


def resampled_disorders(c: Continuum, cfg: GammaConfig) -> tuple[float, ...]:
    """Best-alignment disorder of ``n_samples`` independent resamples.

    Sample i draws from a child generator spawned from (seed, i), so the
    sequence is reproducible and independent of evaluation order.
    """
    if c.empty:
        raise EmptyContinuum("both annotators are empty")
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.n_samples)
    disorders = []
    for child in children:
        resampled = _resample(c, np.random.default_rng(child), cfg)
        if resampled.empty:
            disorders.append(0.0)
        else:
            disorders.append(best_alignment(resampled, cfg)[1])
    return tuple(disorders)


def expected_disorder(c: Continuum, cfg: GammaConfig) -> float:
    return float(np.mean(resampled_disorders(c, cfg)))


# ---------------------------------------------------------------------------
# Per-tier agreement
# ---------------------------------------------------------------------------


def gamma_for_continuum(c: Continuum, cfg: GammaConfig) -> GammaResult:
    _, observed = best_alignment(c, cfg)
    samples = resampled_disorders(c, cfg)
    expected = float(np.mean(samples))
    if observed == 0.0:
        value = 1.0
    elif expected > 0.0:
        value = 1.0 - observed / expected
    else:
        value = float("-inf")
    return GammaResult(
        gamma=value,
        observed_disorder=observed,
        expected_disorder=expected,
        n_samples=cfg.n_samples,
        seed=cfg.seed,
        sample_disorders=samples,
    )


def gamma(
    tg_a: TextGrid,
    tg_b: TextGrid,
    scheme: CheckingScheme,
    cfg: GammaConfig = GammaConfig(),
) -> dict[str, TierGamma]:
    """Agreement per scheme tier between two conforming TextGrids.

    Point tiers never reach this code: scheme validation requires interval
    tiers, and positional distance is undefined for zero-length units.
    """
    reports = {
        "a": validate(tg_a, scheme, audio_duration=None),
        "b": validate(tg_b, scheme, audio_duration=None),
    }
    if not all(r.ok for r in reports.values()):
        raise NonConforming(reports)

    xmin = min(tg_a.xmin, tg_b.xmin)
    xmax = max(tg_a.xmax, tg_b.xmax)
    results: dict[str, TierGamma] = {}
    for spec in scheme.tier_specs:
        units_a = tuple(annotated_units(tg_a.tier(spec.name)))
        units_b = tuple(annotated_units(tg_b.tier(spec.name)))
        if not units_a and not units_b:
            results[spec.name] = TierGamma(spec.name, 0, 0, None)
            continue
        continuum = Continuum(xmin, xmax, units_a, units_b)
        results[spec.name] = TierGamma(
            spec.name,
            len(units_a),
            len(units_b),
            gamma_for_continuum(continuum, cfg),
        )
    return results
