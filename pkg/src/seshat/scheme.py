"""Per-campaign contracts on TextGrid structure and content.

A checking scheme pins down which tiers a file must contain (names and
order) and what each tier's annotations may say: nothing at all
("unchecked"), one of a fixed label set ("categorical"), or anything a
registered annotation parser accepts ("parsed"). Validation accumulates
every failure into a report; conformity is exactly "the report is empty".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Union

import yaml

from . import parsers
from .textgrid import TextGrid, Tier, TierKind


class ConfigError(Exception):
    """Scheme config document rejected."""


class Checking(str, Enum):
    UNCHECKED = "unchecked"
    CATEGORICAL = "categorical"
    PARSED = "parsed"


class ErrorKind(str, Enum):
    MISSING_TIER = "MissingTier"
    EXTRA_TIER = "ExtraTier"
    TIER_ORDER = "TierOrder"
    BAD_CATEGORY = "BadCategory"
    PARSER_ERROR = "ParserError"
    DURATION_MISMATCH = "DurationMismatch"
    STRUCTURE_ERROR = "StructureError"


@dataclass(frozen=True, slots=True)
class TierSpec:
    name: str
    checking: Checking = Checking.UNCHECKED
    categories: tuple[str, ...] = ()
    parser: str | None = None
    allow_empty: bool = True

    def __post_init__(self) -> None:
        if self.checking is Checking.CATEGORICAL and not self.categories:
            raise ConfigError(f"tier {self.name!r}: categorical check needs categories")
        if self.checking is Checking.PARSED and not self.parser:
            raise ConfigError(f"tier {self.name!r}: parsed check needs a parser id")


@dataclass(frozen=True, slots=True)
class CheckingScheme:
    tier_specs: tuple[TierSpec, ...]
    duration_tolerance: float = 0.1
    name: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "tier_specs", tuple(self.tier_specs))
        if not self.tier_specs:
            raise ConfigError("a scheme needs at least one tier")
        names = [s.name for s in self.tier_specs]
        for name in names:
            if names.count(name) > 1:
                raise ConfigError(f"duplicate tier name {name!r}")
        if self.duration_tolerance < 0:
            raise ConfigError("duration_tolerance must be >= 0")

    def tier_names(self) -> list[str]:
        return [s.name for s in self.tier_specs]

    def spec(self, name: str) -> TierSpec:
        for s in self.tier_specs:
            if s.name == name:
                return s
        raise KeyError(name)


@dataclass(frozen=True, slots=True)
class ValidationError:
    kind: ErrorKind
    tier: str | None
    message: str
    item_index: int | None = None
    time_range: tuple[float, float] | None = None

    def to_doc(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "tier": self.tier,
            "message": self.message,
            "item_index": self.item_index,
            "time_range": list(self.time_range) if self.time_range else None,
        }

    @staticmethod
    def from_doc(doc: dict[str, Any]) -> "ValidationError":
        return ValidationError(
            kind=ErrorKind(doc["kind"]),
            tier=doc.get("tier"),
            message=doc["message"],
            item_index=doc.get("item_index"),
            time_range=tuple(doc["time_range"]) if doc.get("time_range") else None,
        )


@dataclass(frozen=True, slots=True)
class ValidationReport:
    errors: tuple[ValidationError, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "errors", tuple(self.errors))

    @property
    def ok(self) -> bool:
        return not self.errors

    def __len__(self) -> int:
        return len(self.errors)

    def to_doc(self) -> list[dict[str, Any]]:
        return [e.to_doc() for e in self.errors]

    @staticmethod
    def from_doc(doc: list[dict[str, Any]]) -> "ValidationReport":
        return ValidationReport(tuple(ValidationError.from_doc(d) for d in doc))


def validate(
    tg: TextGrid,
    scheme: CheckingScheme,
    audio_duration: float | None,
    duration_tolerance: float | None = None,
) -> ValidationReport:
    """Check a parsed TextGrid against a scheme, accumulating all failures.

    Passing ``audio_duration=None`` skips the duration check (used where no
    audio metadata exists, e.g. offline agreement runs).
    """
    errors: list[ValidationError] = []

    tg_names = tg.tier_names()
    scheme_names = scheme.tier_names()
    for name in scheme_names:
        if tg_names.count(name) == 0:
            errors.append(
                ValidationError(ErrorKind.MISSING_TIER, name, f"tier {name!r} is missing")
            )
    seen: dict[str, int] = {}
    for name in tg_names:
        seen[name] = seen.get(name, 0) + 1
        if name not in scheme_names:
            errors.append(
                ValidationError(
                    ErrorKind.EXTRA_TIER, name, f"tier {name!r} is not part of the campaign"
                )
            )
        elif seen[name] > 1:
            errors.append(
                ValidationError(
                    ErrorKind.EXTRA_TIER, name, f"tier {name!r} appears more than once"
                )
            )
    if not errors and tg_names != scheme_names:
        errors.append(
            ValidationError(
                ErrorKind.TIER_ORDER,
                None,
                f"tiers are out of order: expected {scheme_names}, got {tg_names}",
            )
        )

    if audio_duration is not None:
        tolerance = (
            scheme.duration_tolerance if duration_tolerance is None else duration_tolerance
        )
        if abs(tg.xmax - audio_duration) > tolerance:
            errors.append(
                ValidationError(
                    ErrorKind.DURATION_MISMATCH,
                    None,
                    f"file ends at {tg.xmax} s but the audio lasts "
                    f"{audio_duration} s (tolerance {tolerance} s)",
                )
            )

    for spec in scheme.tier_specs:
        try:
            tier = tg.tier(spec.name)
        except KeyError:
            continue
        errors.extend(_check_tier_content(tier, spec))

    return ValidationReport(tuple(errors))


def _check_tier_content(tier: Tier, spec: TierSpec) -> list[ValidationError]:
    errors: list[ValidationError] = []
    if tier.kind is not TierKind.INTERVAL:
        errors.append(
            ValidationError(
                ErrorKind.STRUCTURE_ERROR,
                tier.name,
                f"tier {tier.name!r} must be an interval tier",
            )
        )
        return errors

    annotated = 0
    for index, interval in enumerate(tier.items):
        text = interval.text.strip()
        if not text:
            continue
        annotated += 1
        time_range = (interval.start, interval.end)
        if spec.checking is Checking.CATEGORICAL:
            if text not in spec.categories:
                errors.append(
                    ValidationError(
                        ErrorKind.BAD_CATEGORY,
                        tier.name,
                        f"interval {index + 1}: {text!r} is not one of "
                        f"{sorted(spec.categories)}",
                        item_index=index,
                        time_range=time_range,
                    )
                )
        elif spec.checking is Checking.PARSED:
            parser = parsers.get_parser(spec.parser)
            try:
                parser.check_annotation(text)
            except parsers.AnnotationError as exc:
                errors.append(
                    ValidationError(
                        ErrorKind.PARSER_ERROR,
                        tier.name,
                        f"interval {index + 1}: {exc}",
                        item_index=index,
                        time_range=time_range,
                    )
                )
    if annotated == 0 and not spec.allow_empty:
        errors.append(
            ValidationError(
                ErrorKind.STRUCTURE_ERROR,
                tier.name,
                f"tier {tier.name!r} must contain at least one annotation",
            )
        )
    return errors


# ---------------------------------------------------------------------------
# Config documents
# ---------------------------------------------------------------------------

_SCHEME_FIELDS = {"name", "duration_tolerance", "tiers"}
_TIER_FIELDS = {"name", "checking", "categories", "parser", "allow_empty"}


def scheme_from_dict(obj: Any) -> CheckingScheme:
    if not isinstance(obj, dict):
        raise ConfigError("scheme config must be a mapping")
    unknown = set(obj) - _SCHEME_FIELDS
    if unknown:
        raise ConfigError(f"unknown scheme field(s): {sorted(unknown)}")
    tiers = obj.get("tiers")
    if not isinstance(tiers, list) or not tiers:
        raise ConfigError("scheme config needs a non-empty 'tiers' list")

    specs = []
    for entry in tiers:
        if not isinstance(entry, dict):
            raise ConfigError("each tier entry must be a mapping")
        unknown = set(entry) - _TIER_FIELDS
        if unknown:
            raise ConfigError(f"unknown tier field(s): {sorted(unknown)}")
        name = entry.get("name")
        if not isinstance(name, str) or not name:
            raise ConfigError("each tier needs a non-empty 'name'")
        checking_raw = entry.get("checking", "unchecked")
        try:
            checking = Checking(checking_raw)
        except ValueError:
            raise ConfigError(
                f"tier {name!r}: checking must be one of "
                f"{[c.value for c in Checking]}, got {checking_raw!r}"
            ) from None
        categories = entry.get("categories") or []
        if not isinstance(categories, list) or not all(isinstance(c, str) for c in categories):
            raise ConfigError(f"tier {name!r}: categories must be a list of strings")
        parser_id = entry.get("parser")
        if checking is Checking.PARSED:
            if parser_id not in parsers.registered_ids():
                raise ConfigError(
                    f"tier {name!r}: unknown parser {parser_id!r} "
                    f"(registered: {parsers.registered_ids()})"
                )
        allow_empty = entry.get("allow_empty", True)
        if not isinstance(allow_empty, bool):
            raise ConfigError(f"tier {name!r}: allow_empty must be a boolean")
        specs.append(
            TierSpec(
                name=name,
                checking=checking,
                categories=tuple(categories),
                parser=parser_id if checking is Checking.PARSED else None,
                allow_empty=allow_empty,
            )
        )

    tolerance = obj.get("duration_tolerance", 0.1)
    if not isinstance(tolerance, (int, float)) or isinstance(tolerance, bool):
        raise ConfigError("duration_tolerance must be a number")
    name = obj.get("name", "")
    if not isinstance(name, str):
        raise ConfigError("scheme name must be a string")
    return CheckingScheme(tuple(specs), float(tolerance), name)


def scheme_from_config(document: Union[bytes, str]) -> CheckingScheme:
    """Parse a YAML scheme config document."""
    if isinstance(document, bytes):
        document = document.decode("utf-8")
    try:
        obj = yaml.safe_load(document)
    except yaml.YAMLError as exc:
        raise ConfigError(f"unreadable config: {exc}") from None
    return scheme_from_dict(obj)


def scheme_to_dict(scheme: CheckingScheme) -> dict[str, Any]:
    return {
        "name": scheme.name,
        "duration_tolerance": scheme.duration_tolerance,
        "tiers": [
            {
                "name": s.name,
                "checking": s.checking.value,
                "categories": list(s.categories),
                "parser": s.parser,
                "allow_empty": s.allow_empty,
            }
            for s in scheme.tier_specs
        ],
    }
