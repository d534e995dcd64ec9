"""Praat TextGrid parsing, validation-friendly modeling, and serialization.

Reads both the "long" and "short" text variants of the format, in UTF-8
(with or without BOM) or UTF-16 (either endianness, detected by BOM).
Serialization always emits the long variant in UTF-8.

All types are immutable values: parsing the same bytes twice yields equal
objects, and nothing here mutates after construction.
"""

from __future__ import annotations

import codecs
import math
import re
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import TYPE_CHECKING, Union

if TYPE_CHECKING:
    from .scheme import CheckingScheme


class TextGridError(Exception):
    """Base class for everything this module raises."""


class EncodingError(TextGridError):
    """File bytes could not be decoded as UTF-8/UTF-16."""


class ParseError(TextGridError):
    """Malformed TextGrid syntax. Carries the 1-based source line."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class StructureError(TextGridError):
    """Well-formed syntax but invalid structure (gaps, inverted times...)."""


class KindError(TextGridError):
    """Operation applied to the wrong kind of tier."""


class InvalidDuration(TextGridError):
    """Template generation asked for a non-positive duration."""


class TierKind(Enum):
    INTERVAL = "IntervalTier"
    POINT = "TextTier"


def _check_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise StructureError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True, slots=True)
class Interval:
    start: float
    end: float
    text: str

    def __post_init__(self) -> None:
        _check_finite("interval start", self.start)
        _check_finite("interval end", self.end)
        if not self.start < self.end:
            raise StructureError(
                f"interval start must precede end: [{self.start}, {self.end}]"
            )


@dataclass(frozen=True, slots=True)
class Point:
    time: float
    mark: str

    def __post_init__(self) -> None:
        _check_finite("point time", self.time)


@dataclass(frozen=True, slots=True, order=True)
class Unit:
    """One annotated segment: the currency of agreement computation."""

    start: float
    end: float
    category: str

    def __post_init__(self) -> None:
        _check_finite("unit start", self.start)
        _check_finite("unit end", self.end)
        if not self.start < self.end:
            raise StructureError(
                f"unit start must precede end: [{self.start}, {self.end}]"
            )

    @property
    def length(self) -> float:
        return self.end - self.start


@dataclass(frozen=True, slots=True)
class Tier:
    """One named annotation layer.

    Interval tiers must tile [xmin, xmax] with contiguous intervals, exactly
    as Praat guarantees on output; point tiers hold strictly increasing
    points within [xmin, xmax].
    """

    name: str
    kind: TierKind
    xmin: float
    xmax: float
    items: tuple = field(default_factory=tuple)

    def __post_init__(self) -> None:
        _check_finite("tier xmin", self.xmin)
        _check_finite("tier xmax", self.xmax)
        object.__setattr__(self, "items", tuple(self.items))
        if self.xmin > self.xmax:
            raise StructureError(
                f"tier {self.name!r}: xmin {self.xmin} > xmax {self.xmax}"
            )
        if self.kind is TierKind.INTERVAL:
            self._check_tiling()
        else:
            self._check_points()

    def _check_tiling(self) -> None:
        if not self.items:
            raise StructureError(
                f"interval tier {self.name!r} has no intervals; "
                f"it cannot tile [{self.xmin}, {self.xmax}]"
            )
        for item in self.items:
            if not isinstance(item, Interval):
                raise StructureError(
                    f"interval tier {self.name!r} contains a non-interval item"
                )
        if self.items[0].start != self.xmin:
            raise StructureError(
                f"tier {self.name!r}: first interval starts at "
                f"{self.items[0].start}, tier starts at {self.xmin}"
            )
        if self.items[-1].end != self.xmax:
            raise StructureError(
                f"tier {self.name!r}: last interval ends at "
                f"{self.items[-1].end}, tier ends at {self.xmax}"
            )
        for i in range(len(self.items) - 1):
            if self.items[i].end != self.items[i + 1].start:
                raise StructureError(
                    f"tier {self.name!r}: gap or overlap between interval "
                    f"{i + 1} (ends {self.items[i].end}) and interval "
                    f"{i + 2} (starts {self.items[i + 1].start})"
                )

    def _check_points(self) -> None:
        for item in self.items:
            if not isinstance(item, Point):
                raise StructureError(
                    f"point tier {self.name!r} contains a non-point item"
                )
            if not self.xmin <= item.time <= self.xmax:
                raise StructureError(
                    f"tier {self.name!r}: point at {item.time} outside "
                    f"[{self.xmin}, {self.xmax}]"
                )
        for i in range(len(self.items) - 1):
            if not self.items[i].time < self.items[i + 1].time:
                raise StructureError(
                    f"tier {self.name!r}: points must be strictly increasing "
                    f"({self.items[i].time} then {self.items[i + 1].time})"
                )


@dataclass(frozen=True, slots=True)
class TextGrid:
    xmin: float
    xmax: float
    tiers: tuple = field(default_factory=tuple)

    def __post_init__(self) -> None:
        _check_finite("xmin", self.xmin)
        _check_finite("xmax", self.xmax)
        object.__setattr__(self, "tiers", tuple(self.tiers))
        if self.xmin > self.xmax:
            raise StructureError(f"xmin {self.xmin} > xmax {self.xmax}")
        for tier in self.tiers:
            if not isinstance(tier, Tier):
                raise StructureError("tiers must be Tier values")

    def tier_names(self) -> list[str]:
        return [t.name for t in self.tiers]

    def tier(self, name: str) -> Tier:
        for t in self.tiers:
            if t.name == name:
                return t
        raise KeyError(name)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_STRUCTURAL_RE = re.compile(r"^\s*(?:item|intervals|points)\s*\[\s*\d*\s*\]\s*:?\s*$")
_HEADER_VALUE_RE = re.compile(r'"(.*)"')


def _decode(raw: bytes) -> str:
    try:
        if raw.startswith(codecs.BOM_UTF16_LE) or raw.startswith(codecs.BOM_UTF16_BE):
            text = raw.decode("utf-16")
        elif raw.startswith(codecs.BOM_UTF8):
            text = raw.decode("utf-8-sig")
        else:
            text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise EncodingError(f"undecodable bytes: {exc}") from None
    return text.replace("\r\n", "\n").replace("\r", "\n")


class _Reader:
    """Line cursor shared by the long- and short-format grammars.

    Long format carries `key = value` lines plus structural lines such as
    `item [1]:`; short format carries bare values in the same order. Quoted
    strings may continue over several raw lines in both formats.
    """

    def __init__(self, text: str):
        self.lines = text.split("\n")
        self.idx = 0
        self.long = False

    @property
    def lineno(self) -> int:
        return self.idx  # idx already advanced past the line just consumed

    def _next_meaningful(self, expected: str) -> tuple[int, str]:
        while self.idx < len(self.lines):
            line = self.lines[self.idx]
            self.idx += 1
            if not line.strip():
                continue
            if self.long and _STRUCTURAL_RE.match(line):
                continue
            return self.idx, line
        raise ParseError(len(self.lines), f"unexpected end of file, expected {expected}")

    def _value_part(self, keys: tuple[str, ...]) -> tuple[int, str]:
        lineno, line = self._next_meaningful(keys[0])
        if not self.long:
            return lineno, line
        if "=" not in line:
            raise ParseError(lineno, f"expected '{keys[0]} = ...', got {line.strip()!r}")
        lhs, rhs = line.split("=", 1)
        if lhs.strip() not in keys:
            raise ParseError(
                lineno, f"expected key {keys[0]!r}, got {lhs.strip()!r}"
            )
        return lineno, rhs

    def read_number(self, *keys: str) -> float:
        lineno, value = self._value_part(keys)
        try:
            return float(value.strip())
        except ValueError:
            raise ParseError(
                lineno, f"expected a number for {keys[0]!r}, got {value.strip()!r}"
            ) from None

    def read_count(self, *keys: str) -> int:
        value = self.read_number(*keys)
        if value != int(value) or value < 0:
            raise ParseError(self.lineno, f"expected a non-negative integer for {keys[0]!r}")
        return int(value)

    def read_flag(self, key: str) -> bool:
        lineno, line = self._next_meaningful(key)
        if "<exists>" in line:
            return True
        if "<absent>" in line:
            return False
        raise ParseError(lineno, f"expected <exists> or <absent> for {key!r}")

    def read_string(self, *keys: str) -> str:
        lineno, value = self._value_part(keys)
        s = value.lstrip()
        if not s.startswith('"'):
            raise ParseError(lineno, f"expected a quoted string for {keys[0]!r}")
        s = s[1:]
        buf: list[str] = []
        while True:
            i = 0
            while i < len(s):
                if s[i] == '"':
                    if i + 1 < len(s) and s[i + 1] == '"':
                        buf.append('"')
                        i += 2
                        continue
                    if s[i + 1 :].strip():
                        raise ParseError(
                            lineno, "unexpected content after closing quote"
                        )
                    return "".join(buf)
                buf.append(s[i])
                i += 1
            # string continues on the next raw line (embedded newline)
            if self.idx >= len(self.lines):
                raise ParseError(lineno, f"unterminated string for {keys[0]!r}")
            buf.append("\n")
            s = self.lines[self.idx]
            self.idx += 1

    def finish(self) -> None:
        while self.idx < len(self.lines):
            line = self.lines[self.idx]
            if line.strip() and not (self.long and _STRUCTURAL_RE.match(line)):
                raise ParseError(self.idx + 1, "unexpected content after final tier")
            self.idx += 1


def parse_textgrid(raw: Union[bytes, str]) -> TextGrid:
    """Parse a complete TextGrid file payload (long or short text format)."""
    text = _decode(raw) if isinstance(raw, (bytes, bytearray)) else raw.replace("\r\n", "\n").replace("\r", "\n")
    reader = _Reader(text)

    for expected in ("ooTextFile", "TextGrid"):
        lineno, line = reader._next_meaningful(expected)
        match = _HEADER_VALUE_RE.search(line)
        got = match.group(1) if match else line.strip()
        if expected == "ooTextFile" and got not in ("ooTextFile", "ooTextFile short"):
            raise ParseError(lineno, f'expected File type "ooTextFile", got {got!r}')
        if expected == "TextGrid" and got != "TextGrid":
            raise ParseError(lineno, f'expected Object class "TextGrid", got {got!r}')

    # Long format opens the body with 'xmin = ...'; short format with a bare number.
    save = reader.idx
    _, probe = reader._next_meaningful("xmin")
    reader.idx = save
    reader.long = bool(re.match(r"\s*xmin\s*=", probe))

    xmin = reader.read_number("xmin")
    xmax = reader.read_number("xmax")
    tiers: list[Tier] = []
    if reader.read_flag("tiers?"):
        size = reader.read_count("size")
        for _ in range(size):
            tiers.append(_parse_tier(reader))
    reader.finish()

    return TextGrid(xmin, xmax, tuple(tiers))


def _parse_tier(reader: _Reader) -> Tier:
    lineno = reader.idx + 1
    klass = reader.read_string("class")
    name = reader.read_string("name")
    xmin = reader.read_number("xmin")
    xmax = reader.read_number("xmax")
    if klass == "IntervalTier":
        count = reader.read_count("intervals: size")
        intervals = []
        for _ in range(count):
            start = reader.read_number("xmin")
            end = reader.read_number("xmax")
            text = reader.read_string("text")
            if not start < end:
                raise StructureError(
                    f"tier {name!r}: interval start {start} is not before end {end}"
                )
            intervals.append(Interval(start, end, text))
        return Tier(name, TierKind.INTERVAL, xmin, xmax, tuple(intervals))
    if klass == "TextTier":
        count = reader.read_count("points: size")
        points = []
        for _ in range(count):
            time = reader.read_number("number", "time")
            mark = reader.read_string("mark", "text")
            points.append(Point(time, mark))
        return Tier(name, TierKind.POINT, xmin, xmax, tuple(points))
    raise ParseError(lineno, f"unknown tier class {klass!r}")


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def format_time(x: float) -> str:
    """Shortest decimal string that parses back to exactly `x`."""
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def _quote(text: str) -> str:
    return '"' + text.replace('"', '""') + '"'


def serialize_textgrid(tg: TextGrid) -> bytes:
    """Emit the long text format, UTF-8."""
    out: list[str] = [
        'File type = "ooTextFile"',
        'Object class = "TextGrid"',
        "",
        f"xmin = {format_time(tg.xmin)}",
        f"xmax = {format_time(tg.xmax)}",
        "tiers? <exists>",
        f"size = {len(tg.tiers)}",
        "item []:",
    ]
    for i, tier in enumerate(tg.tiers, 1):
        out.append(f"    item [{i}]:")
        out.append(f'        class = "{tier.kind.value}"')
        out.append(f"        name = {_quote(tier.name)}")
        out.append(f"        xmin = {format_time(tier.xmin)}")
        out.append(f"        xmax = {format_time(tier.xmax)}")
        if tier.kind is TierKind.INTERVAL:
            out.append(f"        intervals: size = {len(tier.items)}")
            for j, iv in enumerate(tier.items, 1):
                out.append(f"        intervals [{j}]:")
                out.append(f"            xmin = {format_time(iv.start)}")
                out.append(f"            xmax = {format_time(iv.end)}")
                out.append(f"            text = {_quote(iv.text)}")
        else:
            out.append(f"        points: size = {len(tier.items)}")
            for j, pt in enumerate(tier.items, 1):
                out.append(f"        points [{j}]:")
                out.append(f"            number = {format_time(pt.time)}")
                out.append(f"            mark = {_quote(pt.mark)}")
    return ("\n".join(out) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# Template generation and unit extraction
# ---------------------------------------------------------------------------


def generate_template(scheme: "CheckingScheme", duration: float) -> TextGrid:
    """Empty interval-tier stack for annotators to fill in, one tier per
    scheme entry, in scheme order."""
    if not (isinstance(duration, (int, float)) and math.isfinite(duration) and duration > 0):
        raise InvalidDuration(f"duration must be positive, got {duration!r}")
    tiers = tuple(
        Tier(
            spec.name,
            TierKind.INTERVAL,
            0.0,
            float(duration),
            (Interval(0.0, float(duration), ""),),
        )
        for spec in scheme.tier_specs
    )
    return TextGrid(0.0, float(duration), tiers)


def annotated_units(tier: Tier) -> list[Unit]:
    """Non-empty intervals as Units; whitespace-only text is unannotated."""
    if tier.kind is not TierKind.INTERVAL:
        raise KindError(f"tier {tier.name!r} is not an interval tier")
    units = []
    for iv in tier.items:
        category = iv.text.strip()
        if category:
            units.append(Unit(iv.start, iv.end, category))
    return units


def rename_tier(tier: Tier, name: str) -> Tier:
    return replace(tier, name=name)
