"""Shared fixtures: Praat-style fixture files, schemes, and audio builders."""

from __future__ import annotations

import struct
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from seshat.scheme import CheckingScheme, Checking, TierSpec


# ---------------------------------------------------------------------------
# TextGrid fixture corpus
# ---------------------------------------------------------------------------

# Byte-shape of files produced by Praat itself: long format, 4-space
# indentation, a trailing space after each value.
MINIMAL_LONG = (
    'File type = "ooTextFile"\n'
    'Object class = "TextGrid"\n'
    "\n"
    "xmin = 0 \n"
    "xmax = 2.5 \n"
    "tiers? <exists> \n"
    "size = 1 \n"
    "item []: \n"
    "    item [1]:\n"
    '        class = "IntervalTier" \n'
    '        name = "Utterance" \n'
    "        xmin = 0 \n"
    "        xmax = 2.5 \n"
    "        intervals: size = 1 \n"
    "        intervals [1]:\n"
    "            xmin = 0 \n"
    "            xmax = 2.5 \n"
    '            text = "" \n'
)

MINIMAL_SHORT = (
    'File type = "ooTextFile"\n'
    'Object class = "TextGrid"\n'
    "\n"
    "0\n"
    "2.5\n"
    "<exists>\n"
    "1\n"
    '"IntervalTier"\n'
    '"Utterance"\n'
    "0\n"
    "2.5\n"
    "1\n"
    "0\n"
    "2.5\n"
    '""\n'
)

QUOTES_LONG = (
    'File type = "ooTextFile"\n'
    'Object class = "TextGrid"\n'
    "\n"
    "xmin = 0 \n"
    "xmax = 1 \n"
    "tiers? <exists> \n"
    "size = 1 \n"
    "item []: \n"
    "    item [1]:\n"
    '        class = "IntervalTier" \n'
    '        name = "words" \n'
    "        xmin = 0 \n"
    "        xmax = 1 \n"
    "        intervals: size = 1 \n"
    "        intervals [1]:\n"
    "            xmin = 0 \n"
    "            xmax = 1 \n"
    '            text = "say ""stop""" \n'
)

MULTI_TIER_LONG = (
    'File type = "ooTextFile"\n'
    'Object class = "TextGrid"\n'
    "\n"
    "xmin = 0 \n"
    "xmax = 10 \n"
    "tiers? <exists> \n"
    "size = 4 \n"
    "item []: \n"
    "    item [1]:\n"
    '        class = "IntervalTier" \n'
    '        name = "Patient" \n'
    "        xmin = 0 \n"
    "        xmax = 10 \n"
    "        intervals: size = 3 \n"
    "        intervals [1]:\n"
    "            xmin = 0 \n"
    "            xmax = 2 \n"
    '            text = "" \n'
    "        intervals [2]:\n"
    "            xmin = 2 \n"
    "            xmax = 4.5 \n"
    '            text = "Patient" \n'
    "        intervals [3]:\n"
    "            xmin = 4.5 \n"
    "            xmax = 10 \n"
    '            text = "" \n'
    "    item [2]:\n"
    '        class = "IntervalTier" \n'
    '        name = "Non-Patient" \n'
    "        xmin = 0 \n"
    "        xmax = 10 \n"
    "        intervals: size = 3 \n"
    "        intervals [1]:\n"
    "            xmin = 0 \n"
    "            xmax = 5 \n"
    '            text = "" \n'
    "        intervals [2]:\n"
    "            xmin = 5 \n"
    "            xmax = 7.25 \n"
    '            text = "Non-Patient" \n'
    "        intervals [3]:\n"
    "            xmin = 7.25 \n"
    "            xmax = 10 \n"
    '            text = "" \n'
    "    item [3]:\n"
    '        class = "IntervalTier" \n'
    '        name = "Noise" \n'
    "        xmin = 0 \n"
    "        xmax = 10 \n"
    "        intervals: size = 1 \n"
    "        intervals [1]:\n"
    "            xmin = 0 \n"
    "            xmax = 10 \n"
    '            text = "" \n'
    "    item [4]:\n"
    '        class = "TextTier" \n'
    '        name = "bell" \n'
    "        xmin = 0 \n"
    "        xmax = 10 \n"
    "        points: size = 2 \n"
    "        points [1]:\n"
    "            number = 1.5 \n"
    '            mark = "ding" \n'
    "        points [2]:\n"
    "            number = 8 \n"
    '            mark = "dong" \n'
)

MULTILINE_TEXT_LONG = (
    'File type = "ooTextFile"\n'
    'Object class = "TextGrid"\n'
    "\n"
    "xmin = 0 \n"
    "xmax = 1 \n"
    "tiers? <exists> \n"
    "size = 1 \n"
    "item []: \n"
    "    item [1]:\n"
    '        class = "IntervalTier" \n'
    '        name = "notes" \n'
    "        xmin = 0 \n"
    "        xmax = 1 \n"
    "        intervals: size = 1 \n"
    "        intervals [1]:\n"
    "            xmin = 0 \n"
    "            xmax = 1 \n"
    '            text = "first line\n'
    'second line" \n'
)


def fixture_corpus() -> dict[str, bytes]:
    """The parse-oracle corpus: every encoding and both format variants."""
    return {
        "minimal_long_utf8": MINIMAL_LONG.encode("utf-8"),
        "minimal_long_utf8_bom": b"\xef\xbb\xbf" + MINIMAL_LONG.encode("utf-8"),
        "minimal_long_utf16_le": b"\xff\xfe" + MINIMAL_LONG.encode("utf-16-le"),
        "minimal_long_utf16_be": b"\xfe\xff" + MINIMAL_LONG.encode("utf-16-be"),
        "minimal_short": MINIMAL_SHORT.encode("utf-8"),
        "quotes_long": QUOTES_LONG.encode("utf-8"),
        "multi_tier_long": MULTI_TIER_LONG.encode("utf-8"),
        "multiline_text_long": MULTILINE_TEXT_LONG.encode("utf-8"),
        "minimal_crlf": MINIMAL_LONG.replace("\n", "\r\n").encode("utf-8"),
    }


@pytest.fixture
def corpus_fixtures() -> dict[str, bytes]:
    return fixture_corpus()


# ---------------------------------------------------------------------------
# Schemes
# ---------------------------------------------------------------------------


@pytest.fixture
def clinical_scheme() -> CheckingScheme:
    """Three single-class tiers, as in a turn-taking campaign."""
    return CheckingScheme(
        (
            TierSpec("Patient", Checking.CATEGORICAL, ("Patient",)),
            TierSpec("Non-Patient", Checking.CATEGORICAL, ("Non-Patient",)),
            TierSpec("Noise", Checking.CATEGORICAL, ("Noise",)),
        )
    )


@pytest.fixture
def addressee_scheme() -> CheckingScheme:
    return CheckingScheme(
        (
            TierSpec("Speech", Checking.CATEGORICAL, ("Speech",)),
            TierSpec("Addressee", Checking.CATEGORICAL, ("ADS", "CDS")),
        )
    )


SCHEME_YAML = """\
name: turn-takings
duration_tolerance: 0.1
tiers:
  - name: Patient
    checking: categorical
    categories: [Patient]
  - name: Non-Patient
    checking: categorical
    categories: [Non-Patient]
  - name: Noise
    checking: unchecked
"""


def grid_from_units(names_to_units: dict, xmax: float = 10.0):
    """Conforming TextGrid whose tiers tile [0, xmax], with the given units
    as annotated intervals and empty filler in between."""
    from seshat.textgrid import Interval, TextGrid, Tier, TierKind

    tiers = []
    for name, units in names_to_units.items():
        cursor = 0.0
        items = []
        for u in sorted(units):
            if u.start > cursor:
                items.append(Interval(cursor, u.start, ""))
            items.append(Interval(u.start, u.end, u.category))
            cursor = u.end
        if cursor < xmax or not items:
            items.append(Interval(cursor, xmax, ""))
        tiers.append(Tier(name, TierKind.INTERVAL, 0.0, xmax, tuple(items)))
    return TextGrid(0.0, xmax, tuple(tiers))


# ---------------------------------------------------------------------------
# Calibration continuum
# ---------------------------------------------------------------------------


def twenty_unit_continuum():
    """10 narrow units per annotator at incommensurate spacings: calibrated
    during development so the chance-disorder estimate is stable in seed
    (relative spread well under 5% at 100 samples)."""
    from seshat.gamma import Continuum
    from seshat.textgrid import Unit

    phi = (5**0.5 - 1) / 2
    units_a, units_b = [], []
    t = 1.0
    for k in range(10):
        units_a.append(Unit(round(t, 3), round(t + 0.3, 3), f"a{k}"))
        t += 5.0 + 1.7 * ((k * phi) % 1)
    t = 3.1
    for k in range(10):
        units_b.append(Unit(round(t, 3), round(t + 0.3, 3), f"b{k}"))
        t += 4.6 + 2.1 * ((k * phi * 1.3) % 1)
    return Continuum(0.0, 55.0, tuple(units_a), tuple(units_b))


# ---------------------------------------------------------------------------
# Audio builders
# ---------------------------------------------------------------------------


def make_wav(seconds: float, sample_rate: int = 16000, channels: int = 1) -> bytes:
    """Silent PCM16 WAV with an exact number of frames."""
    frames = round(seconds * sample_rate)
    block_align = channels * 2
    byte_rate = sample_rate * block_align
    data = b"\x00" * (frames * block_align)
    fmt = struct.pack("<HHIIHH", 1, channels, sample_rate, byte_rate, block_align, 16)
    out = b"RIFF" + struct.pack("<I", 4 + 8 + len(fmt) + 8 + len(data)) + b"WAVE"
    out += b"fmt " + struct.pack("<I", len(fmt)) + fmt
    out += b"data" + struct.pack("<I", len(data)) + data
    return out


def make_flac_header(total_samples: int, sample_rate: int = 16000) -> bytes:
    """fLaC signature + STREAMINFO only; enough for duration extraction."""
    packed = (sample_rate << 44) | (0 << 41) | (15 << 36) | total_samples
    streaminfo = (
        struct.pack(">HH", 4096, 4096)
        + (0).to_bytes(3, "big")
        + (0).to_bytes(3, "big")
        + packed.to_bytes(8, "big")
        + b"\x00" * 16
    )
    header = bytes([0x80]) + len(streaminfo).to_bytes(3, "big")
    return b"fLaC" + header + streaminfo


def make_mp3(n_frames: int) -> bytes:
    """CBR MPEG1 Layer III 128 kbps 44100 Hz frames of silence."""
    frame_size = 144 * 128000 // 44100  # 417 bytes, no padding bit
    header = bytes([0xFF, 0xFB, 0x90, 0x00])  # MPEG1, L3, 128k, 44100, no pad
    frame = header + b"\x00" * (frame_size - 4)
    return frame * n_frames


@pytest.fixture
def wav_bytes() -> bytes:
    return make_wav(60.0)


# ---------------------------------------------------------------------------
# Acceptance reporting: one PASS/FAIL line per criterion
# ---------------------------------------------------------------------------


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            if "test_acceptance.py" in getattr(report, "nodeid", ""):
                name = report.nodeid.split("::", 1)[1]
                lines.append((name, "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, verdict in sorted(lines):
            terminalreporter.write_line(f"{verdict}  {name}")
