"""Pluggable annotation content checkers and distances.

A parser knows two things: whether an annotation string is valid
(`check_annotation` raises on invalid input) and how far apart two
annotation strings are (`distance`). The built-in ``french-sampa`` parser
tokenizes French SAMPA phoneme strings and measures Levenshtein distance
over phoneme sequences. Out-of-process parsers let non-Python tooling hook
in through a one-line-per-call subprocess protocol.
"""

from __future__ import annotations

import subprocess
from typing import Sequence


class AnnotationError(Exception):
    """Annotation content rejected by a parser."""

    def __init__(self, message: str, remainder: str | None = None):
        super().__init__(message)
        self.remainder = remainder


class DuplicateId(Exception):
    """A parser id was registered twice."""


class UnknownParser(KeyError):
    """Lookup of a parser id that was never registered."""


class AnnotationParser:
    """Base class for annotation checkers.

    Subclasses set ``id`` and override ``check_annotation`` and
    ``distance``. Parsers must be stateless between calls; the registry is
    populated at startup and treated as read-only afterwards.
    """

    id: str = ""

    def check_annotation(self, text: str) -> None:
        """Raise AnnotationError iff ``text`` is not a valid annotation."""
        raise NotImplementedError

    def distance(self, a: str, b: str) -> float:
        raise NotImplementedError


def levenshtein(a: Sequence, b: Sequence) -> int:
    """Edit distance with unit insert/delete/substitute costs, over
    arbitrary sequence elements (phonemes here, not characters)."""
    n, m = len(a), len(b)
    if n > m:
        a, b, n, m = b, a, m, n
    current = list(range(n + 1))
    for i in range(1, m + 1):
        previous, current = current, [i] + [0] * n
        for j in range(1, n + 1):
            add = previous[j] + 1
            delete = current[j - 1] + 1
            change = previous[j - 1] + (a[j - 1] != b[i - 1])
            current[j] = min(add, delete, change)
    return current[n]


#: The 42 symbols of the built-in French SAMPA inventory.
FRENCH_SAMPA_PHONEMES = (
    "&/", "2", "9", "9~", "@", "A", "A/", "E", "E/", "H",
    "N", "O", "O/", "R", "S", "U~/", "Z", "a", "a~", "b",
    "d", "e", "e~", "f", "g", "i", "j", "k", "l", "m", "n",
    "o", "o~", "p", "s", "t", "u", "v", "w", "y", "z", "J",
)

# Annotators routinely write the rhotic in lowercase; accept it as a token
# of its own next to the canonical inventory.
_ACCEPTED_PHONEMES = FRENCH_SAMPA_PHONEMES + ("r",)

# matching is longest-first, so "9~" wins over "9" on the prefix "9~R"
_SORTED_PHONEMES = tuple(sorted(_ACCEPTED_PHONEMES, key=len, reverse=True))


def parse_sampa(pho_str: str) -> list[str]:
    """Greedy longest-prefix tokenization of a French phoneme string.

    ex: "septa~br" -> [s, e, p, t, a~, b, r]
    """
    pho_list: list[str] = []
    while pho_str:
        for phoneme in _SORTED_PHONEMES:
            if pho_str[: len(phoneme)] == phoneme:
                pho_list.append(phoneme)
                pho_str = pho_str[len(phoneme) :]
                break
        else:
            raise AnnotationError(
                f"Can't parse phonetic form: no phoneme matches {pho_str!r}",
                remainder=pho_str,
            )
    return pho_list


class FrenchSampaParser(AnnotationParser):
    """Accepts phone sequences in French SAMPA; distance is the Levenshtein
    distance between the parsed phoneme lists."""

    id = "french-sampa"

    def check_annotation(self, text: str) -> None:
        parse_sampa(text)

    def distance(self, a: str, b: str) -> float:
        return float(levenshtein(parse_sampa(a), parse_sampa(b)))


class SubprocessParser(AnnotationParser):
    """Adapter for out-of-process parsers.

    The executable is invoked once per call with a single command on stdin:

        CHECK <text>
        DIST <a>\\t<b>

    (DIST arguments are tab-separated so annotations may contain spaces.)
    A nonzero exit status means the annotation is invalid; the first line
    the process printed becomes the AnnotationError message. For DIST the
    first stdout line must be the distance as a decimal number.
    """

    def __init__(self, parser_id: str, executable: str, timeout: float = 30.0):
        self.id = parser_id
        self.executable = executable
        self.timeout = timeout

    def _run(self, command: str) -> str:
        proc = subprocess.run(
            [self.executable],
            input=command + "\n",
            capture_output=True,
            text=True,
            timeout=self.timeout,
        )
        first_line = (proc.stdout or proc.stderr).splitlines()
        if proc.returncode != 0:
            message = first_line[0] if first_line else f"parser exited {proc.returncode}"
            raise AnnotationError(message)
        return first_line[0] if first_line else ""

    def check_annotation(self, text: str) -> None:
        if "\n" in text:
            raise AnnotationError("annotation may not contain newlines")
        self._run(f"CHECK {text}")

    def distance(self, a: str, b: str) -> float:
        if "\n" in a or "\n" in b or "\t" in a or "\t" in b:
            raise AnnotationError("annotation may not contain tabs or newlines")
        out = self._run(f"DIST {a}\t{b}")
        try:
            return float(out)
        except ValueError:
            raise AnnotationError(f"parser returned a non-numeric distance: {out!r}") from None


_registry: dict[str, AnnotationParser] = {}


def register_parser(parser: AnnotationParser) -> str:
    if not parser.id:
        raise ValueError("parser id must be non-empty")
    if parser.id in _registry:
        raise DuplicateId(parser.id)
    _registry[parser.id] = parser
    return parser.id


def get_parser(parser_id: str) -> AnnotationParser:
    try:
        return _registry[parser_id]
    except KeyError:
        raise UnknownParser(parser_id) from None


def registered_ids() -> list[str]:
    return sorted(_registry)


register_parser(FrenchSampaParser())
