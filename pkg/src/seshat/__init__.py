"""Annotation-campaign management for speech corpora.

Library layers, lowest first:

- ``textgrid``: Praat TextGrid values, parsing, serialization, templates
- ``parsers``: annotation content checkers (French SAMPA built in)
- ``scheme``: per-campaign conformity contracts and validation reports
- ``gamma``: chance-corrected inter-rater agreement per tier
- ``audio``: WAV/FLAC/MP3 duration extraction from headers
- ``campaign``: corpora, task state machines, merge and review pipeline
- ``storage`` / ``service`` / ``server``: persistence and the REST API
- ``cli``: command-line client and offline toolbench
"""

from .textgrid import (
    EncodingError,
    Interval,
    InvalidDuration,
    KindError,
    ParseError,
    Point,
    StructureError,
    TextGrid,
    TextGridError,
    Tier,
    TierKind,
    Unit,
    annotated_units,
    generate_template,
    parse_textgrid,
    serialize_textgrid,
)
from .scheme import (
    Checking,
    CheckingScheme,
    ConfigError,
    ErrorKind,
    TierSpec,
    ValidationError,
    ValidationReport,
    scheme_from_config,
    validate,
)
from .parsers import (
    AnnotationError,
    AnnotationParser,
    DuplicateId,
    FrenchSampaParser,
    FRENCH_SAMPA_PHONEMES,
    levenshtein,
    parse_sampa,
    register_parser,
)
from .gamma import (
    Alignment,
    Continuum,
    EmptyContinuum,
    GammaConfig,
    GammaResult,
    NonConforming,
    TierGamma,
    best_alignment,
    d_cat,
    d_pos,
    dissimilarity,
    expected_disorder,
    gamma,
)

__version__ = "0.1.0"
