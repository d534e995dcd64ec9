"""Corpus ingestion, campaign and task lifecycle, double-annotator merge.

Tasks move through small explicit state machines. A single-annotator task
is ASSIGNED until a conforming submission completes it. A double task runs
both annotators in PARALLEL; once both have a conforming version, the
per-tier agreement is computed exactly once, the two versions are merged
into a doubled-tier file, and the task enters REVIEW, where the reference
annotator uploads reconciled versions until the automatic diff is clean.

Every submission (conforming or not) is kept forever: the history is the
audit trail of the whole campaign.
"""

from __future__ import annotations

import csv
import io
import statistics
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Union

from . import audio as audio_headers
from .audio import AudioFormat
from .gamma import GAMMA_CSV_COLUMNS, Continuum, GammaConfig, TierGamma, best_alignment, gamma
from .scheme import (
    Checking,
    CheckingScheme,
    ErrorKind,
    TierSpec,
    ValidationError,
    ValidationReport,
    validate,
)
from .textgrid import (
    TextGrid,
    TextGridError,
    annotated_units,
    parse_textgrid,
    rename_tier,
    serialize_textgrid,
)

#: Reconciliation tolerance on unit frontiers, seconds.
DEFAULT_REVIEW_TOLERANCE = 0.05

#: MP3 durations come from a frame scan, so the conformity check is looser.
MP3_DURATION_TOLERANCE = 0.5

REF_SUFFIX = "-ref"
TARGET_SUFFIX = "-target"


class CampaignError(Exception):
    pass


class EmptyCorpus(CampaignError):
    pass


class CsvError(CampaignError):
    pass


class WrongUser(CampaignError):
    pass


class WrongState(CampaignError):
    pass


class TaskState(str, Enum):
    ASSIGNED = "ASSIGNED"
    PARALLEL = "PARALLEL"
    REVIEW = "REVIEW"
    COMPLETED = "COMPLETED"


class Role(str, Enum):
    MANAGER = "manager"
    ANNOTATOR = "annotator"


class CorpusSource(str, Enum):
    FOLDER = "folder"
    CSV = "csv"


def new_id() -> str:
    return uuid.uuid4().hex


def utcnow() -> datetime:
    return datetime.now(timezone.utc)


# ---------------------------------------------------------------------------
# Domain records
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class AudioFile:
    path: str  # relative to the corpus root
    duration: float
    format: AudioFormat
    approximate: bool = False

    def __post_init__(self) -> None:
        if self.duration <= 0:
            raise ValueError(f"{self.path}: duration must be positive")

    def to_doc(self) -> dict[str, Any]:
        return {
            "path": self.path,
            "duration": self.duration,
            "format": self.format.value,
            "approximate": self.approximate,
        }

    @staticmethod
    def from_doc(doc: dict[str, Any]) -> "AudioFile":
        return AudioFile(
            doc["path"], doc["duration"], AudioFormat(doc["format"]), doc["approximate"]
        )


@dataclass(slots=True)
class Corpus:
    id: str
    source: CorpusSource
    files: list[AudioFile]
    root: str | None = None  # folder corpora only
    skipped: list[tuple[str, str]] = field(default_factory=list)

    def file(self, path: str) -> AudioFile:
        for f in self.files:
            if f.path == path:
                return f
        raise KeyError(path)

    def to_doc(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "source": self.source.value,
            "files": [f.to_doc() for f in self.files],
            "root": self.root,
            "skipped": [list(s) for s in self.skipped],
        }

    @staticmethod
    def from_doc(doc: dict[str, Any]) -> "Corpus":
        return Corpus(
            id=doc["id"],
            source=CorpusSource(doc["source"]),
            files=[AudioFile.from_doc(d) for d in doc["files"]],
            root=doc.get("root"),
            skipped=[tuple(s) for s in doc.get("skipped", [])],
        )


@dataclass(slots=True)
class UserAccount:
    id: str
    login: str
    password_hash: str  # salted digest, never a cleartext password
    role: Role

    def to_doc(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "login": self.login,
            "password_hash": self.password_hash,
            "role": self.role.value,
        }

    @staticmethod
    def from_doc(doc: dict[str, Any]) -> "UserAccount":
        return UserAccount(doc["id"], doc["login"], doc["password_hash"], Role(doc["role"]))


@dataclass(frozen=True, slots=True)
class Submission:
    who: str
    when: datetime
    blob_id: str
    report: "Union[ValidationReport, ReviewReport]"

    @property
    def conforming(self) -> bool:
        return self.report.ok

    def to_doc(self) -> dict[str, Any]:
        if isinstance(self.report, ValidationReport):
            report_doc: Any = {"kind": "validation", "errors": self.report.to_doc()}
        else:
            report_doc = {"kind": "review", **self.report.to_doc()}
        return {
            "who": self.who,
            "when": self.when.isoformat(),
            "blob_id": self.blob_id,
            "report": report_doc,
        }

    @staticmethod
    def from_doc(doc: dict[str, Any]) -> "Submission":
        report_doc = doc["report"]
        report: Union[ValidationReport, ReviewReport]
        if report_doc["kind"] == "validation":
            report = ValidationReport.from_doc(report_doc["errors"])
        else:
            report = ReviewReport.from_doc(report_doc)
        return Submission(
            who=doc["who"],
            when=datetime.fromisoformat(doc["when"]),
            blob_id=doc["blob_id"],
            report=report,
        )


@dataclass(slots=True)
class Task:
    id: str
    campaign_id: str
    audio: AudioFile
    kind: str  # "single" | "double"
    state: TaskState
    annotator: str | None = None  # single
    annotator_ref: str | None = None  # double
    annotator_target: str | None = None
    submissions: list[Submission] = field(default_factory=list)
    gamma_results: dict[str, TierGamma] | None = None
    merged_blob: str | None = None
    final_blob: str | None = None

    def annotators(self) -> list[str]:
        if self.kind == "single":
            return [self.annotator] if self.annotator else []
        return [a for a in (self.annotator_ref, self.annotator_target) if a]

    def has_conforming_submission(self, who: str) -> bool:
        return any(s.who == who and s.conforming for s in self.submissions)

    def latest_conforming_blob(self, who: str) -> str:
        for s in reversed(self.submissions):
            if s.who == who and s.conforming:
                return s.blob_id
        raise KeyError(who)

    def to_doc(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "campaign_id": self.campaign_id,
            "audio": self.audio.to_doc(),
            "kind": self.kind,
            "state": self.state.value,
            "annotator": self.annotator,
            "annotator_ref": self.annotator_ref,
            "annotator_target": self.annotator_target,
            "submissions": [s.to_doc() for s in self.submissions],
            "gamma_results": (
                {k: v.to_doc() for k, v in self.gamma_results.items()}
                if self.gamma_results is not None
                else None
            ),
            "merged_blob": self.merged_blob,
            "final_blob": self.final_blob,
        }

    @staticmethod
    def from_doc(doc: dict[str, Any]) -> "Task":
        raw_gamma = doc.get("gamma_results")
        return Task(
            id=doc["id"],
            campaign_id=doc["campaign_id"],
            audio=AudioFile.from_doc(doc["audio"]),
            kind=doc["kind"],
            state=TaskState(doc["state"]),
            annotator=doc.get("annotator"),
            annotator_ref=doc.get("annotator_ref"),
            annotator_target=doc.get("annotator_target"),
            submissions=[Submission.from_doc(d) for d in doc.get("submissions", [])],
            gamma_results=(
                {k: TierGamma.from_doc(v) for k, v in raw_gamma.items()}
                if raw_gamma is not None
                else None
            ),
            merged_blob=doc.get("merged_blob"),
            final_blob=doc.get("final_blob"),
        )


@dataclass(slots=True)
class Campaign:
    id: str
    name: str
    corpus_id: str
    scheme: CheckingScheme
    created_at: datetime
    gamma_config: GammaConfig = GammaConfig()
    task_ids: list[str] = field(default_factory=list)

    def to_doc(self) -> dict[str, Any]:
        from .scheme import scheme_to_dict

        return {
            "id": self.id,
            "name": self.name,
            "corpus_id": self.corpus_id,
            "scheme": scheme_to_dict(self.scheme),
            "created_at": self.created_at.isoformat(),
            "gamma_config": self.gamma_config.to_doc(),
            "task_ids": list(self.task_ids),
        }

    @staticmethod
    def from_doc(doc: dict[str, Any]) -> "Campaign":
        from .scheme import scheme_from_dict

        return Campaign(
            id=doc["id"],
            name=doc["name"],
            corpus_id=doc["corpus_id"],
            scheme=scheme_from_dict(doc["scheme"]),
            created_at=datetime.fromisoformat(doc["created_at"]),
            gamma_config=GammaConfig.from_doc(doc["gamma_config"]),
            task_ids=list(doc.get("task_ids", [])),
        )


def new_single_task(campaign_id: str, audio: AudioFile, annotator: str) -> Task:
    return Task(
        id=new_id(),
        campaign_id=campaign_id,
        audio=audio,
        kind="single",
        state=TaskState.ASSIGNED,
        annotator=annotator,
    )


def new_double_task(
    campaign_id: str, audio: AudioFile, annotator_ref: str, annotator_target: str
) -> Task:
    if annotator_ref == annotator_target:
        raise CampaignError("a double task needs two distinct annotators")
    return Task(
        id=new_id(),
        campaign_id=campaign_id,
        audio=audio,
        kind="double",
        state=TaskState.PARALLEL,
        annotator_ref=annotator_ref,
        annotator_target=annotator_target,
    )


# ---------------------------------------------------------------------------
# Corpus ingestion
# ---------------------------------------------------------------------------


def import_corpus_folder(root: Union[str, Path]) -> Corpus:
    """Recursive scan for .wav/.flac/.mp3 (any case); unreadable files are
    recorded as skipped rather than failing the import."""
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"corpus folder not found: {root}")
    files: list[AudioFile] = []
    skipped: list[tuple[str, str]] = []
    for path in sorted(root.rglob("*")):
        if not path.is_file():
            continue
        fmt = audio_headers.EXTENSIONS.get(path.suffix.lower())
        if fmt is None:
            continue
        relative = path.relative_to(root).as_posix()
        try:
            duration, approximate = audio_headers.duration_of(path)
            files.append(AudioFile(relative, duration, fmt, approximate))
        except (audio_headers.AudioError, ValueError, OSError) as exc:
            skipped.append((relative, str(exc)))
    if not files:
        raise EmptyCorpus(f"no readable audio files under {root}")
    return Corpus(
        id=new_id(),
        source=CorpusSource.FOLDER,
        files=files,
        root=str(root),
        skipped=skipped,
    )


def import_corpus_csv(document: Union[bytes, str]) -> Corpus:
    """Corpus from a `filename,duration` listing; no audio is stored."""
    if isinstance(document, bytes):
        document = document.decode("utf-8-sig")
    rows = list(csv.reader(io.StringIO(document)))
    if not rows:
        raise CsvError("empty CSV document")
    header = [h.strip() for h in rows[0]]
    if header != ["filename", "duration"]:
        raise CsvError(f"expected header 'filename,duration', got {rows[0]!r}")
    files: list[AudioFile] = []
    seen: set[str] = set()
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or not any(cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise CsvError(f"row {lineno}: expected 2 columns, got {len(row)}")
        filename = row[0].strip()
        if not filename:
            raise CsvError(f"row {lineno}: empty filename")
        fmt = audio_headers.EXTENSIONS.get(Path(filename).suffix.lower())
        if fmt is None:
            raise CsvError(f"row {lineno}: unsupported audio format: {filename!r}")
        if filename in seen:
            raise CsvError(f"row {lineno}: duplicate filename {filename!r}")
        seen.add(filename)
        try:
            duration = float(row[1])
        except ValueError:
            raise CsvError(f"row {lineno}: non-numeric duration {row[1]!r}") from None
        if duration <= 0:
            raise CsvError(f"row {lineno}: duration must be positive, got {duration}")
        files.append(AudioFile(filename, duration, fmt))
    if not files:
        raise EmptyCorpus("CSV lists no files")
    return Corpus(id=new_id(), source=CorpusSource.CSV, files=files)


# ---------------------------------------------------------------------------
# Submission pipeline
# ---------------------------------------------------------------------------

SaveBlob = Callable[[bytes], str]


def duration_tolerance_for(task: Task, scheme: CheckingScheme) -> float:
    if task.audio.format is AudioFormat.MP3:
        return max(scheme.duration_tolerance, MP3_DURATION_TOLERANCE)
    return scheme.duration_tolerance


def _validate_bytes(
    raw: bytes, task: Task, scheme: CheckingScheme
) -> tuple[TextGrid | None, ValidationReport]:
    try:
        tg = parse_textgrid(raw)
    except TextGridError as exc:
        report = ValidationReport(
            (
                ValidationError(
                    ErrorKind.STRUCTURE_ERROR, None, f"file does not parse: {exc}"
                ),
            )
        )
        return None, report
    report = validate(
        tg, scheme, task.audio.duration, duration_tolerance_for(task, scheme)
    )
    return tg, report


def submit_single(
    task: Task,
    who: str,
    raw: bytes,
    scheme: CheckingScheme,
    save_blob: SaveBlob,
) -> ValidationReport:
    if task.kind != "single":
        raise WrongState(f"task {task.id} is not a single-annotator task")
    if who != task.annotator:
        raise WrongUser(f"task {task.id} is not assigned to {who!r}")
    if task.state is not TaskState.ASSIGNED:
        raise WrongState(f"task {task.id} is {task.state.value}, not open for submission")

    _, report = _validate_bytes(raw, task, scheme)
    task.submissions.append(Submission(who, utcnow(), save_blob(raw), report))
    if report.ok:
        task.state = TaskState.COMPLETED
    return report


@dataclass(frozen=True, slots=True)
class DoubleAdvance:
    """Returned when the second conforming parallel submission lands: the
    task moved to REVIEW with agreement computed and the merged file built."""

    report: ValidationReport
    gamma_results: dict[str, TierGamma]
    merged: TextGrid


def submit_parallel(
    task: Task,
    who: str,
    raw: bytes,
    scheme: CheckingScheme,
    cfg: GammaConfig,
    save_blob: SaveBlob,
    load_blob: Callable[[str], bytes],
) -> Union[ValidationReport, DoubleAdvance]:
    if task.kind != "double":
        raise WrongState(f"task {task.id} is not a double-annotator task")
    if who not in (task.annotator_ref, task.annotator_target):
        raise WrongUser(f"task {task.id} is not assigned to {who!r}")
    if task.state is not TaskState.PARALLEL:
        raise WrongState(f"task {task.id} is {task.state.value}, parallel phase is over")
    if task.has_conforming_submission(who):
        raise WrongState(f"{who!r} already has a conforming version for task {task.id}")

    _, report = _validate_bytes(raw, task, scheme)
    task.submissions.append(Submission(who, utcnow(), save_blob(raw), report))
    if not report.ok:
        return report

    other = task.annotator_target if who == task.annotator_ref else task.annotator_ref
    if not task.has_conforming_submission(other):
        return report  # wait for the second annotator

    tg_ref = parse_textgrid(load_blob(task.latest_conforming_blob(task.annotator_ref)))
    tg_target = parse_textgrid(load_blob(task.latest_conforming_blob(task.annotator_target)))
    task.gamma_results = gamma(tg_ref, tg_target, scheme, cfg)
    merged = build_merged(tg_ref, tg_target, scheme)
    task.merged_blob = save_blob(serialize_textgrid(merged))
    task.state = TaskState.REVIEW
    return DoubleAdvance(report=report, gamma_results=task.gamma_results, merged=merged)


def build_merged(tg_ref: TextGrid, tg_target: TextGrid, scheme: CheckingScheme) -> TextGrid:
    """Side-by-side file: each scheme tier T becomes adjacent tiers T-ref
    and T-target carrying the two annotators' content verbatim."""
    tiers = []
    for spec in scheme.tier_specs:
        tiers.append(rename_tier(tg_ref.tier(spec.name), spec.name + REF_SUFFIX))
        tiers.append(rename_tier(tg_target.tier(spec.name), spec.name + TARGET_SUFFIX))
    return TextGrid(
        min(tg_ref.xmin, tg_target.xmin),
        max(tg_ref.xmax, tg_target.xmax),
        tuple(tiers),
    )


def doubled_scheme(scheme: CheckingScheme) -> CheckingScheme:
    """The merged file's contract: every tier duplicated as -ref/-target,
    with the original content rules on both sides."""
    specs = []
    for s in scheme.tier_specs:
        for suffix in (REF_SUFFIX, TARGET_SUFFIX):
            specs.append(
                TierSpec(
                    name=s.name + suffix,
                    checking=s.checking,
                    categories=s.categories,
                    parser=s.parser,
                    allow_empty=s.allow_empty,
                )
            )
    return CheckingScheme(tuple(specs), scheme.duration_tolerance, scheme.name)


# ---------------------------------------------------------------------------
# Review
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class FrontierConflict:
    tier: str
    ref_range: tuple[float, float]
    target_range: tuple[float, float]

    def to_doc(self) -> dict[str, Any]:
        return {
            "tier": self.tier,
            "ref_range": list(self.ref_range),
            "target_range": list(self.target_range),
        }


@dataclass(frozen=True, slots=True)
class ContentConflict:
    tier: str
    ref_range: tuple[float, float]
    ref_text: str
    target_text: str

    def to_doc(self) -> dict[str, Any]:
        return {
            "tier": self.tier,
            "ref_range": list(self.ref_range),
            "ref_text": self.ref_text,
            "target_text": self.target_text,
        }


@dataclass(frozen=True, slots=True)
class LoneUnit:
    tier: str
    side: str  # "ref" | "target"
    time_range: tuple[float, float]
    text: str

    def to_doc(self) -> dict[str, Any]:
        return {
            "tier": self.tier,
            "side": self.side,
            "time_range": list(self.time_range),
            "text": self.text,
        }


@dataclass(frozen=True, slots=True)
class ReviewReport:
    frontier_conflicts: tuple[FrontierConflict, ...] = ()
    content_conflicts: tuple[ContentConflict, ...] = ()
    lone_units: tuple[LoneUnit, ...] = ()
    validation_errors: tuple[ValidationError, ...] = ()

    @property
    def ok(self) -> bool:
        return not (
            self.frontier_conflicts
            or self.content_conflicts
            or self.lone_units
            or self.validation_errors
        )

    def to_doc(self) -> dict[str, Any]:
        return {
            "frontier_conflicts": [c.to_doc() for c in self.frontier_conflicts],
            "content_conflicts": [c.to_doc() for c in self.content_conflicts],
            "lone_units": [c.to_doc() for c in self.lone_units],
            "validation_errors": [e.to_doc() for e in self.validation_errors],
        }

    @staticmethod
    def from_doc(doc: dict[str, Any]) -> "ReviewReport":
        return ReviewReport(
            frontier_conflicts=tuple(
                FrontierConflict(d["tier"], tuple(d["ref_range"]), tuple(d["target_range"]))
                for d in doc.get("frontier_conflicts", [])
            ),
            content_conflicts=tuple(
                ContentConflict(
                    d["tier"], tuple(d["ref_range"]), d["ref_text"], d["target_text"]
                )
                for d in doc.get("content_conflicts", [])
            ),
            lone_units=tuple(
                LoneUnit(d["tier"], d["side"], tuple(d["time_range"]), d["text"])
                for d in doc.get("lone_units", [])
            ),
            validation_errors=tuple(
                ValidationError.from_doc(d) for d in doc.get("validation_errors", [])
            ),
        )


def diff_tier_pair(
    tier_name: str,
    units_ref: list,
    units_target: list,
    tolerance: float,
    cfg: GammaConfig,
) -> tuple[list[FrontierConflict], list[ContentConflict], list[LoneUnit]]:
    frontier: list[FrontierConflict] = []
    content: list[ContentConflict] = []
    lone: list[LoneUnit] = []
    if not units_ref and not units_target:
        return frontier, content, lone
    xmin = min(u.start for u in units_ref + units_target)
    xmax = max(u.end for u in units_ref + units_target)
    alignment, _ = best_alignment(
        Continuum(xmin, xmax, tuple(units_ref), tuple(units_target)), cfg
    )
    for u, v in alignment.pairs:
        if u is None:
            lone.append(LoneUnit(tier_name, "target", (v.start, v.end), v.category))
        elif v is None:
            lone.append(LoneUnit(tier_name, "ref", (u.start, u.end), u.category))
        else:
            if abs(u.start - v.start) > tolerance or abs(u.end - v.end) > tolerance:
                frontier.append(
                    FrontierConflict(tier_name, (u.start, u.end), (v.start, v.end))
                )
            if u.category != v.category:
                content.append(
                    ContentConflict(tier_name, (u.start, u.end), u.category, v.category)
                )
    return frontier, content, lone


def review_check(
    task: Task,
    who: str,
    raw: bytes,
    scheme: CheckingScheme,
    cfg: GammaConfig,
    save_blob: SaveBlob,
    tolerance: float = DEFAULT_REVIEW_TOLERANCE,
) -> ReviewReport:
    """Diff the doubled-tier file; when clean, derive the final single-stack
    file from the ref side, validate it, and complete the task."""
    if task.kind != "double":
        raise WrongState(f"task {task.id} is not a double-annotator task")
    if task.state is not TaskState.REVIEW:
        raise WrongState(f"task {task.id} is {task.state.value}, not in review")
    if who != task.annotator_ref:
        raise WrongUser(f"reconciled versions must come from {task.annotator_ref!r}")

    try:
        tg = parse_textgrid(raw)
    except TextGridError as exc:
        report = ReviewReport(
            validation_errors=(
                ValidationError(
                    ErrorKind.STRUCTURE_ERROR, None, f"file does not parse: {exc}"
                ),
            )
        )
        task.submissions.append(Submission(who, utcnow(), save_blob(raw), report))
        return report

    merged_contract = doubled_scheme(scheme)
    structural = validate(
        tg, merged_contract, task.audio.duration, duration_tolerance_for(task, scheme)
    )

    frontier: list[FrontierConflict] = []
    content: list[ContentConflict] = []
    lone: list[LoneUnit] = []
    tg_names = tg.tier_names()
    for spec in scheme.tier_specs:
        ref_name = spec.name + REF_SUFFIX
        target_name = spec.name + TARGET_SUFFIX
        if ref_name not in tg_names or target_name not in tg_names:
            continue  # already reported by the structural check
        f, c, l = diff_tier_pair(
            spec.name,
            annotated_units(tg.tier(ref_name)),
            annotated_units(tg.tier(target_name)),
            tolerance,
            cfg,
        )
        frontier.extend(f)
        content.extend(c)
        lone.extend(l)

    report = ReviewReport(
        frontier_conflicts=tuple(frontier),
        content_conflicts=tuple(content),
        lone_units=tuple(lone),
        validation_errors=tuple(structural.errors),
    )

    if report.ok:
        final = collapse_merged(tg, scheme)
        final_report = validate(
            final, scheme, task.audio.duration, duration_tolerance_for(task, scheme)
        )
        if not final_report.ok:
            report = ReviewReport(validation_errors=tuple(final_report.errors))
            task.submissions.append(Submission(who, utcnow(), save_blob(raw), report))
            return report
        task.submissions.append(Submission(who, utcnow(), save_blob(raw), report))
        task.final_blob = save_blob(serialize_textgrid(final))
        task.state = TaskState.COMPLETED
        return report

    task.submissions.append(Submission(who, utcnow(), save_blob(raw), report))
    return report


def collapse_merged(tg: TextGrid, scheme: CheckingScheme) -> TextGrid:
    """Single-stack file from a reconciled doubled file: each T-ref tier
    becomes T (the ref side is authoritative once the diff is clean)."""
    tiers = tuple(
        rename_tier(tg.tier(spec.name + REF_SUFFIX), spec.name)
        for spec in scheme.tier_specs
    )
    return TextGrid(tg.xmin, tg.xmax, tiers)


# ---------------------------------------------------------------------------
# Monitoring and reporting
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Progress:
    task_states: dict[str, str]
    counts: dict[str, int]
    completed: int
    total: int
    ratio: float
    empty: bool

    def to_doc(self) -> dict[str, Any]:
        return {
            "task_states": dict(self.task_states),
            "counts": dict(self.counts),
            "completed": self.completed,
            "total": self.total,
            "ratio": self.ratio,
            "empty": self.empty,
        }


def progress(tasks: list[Task]) -> Progress:
    states = {t.id: t.state.value for t in tasks}
    counts: dict[str, int] = {s.value: 0 for s in TaskState}
    for t in tasks:
        counts[t.state.value] += 1
    completed = counts[TaskState.COMPLETED.value]
    total = len(tasks)
    return Progress(
        task_states=states,
        counts=counts,
        completed=completed,
        total=total,
        ratio=(completed / total) if total else 0.0,
        empty=total == 0,
    )


def gamma_report_csv(campaign: Campaign, tasks: list[Task]) -> str:
    """Per-(task, tier) agreement rows followed by a per-tier summary block
    (mean, range, number of classes)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(GAMMA_CSV_COLUMNS)
    per_tier: dict[str, list[float]] = {s.name: [] for s in campaign.scheme.tier_specs}
    for task in tasks:
        if task.kind != "double" or task.gamma_results is None:
            continue
        for spec in campaign.scheme.tier_specs:
            tier_gamma = task.gamma_results.get(spec.name)
            if tier_gamma is None:
                continue
            r = tier_gamma.result
            writer.writerow(
                [
                    campaign.name,
                    task.id,
                    task.audio.path,
                    spec.name,
                    repr(r.gamma) if r else "",
                    repr(r.observed_disorder) if r else "",
                    repr(r.expected_disorder) if r else "",
                    tier_gamma.n_units_a,
                    tier_gamma.n_units_b,
                    r.n_samples if r else "",
                    r.seed if r else "",
                ]
            )
            if r is not None:
                per_tier[spec.name].append(r.gamma)

    writer.writerow([])
    writer.writerow(["tier", "mean_gamma", "gamma_range", "n_classes"])
    for spec in campaign.scheme.tier_specs:
        values = per_tier[spec.name]
        n_classes = len(spec.categories) if spec.checking is Checking.CATEGORICAL else ""
        writer.writerow(
            [
                spec.name,
                repr(statistics.fmean(values)) if values else "",
                repr(max(values) - min(values)) if values else "",
                n_classes,
            ]
        )
    return out.getvalue()
