"""REST service over the campaign domain: auth, file transfer, persistence.

Every route speaks JSON except file downloads (template, audio, blobs,
gamma CSV) and multipart uploads. Error bodies are uniform:
``{"code": ..., "message": ...}`` plus endpoint-specific extras — a failed
submission carries the full serialized report under ``"report"``.

State-mutating endpoints honor an ``Idempotency-Key`` header: the recorded
response of the first execution is replayed for retries of the same
(user, endpoint, key) triple, recorded atomically with the mutation
itself, so a retried upload can never create a second submission.
"""

from __future__ import annotations

import hashlib
import os
import secrets
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Any, Optional

import yaml
from fastapi import Depends, FastAPI, Header, Request, UploadFile
from fastapi.responses import JSONResponse, Response

from . import campaign as dom
from .campaign import (
    Campaign,
    Corpus,
    CorpusSource,
    CampaignError,
    CsvError,
    DoubleAdvance,
    EmptyCorpus,
    Role,
    Task,
    TaskState,
    UserAccount,
    WrongState,
    WrongUser,
)
from .gamma import GammaConfig
from .scheme import ConfigError, ValidationReport, scheme_from_dict, scheme_to_dict
from .storage import NotFound, StorageCorruption, Store
from .textgrid import generate_template, serialize_textgrid


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


@dataclass(slots=True)
class ServerConfig:
    host: str = "127.0.0.1"
    port: int = 8000
    data_dir: str = "./data"
    corpora_root: str = "./corpora"
    token_lifetime_hours: float = 24.0
    admin_login: str = "admin"
    admin_password: str = "admin"
    upload_cap_mb: float = 20.0

    @staticmethod
    def load(path: str | Path | None = None, env: Optional[dict[str, str]] = None) -> "ServerConfig":
        """Config file first, then SESHAT_* environment overrides."""
        values: dict[str, Any] = {}
        if path is not None:
            doc = yaml.safe_load(Path(path).read_text()) or {}
            if not isinstance(doc, dict):
                raise ValueError("server config must be a mapping")
            values.update(doc)
        env = os.environ if env is None else env
        for key, cast in (
            ("host", str),
            ("port", int),
            ("data_dir", str),
            ("corpora_root", str),
            ("token_lifetime_hours", float),
            ("admin_login", str),
            ("admin_password", str),
            ("upload_cap_mb", float),
        ):
            raw = env.get(f"SESHAT_{key.upper()}")
            if raw is not None:
                values[key] = cast(raw)
        known = {f for f in ServerConfig.__dataclass_fields__}
        unknown = set(values) - known
        if unknown:
            raise ValueError(f"unknown server config field(s): {sorted(unknown)}")
        return ServerConfig(**values)


# ---------------------------------------------------------------------------
# Passwords and tokens
# ---------------------------------------------------------------------------


def hash_password(password: str) -> str:
    salt = os.urandom(16)
    digest = hashlib.scrypt(password.encode(), salt=salt, n=16384, r=8, p=1)
    return f"scrypt:16384:8:1:{salt.hex()}:{digest.hex()}"


def verify_password(password: str, stored: str) -> bool:
    try:
        algo, n, r, p, salt_hex, digest_hex = stored.split(":")
        if algo != "scrypt":
            return False
        digest = hashlib.scrypt(
            password.encode(), salt=bytes.fromhex(salt_hex), n=int(n), r=int(r), p=int(p)
        )
        return secrets.compare_digest(digest.hex(), digest_hex)
    except (ValueError, TypeError):
        return False


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, **extra: Any):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.extra = extra

    def body(self) -> dict[str, Any]:
        return {"code": self.code, "message": self.message, **self.extra}


# ---------------------------------------------------------------------------
# Service operations
# ---------------------------------------------------------------------------


class Service:
    """All campaign operations, persisted through a Store."""

    def __init__(self, store: Store, config: ServerConfig):
        self.store = store
        self.config = config

    # -- bootstrap ---------------------------------------------------------

    def ensure_admin(self) -> None:
        if self.store.find_doc("user", login=self.config.admin_login) is None:
            self.create_user_record(
                self.config.admin_login, self.config.admin_password, Role.MANAGER
            )

    def create_user_record(self, login: str, password: str, role: Role) -> UserAccount:
        if self.store.find_doc("user", login=login) is not None:
            raise ApiError(422, "duplicate_login", f"login {login!r} already exists")
        user = UserAccount(dom.new_id(), login, hash_password(password), role)
        self.store.put_doc("user", user.id, user.to_doc())
        return user

    # -- auth ----------------------------------------------------------------

    def login(self, login: str, password: str) -> dict[str, Any]:
        doc = self.store.find_doc("user", login=login)
        if doc is None or not verify_password(password, doc["password_hash"]):
            raise ApiError(401, "bad_credentials", "unknown login or wrong password")
        user = UserAccount.from_doc(doc)
        token = secrets.token_urlsafe(32)
        expires = datetime.now(timezone.utc) + timedelta(
            hours=self.config.token_lifetime_hours
        )
        self.store.put_doc(
            "token",
            token,
            {"token": token, "user_id": user.id, "expires_at": expires.isoformat()},
        )
        return {"token": token, "role": user.role.value, "expires_at": expires.isoformat()}

    def authenticate(self, authorization: str | None) -> UserAccount:
        if not authorization or not authorization.startswith("Bearer "):
            raise ApiError(401, "unauthenticated", "missing bearer token")
        token = authorization[len("Bearer ") :].strip()
        try:
            doc = self.store.get_doc("token", token)
        except NotFound:
            raise ApiError(401, "unauthenticated", "unknown token") from None
        if datetime.fromisoformat(doc["expires_at"]) < datetime.now(timezone.utc):
            raise ApiError(401, "unauthenticated", "token expired")
        return UserAccount.from_doc(self.store.get_doc("user", doc["user_id"]))

    # -- lookups -------------------------------------------------------------

    def _corpus(self, corpus_id: str) -> Corpus:
        try:
            return Corpus.from_doc(self.store.get_doc("corpus", corpus_id))
        except NotFound:
            raise ApiError(404, "unknown_corpus", f"no corpus {corpus_id!r}") from None

    def _campaign(self, campaign_id: str) -> Campaign:
        try:
            return Campaign.from_doc(self.store.get_doc("campaign", campaign_id))
        except NotFound:
            raise ApiError(404, "unknown_campaign", f"no campaign {campaign_id!r}") from None

    def _task(self, task_id: str) -> Task:
        try:
            return Task.from_doc(self.store.get_doc("task", task_id))
        except NotFound:
            raise ApiError(404, "unknown_task", f"no task {task_id!r}") from None

    def _user_by_login(self, login: str) -> UserAccount:
        doc = self.store.find_doc("user", login=login)
        if doc is None:
            raise ApiError(404, "unknown_user", f"no user {login!r}")
        return UserAccount.from_doc(doc)

    # -- corpora ---------------------------------------------------------------

    def corpus_from_folder(self, relative_path: str) -> dict[str, Any]:
        root = Path(self.config.corpora_root).resolve()
        target = (root / relative_path).resolve()
        if not target.is_relative_to(root):
            raise ApiError(422, "bad_path", "corpus path escapes the corpora root")
        try:
            corpus = dom.import_corpus_folder(target)
        except FileNotFoundError as exc:
            raise ApiError(404, "unknown_folder", str(exc)) from None
        corpus.root = str(target.relative_to(root))
        self.store.put_doc("corpus", corpus.id, corpus.to_doc())
        return self.corpus_summary(corpus)

    def corpus_from_csv(self, document: bytes) -> dict[str, Any]:
        corpus = dom.import_corpus_csv(document)
        self.store.put_doc("corpus", corpus.id, corpus.to_doc())
        return self.corpus_summary(corpus)

    @staticmethod
    def corpus_summary(corpus: Corpus) -> dict[str, Any]:
        return {
            "id": corpus.id,
            "source": corpus.source.value,
            "files": [f.to_doc() for f in corpus.files],
            "skipped": [list(s) for s in corpus.skipped],
        }

    # -- campaigns ---------------------------------------------------------------

    def create_campaign(
        self,
        name: str,
        corpus_id: str,
        scheme_doc: Any,
        gamma_doc: Optional[dict[str, Any]] = None,
    ) -> dict[str, Any]:
        corpus = self._corpus(corpus_id)
        if not corpus.files:
            raise ApiError(422, "empty_corpus", "cannot attach an empty corpus")
        try:
            scheme = scheme_from_dict(scheme_doc)
        except ConfigError as exc:
            raise ApiError(422, "config_error", str(exc)) from None
        gamma_cfg = GammaConfig()
        if gamma_doc:
            try:
                gamma_cfg = GammaConfig.from_doc({**gamma_cfg.to_doc(), **gamma_doc})
            except (TypeError, ValueError) as exc:
                raise ApiError(422, "config_error", f"bad gamma config: {exc}") from None
        camp = Campaign(
            id=dom.new_id(),
            name=name,
            corpus_id=corpus_id,
            scheme=scheme,
            created_at=dom.utcnow(),
            gamma_config=gamma_cfg,
        )
        self.store.put_doc("campaign", camp.id, camp.to_doc())
        return {"id": camp.id, "name": camp.name}

    def campaign_summary(self, camp: Campaign) -> dict[str, Any]:
        return {
            "id": camp.id,
            "name": camp.name,
            "corpus_id": camp.corpus_id,
            "created_at": camp.created_at.isoformat(),
            "scheme": scheme_to_dict(camp.scheme),
            "n_tasks": len(camp.task_ids),
        }

    def campaign_tasks(self, camp: Campaign) -> list[Task]:
        return [self._task(tid) for tid in camp.task_ids]

    def campaign_progress(self, campaign_id: str) -> dict[str, Any]:
        camp = self._campaign(campaign_id)
        return dom.progress(self.campaign_tasks(camp)).to_doc()

    def campaign_gamma_csv(self, campaign_id: str) -> str:
        camp = self._campaign(campaign_id)
        return dom.gamma_report_csv(camp, self.campaign_tasks(camp))

    # -- tasks ---------------------------------------------------------------

    def create_task(
        self,
        campaign_id: str,
        file_path: str,
        kind: str,
        annotator: str | None,
        annotator_ref: str | None,
        annotator_target: str | None,
    ) -> dict[str, Any]:
        with self.store.transaction():
            camp = self._campaign(campaign_id)
            corpus = self._corpus(camp.corpus_id)
            try:
                audio = corpus.file(file_path)
            except KeyError:
                raise ApiError(
                    404, "unknown_file", f"{file_path!r} is not in the corpus"
                ) from None
            if kind == "single":
                if not annotator:
                    raise ApiError(422, "bad_task", "single task needs 'annotator'")
                self._require_annotator(annotator)
                task = dom.new_single_task(camp.id, audio, annotator)
            elif kind == "double":
                if not annotator_ref or not annotator_target:
                    raise ApiError(
                        422, "bad_task", "double task needs 'annotator_ref' and 'annotator_target'"
                    )
                self._require_annotator(annotator_ref)
                self._require_annotator(annotator_target)
                try:
                    task = dom.new_double_task(camp.id, audio, annotator_ref, annotator_target)
                except CampaignError as exc:
                    raise ApiError(422, "bad_task", str(exc)) from None
            else:
                raise ApiError(422, "bad_task", f"kind must be single or double, got {kind!r}")
            camp.task_ids.append(task.id)
            self.store.put_doc("task", task.id, task.to_doc())
            self.store.put_doc("campaign", camp.id, camp.to_doc())
        return {"id": task.id, "state": task.state.value}

    def _require_annotator(self, login: str) -> UserAccount:
        user = self._user_by_login(login)
        if user.role is not Role.ANNOTATOR:
            raise ApiError(422, "bad_task", f"{login!r} is not an annotator account")
        return user

    def tasks_for(self, user: UserAccount) -> list[dict[str, Any]]:
        out = []
        for doc in self.store.list_docs("task"):
            task = Task.from_doc(doc)
            if user.login in task.annotators():
                out.append(self.task_summary(task, user))
        return out

    def task_summary(self, task: Task, viewer: UserAccount) -> dict[str, Any]:
        camp = self._campaign(task.campaign_id)
        body: dict[str, Any] = {
            "id": task.id,
            "campaign_id": task.campaign_id,
            "campaign_name": camp.name,
            "file": task.audio.path,
            "duration": task.audio.duration,
            "kind": task.kind,
            "state": task.state.value,
        }
        if task.kind == "double":
            body["role"] = "ref" if viewer.login == task.annotator_ref else (
                "target" if viewer.login == task.annotator_target else None
            )
        if viewer.role is Role.MANAGER:
            body["annotators"] = task.annotators()
            body["n_submissions"] = len(task.submissions)
            if task.gamma_results is not None:
                body["gamma"] = {k: v.to_doc() for k, v in task.gamma_results.items()}
        return body

    def task_history(self, task_id: str) -> list[dict[str, Any]]:
        task = self._task(task_id)
        return [s.to_doc() for s in task.submissions]

    def task_template(self, task_id: str, viewer: UserAccount) -> bytes:
        """The file the annotator should work on next: an empty template
        while annotating, the doubled merge during review, the final file
        once completed."""
        task = self._task(task_id)
        self._require_task_access(task, viewer)
        if task.state is TaskState.REVIEW and task.merged_blob:
            return self.store.get_blob(task.merged_blob)
        if task.state is TaskState.COMPLETED and task.final_blob:
            return self.store.get_blob(task.final_blob)
        camp = self._campaign(task.campaign_id)
        return serialize_textgrid(generate_template(camp.scheme, task.audio.duration))

    def task_audio_path(self, task_id: str, viewer: UserAccount) -> Path:
        task = self._task(task_id)
        self._require_task_access(task, viewer)
        camp = self._campaign(task.campaign_id)
        corpus = self._corpus(camp.corpus_id)
        if corpus.source is CorpusSource.CSV or corpus.root is None:
            raise ApiError(
                404, "no_audio", "this corpus is a CSV listing; audio is not hosted here"
            )
        path = Path(self.config.corpora_root).resolve() / corpus.root / task.audio.path
        if not path.is_file():
            raise ApiError(404, "no_audio", f"audio file missing: {task.audio.path}")
        return path

    def _require_task_access(self, task: Task, viewer: UserAccount) -> None:
        if viewer.role is Role.MANAGER:
            return
        if viewer.login not in task.annotators():
            raise ApiError(403, "forbidden", "task is not assigned to you")

    # -- submissions -----------------------------------------------------------

    def submit(
        self,
        task_id: str,
        viewer: UserAccount,
        raw: bytes,
        idem_key: str | None = None,
    ) -> tuple[int, dict[str, Any]]:
        if len(raw) > self.config.upload_cap_mb * 1024 * 1024:
            raise ApiError(413, "too_large", "upload exceeds the size cap")
        endpoint = f"POST /tasks/{task_id}/submission"
        if idem_key:
            hit = self.store.idempotent_replay(viewer.id, endpoint, idem_key)
            if hit is not None:
                return hit

        if self.store.fault_hook is not None:
            self.store.fault_hook("before-transaction")

        with self.store.transaction():
            task = self._task(task_id)
            camp = self._campaign(task.campaign_id)
            if task.kind == "single":
                outcome: Any = dom.submit_single(
                    task, viewer.login, raw, camp.scheme, self.store.put_blob
                )
            elif task.state is TaskState.PARALLEL:
                outcome = dom.submit_parallel(
                    task,
                    viewer.login,
                    raw,
                    camp.scheme,
                    camp.gamma_config,
                    self.store.put_blob,
                    self.store.get_blob,
                )
            else:
                outcome = dom.review_check(
                    task,
                    viewer.login,
                    raw,
                    camp.scheme,
                    camp.gamma_config,
                    self.store.put_blob,
                )
            self.store.put_doc("task", task.id, task.to_doc())

            status, body = self._submission_response(task, outcome)
            if idem_key:
                self.store.idempotent_record(viewer.id, endpoint, idem_key, status, body)
        return status, body

    @staticmethod
    def _submission_response(task: Task, outcome: Any) -> tuple[int, dict[str, Any]]:
        if isinstance(outcome, DoubleAdvance):
            return 200, {
                "kind": "validation",
                "state": task.state.value,
                "report": outcome.report.to_doc(),
                "advanced": True,
                "gamma": {k: v.to_doc() for k, v in outcome.gamma_results.items()},
            }
        if isinstance(outcome, ValidationReport):
            body = {
                "kind": "validation",
                "state": task.state.value,
                "report": outcome.to_doc(),
                "advanced": False,
            }
            if outcome.ok:
                return 200, body
            return 422, {
                "code": "non_conforming",
                "message": f"{len(outcome)} conformity error(s)",
                **body,
            }
        # ReviewReport
        body = {
            "kind": "review",
            "state": task.state.value,
            "report": outcome.to_doc(),
            "advanced": task.state is TaskState.COMPLETED,
        }
        if outcome.ok:
            return 200, body
        return 422, {
            "code": "review_conflicts",
            "message": "the two versions still disagree",
            **body,
        }


# ---------------------------------------------------------------------------
# FastAPI wiring
# ---------------------------------------------------------------------------


def create_app(
    config: ServerConfig | None = None,
    store: Store | None = None,
) -> FastAPI:
    config = config or ServerConfig()
    if store is None:
        store = Store(config.data_dir)
    service = Service(store, config)
    service.ensure_admin()

    app = FastAPI(
        title="seshat",
        version="0.1.0",
        openapi_url="/openapi",
        description="Annotation-campaign management for speech corpora.",
    )
    app.state.service = service

    @app.exception_handler(ApiError)
    async def api_error_handler(_request: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse(exc.body(), status_code=exc.status)

    @app.exception_handler(StorageCorruption)
    async def corruption_handler(_request: Request, exc: StorageCorruption) -> JSONResponse:
        return JSONResponse(
            {"code": "storage_corruption", "message": str(exc)}, status_code=500
        )

    @app.exception_handler(WrongState)
    async def wrong_state_handler(_request: Request, exc: WrongState) -> JSONResponse:
        return JSONResponse({"code": "wrong_state", "message": str(exc)}, status_code=409)

    @app.exception_handler(WrongUser)
    async def wrong_user_handler(_request: Request, exc: WrongUser) -> JSONResponse:
        return JSONResponse({"code": "wrong_user", "message": str(exc)}, status_code=403)

    @app.exception_handler(EmptyCorpus)
    async def empty_corpus_handler(_request: Request, exc: EmptyCorpus) -> JSONResponse:
        return JSONResponse({"code": "empty_corpus", "message": str(exc)}, status_code=422)

    @app.exception_handler(CsvError)
    async def csv_error_handler(_request: Request, exc: CsvError) -> JSONResponse:
        return JSONResponse({"code": "csv_error", "message": str(exc)}, status_code=422)

    def current_user(authorization: str | None = Header(default=None)) -> UserAccount:
        return service.authenticate(authorization)

    def manager(user: UserAccount = Depends(current_user)) -> UserAccount:
        if user.role is not Role.MANAGER:
            raise ApiError(403, "forbidden", "campaign-manager role required")
        return user

    # -- auth & users --------------------------------------------------------

    @app.post("/auth/login")
    def auth_login(body: dict) -> dict:
        login = body.get("login", "")
        password = body.get("password", "")
        return service.login(login, password)

    @app.post("/users")
    def create_user(body: dict, user: UserAccount = Depends(manager)) -> dict:
        login = body.get("login", "")
        password = body.get("password", "")
        role_raw = body.get("role", "annotator")
        if not login or not password:
            raise ApiError(422, "bad_user", "login and password are required")
        try:
            role = Role(role_raw)
        except ValueError:
            raise ApiError(422, "bad_user", f"unknown role {role_raw!r}") from None
        created = service.create_user_record(login, password, role)
        return {"id": created.id, "login": created.login, "role": created.role.value}

    @app.get("/users/me")
    def whoami(user: UserAccount = Depends(current_user)) -> dict:
        return {"id": user.id, "login": user.login, "role": user.role.value}

    # -- corpora ---------------------------------------------------------------

    @app.post("/corpora/folder-scan")
    def corpora_folder(body: dict, user: UserAccount = Depends(manager)) -> dict:
        return service.corpus_from_folder(body.get("path", "."))

    @app.post("/corpora/csv")
    async def corpora_csv(file: UploadFile, user: UserAccount = Depends(manager)) -> dict:
        return service.corpus_from_csv(await file.read())

    @app.get("/corpora")
    def corpora_list(user: UserAccount = Depends(manager)) -> list:
        return [
            service.corpus_summary(Corpus.from_doc(doc))
            for doc in service.store.list_docs("corpus")
        ]

    # -- campaigns ---------------------------------------------------------------

    @app.post("/campaigns")
    def campaigns_create(body: dict, user: UserAccount = Depends(manager)) -> dict:
        name = body.get("name")
        corpus_id = body.get("corpus_id")
        if not name or not corpus_id:
            raise ApiError(422, "config_error", "name and corpus_id are required")
        return service.create_campaign(
            name, corpus_id, body.get("scheme"), body.get("gamma")
        )

    @app.get("/campaigns")
    def campaigns_list(user: UserAccount = Depends(manager)) -> list:
        return [
            service.campaign_summary(Campaign.from_doc(doc))
            for doc in service.store.list_docs("campaign")
        ]

    @app.get("/campaigns/{campaign_id}/progress")
    def campaigns_progress(campaign_id: str, user: UserAccount = Depends(manager)) -> dict:
        return service.campaign_progress(campaign_id)

    @app.get("/campaigns/{campaign_id}/gamma.csv")
    def campaigns_gamma(campaign_id: str, user: UserAccount = Depends(manager)) -> Response:
        csv_text = service.campaign_gamma_csv(campaign_id)
        return Response(csv_text, media_type="text/csv")

    @app.post("/campaigns/{campaign_id}/tasks")
    def tasks_create(
        campaign_id: str,
        body: dict,
        user: UserAccount = Depends(manager),
        idempotency_key: str | None = Header(default=None, alias="Idempotency-Key"),
    ) -> JSONResponse:
        endpoint = f"POST /campaigns/{campaign_id}/tasks"
        if idempotency_key:
            hit = service.store.idempotent_replay(user.id, endpoint, idempotency_key)
            if hit is not None:
                return JSONResponse(hit[1], status_code=hit[0])
        out = service.create_task(
            campaign_id,
            body.get("file", ""),
            body.get("kind", ""),
            body.get("annotator"),
            body.get("annotator_ref"),
            body.get("annotator_target"),
        )
        if idempotency_key:
            service.store.idempotent_record(user.id, endpoint, idempotency_key, 200, out)
        return JSONResponse(out, status_code=200)

    @app.get("/campaigns/{campaign_id}/tasks")
    def tasks_of_campaign(campaign_id: str, user: UserAccount = Depends(manager)) -> list:
        camp = service._campaign(campaign_id)
        return [service.task_summary(t, user) for t in service.campaign_tasks(camp)]

    # -- tasks -----------------------------------------------------------------

    @app.get("/tasks/mine")
    def tasks_mine(user: UserAccount = Depends(current_user)) -> list:
        return service.tasks_for(user)

    @app.get("/tasks/{task_id}")
    def task_detail(task_id: str, user: UserAccount = Depends(current_user)) -> dict:
        task = service._task(task_id)
        service._require_task_access(task, user)
        return service.task_summary(task, user)

    @app.get("/tasks/{task_id}/template")
    def task_template(task_id: str, user: UserAccount = Depends(current_user)) -> Response:
        data = service.task_template(task_id, user)
        return Response(
            data,
            media_type="application/octet-stream",
            headers={"Content-Disposition": 'attachment; filename="template.TextGrid"'},
        )

    @app.get("/tasks/{task_id}/audio")
    def task_audio(
        task_id: str,
        user: UserAccount = Depends(current_user),
        range_header: str | None = Header(default=None, alias="Range"),
    ) -> Response:
        path = service.task_audio_path(task_id, user)
        data = path.read_bytes()
        if range_header:
            try:
                unit, _, spec = range_header.partition("=")
                start_s, _, end_s = spec.partition("-")
                if unit.strip() != "bytes":
                    raise ValueError
                start = int(start_s) if start_s else 0
                end = int(end_s) if end_s else len(data) - 1
            except ValueError:
                raise ApiError(416, "bad_range", f"unsatisfiable range {range_header!r}") from None
            if start >= len(data) or start > end:
                raise ApiError(416, "bad_range", f"unsatisfiable range {range_header!r}")
            end = min(end, len(data) - 1)
            return Response(
                data[start : end + 1],
                status_code=206,
                media_type="application/octet-stream",
                headers={
                    "Content-Range": f"bytes {start}-{end}/{len(data)}",
                    "Accept-Ranges": "bytes",
                },
            )
        return Response(
            data,
            media_type="application/octet-stream",
            headers={"Accept-Ranges": "bytes"},
        )

    @app.post("/tasks/{task_id}/submission")
    async def task_submit(
        task_id: str,
        file: UploadFile,
        user: UserAccount = Depends(current_user),
        idempotency_key: str | None = Header(default=None, alias="Idempotency-Key"),
    ) -> JSONResponse:
        raw = await file.read()
        status, body = service.submit(task_id, user, raw, idempotency_key)
        return JSONResponse(body, status_code=status)

    @app.get("/tasks/{task_id}/history")
    def task_history(task_id: str, user: UserAccount = Depends(manager)) -> list:
        return service.task_history(task_id)

    @app.get("/blobs/{blob_id}")
    def blob_fetch(blob_id: str, user: UserAccount = Depends(manager)) -> Response:
        try:
            data = service.store.get_blob(blob_id)
        except NotFound:
            raise ApiError(404, "unknown_blob", f"no blob {blob_id!r}") from None
        return Response(data, media_type="application/octet-stream")

    return app
