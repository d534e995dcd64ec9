"""Command-line client for the campaign service, plus offline tools.

Server commands talk to a running instance (``--server`` /
``SESHAT_SERVER``, token via ``--token`` / ``SESHAT_TOKEN``). The offline
commands (``check``, ``gamma``) run validation and agreement locally on
files, with no server anywhere — same code paths, so the numbers match
the service exactly for equal inputs and seeds.

Exit status is 0 only on full success; any API error, conformity failure,
or review conflict exits nonzero so shell scripts can branch on it.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

import click
import httpx

from .gamma import GammaConfig, gamma as gamma_measure
from .scheme import scheme_from_config, validate
from .textgrid import TextGridError, parse_textgrid


class Ctx:
    def __init__(self, server: str | None, token: str | None, fmt: str):
        self.server = server
        self.token = token
        self.fmt = fmt

    def client(self) -> httpx.Client:
        if not self.server:
            raise click.UsageError("a server URL is required (--server or SESHAT_SERVER)")
        headers = {}
        if self.token:
            headers["Authorization"] = f"Bearer {self.token}"
        return httpx.Client(base_url=self.server, headers=headers, timeout=60.0)


def _fail(response: httpx.Response) -> None:
    try:
        body = response.json()
        code = body.get("code", response.status_code)
        message = body.get("message", "")
    except ValueError:
        code, message = response.status_code, response.text[:200]
    click.echo(f"error {response.status_code} ({code}): {message}", err=True)
    raise SystemExit(1)


def _checked(response: httpx.Response) -> dict | list:
    if response.status_code >= 400:
        _fail(response)
    return response.json()


def _emit_rows(fmt: str, header: list[str], rows: list[list]) -> None:
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        click.echo(out.getvalue(), nl=False)
    else:
        for row in rows:
            click.echo("  ".join(f"{k}={v}" for k, v in zip(header, row)))


@click.group()
@click.option("--server", envvar="SESHAT_SERVER", default=None, help="Service base URL.")
@click.option("--token", envvar="SESHAT_TOKEN", default=None, help="Bearer token.")
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["lines", "csv"]),
    default="lines",
    help="Machine-readable output style.",
)
@click.pass_context
def main(ctx: click.Context, server: str | None, token: str | None, fmt: str) -> None:
    """Administer annotation campaigns, or run checks and agreement locally."""
    ctx.obj = Ctx(server, token, fmt)


# ---------------------------------------------------------------------------
# Server commands
# ---------------------------------------------------------------------------


@main.command()
@click.argument("login")
@click.option("--password", prompt=True, hide_input=True)
@click.pass_obj
def login(ctx: Ctx, login: str, password: str) -> None:
    """Obtain a bearer token (print it for SESHAT_TOKEN)."""
    with ctx.client() as client:
        body = _checked(client.post("/auth/login", json={"login": login, "password": password}))
    click.echo(body["token"])


@main.command(name="create-user")
@click.argument("login")
@click.option("--password", required=True)
@click.option("--role", type=click.Choice(["annotator", "manager"]), default="annotator")
@click.pass_obj
def create_user(ctx: Ctx, login: str, password: str, role: str) -> None:
    """Create an account (manager token required)."""
    with ctx.client() as client:
        body = _checked(
            client.post("/users", json={"login": login, "password": password, "role": role})
        )
    click.echo(body["id"])


@main.group()
def corpus() -> None:
    """Import and list corpora."""


@corpus.command(name="import-folder")
@click.argument("path")
@click.pass_obj
def corpus_import_folder(ctx: Ctx, path: str) -> None:
    """Scan PATH (relative to the server's corpora root)."""
    with ctx.client() as client:
        body = _checked(client.post("/corpora/folder-scan", json={"path": path}))
    click.echo(body["id"])
    for name, reason in body.get("skipped", []):
        click.echo(f"skipped {name}: {reason}", err=True)


@corpus.command(name="import-csv")
@click.argument("file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.pass_obj
def corpus_import_csv(ctx: Ctx, file: Path) -> None:
    """Upload a filename,duration listing."""
    with ctx.client() as client:
        body = _checked(
            client.post("/corpora/csv", files={"file": (file.name, file.read_bytes())})
        )
    click.echo(body["id"])


@main.group()
def campaign() -> None:
    """Create and monitor campaigns."""


@campaign.command(name="create")
@click.option("--name", required=True)
@click.option("--corpus", "corpus_id", required=True)
@click.option(
    "--scheme",
    "scheme_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Scheme config file (YAML).",
)
@click.option("--gamma-seed", type=int, default=None)
@click.option("--gamma-samples", type=int, default=None)
@click.pass_obj
def campaign_create(
    ctx: Ctx,
    name: str,
    corpus_id: str,
    scheme_path: Path,
    gamma_seed: int | None,
    gamma_samples: int | None,
) -> None:
    import yaml

    scheme_doc = yaml.safe_load(scheme_path.read_text())
    gamma_doc = {}
    if gamma_seed is not None:
        gamma_doc["seed"] = gamma_seed
    if gamma_samples is not None:
        gamma_doc["n_samples"] = gamma_samples
    payload = {"name": name, "corpus_id": corpus_id, "scheme": scheme_doc}
    if gamma_doc:
        payload["gamma"] = gamma_doc
    with ctx.client() as client:
        body = _checked(client.post("/campaigns", json=payload))
    click.echo(body["id"])


@campaign.command(name="list")
@click.pass_obj
def campaign_list(ctx: Ctx) -> None:
    with ctx.client() as client:
        body = _checked(client.get("/campaigns"))
    rows = [[c["id"], c["name"], c["n_tasks"]] for c in body]
    _emit_rows(ctx.fmt, ["id", "name", "n_tasks"], rows)


@campaign.command(name="progress")
@click.argument("campaign_id")
@click.pass_obj
def campaign_progress(ctx: Ctx, campaign_id: str) -> None:
    with ctx.client() as client:
        body = _checked(client.get(f"/campaigns/{campaign_id}/progress"))
    rows = [[tid, state] for tid, state in sorted(body["task_states"].items())]
    _emit_rows(ctx.fmt, ["task", "state"], rows)
    click.echo(f"completed {body['completed']}/{body['total']} ratio={body['ratio']}")


@main.group()
def task() -> None:
    """Assign and list annotation tasks."""


@task.command(name="assign-single")
@click.argument("campaign_id")
@click.argument("file")
@click.argument("annotator")
@click.pass_obj
def task_assign_single(ctx: Ctx, campaign_id: str, file: str, annotator: str) -> None:
    with ctx.client() as client:
        body = _checked(
            client.post(
                f"/campaigns/{campaign_id}/tasks",
                json={"file": file, "kind": "single", "annotator": annotator},
            )
        )
    click.echo(body["id"])


@task.command(name="assign-double")
@click.argument("campaign_id")
@click.argument("file")
@click.argument("annotator_ref")
@click.argument("annotator_target")
@click.pass_obj
def task_assign_double(
    ctx: Ctx, campaign_id: str, file: str, annotator_ref: str, annotator_target: str
) -> None:
    with ctx.client() as client:
        body = _checked(
            client.post(
                f"/campaigns/{campaign_id}/tasks",
                json={
                    "file": file,
                    "kind": "double",
                    "annotator_ref": annotator_ref,
                    "annotator_target": annotator_target,
                },
            )
        )
    click.echo(body["id"])


@task.command(name="list")
@click.pass_obj
def task_list(ctx: Ctx) -> None:
    """List tasks assigned to the calling user."""
    with ctx.client() as client:
        body = _checked(client.get("/tasks/mine"))
    rows = [[t["id"], t["campaign_name"], t["file"], t["kind"], t["state"]] for t in body]
    _emit_rows(ctx.fmt, ["id", "campaign", "file", "kind", "state"], rows)


@main.command()
@click.argument("task_id")
@click.argument("file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.pass_obj
def submit(ctx: Ctx, task_id: str, file: Path) -> None:
    """Upload an annotation file for a task."""
    with ctx.client() as client:
        response = client.post(
            f"/tasks/{task_id}/submission",
            files={"file": (file.name, file.read_bytes())},
        )
    if response.status_code == 422:
        body = response.json()
        _print_report(ctx.fmt, body.get("report"), body.get("kind", "validation"))
        raise SystemExit(1)
    body = _checked(response)
    click.echo(f"state={body['state']}")


@main.command(name="gamma-report")
@click.argument("campaign_id")
@click.option("--output", "-o", type=click.Path(path_type=Path), default=None)
@click.pass_obj
def gamma_report(ctx: Ctx, campaign_id: str, output: Path | None) -> None:
    """Download the per-task and per-tier agreement CSV."""
    with ctx.client() as client:
        response = client.get(f"/campaigns/{campaign_id}/gamma.csv")
        if response.status_code >= 400:
            _fail(response)
    if output:
        output.write_bytes(response.content)
    else:
        click.echo(response.text, nl=False)


# ---------------------------------------------------------------------------
# Offline commands
# ---------------------------------------------------------------------------


def _print_report(fmt: str, report, kind: str = "validation") -> None:
    if kind == "review" and isinstance(report, dict):
        rows = []
        for c in report.get("frontier_conflicts", []):
            rows.append(["frontier", c["tier"], c["ref_range"], c["target_range"], ""])
        for c in report.get("content_conflicts", []):
            rows.append(
                ["content", c["tier"], c["ref_text"], c["target_text"], c["ref_range"]]
            )
        for c in report.get("lone_units", []):
            rows.append(["lone", c["tier"], c["side"], c["time_range"], c["text"]])
        for e in report.get("validation_errors", []):
            rows.append(["validation", e.get("tier"), e["kind"], "", e["message"]])
        _emit_rows(fmt, ["type", "tier", "a", "b", "detail"], rows)
        return
    rows = [
        [e["kind"], e.get("tier") or "", e.get("item_index", ""), e["message"]]
        for e in (report or [])
    ]
    _emit_rows(fmt, ["kind", "tier", "item_index", "message"], rows)


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option(
    "--scheme",
    "scheme_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
)
@click.option("--duration", type=float, required=True, help="Audio duration in seconds.")
@click.pass_obj
def check(ctx: Ctx, file: Path, scheme_path: Path, duration: float) -> None:
    """Validate FILE against a scheme config, no server involved."""
    scheme = scheme_from_config(scheme_path.read_bytes())
    try:
        tg = parse_textgrid(file.read_bytes())
    except TextGridError as exc:
        click.echo(f"parse error: {exc}", err=True)
        raise SystemExit(1)
    report = validate(tg, scheme, duration)
    _print_report(ctx.fmt, report.to_doc())
    raise SystemExit(0 if report.ok else 1)


@main.command(name="gamma")
@click.argument("file_a", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("file_b", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option(
    "--scheme",
    "scheme_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--samples", type=int, default=30, show_default=True)
@click.pass_obj
def gamma_cmd(ctx: Ctx, file_a: Path, file_b: Path, scheme_path: Path, seed: int, samples: int) -> None:
    """Inter-rater agreement between two TextGrids, per tier."""
    scheme = scheme_from_config(scheme_path.read_bytes())
    try:
        tg_a = parse_textgrid(file_a.read_bytes())
        tg_b = parse_textgrid(file_b.read_bytes())
    except TextGridError as exc:
        click.echo(f"parse error: {exc}", err=True)
        raise SystemExit(1)
    cfg = GammaConfig(seed=seed, n_samples=samples)
    results = gamma_measure(tg_a, tg_b, scheme, cfg)
    rows = []
    for name, tier_gamma in results.items():
        r = tier_gamma.result
        rows.append(
            [
                name,
                repr(r.gamma) if r else "",
                repr(r.observed_disorder) if r else "",
                repr(r.expected_disorder) if r else "",
                tier_gamma.n_units_a,
                tier_gamma.n_units_b,
                r.n_samples if r else "",
                r.seed if r else "",
            ]
        )
    _emit_rows(
        ctx.fmt,
        [
            "tier",
            "gamma",
            "observed_disorder",
            "expected_disorder",
            "n_units_a",
            "n_units_b",
            "n_samples",
            "seed",
        ],
        rows,
    )


if __name__ == "__main__":
    main()
