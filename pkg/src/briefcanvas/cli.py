"""Administrative command line: serve the API, curate the reference
catalog, manage users, validate settings files, and run the adherence
suite."""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from .adherence import run_adherence_suite
from .catalog import ingest_screen, load_catalog, verify_catalog
from .constraints import constraint_set_from_mapping, import_settings
from .errors import BriefcanvasError, ConstraintsInvalid
from .providers import StubProvider, provider_from_env
from .store import WorkspaceStore


@click.group()
def main():
    """Constraint-driven UI ideation service and tools."""


@main.command()
@click.option("--data-dir", type=click.Path(), default="./data", show_default=True)
@click.option("--listen", default="127.0.0.1:8000", show_default=True,
              help="host:port to bind")
@click.option("--provider", "provider_name", default="stub", show_default=True,
              type=click.Choice(["stub", "http"]))
@click.option("--catalog", "catalog_path", type=click.Path(exists=True), default=None,
              help="reference catalog manifest.csv")
def serve(data_dir, listen, provider_name, catalog_path):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    provider = provider_from_env(provider_name)
    catalog = load_catalog(catalog_path) if catalog_path else None
    app = create_app(data_dir, provider, catalog=catalog)
    host, _, port = listen.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000))


@main.group()
def catalog():
    """Reference-screen catalog administration."""


@catalog.command("ingest")
@click.option("--catalog-dir", type=click.Path(), required=True)
@click.option("--image", "image_path", type=click.Path(exists=True), required=True)
@click.option("--industry", required=True)
@click.option("--screen-type", required=True)
@click.option("--device", required=True)
@click.option("--label", default="", help="source label, e.g. originating app")
def catalog_ingest(catalog_dir, image_path, industry, screen_type, device, label):
    """Grayscale an image and add it to the catalog."""
    screen = ingest_screen(
        catalog_dir, Path(image_path).read_bytes(),
        industry, screen_type, device, label)
    click.echo(f"ingested {screen.id} -> {screen.image_path}")


@catalog.command("verify")
@click.option("--catalog-dir", type=click.Path(exists=True), required=True)
def catalog_verify(catalog_dir):
    """Check manifest integrity and per-pixel grayscale of every screen."""
    cat = load_catalog(Path(catalog_dir) / "manifest.csv")
    problems = verify_catalog(cat)
    for problem in problems:
        click.echo(problem, err=True)
    if problems:
        sys.exit(1)
    click.echo(f"ok: {len(cat.screens)} screens, {len(cat.index)} buckets")


@main.group()
def adhere():
    """Constraint-adherence evaluation."""


@adhere.command("run")
@click.option("--briefs", "briefs_path", type=click.Path(exists=True), required=True,
              help="JSON array of settings documents")
@click.option("--variations", type=int, default=5, show_default=True)
@click.option("--provider", "provider_name", default="stub", show_default=True,
              type=click.Choice(["stub", "http"]))
@click.option("--catalog", "catalog_path", type=click.Path(exists=True), default=None)
@click.option("--seed", type=int, default=None, help="reproducible reference selection")
@click.option("--font-defects", default=None,
              help="stub only: comma-separated fonts to drop per generation call")
@click.option("--csv", "csv_path", type=click.Path(), default=None,
              help="also write the report as CSV")
def adhere_run(briefs_path, variations, provider_name, catalog_path, seed,
               font_defects, csv_path):
    """Generate variations for each brief and report adherence per class."""
    documents = json.loads(Path(briefs_path).read_text("utf-8"))
    briefs = [(constraint_set_from_mapping(doc), variations) for doc in documents]
    if font_defects is not None:
        if provider_name != "stub":
            raise click.UsageError("--font-defects requires the stub provider")
        schedule = [int(x) for x in font_defects.split(",") if x.strip()]
        provider = StubProvider(font_defects=schedule)
    else:
        provider = provider_from_env(provider_name)
    cat = load_catalog(catalog_path) if catalog_path else None
    report = run_adherence_suite(briefs, provider, catalog=cat, seed=seed)
    click.echo(report.as_text())
    if csv_path:
        Path(csv_path).write_text(report.as_csv(), encoding="utf-8")
        click.echo(f"csv written to {csv_path}")


@main.group()
def user():
    """User account administration."""


@user.command("add")
@click.option("--data-dir", type=click.Path(), default="./data", show_default=True)
@click.option("--login", required=True)
def user_add(data_dir, login):
    """Create a user. Password comes from BRIEFCANVAS_PASSWORD or a prompt."""
    password = os.environ.get("BRIEFCANVAS_PASSWORD")
    if not password:
        password = click.prompt("Password", hide_input=True, confirmation_prompt=True)
    store = WorkspaceStore(data_dir)
    try:
        user_id = store.create_user(login, password)
    finally:
        store.close()
    click.echo(f"created user {login} ({user_id})")


@main.group()
def settings():
    """Settings document tools."""


@settings.command("validate")
@click.argument("path", type=click.Path(exists=True))
def settings_validate(path):
    """Exit 0 when PATH is a valid settings document, else print issues."""
    try:
        import_settings(Path(path).read_bytes())
    except ConstraintsInvalid as exc:
        for issue in exc.issues:
            click.echo(f"{issue.field}: [{issue.code}] {issue.message}", err=True)
        sys.exit(1)
    except BriefcanvasError as exc:
        click.echo(str(exc), err=True)
        sys.exit(1)
    click.echo("ok")


if __name__ == "__main__":
    main()
