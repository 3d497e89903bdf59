"""Command-line front end: lint ontologies, run edit scripts, emit and
round-trip axiom files, and serve the session API."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .parser import parse_ontology
from .persist import PersistError, load_axiom, save_axiom
from .script import ScriptError, run_script
from .store import OntologyStore
from .textgen import IncompleteGraphError, generate


def _store(directory: str) -> OntologyStore:
    return OntologyStore(file_store_dir=directory)


@click.group()
def main():
    """Ontology-driven construction of WSML axioms."""


@main.command()
@click.argument("wsml_file", type=click.Path(exists=True, dir_okay=False))
def lint(wsml_file: str):
    """Parse a WSML ontology file and report diagnostics."""
    source = Path(wsml_file).read_text(encoding="utf-8")
    result = parse_ontology(source)
    for diag in result.diagnostics:
        click.echo(f"{wsml_file}:{diag.line}:{diag.column}: {diag.severity}: {diag.message}")
    errors = [d for d in result.diagnostics if d.severity == "error"]
    if errors:
        sys.exit(1)
    click.echo(f"{wsml_file}: ok ({result.ontology.iri})")


@main.command()
@click.argument("script_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--ontology-store", "store_dir", default="./ontologies", show_default=True, help="Directory of *.wsml files indexed by declared IRI.")
@click.option("--pretty", is_flag=True, help="Indented multi-line output.")
@click.option("--save", "save_path", type=click.Path(dir_okay=False), default=None, help="Also save the resulting axiom file.")
def build(script_file: str, store_dir: str, pretty: bool, save_path: str | None):
    """Run an edit script against a fresh axiom and print the WSML text."""
    store = _store(store_dir)
    text = Path(script_file).read_text(encoding="utf-8")
    try:
        graph, expr = run_script(store, text, name=Path(script_file).stem, pretty=pretty)
    except ScriptError as exc:
        click.echo(str(exc), err=True)
        sys.exit(1)
    click.echo(expr.text)
    if save_path:
        save_axiom(graph, save_path)


@main.command()
@click.argument("axiom_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--ontology-store", "store_dir", default="./ontologies", show_default=True)
@click.option("--pretty", is_flag=True)
def emit(axiom_file: str, store_dir: str, pretty: bool):
    """Load an axiom file and print its WSML text."""
    store = _store(store_dir)
    try:
        graph = load_axiom(store, axiom_file)
        expr = generate(graph, pretty=pretty)
    except (PersistError, IncompleteGraphError) as exc:
        click.echo(str(exc), err=True)
        sys.exit(1)
    click.echo(expr.text)


@main.command()
@click.argument("axiom_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--ontology-store", "store_dir", default="./ontologies", show_default=True)
def roundtrip(axiom_file: str, store_dir: str):
    """Load an axiom file and save it back; verifies a stable round-trip."""
    store = _store(store_dir)
    try:
        graph = load_axiom(store, axiom_file)
    except PersistError as exc:
        click.echo(str(exc), err=True)
        sys.exit(1)
    before = Path(axiom_file).read_text(encoding="utf-8")
    save_axiom(graph, axiom_file)
    after = Path(axiom_file).read_text(encoding="utf-8")
    click.echo("stable" if before == after else "rewritten")


@main.command()
@click.option("--port", default=8640, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--ontology-store", "store_dir", default="./ontologies", show_default=True)
@click.option("--preload", multiple=True, help="Ontology IRI to load at startup (repeatable).")
def serve(port: int, host: str, store_dir: str, preload: tuple[str, ...]):
    """Run the session HTTP service."""
    import uvicorn

    from .service import create_app

    store = _store(store_dir)
    for iri in preload:
        store.load_imported_ontology(iri)
    uvicorn.run(create_app(store), host=host, port=port)


if __name__ == "__main__":
    main()
