"""Session service exposing the edit engine over HTTP+JSON.

One session owns one axiom graph. Clients echo the session revision with
every command; a mismatch is refused so out-of-order UI events can never
corrupt the single-writer session. All semantic decisions (menus, checks,
text) live here, the client renders payloads verbatim.
"""

from __future__ import annotations

import threading
import uuid
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .axiom import AxiomGraph
from .engine import ADVANCED_ONLY_VERBS, Rejection
from .persist import PersistError, graph_to_dict, load_axiom, save_axiom
from .script import ScriptError, ScriptRunner
from .store import OntologyStore, StoreError, TreeNode
from .textgen import IncompleteGraphError, generate

MODES = ("standard", "advanced")


class ServiceError(Exception):
    def __init__(self, status: int, code: str, message: str, detail: str = ""):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail


class Session:
    def __init__(self, store: OntologyStore, mode: str):
        self.id = uuid.uuid4().hex
        self.mode = mode
        self.revision = 0
        self.runner = ScriptRunner(store, name="axiom")
        self.log: list[str] = []
        self.lock = threading.Lock()

    @property
    def graph(self) -> AxiomGraph:
        return self.runner.graph


def _tree_payload(node: TreeNode) -> dict:
    return {"label": node.label, "kind": node.kind, "children": [_tree_payload(c) for c in node.children]}


def _wsml_payload(graph: AxiomGraph) -> dict:
    try:
        expr = generate(graph)
        return {"complete": True, "text": expr.text, "spans": expr.element_spans, "violations": []}
    except IncompleteGraphError as exc:
        return {
            "complete": False,
            "text": None,
            "spans": {},
            "violations": [{"rule": v.rule, "subject": v.subject, "message": v.message} for v in exc.violations],
        }


def _parse_selection(text: str) -> tuple:
    parts = text.split(":")
    kind = parts[0]
    if kind == "root":
        return ("root",)
    if kind in ("node", "conn") and len(parts) == 2:
        return (kind, parts[1])
    if kind in ("slot", "param") and len(parts) == 3:
        return (kind, parts[1], int(parts[2]))
    raise ServiceError(400, "bad-selection", f"unparseable selection {text!r}")


class SessionBody(BaseModel):
    mode: str = "advanced"


class ImportBody(BaseModel):
    iri: str


class CommandBody(BaseModel):
    revision: int
    command: str


class PathBody(BaseModel):
    path: str


def create_app(store: OntologyStore) -> FastAPI:
    app = FastAPI(title="axiomforge")
    sessions: dict[str, Session] = {}

    @app.exception_handler(ServiceError)
    async def _service_error(request: Request, exc: ServiceError):
        return JSONResponse(
            status_code=exc.status,
            content={"code": exc.code, "message": exc.message, "detail": exc.detail},
        )

    def _session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise ServiceError(404, "unknown-session", f"no session {session_id!r}")
        return session

    def _model_payload(session: Session) -> dict:
        return {
            "session": session.id,
            "mode": session.mode,
            "revision": session.revision,
            "model": graph_to_dict(session.graph),
            "wsml": _wsml_payload(session.graph),
        }

    @app.post("/sessions")
    def create_session(body: SessionBody):
        if body.mode not in MODES:
            raise ServiceError(400, "bad-mode", f"mode must be one of {MODES}, got {body.mode!r}")
        session = Session(store, body.mode)
        sessions[session.id] = session
        return _model_payload(session)

    @app.get("/ontologies")
    def list_ontologies():
        return {
            "ontologies": [
                {"iri": iri, "tree": _tree_payload(store.tree_view(iri))} for iri in sorted(store.ontologies)
            ]
        }

    @app.post("/ontologies/import")
    def import_ontology(body: ImportBody):
        try:
            status = store.load_imported_ontology(body.iri)
        except StoreError as exc:
            raise ServiceError(404, "ontology-load-failed", str(exc)) from exc
        return {"iri": body.iri, "status": status}

    @app.get("/sessions/{session_id}/model")
    def get_model(session_id: str):
        return _model_payload(_session(session_id))

    @app.get("/sessions/{session_id}/wsml")
    def get_wsml(session_id: str):
        session = _session(session_id)
        return {"revision": session.revision, "wsml": _wsml_payload(session.graph)}

    @app.get("/sessions/{session_id}/menu")
    def get_menu(session_id: str, selection: str):
        session = _session(session_id)
        sel = _parse_selection(selection)
        try:
            commands = session.runner.engine.list_allowed_operations(session.graph, sel, mode=session.mode)
        except Rejection as exc:
            raise ServiceError(400, "bad-selection", exc.message) from exc
        commands = [c for c in commands if _mode_allows(session, c.verb)]
        return {
            "revision": session.revision,
            "selection": selection,
            "commands": [
                {"line": c.to_line(), "verb": c.verb, "template": c.template} for c in commands
            ],
        }

    def _mode_allows(session: Session, verb: str) -> bool:
        if session.mode == "advanced":
            return True
        if verb in ADVANCED_ONLY_VERBS:
            return False
        if verb == "var":
            # standard mode only extends the existing expression; a free
            # variable is allowed solely as the very first element
            return session.graph.out_degree(session.graph.root_id) == 0
        return True

    @app.post("/sessions/{session_id}/commands")
    def post_command(session_id: str, body: CommandBody):
        session = _session(session_id)
        with session.lock:
            if body.revision != session.revision:
                raise ServiceError(
                    409, "conflict", f"revision {body.revision} is stale, session is at {session.revision}"
                )
            try:
                parsed = session.runner.parse_line(body.command, 1)
            except ScriptError as exc:
                raise ServiceError(400, "bad-command", exc.reason) from exc
            if parsed is None:
                raise ServiceError(400, "bad-command", "empty command")
            if not _mode_allows(session, parsed.command.verb):
                return {
                    "revision": session.revision,
                    "committed": False,
                    "rejection": {"rule": "mode", "message": f"{parsed.command.verb!r} requires an advanced session"},
                }
            session.runner.ensure_ontologies(parsed.command)
            try:
                result = session.runner.engine.apply(session.graph, parsed.command)
            except Rejection as exc:
                return {
                    "revision": session.revision,
                    "committed": False,
                    "rejection": {"rule": exc.rule, "message": exc.message},
                }
            if parsed.alias is not None and isinstance(result, str):
                session.runner.aliases[parsed.alias] = result
            session.revision += 1
            session.log.append(body.command)
            return {
                "revision": session.revision,
                "committed": True,
                "result": result,
                "model": graph_to_dict(session.graph),
                "wsml": _wsml_payload(session.graph),
            }

    @app.post("/sessions/{session_id}/save")
    def save_session(session_id: str, body: PathBody):
        session = _session(session_id)
        with session.lock:
            try:
                save_axiom(session.graph, Path(body.path))
            except OSError as exc:
                raise ServiceError(500, "io-error", str(exc)) from exc
        return {"revision": session.revision, "path": body.path}

    @app.post("/sessions/{session_id}/load")
    def load_session(session_id: str, body: PathBody):
        session = _session(session_id)
        with session.lock:
            try:
                graph = load_axiom(store, Path(body.path))
            except PersistError as exc:
                raise ServiceError(422, "load-failed", str(exc)) from exc
            session.runner.graph = graph
            session.runner.aliases = {}
            session.log = []
            session.revision += 1
            return _model_payload(session)

    return app
