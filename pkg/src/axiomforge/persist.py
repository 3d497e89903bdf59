"""Versioned JSON persistence for axiom documents.

Files carry the full model including layout coordinates and the IRIs of every
referenced ontology; the ontologies themselves stay in the file store and are
loaded automatically when an axiom is opened. Writes are atomic (temp file
plus rename) and deterministic (alphabetical key order), so saving an
unchanged graph reproduces the previous file byte for byte.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .axiom import (
    AttributeSlot,
    AxiomGraph,
    Connection,
    InstanceNode,
    OperatorNode,
    ParamSlot,
    Port,
    RelationNode,
    RootNode,
    VariableNode,
    validate_structural,
)
from .store import OntologyStore, OntologyNotFoundError, ResolvedType

FORMAT_VERSION = 1
FILE_SUFFIX = ".axiom.json"


class PersistError(Exception):
    pass


class CorruptFileError(PersistError):
    def __init__(self, path, reason: str):
        super().__init__(f"{path}: {reason}")
        self.reason = reason


class VersionMismatchError(PersistError):
    def __init__(self, path, found):
        super().__init__(f"{path}: format version {found!r} is not supported (expected <= {FORMAT_VERSION})")
        self.found = found


class MissingOntologyError(PersistError):
    def __init__(self, path, iri: str):
        super().__init__(f"{path}: referenced ontology {iri!r} was not found in the file store")
        self.iri = iri


class DanglingElementError(PersistError):
    def __init__(self, path, detail: str):
        super().__init__(f"{path}: {detail}")
        self.detail = detail


# ---------------------------------------------------------------------------
# dict <-> model
# ---------------------------------------------------------------------------


def _type_to_dict(t: ResolvedType) -> dict:
    return {
        "kind": t.kind,
        "builtin": t.builtin,
        "concept": list(t.concept) if t.concept is not None else None,
        "conceptName": t.concept_name,
    }


def _type_from_dict(d: dict) -> ResolvedType:
    return ResolvedType(
        kind=d["kind"],
        builtin=d.get("builtin"),
        concept=tuple(d["concept"]) if d.get("concept") else None,
        concept_name=d.get("conceptName"),
    )


def _node_to_dict(node) -> dict:
    base = {"id": node.id, "kind": node.kind, "x": node.x, "y": node.y}
    if isinstance(node, RootNode):
        return base
    if isinstance(node, VariableNode):
        base["name"] = node.name
        base["concept"] = list(node.concept)
        base["shared"] = node.shared
        base["slots"] = [
            {
                "name": s.name,
                "constraint": s.constraint,
                "range": _type_to_dict(s.range),
                "origin": list(s.origin),
                "binding": s.binding,
            }
            for s in node.slots
        ]
        return base
    if isinstance(node, RelationNode):
        base["relation"] = list(node.relation)
        base["params"] = [{"type": _type_to_dict(p.type), "binding": p.binding} for p in node.params]
        return base
    if isinstance(node, OperatorNode):
        base["op"] = node.op
        return base
    if isinstance(node, InstanceNode):
        base["instance"] = list(node.instance) if node.instance is not None else None
        base["memberOf"] = list(node.member_of) if node.member_of is not None else None
        base["builtin"] = node.builtin
        base["value"] = node.value
        return base
    raise PersistError(f"unknown node kind {node!r}")


def _node_from_dict(d: dict):
    kind = d["kind"]
    x, y = int(d["x"]), int(d["y"])
    nid = d["id"]
    if kind == "root":
        return RootNode(id=nid, x=x, y=y)
    if kind == "variable":
        return VariableNode(
            id=nid,
            name=d["name"],
            concept=tuple(d["concept"]),
            shared=bool(d.get("shared", False)),
            slots=[
                AttributeSlot(
                    name=s["name"],
                    constraint=s["constraint"],
                    range=_type_from_dict(s["range"]),
                    origin=tuple(s["origin"]),
                    binding=s.get("binding"),
                )
                for s in d["slots"]
            ],
            x=x,
            y=y,
        )
    if kind == "relation":
        return RelationNode(
            id=nid,
            relation=tuple(d["relation"]),
            params=[ParamSlot(type=_type_from_dict(p["type"]), binding=p.get("binding")) for p in d["params"]],
            x=x,
            y=y,
        )
    if kind == "operator":
        return OperatorNode(id=nid, op=d["op"], x=x, y=y)
    if kind == "instance":
        return InstanceNode(
            id=nid,
            instance=tuple(d["instance"]) if d.get("instance") else None,
            member_of=tuple(d["memberOf"]) if d.get("memberOf") else None,
            builtin=d.get("builtin"),
            value=d.get("value"),
            x=x,
            y=y,
        )
    raise CorruptFileError("<node>", f"unknown node kind {kind!r}")


def graph_to_dict(graph: AxiomGraph) -> dict:
    return {
        "formatVersion": FORMAT_VERSION,
        "name": graph.name,
        "ontologies": sorted(graph.referenced_ontologies),
        "nodes": [
            _node_to_dict(graph.nodes[nid])
            for nid in sorted(graph.nodes, key=lambda n: int(n[1:]))
        ],
        "connections": [
            {
                "id": c.id,
                "source": {"kind": c.source.kind, "node": c.source.node, "index": c.source.index},
                "target": c.target,
            }
            for c in sorted(graph.connections.values(), key=lambda c: int(c.id[1:]))
        ],
    }


def graph_from_dict(data: dict, path="<data>") -> AxiomGraph:
    try:
        graph = AxiomGraph(name=data["name"])
        graph.nodes.clear()
        for nd in data["nodes"]:
            node = _node_from_dict(nd)
            graph.nodes[node.id] = node
            if isinstance(node, RootNode):
                graph.root_id = node.id
        for cd in data["connections"]:
            src = cd["source"]
            graph.connections[cd["id"]] = Connection(
                id=cd["id"],
                source=Port(kind=src["kind"], node=src["node"], index=src["index"]),
                target=cd["target"],
            )
        graph.referenced_ontologies = set(data["ontologies"])
        graph._next_node = max((int(n[1:]) for n in graph.nodes), default=0)
        graph._next_conn = max((int(c[1:]) for c in graph.connections), default=0)
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise CorruptFileError(path, f"malformed document: {exc}") from exc
    return graph


# ---------------------------------------------------------------------------
# file operations
# ---------------------------------------------------------------------------


def save_axiom(graph: AxiomGraph, path: str | Path) -> None:
    path = Path(path)
    text = json.dumps(graph_to_dict(graph), indent=2, sort_keys=True) + "\n"
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_axiom(store: OntologyStore, path: str | Path) -> AxiomGraph:
    """Open an axiom file, auto-loading every referenced ontology first.

    Any failure leaves the caller without a graph; ontologies loaded before
    the failure stay in the store.
    """
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CorruptFileError(path, f"unreadable: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise CorruptFileError(path, f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise CorruptFileError(path, "document root must be an object")
    version = data.get("formatVersion")
    if not isinstance(version, int) or version < 1 or version > FORMAT_VERSION:
        raise VersionMismatchError(path, version)
    ontologies = data.get("ontologies")
    if not isinstance(ontologies, list):
        raise CorruptFileError(path, "'ontologies' must be a list of IRIs")
    for iri in ontologies:
        if iri in store.ontologies:
            continue
        try:
            store.load_imported_ontology(iri)
        except OntologyNotFoundError as exc:
            raise MissingOntologyError(path, iri) from exc
    graph = graph_from_dict(data, path)
    _check_resolution(store, graph, path)
    violations = validate_structural(graph)
    if violations:
        raise DanglingElementError(path, f"structural violation: {violations[0]}")
    return graph


def _check_resolution(store: OntologyStore, graph: AxiomGraph, path) -> None:
    for node in graph.nodes.values():
        if isinstance(node, VariableNode):
            if store.get_concept(node.concept) is None:
                raise DanglingElementError(path, f"concept {node.concept[1]!r} not found in {node.concept[0]!r}")
        elif isinstance(node, RelationNode):
            if store.get_relation(node.relation) is None:
                raise DanglingElementError(path, f"relation {node.relation[1]!r} not found in {node.relation[0]!r}")
        elif isinstance(node, InstanceNode) and node.instance is not None:
            if store.get_instance(node.instance) is None:
                raise DanglingElementError(path, f"instance {node.instance[1]!r} not found in {node.instance[0]!r}")
