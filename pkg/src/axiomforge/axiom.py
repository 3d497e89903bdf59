"""The axiom model: a DAG of typed nodes and connections.

A graph always holds exactly one root ("Start") node. Variables carry a
frame of attribute slots snapshotted from their concept's effective
attributes at creation time; relations carry parameter slots. Connections
run from a port (root, a slot, a parameter or an operator) to a node.

Two validation tiers: `validate_structural` must hold after every committed
edit; `validate_complete` additionally gates text emission (operator arity,
non-empty axiom) and only looks at the Start-reachable part so saved drafts
with orphaned fragments stay emittable.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

from .store import ConceptKey, ResolvedType

ROOT_LABEL = "Start"

PORT_ROOT = "root"
PORT_SLOT = "slot"
PORT_PARAM = "param"
PORT_OPERATOR = "operator"

OPERATOR_KINDS = ("AND", "OR", "NOT")


@dataclass(frozen=True)
class Port:
    kind: str
    node: str
    index: int | None = None

    def describe(self) -> str:
        if self.kind == PORT_ROOT:
            return "root"
        if self.kind == PORT_OPERATOR:
            return self.node
        return f"{self.node}[{self.index}]"


@dataclass
class Connection:
    id: str
    source: Port
    target: str


@dataclass
class RootNode:
    id: str
    x: int = 40
    y: int = 40
    kind: str = field(default="root", init=False)


@dataclass
class AttributeSlot:
    name: str
    constraint: str
    range: ResolvedType
    origin: ConceptKey
    binding: str | None = None  # connection id, None = free WSML variable


@dataclass
class VariableNode:
    id: str
    name: str
    concept: ConceptKey
    slots: list[AttributeSlot] = field(default_factory=list)
    shared: bool = False
    x: int = 0
    y: int = 0
    kind: str = field(default="variable", init=False)


@dataclass
class ParamSlot:
    type: ResolvedType
    binding: str | None = None


@dataclass
class RelationNode:
    id: str
    relation: ConceptKey
    params: list[ParamSlot] = field(default_factory=list)
    x: int = 0
    y: int = 0
    kind: str = field(default="relation", init=False)


@dataclass
class OperatorNode:
    id: str
    op: str  # AND | OR | NOT
    x: int = 0
    y: int = 0
    kind: str = field(default="operator", init=False)


@dataclass
class InstanceNode:
    id: str
    # exactly one of (instance, member_of) / (builtin, value) populated
    instance: ConceptKey | None = None
    member_of: ConceptKey | None = None
    builtin: str | None = None
    value: str | None = None
    x: int = 0
    y: int = 0
    kind: str = field(default="instance", init=False)

    @property
    def is_literal(self) -> bool:
        return self.builtin is not None


Node = RootNode | VariableNode | RelationNode | OperatorNode | InstanceNode


@dataclass
class Violation:
    rule: str
    subject: str
    message: str

    def __str__(self):
        return f"{self.rule} ({self.subject}): {self.message}"


def conn_order(conn_id: str) -> int:
    return int(conn_id[1:])


class AxiomGraph:
    def __init__(self, name: str = "axiom"):
        self.name = name
        self.nodes: dict[str, Node] = {}
        self.connections: dict[str, Connection] = {}
        self.referenced_ontologies: set[str] = set()
        self._next_node = 0
        self._next_conn = 0
        self.root_id = self._new_node_id()
        self.nodes[self.root_id] = RootNode(id=self.root_id)

    # -- ids ---------------------------------------------------------------

    def _new_node_id(self) -> str:
        self._next_node += 1
        return f"n{self._next_node}"

    def _new_conn_id(self) -> str:
        self._next_conn += 1
        return f"c{self._next_conn}"

    def add_node(self, factory) -> Node:
        """factory(node_id) -> Node; registers and returns it."""
        nid = self._new_node_id()
        node = factory(nid)
        self.nodes[nid] = node
        return node

    def add_connection(self, source: Port, target: str) -> Connection:
        cid = self._new_conn_id()
        conn = Connection(id=cid, source=source, target=target)
        self.connections[cid] = conn
        return conn

    # -- views -------------------------------------------------------------

    @property
    def root(self) -> RootNode:
        return self.nodes[self.root_id]  # type: ignore[return-value]

    def conns_from(self, port: Port) -> list[Connection]:
        out = [c for c in self.connections.values() if c.source == port]
        out.sort(key=lambda c: conn_order(c.id))
        return out

    def conns_from_node(self, node_id: str) -> list[Connection]:
        out = [c for c in self.connections.values() if c.source.node == node_id]
        out.sort(key=lambda c: conn_order(c.id))
        return out

    def conns_to(self, node_id: str) -> list[Connection]:
        out = [c for c in self.connections.values() if c.target == node_id]
        out.sort(key=lambda c: conn_order(c.id))
        return out

    def out_degree(self, node_id: str) -> int:
        return sum(1 for c in self.connections.values() if c.source.node == node_id)

    def variable_names(self) -> set[str]:
        return {n.name for n in self.nodes.values() if isinstance(n, VariableNode)}

    def find_variable(self, name: str) -> VariableNode | None:
        for n in self.nodes.values():
            if isinstance(n, VariableNode) and n.name == name:
                return n
        return None

    def port_exists(self, port: Port) -> bool:
        node = self.nodes.get(port.node)
        if node is None:
            return False
        if port.kind == PORT_ROOT:
            return isinstance(node, RootNode) and port.index is None
        if port.kind == PORT_SLOT:
            return isinstance(node, VariableNode) and port.index is not None and 0 <= port.index < len(node.slots)
        if port.kind == PORT_PARAM:
            return isinstance(node, RelationNode) and port.index is not None and 0 <= port.index < len(node.params)
        if port.kind == PORT_OPERATOR:
            return isinstance(node, OperatorNode) and port.index is None
        return False

    def clone(self) -> "AxiomGraph":
        return copy.deepcopy(self)

    def restore(self, snapshot: "AxiomGraph") -> None:
        self.__dict__.clear()
        self.__dict__.update(copy.deepcopy(snapshot).__dict__)


# ---------------------------------------------------------------------------
# Reachability and cycles
# ---------------------------------------------------------------------------


def _successors(graph: AxiomGraph, node_id: str) -> list[str]:
    return [c.target for c in graph.conns_from_node(node_id)]


def reachable_from_start(graph: AxiomGraph) -> set[str]:
    seen = {graph.root_id}
    stack = [graph.root_id]
    while stack:
        nid = stack.pop()
        for nxt in _successors(graph, nid):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def is_reachable(graph: AxiomGraph, start: str, goal: str) -> bool:
    if start == goal:
        return True
    seen = {start}
    stack = [start]
    while stack:
        nid = stack.pop()
        for nxt in _successors(graph, nid):
            if nxt == goal:
                return True
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return False


def would_create_cycle(graph: AxiomGraph, source_port: Port, target: str) -> bool:
    """True iff connecting source_port -> target closes a directed cycle,
    i.e. the port's owning node is reachable from the target."""
    return is_reachable(graph, target, source_port.node)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def validate_structural(graph: AxiomGraph) -> list[Violation]:
    violations: list[Violation] = []
    roots = [n for n in graph.nodes.values() if isinstance(n, RootNode)]
    if len(roots) != 1:
        violations.append(Violation("single-root", graph.name, f"expected exactly one root, found {len(roots)}"))

    names: dict[str, str] = {}
    for node in graph.nodes.values():
        if isinstance(node, VariableNode):
            if not node.name.startswith("?") or len(node.name) < 2:
                violations.append(Violation("variable-name", node.id, f"malformed variable name {node.name!r}"))
            if node.name in names:
                violations.append(
                    Violation("name-uniqueness", node.id, f"variable name {node.name!r} also used by {names[node.name]}")
                )
            else:
                names[node.name] = node.id

    for conn in graph.connections.values():
        if not graph.port_exists(conn.source):
            violations.append(Violation("dangling-source", conn.id, f"source port {conn.source} does not exist"))
            continue
        target = graph.nodes.get(conn.target)
        if target is None:
            violations.append(Violation("dangling-target", conn.id, f"target node {conn.target!r} does not exist"))
            continue
        if isinstance(target, RootNode):
            violations.append(Violation("root-incoming", conn.id, "the root node may have only outgoing arcs"))
        src_node = graph.nodes[conn.source.node]
        if isinstance(src_node, InstanceNode):
            violations.append(Violation("instance-outgoing", conn.id, "instance nodes cannot have outgoing arcs"))

    for node in graph.nodes.values():
        if isinstance(node, OperatorNode):
            out = graph.out_degree(node.id)
            if node.op == "NOT" and out > 1:
                violations.append(Violation("not-arity", node.id, f"NOT has out-degree {out}, at most 1 allowed"))
            incoming = len(graph.conns_to(node.id))
            if incoming > 1:
                violations.append(Violation("operator-incoming", node.id, f"operator has {incoming} incoming arcs"))

    # slot / parameter binding consistency
    for node in graph.nodes.values():
        if isinstance(node, VariableNode):
            for idx, slot in enumerate(node.slots):
                port = Port(PORT_SLOT, node.id, idx)
                outgoing = [c for c in graph.connections.values() if c.source == port]
                if slot.binding is None:
                    if outgoing:
                        violations.append(Violation("free-slot-bound", node.id, f"free slot {slot.name} has a connection"))
                else:
                    conn = graph.connections.get(slot.binding)
                    if conn is None or conn.source != port:
                        violations.append(Violation("slot-binding", node.id, f"slot {slot.name} binding {slot.binding!r} is dangling"))
                    if len(outgoing) != 1:
                        violations.append(
                            Violation("slot-out-degree", node.id, f"slot {slot.name} has {len(outgoing)} outgoing connections")
                        )
        elif isinstance(node, RelationNode):
            for idx, param in enumerate(node.params):
                port = Port(PORT_PARAM, node.id, idx)
                outgoing = [c for c in graph.connections.values() if c.source == port]
                if param.binding is None:
                    if outgoing:
                        violations.append(Violation("free-param-bound", node.id, f"free parameter {idx} has a connection"))
                else:
                    conn = graph.connections.get(param.binding)
                    ok = conn is not None and (conn.source == port or conn.target == node.id)
                    if not ok:
                        violations.append(Violation("param-binding", node.id, f"parameter {idx} binding {param.binding!r} is dangling"))
                    if conn is not None and conn.source == port and len(outgoing) != 1:
                        violations.append(
                            Violation("param-out-degree", node.id, f"parameter {idx} has {len(outgoing)} outgoing connections")
                        )

    # acyclicity (node-level DFS, iterative)
    color: dict[str, int] = {}
    for start in graph.nodes:
        if color.get(start):
            continue
        stack: list[tuple[str, list[str]]] = [(start, _successors(graph, start))]
        color[start] = 1
        while stack:
            nid, succ = stack[-1]
            if succ:
                nxt = succ.pop()
                state = color.get(nxt, 0)
                if state == 1:
                    violations.append(Violation("cycle", nxt, "the connection relation must be acyclic"))
                    color[nxt] = 2
                elif state == 0:
                    color[nxt] = 1
                    stack.append((nxt, _successors(graph, nxt)))
            else:
                color[nid] = 2
                stack.pop()

    return violations


def validate_complete(graph: AxiomGraph) -> list[Violation]:
    """Emission-readiness on top of structural validity.

    Only Start-reachable nodes are inspected: orphaned fragments are model
    state but never emitted, so they cannot block emission.
    """
    violations: list[Violation] = []
    reachable = reachable_from_start(graph)
    if graph.out_degree(graph.root_id) == 0:
        violations.append(Violation("empty-axiom", graph.root_id, "the root has no outgoing connections"))
    for nid in reachable:
        node = graph.nodes[nid]
        if isinstance(node, OperatorNode):
            out = graph.out_degree(nid)
            if node.op == "NOT" and out != 1:
                violations.append(Violation("incomplete-operator", nid, f"NOT needs exactly 1 operand, has {out}"))
            elif node.op in ("AND", "OR") and out < 2:
                violations.append(Violation("incomplete-operator", nid, f"{node.op} needs at least 2 operands, has {out}"))
    return violations
