"""Transactional, semantically checked edit operations over an axiom graph.

Every public operation either commits a mutation that keeps the graph
structurally valid, or raises Rejection leaving the graph untouched. The
semantic checks are the four construction-time properties: subsumption
compatibility, acyclicity, variable-name uniqueness and operator arity.

`list_allowed_operations` enumerates, for a selection, exactly the concrete
commands whose checks hold; it shares the check helpers with the apply path
so the menu stays sound and complete by construction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

from .axiom import (
    OPERATOR_KINDS,
    PORT_OPERATOR,
    PORT_PARAM,
    PORT_ROOT,
    PORT_SLOT,
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
    would_create_cycle,
)
from .store import ConceptKey, OntologyStore, ResolvedType, literal_conforms

VAR_NAME_RE = re.compile(r"^\?[A-Za-z_][A-Za-z0-9_]*$")

# Canonical sample literal per built-in datatype, shared by menu enumeration
# and the fuzzing vocabulary so that "commits iff offered" stays decidable.
CANONICAL_LITERALS = {
    "_string": "text",
    "_integer": "42",
    "_decimal": "3.14",
    "_boolean": "true",
    "_date": "2005-04-11",
}

ADVANCED_ONLY_VERBS = frozenset({"op", "inst", "lit", "rel", "connect", "reconnect", "involve"})


class Rejection(Exception):
    """A refused command; the graph is guaranteed unchanged."""

    def __init__(self, rule: str, message: str):
        super().__init__(f"{rule}: {message}")
        self.rule = rule
        self.message = message


@dataclass(frozen=True)
class Binding:
    """A refinement target (the menu of ways to bind a free value)."""

    kind: str  # default | sub | inst | lit | rel | use | shared | op
    concept: ConceptKey | None = None
    instance: ConceptKey | None = None
    builtin: str | None = None
    value: str | None = None
    relation: ConceptKey | None = None
    param: int | None = None
    node: str | None = None
    op: str | None = None
    operands: tuple["Binding", ...] = ()

    def to_text(self) -> str:
        if self.kind == "default":
            return "default"
        if self.kind == "sub":
            return f"sub {key_text(self.concept)}"
        if self.kind == "inst":
            return f"inst {key_text(self.instance)}"
        if self.kind == "lit":
            return f'lit {self.builtin} "{self.value}"'
        if self.kind == "rel":
            return f"rel {key_text(self.relation)}:{self.param}"
        if self.kind == "use":
            return f"use {self.node}"
        if self.kind == "shared":
            return f"shared {self.node}"
        if self.kind == "op":
            inner = " ; ".join(b.to_text() for b in self.operands)
            return f"op {self.op} ( {inner} )"
        raise ValueError(f"unknown binding kind {self.kind!r}")


def key_text(key: ConceptKey) -> str:
    return f"{key[0]}#{key[1]}"


def parse_key(text: str) -> ConceptKey:
    if "#" not in text:
        raise Rejection("malformed-reference", f"expected <ontologyIRI>#<id>, got {text!r}")
    iri, _, local = text.rpartition("#")
    return (iri, local)


@dataclass(frozen=True)
class Command:
    """One editing command, self-contained and renderable as a script line."""

    verb: str
    node: str | None = None  # primary subject (node id or creation alias)
    attr: str | None = None  # slot name for refine
    index: int | None = None  # parameter index
    binding: Binding | None = None
    target: str | None = None  # existing-node argument
    kind: str | None = None  # operator kind
    name: str | None = None  # rename
    value: str | None = None  # setval / lit creation
    builtin: str | None = None  # lit creation
    element: ConceptKey | None = None  # ontology element for creations
    conn: str | None = None
    end: str | None = None  # reconnect: source | target
    port: Port | None = None  # connect / reconnect-source
    at: tuple[int, int] | None = None
    template: bool = False  # menu placeholder carrying a sample free-text value

    def to_line(self) -> str:
        at = f" @{self.at[0]},{self.at[1]}" if self.at else ""
        v = self.verb
        if v == "var":
            return f"var {self.node} {key_text(self.element)}{at}"
        if v == "op":
            return f"op {self.node} {self.kind}{at}"
        if v == "inst":
            return f"inst {self.node} {key_text(self.element)}{at}"
        if v == "lit":
            return f'lit {self.node} {self.builtin} "{self.value}"{at}'
        if v == "rel":
            return f"rel {self.node} {key_text(self.element)}{at}"
        if v == "refine":
            return f"refine {self.node}.{self.attr} {self.binding.to_text()}"
        if v == "refinep":
            return f"refinep {self.node}[{self.index}] {self.binding.to_text()}"
        if v == "involve":
            return f"involve {self.node} {self.target}[{self.index}]"
        if v == "rename":
            return f"rename {self.node} {self.name}"
        if v == "delete":
            return f"delete {self.node}"
        if v == "setop":
            return f"setop {self.node} {self.kind}"
        if v == "addoperand":
            arg = self.binding.to_text() if self.binding is not None else self.target
            return f"addoperand {self.node} {arg}"
        if v == "setval":
            return f'setval {self.node} "{self.value}"'
        if v == "insert":
            second = ""
            if self.binding is not None:
                second = f" {self.binding.to_text()}"
            elif self.target is not None:
                second = f" {self.target}"
            return f"insert {self.conn} {self.kind}{second}"
        if v == "reconnect":
            arg = port_text_of(self.port) if self.end == "source" else self.target
            return f"reconnect {self.conn} {self.end} {arg}"
        if v == "connect":
            return f"connect {port_text_of(self.port)} {self.target}"
        if v == "move":
            return f"move {self.node} @{self.at[0]},{self.at[1]}"
        raise ValueError(f"unknown verb {v!r}")


def port_text_of(port: Port, graph: AxiomGraph | None = None) -> str:
    if port.kind == PORT_ROOT:
        return "root"
    if port.kind == PORT_OPERATOR:
        return port.node
    if port.kind == PORT_SLOT:
        return f"{port.node}.{port.index}"
    return f"{port.node}[{port.index}]"


def lower_camel(name: str) -> str:
    return name[0].lower() + name[1:] if name else name


class EditEngine:
    """Applies commands to axiom graphs against one ontology store."""

    def __init__(self, store: OntologyStore):
        self.store = store

    # ------------------------------------------------------------------
    # transaction wrapper
    # ------------------------------------------------------------------

    def _transact(self, graph: AxiomGraph, fn):
        snapshot = graph.clone()
        try:
            result = fn()
        except Rejection:
            graph.restore(snapshot)
            raise
        violations = validate_structural(graph)
        if violations:
            graph.restore(snapshot)
            raise AssertionError(f"internal error: committed edit broke invariants: {violations[0]}")
        return result

    # ------------------------------------------------------------------
    # naming
    # ------------------------------------------------------------------

    def _auto_name(self, graph: AxiomGraph, base: str) -> str:
        taken = graph.variable_names()
        candidate = "?" + lower_camel(base)
        if candidate not in taken:
            return candidate
        i = 1
        while f"{candidate}{i}" in taken:
            i += 1
        return f"{candidate}{i}"

    def _place(self, graph: AxiomGraph, at: tuple[int, int] | None) -> tuple[int, int]:
        if at is not None:
            return at
        return (80 * len(graph.nodes), 80)

    # ------------------------------------------------------------------
    # element creation
    # ------------------------------------------------------------------

    def create_variable(self, graph: AxiomGraph, concept: ConceptKey, at=None) -> str:
        def run():
            key = self.store.resolve_concept(concept)
            if key is None:
                raise Rejection("unresolved-element", f"concept {key_text(concept)} is not loaded")
            attrs = self.store.effective_attributes(key)
            x, y = self._place(graph, at)
            node = graph.add_node(
                lambda nid: VariableNode(
                    id=nid,
                    name=self._auto_name(graph, key[1]),
                    concept=key,
                    slots=[
                        AttributeSlot(name=a.name, constraint=a.constraint, range=a.range, origin=a.origin)
                        for a in attrs
                    ],
                    x=x,
                    y=y,
                )
            )
            self._note_ontologies(graph, node)
            # the very first variable is auto-connected to Start
            others = [n for n in graph.nodes.values() if not isinstance(n, RootNode) and n.id != node.id]
            if not others and graph.out_degree(graph.root_id) == 0:
                graph.add_connection(Port(PORT_ROOT, graph.root_id), node.id)
            return node.id

        return self._transact(graph, run)

    def create_operator(self, graph: AxiomGraph, kind: str, at=None) -> str:
        def run():
            if kind not in OPERATOR_KINDS:
                raise Rejection("kind", f"unknown operator kind {kind!r}")
            x, y = self._place(graph, at)
            node = graph.add_node(lambda nid: OperatorNode(id=nid, op=kind, x=x, y=y))
            return node.id

        return self._transact(graph, run)

    def create_instance_node(self, graph: AxiomGraph, instance: ConceptKey, at=None) -> str:
        def run():
            inst = self.store.get_instance(instance)
            if inst is None:
                raise Rejection("unresolved-element", f"instance {key_text(instance)} is not loaded")
            member = self.store.resolve_concept(inst.member_of, scope=instance[0])
            if member is None:
                raise Rejection("unresolved-element", f"instance {inst.id} has unresolved concept {inst.member_of.id}")
            x, y = self._place(graph, at)
            node = graph.add_node(
                lambda nid: InstanceNode(id=nid, instance=instance, member_of=member, x=x, y=y)
            )
            self._note_ontologies(graph, node)
            return node.id

        return self._transact(graph, run)

    def create_literal_node(self, graph: AxiomGraph, builtin: str, value: str, at=None) -> str:
        def run():
            if builtin not in CANONICAL_LITERALS:
                raise Rejection("kind", f"unknown built-in datatype {builtin!r}")
            if not literal_conforms(value, builtin):
                raise Rejection("literal", f"{value!r} is not a valid {builtin}")
            x, y = self._place(graph, at)
            node = graph.add_node(lambda nid: InstanceNode(id=nid, builtin=builtin, value=value, x=x, y=y))
            return node.id

        return self._transact(graph, run)

    def create_relation_node(self, graph: AxiomGraph, relation: ConceptKey, at=None) -> str:
        def run():
            return self._make_relation_node(graph, relation, at).id

        return self._transact(graph, run)

    def _make_relation_node(self, graph: AxiomGraph, relation: ConceptKey, at=None) -> RelationNode:
        rel = self.store.get_relation(relation)
        if rel is None:
            raise Rejection("unresolved-element", f"relation {key_text(relation)} is not loaded")
        x, y = self._place(graph, at)
        node = graph.add_node(
            lambda nid: RelationNode(
                id=nid,
                relation=relation,
                params=[ParamSlot(type=self.store.resolve_type(t, scope=relation[0])) for t in rel.parameters],
                x=x,
                y=y,
            )
        )
        self._note_ontologies(graph, node)
        return node

    def _note_ontologies(self, graph: AxiomGraph, node) -> None:
        if isinstance(node, VariableNode):
            graph.referenced_ontologies.add(node.concept[0])
            for slot in node.slots:
                graph.referenced_ontologies.add(slot.origin[0])
                if slot.range.concept is not None:
                    graph.referenced_ontologies.add(slot.range.concept[0])
        elif isinstance(node, RelationNode):
            graph.referenced_ontologies.add(node.relation[0])
            for p in node.params:
                if p.type.concept is not None:
                    graph.referenced_ontologies.add(p.type.concept[0])
        elif isinstance(node, InstanceNode) and node.instance is not None:
            graph.referenced_ontologies.add(node.instance[0])
            graph.referenced_ontologies.add(node.member_of[0])

    # ------------------------------------------------------------------
    # typed lookup helpers
    # ------------------------------------------------------------------

    def _variable(self, graph: AxiomGraph, node_id: str) -> VariableNode:
        node = graph.nodes.get(node_id)
        if not isinstance(node, VariableNode):
            raise Rejection("not-found", f"{node_id!r} is not a variable node")
        return node

    def _relation(self, graph: AxiomGraph, node_id: str) -> RelationNode:
        node = graph.nodes.get(node_id)
        if not isinstance(node, RelationNode):
            raise Rejection("not-found", f"{node_id!r} is not a relation node")
        return node

    def _operator(self, graph: AxiomGraph, node_id: str) -> OperatorNode:
        node = graph.nodes.get(node_id)
        if not isinstance(node, OperatorNode):
            raise Rejection("not-found", f"{node_id!r} is not an operator node")
        return node

    def node_value_type(self, graph: AxiomGraph, node_id: str) -> ResolvedType | None:
        """The type a node carries when used as a value; None for operators,
        relations and the root."""
        node = graph.nodes.get(node_id)
        if isinstance(node, VariableNode):
            return ResolvedType(kind="concept", concept=node.concept, concept_name=node.concept[1])
        if isinstance(node, InstanceNode):
            if node.is_literal:
                return ResolvedType(kind="builtin", builtin=node.builtin)
            return ResolvedType(kind="concept", concept=node.member_of, concept_name=node.member_of[1])
        return None

    def required_type_of_port(self, graph: AxiomGraph, port: Port) -> ResolvedType | None:
        """The type a value connected at this port must satisfy.

        None means an untyped (root) context: operators trace their single
        incoming connection back to the originating slot or parameter.
        """
        if port.kind == PORT_ROOT:
            return None
        if port.kind == PORT_SLOT:
            var = self._variable(graph, port.node)
            return var.slots[port.index].range
        if port.kind == PORT_PARAM:
            rel = self._relation(graph, port.node)
            return rel.params[port.index].type
        incoming = graph.conns_to(port.node)
        if not incoming:
            return None
        return self.required_type_of_port(graph, incoming[0].source)

    # ------------------------------------------------------------------
    # semantic checks
    # ------------------------------------------------------------------

    def check_node_as_value(self, graph: AxiomGraph, node_id: str, required: ResolvedType | None) -> None:
        node = graph.nodes.get(node_id)
        if node is None:
            raise Rejection("not-found", f"node {node_id!r} does not exist")
        if isinstance(node, RootNode):
            raise Rejection("root-rule", "the root node cannot be a connection target")
        if isinstance(node, VariableNode):
            if required is not None and not self.store.compatible(self.node_value_type(graph, node_id), required):
                raise Rejection(
                    "subsumption",
                    f"{node.name} of type {node.concept[1]} is not compatible with required {required.display()}",
                )
            return
        if isinstance(node, InstanceNode):
            if required is None:
                raise Rejection("root-rule", "a bare instance is not allowed in an untyped (root) context")
            if not self.store.compatible(self.node_value_type(graph, node_id), required):
                label = node.value if node.is_literal else node.instance[1]
                raise Rejection("subsumption", f"instance {label!r} is not compatible with required {required.display()}")
            return
        if isinstance(node, RelationNode):
            if required is not None:
                raise Rejection("kind", "relations bind via their parameters, not as attribute values")
            return
        if isinstance(node, OperatorNode):
            for conn in graph.conns_from(Port(PORT_OPERATOR, node.id)):
                self.check_node_as_value(graph, conn.target, required)
            return
        raise Rejection("kind", f"node {node_id!r} cannot be used as a value")

    def check_binding(
        self,
        graph: AxiomGraph,
        required: ResolvedType | None,
        binding: Binding,
        anchor_port: Port,
    ) -> None:
        """Validate a Binding for a context requiring `required` (None for the
        untyped root context); cycle checks are anchored at anchor_port."""
        k = binding.kind
        if k == "default":
            if required is None or required.kind != "concept":
                raise Rejection("kind", "the default binding needs a concept-typed context")
            if required.concept is None:
                raise Rejection("unresolved-element", f"range concept {required.concept_name!r} is not loaded")
            return
        if k == "sub":
            key = self.store.resolve_concept(binding.concept)
            if key is None:
                raise Rejection("unresolved-element", f"concept {key_text(binding.concept)} is not loaded")
            if required is not None:
                if required.kind != "concept" or required.concept is None:
                    raise Rejection("kind", "a variable cannot bind a datatype-typed context")
                if not self.store.is_subconcept_of(key, required.concept):
                    raise Rejection("subsumption", f"{key[1]} is not a subconcept of {required.display()}")
            return
        if k == "inst":
            inst = self.store.get_instance(binding.instance)
            if inst is None:
                raise Rejection("unresolved-element", f"instance {key_text(binding.instance)} is not loaded")
            if required is None:
                raise Rejection("root-rule", "a bare instance is not allowed in an untyped (root) context")
            if required.kind != "concept" or required.concept is None:
                raise Rejection("kind", "an ontology instance cannot bind a datatype-typed context")
            member = self.store.resolve_concept(inst.member_of, scope=binding.instance[0])
            if member is None or not self.store.is_subconcept_of(member, required.concept):
                raise Rejection("subsumption", f"instance {inst.id} is not assignable to {required.display()}")
            return
        if k == "lit":
            if binding.builtin not in CANONICAL_LITERALS:
                raise Rejection("kind", f"unknown built-in datatype {binding.builtin!r}")
            if not literal_conforms(binding.value, binding.builtin):
                raise Rejection("literal", f"{binding.value!r} is not a valid {binding.builtin}")
            if required is None:
                raise Rejection("root-rule", "a bare literal is not allowed in an untyped (root) context")
            if required.kind != "builtin" or required.builtin != binding.builtin:
                raise Rejection("kind", f"a {binding.builtin} literal cannot bind a context requiring {required.display()}")
            return
        if k == "rel":
            rel = self.store.get_relation(binding.relation)
            if rel is None:
                raise Rejection("unresolved-element", f"relation {key_text(binding.relation)} is not loaded")
            if binding.param is None or not 0 <= binding.param < len(rel.parameters):
                raise Rejection("kind", f"relation {rel.id} has no parameter {binding.param}")
            if required is not None:
                ptype = self.store.resolve_type(rel.parameters[binding.param], scope=binding.relation[0])
                if not self.store.compatible(required, ptype):
                    raise Rejection(
                        "subsumption",
                        f"required {required.display()} is not compatible with parameter {binding.param} of {rel.id}",
                    )
            return
        if k in ("use", "shared"):
            var = self._variable(graph, binding.node)
            if required is not None and not self.store.compatible(self.node_value_type(graph, var.id), required):
                raise Rejection("subsumption", f"{var.name} is not compatible with required {required.display()}")
            if would_create_cycle(graph, anchor_port, var.id):
                raise Rejection("cycle", f"binding to {var.name} would create a cycle")
            return
        if k == "op":
            if binding.op not in OPERATOR_KINDS:
                raise Rejection("kind", f"unknown operator kind {binding.op!r}")
            if binding.op == "NOT" and len(binding.operands) != 1:
                raise Rejection("arity", "NOT takes exactly one operand")
            if binding.op in ("AND", "OR") and len(binding.operands) < 2:
                raise Rejection("arity", f"{binding.op} needs at least two operands")
            for operand in binding.operands:
                self.check_binding(graph, required, operand, anchor_port)
            return
        raise Rejection("kind", f"unknown binding kind {k!r}")

    # ------------------------------------------------------------------
    # binding materialization (checks assumed done)
    # ------------------------------------------------------------------

    def _materialize(
        self,
        graph: AxiomGraph,
        source_port: Port,
        binding: Binding,
        required: ResolvedType | None,
        at=None,
        name_hint: str | None = None,
    ) -> tuple[str, str]:
        """Create the structure a binding describes, connected from source_port.
        Returns (root node id of the structure, connection id)."""
        k = binding.kind
        if k == "default":
            key = required.concept
            return self._materialize_variable(graph, source_port, key, at, name_hint)
        if k == "sub":
            key = self.store.resolve_concept(binding.concept)
            return self._materialize_variable(graph, source_port, key, at, None)
        if k == "inst":
            inst = self.store.get_instance(binding.instance)
            member = self.store.resolve_concept(inst.member_of, scope=binding.instance[0])
            x, y = self._place(graph, at)
            node = graph.add_node(
                lambda nid: InstanceNode(id=nid, instance=binding.instance, member_of=member, x=x, y=y)
            )
            self._note_ontologies(graph, node)
            conn = graph.add_connection(source_port, node.id)
            return node.id, conn.id
        if k == "lit":
            x, y = self._place(graph, at)
            node = graph.add_node(lambda nid: InstanceNode(id=nid, builtin=binding.builtin, value=binding.value, x=x, y=y))
            conn = graph.add_connection(source_port, node.id)
            return node.id, conn.id
        if k == "rel":
            node = self._make_relation_node(graph, binding.relation, at)
            conn = graph.add_connection(source_port, node.id)
            if required is not None:
                # the incoming value occupies parameter k
                node.params[binding.param].binding = conn.id
            return node.id, conn.id
        if k in ("use", "shared"):
            var = self._variable(graph, binding.node)
            conn = graph.add_connection(source_port, var.id)
            if k == "shared":
                var.shared = True
            return var.id, conn.id
        if k == "op":
            x, y = self._place(graph, at)
            node = graph.add_node(lambda nid: OperatorNode(id=nid, op=binding.op, x=x, y=y))
            conn = graph.add_connection(source_port, node.id)
            for operand in binding.operands:
                self._materialize(graph, Port(PORT_OPERATOR, node.id), operand, required)
            return node.id, conn.id
        raise Rejection("kind", f"unknown binding kind {k!r}")

    def _materialize_variable(self, graph, source_port, key, at, name_hint):
        attrs = self.store.effective_attributes(key)
        x, y = self._place(graph, at)
        name = self._auto_name(graph, name_hint or key[1])
        node = graph.add_node(
            lambda nid: VariableNode(
                id=nid,
                name=name,
                concept=key,
                slots=[
                    AttributeSlot(name=a.name, constraint=a.constraint, range=a.range, origin=a.origin)
                    for a in attrs
                ],
                x=x,
                y=y,
            )
        )
        self._note_ontologies(graph, node)
        conn = graph.add_connection(source_port, node.id)
        return node.id, conn.id

    # ------------------------------------------------------------------
    # refinement operations
    # ------------------------------------------------------------------

    def refine_attribute(self, graph: AxiomGraph, var_id: str, slot: int | str, binding: Binding, at=None) -> str:
        def run():
            var = self._variable(graph, var_id)
            idx = self._slot_index(var, slot)
            s = var.slots[idx]
            if s.binding is not None:
                raise Rejection("occupied", f"attribute {s.name} of {var.name} is already bound")
            port = Port(PORT_SLOT, var.id, idx)
            self.check_binding(graph, s.range, binding, port)
            hint = s.name if binding.kind == "default" else None
            node_id, conn_id = self._materialize(graph, port, binding, s.range, at, name_hint=hint)
            s.binding = conn_id
            return node_id

        return self._transact(graph, run)

    @staticmethod
    def _slot_index(var: VariableNode, slot: int | str) -> int:
        if isinstance(slot, int):
            if not 0 <= slot < len(var.slots):
                raise Rejection("not-found", f"{var.name} has no attribute slot {slot}")
            return slot
        for i, s in enumerate(var.slots):
            if s.name == slot:
                return i
        raise Rejection("not-found", f"{var.name} has no attribute {slot!r}")

    def refine_relation_parameter(self, graph: AxiomGraph, rel_id: str, index: int, binding: Binding, at=None) -> str:
        def run():
            rel = self._relation(graph, rel_id)
            if not 0 <= index < len(rel.params):
                raise Rejection("not-found", f"relation node {rel_id} has no parameter {index}")
            p = rel.params[index]
            if p.binding is not None:
                raise Rejection("occupied", f"parameter {index} of {rel.relation[1]} is already bound")
            port = Port(PORT_PARAM, rel.id, index)
            self.check_binding(graph, p.type, binding, port)
            node_id, conn_id = self._materialize(graph, port, binding, p.type, at)
            p.binding = conn_id
            return node_id

        return self._transact(graph, run)

    def involve_variable_in_relation(self, graph: AxiomGraph, var_id: str, rel_id: str, index: int) -> str:
        def run():
            var = self._variable(graph, var_id)
            rel = self._relation(graph, rel_id)
            if not 0 <= index < len(rel.params):
                raise Rejection("not-found", f"relation node {rel_id} has no parameter {index}")
            p = rel.params[index]
            if p.binding is not None:
                raise Rejection("occupied", f"parameter {index} of {rel.relation[1]} is already bound")
            if not self.store.compatible(self.node_value_type(graph, var.id), p.type):
                raise Rejection("subsumption", f"{var.name} is not compatible with parameter {index} of {rel.relation[1]}")
            port = Port(PORT_PARAM, rel.id, index)
            if would_create_cycle(graph, port, var.id):
                raise Rejection("cycle", f"involving {var.name} would create a cycle")
            conn = graph.add_connection(port, var.id)
            p.binding = conn.id
            return conn.id

        return self._transact(graph, run)

    # ------------------------------------------------------------------
    # other operations
    # ------------------------------------------------------------------

    def rename_variable(self, graph: AxiomGraph, var_id: str, new_name: str) -> None:
        def run():
            var = self._variable(graph, var_id)
            if not VAR_NAME_RE.match(new_name):
                raise Rejection("malformed-name", f"{new_name!r} is not a valid variable name")
            if new_name == var.name:
                return  # idempotent
            if new_name in graph.variable_names():
                raise Rejection("name-collision", f"variable name {new_name!r} is already in use")
            var.name = new_name

        return self._transact(graph, run)

    def delete_element(self, graph: AxiomGraph, node_id: str) -> None:
        def run():
            node = graph.nodes.get(node_id)
            if node is None:
                raise Rejection("not-found", f"node {node_id!r} does not exist")
            if isinstance(node, RootNode):
                raise Rejection("root-delete", "the Start node cannot be deleted")
            dead = [c.id for c in graph.connections.values() if c.target == node_id or c.source.node == node_id]
            for cid in dead:
                del graph.connections[cid]
            del graph.nodes[node_id]
            self._release_bindings(graph, set(dead))
            self._recompute_referenced(graph)

        return self._transact(graph, run)

    @staticmethod
    def _release_bindings(graph: AxiomGraph, dead: set[str]) -> None:
        for node in graph.nodes.values():
            if isinstance(node, VariableNode):
                for slot in node.slots:
                    if slot.binding in dead:
                        slot.binding = None
            elif isinstance(node, RelationNode):
                for p in node.params:
                    if p.binding in dead:
                        p.binding = None

    def _recompute_referenced(self, graph: AxiomGraph) -> None:
        graph.referenced_ontologies.clear()
        for node in graph.nodes.values():
            self._note_ontologies(graph, node)

    def change_operator_type(self, graph: AxiomGraph, op_id: str, kind: str) -> None:
        def run():
            node = self._operator(graph, op_id)
            if kind not in OPERATOR_KINDS:
                raise Rejection("kind", f"unknown operator kind {kind!r}")
            if kind == "NOT" and graph.out_degree(op_id) > 1:
                raise Rejection("arity", "cannot become NOT while holding more than one operand")
            node.op = kind

        return self._transact(graph, run)

    def add_operand(self, graph: AxiomGraph, op_id: str, target: Binding | str, at=None) -> str:
        def run():
            node = self._operator(graph, op_id)
            if node.op == "NOT" and graph.out_degree(op_id) >= 1:
                raise Rejection("arity", "NOT already has its single operand")
            port = Port(PORT_OPERATOR, op_id)
            required = self.required_type_of_port(graph, port)
            if isinstance(target, Binding):
                self.check_binding(graph, required, target, port)
                node_id, conn_id = self._materialize(graph, port, target, required, at)
                return conn_id
            self.check_node_as_value(graph, target, required)
            self._check_accepts_arc(graph, target)
            if would_create_cycle(graph, port, target):
                raise Rejection("cycle", f"operand {target} would create a cycle")
            if any(c.target == target for c in graph.conns_from(port)):
                raise Rejection("duplicate-connection", f"{op_id} already has operand {target}")
            conn = graph.add_connection(port, target)
            return conn.id

        return self._transact(graph, run)

    def edit_instance_value(self, graph: AxiomGraph, node_id: str, value: str) -> None:
        def run():
            node = graph.nodes.get(node_id)
            if not isinstance(node, InstanceNode):
                raise Rejection("not-found", f"{node_id!r} is not an instance node")
            if not node.is_literal:
                raise Rejection("immutable", "ontology instances cannot be edited")
            if not literal_conforms(value, node.builtin):
                raise Rejection("literal", f"{value!r} is not a valid {node.builtin}")
            node.value = value

        return self._transact(graph, run)

    def insert_operator_into_connection(
        self, graph: AxiomGraph, conn_id: str, kind: str, second: Binding | str | None = None, at=None
    ) -> str:
        def run():
            conn = graph.connections.get(conn_id)
            if conn is None:
                raise Rejection("not-found", f"connection {conn_id!r} does not exist")
            if kind not in OPERATOR_KINDS:
                raise Rejection("kind", f"unknown operator kind {kind!r}")
            if kind == "NOT":
                if conn.source.kind == PORT_ROOT:
                    raise Rejection("root-rule", "NOT cannot be inserted into a root connection")
                if second is not None:
                    raise Rejection("arity", "NOT takes no second operand")
            else:
                if second is None:
                    raise Rejection("missing-operand", f"{kind} requires a second operand")
            required = self.required_type_of_port(graph, conn.source)
            old_target = conn.target
            x, y = self._place(graph, at)
            op = graph.add_node(lambda nid: OperatorNode(id=nid, op=kind, x=x, y=y))
            conn.target = op.id
            first = graph.add_connection(Port(PORT_OPERATOR, op.id), old_target)
            # a parameter occupied by the split connection is now fed through
            # the operator's first-operand connection
            old_node = graph.nodes.get(old_target)
            if isinstance(old_node, RelationNode):
                for p in old_node.params:
                    if p.binding == conn.id:
                        p.binding = first.id
            if kind != "NOT":
                port = Port(PORT_OPERATOR, op.id)
                if isinstance(second, Binding):
                    self.check_binding(graph, required, second, port)
                    self._materialize(graph, port, second, required)
                else:
                    self.check_node_as_value(graph, second, required)
                    self._check_accepts_arc(graph, second)
                    if would_create_cycle(graph, port, second):
                        raise Rejection("cycle", f"second operand {second} would create a cycle")
                    if second == old_target:
                        raise Rejection("duplicate-connection", f"{second} is already the first operand")
                    graph.add_connection(port, second)
            return op.id

        return self._transact(graph, run)

    def reconnect(self, graph: AxiomGraph, conn_id: str, end: str, new_target: str | None = None, new_source: Port | None = None) -> None:
        def run():
            conn = graph.connections.get(conn_id)
            if conn is None:
                raise Rejection("not-found", f"connection {conn_id!r} does not exist")
            if end == "target":
                if new_target is None:
                    raise Rejection("not-found", "reconnect target requires a node")
                node = graph.nodes.get(new_target)
                if node is None:
                    raise Rejection("not-found", f"node {new_target!r} does not exist")
                if new_target == conn.target:
                    return  # idempotent
                required = self.required_type_of_port(graph, conn.source)
                self.check_node_as_value(graph, new_target, required)
                self._check_accepts_arc(graph, new_target)
                if would_create_cycle(graph, conn.source, new_target):
                    raise Rejection("cycle", f"retargeting to {new_target} would create a cycle")
                if any(c.source == conn.source and c.target == new_target for c in graph.connections.values()):
                    raise Rejection("duplicate-connection", f"{port_text_of(conn.source)} already connects to {new_target}")
                old_node = graph.nodes.get(conn.target)
                if isinstance(old_node, RelationNode):
                    for p in old_node.params:
                        if p.binding == conn.id:
                            p.binding = None
                conn.target = new_target
            elif end == "source":
                if new_source is None:
                    raise Rejection("not-found", "reconnect source requires a port")
                if not graph.port_exists(new_source):
                    raise Rejection("not-found", f"port {new_source} does not exist")
                if new_source == conn.source:
                    return  # idempotent
                self._check_port_free(graph, new_source)
                required = self.required_type_of_port(graph, new_source)
                self.check_node_as_value(graph, conn.target, required)
                if would_create_cycle(graph, new_source, conn.target):
                    raise Rejection("cycle", "moving the source would create a cycle")
                if any(c.source == new_source and c.target == conn.target for c in graph.connections.values()):
                    raise Rejection("duplicate-connection", f"{port_text_of(new_source)} already connects to {conn.target}")
                self._vacate_port(graph, conn.source, conn.id)
                conn.source = new_source
                self._occupy_port(graph, new_source, conn.id)
            else:
                raise Rejection("kind", f"reconnect end must be 'source' or 'target', got {end!r}")

        return self._transact(graph, run)

    def _check_port_free(self, graph: AxiomGraph, port: Port) -> None:
        if port.kind == PORT_SLOT:
            var = self._variable(graph, port.node)
            if var.slots[port.index].binding is not None:
                raise Rejection("occupied", f"attribute {var.slots[port.index].name} of {var.name} is already bound")
        elif port.kind == PORT_PARAM:
            rel = self._relation(graph, port.node)
            if rel.params[port.index].binding is not None:
                raise Rejection("occupied", f"parameter {port.index} of {rel.relation[1]} is already bound")
        elif port.kind == PORT_OPERATOR:
            node = self._operator(graph, port.node)
            if node.op == "NOT" and graph.out_degree(node.id) >= 1:
                raise Rejection("arity", "NOT already has its single operand")

    def _check_accepts_arc(self, graph: AxiomGraph, node_id: str) -> None:
        node = graph.nodes.get(node_id)
        if isinstance(node, OperatorNode) and graph.conns_to(node_id):
            raise Rejection("operator-incoming", f"operator {node_id} already has an incoming arc")

    def _vacate_port(self, graph: AxiomGraph, port: Port, conn_id: str) -> None:
        if port.kind == PORT_SLOT:
            var = self._variable(graph, port.node)
            if var.slots[port.index].binding == conn_id:
                var.slots[port.index].binding = None
        elif port.kind == PORT_PARAM:
            rel = self._relation(graph, port.node)
            if rel.params[port.index].binding == conn_id:
                rel.params[port.index].binding = None

    def _occupy_port(self, graph: AxiomGraph, port: Port, conn_id: str) -> None:
        if port.kind == PORT_SLOT:
            self._variable(graph, port.node).slots[port.index].binding = conn_id
        elif port.kind == PORT_PARAM:
            self._relation(graph, port.node).params[port.index].binding = conn_id

    def create_connection(self, graph: AxiomGraph, source_port: Port, target: str) -> str:
        def run():
            if not graph.port_exists(source_port):
                raise Rejection("not-found", f"port {source_port} does not exist")
            node = graph.nodes.get(target)
            if node is None:
                raise Rejection("not-found", f"node {target!r} does not exist")
            self._check_port_free(graph, source_port)
            required = self.required_type_of_port(graph, source_port)
            if source_port.kind == PORT_ROOT and isinstance(node, InstanceNode):
                raise Rejection("root-rule", "the root cannot point at a bare instance")
            self.check_node_as_value(graph, target, required)
            self._check_accepts_arc(graph, target)
            if would_create_cycle(graph, source_port, target):
                raise Rejection("cycle", f"connecting to {target} would create a cycle")
            if any(c.source == source_port and c.target == target for c in graph.connections.values()):
                raise Rejection("duplicate-connection", f"{port_text_of(source_port)} already connects to {target}")
            conn = graph.add_connection(source_port, target)
            self._occupy_port(graph, source_port, conn.id)
            return conn.id

        return self._transact(graph, run)

    def move_node(self, graph: AxiomGraph, node_id: str, at: tuple[int, int]) -> None:
        def run():
            node = graph.nodes.get(node_id)
            if node is None:
                raise Rejection("not-found", f"node {node_id!r} does not exist")
            node.x, node.y = at

        return self._transact(graph, run)

    # ------------------------------------------------------------------
    # command dispatch
    # ------------------------------------------------------------------

    def apply(self, graph: AxiomGraph, cmd: Command) -> str | None:
        """Apply one command; returns the created element id where relevant."""
        v = cmd.verb
        if v == "var":
            return self.create_variable(graph, cmd.element, cmd.at)
        if v == "op":
            return self.create_operator(graph, cmd.kind, cmd.at)
        if v == "inst":
            return self.create_instance_node(graph, cmd.element, cmd.at)
        if v == "lit":
            return self.create_literal_node(graph, cmd.builtin, cmd.value, cmd.at)
        if v == "rel":
            return self.create_relation_node(graph, cmd.element, cmd.at)
        if v == "refine":
            return self.refine_attribute(graph, cmd.node, cmd.attr, cmd.binding, cmd.at)
        if v == "refinep":
            return self.refine_relation_parameter(graph, cmd.node, cmd.index, cmd.binding, cmd.at)
        if v == "involve":
            return self.involve_variable_in_relation(graph, cmd.node, cmd.target, cmd.index)
        if v == "rename":
            return self.rename_variable(graph, cmd.node, cmd.name)
        if v == "delete":
            return self.delete_element(graph, cmd.node)
        if v == "setop":
            return self.change_operator_type(graph, cmd.node, cmd.kind)
        if v == "addoperand":
            return self.add_operand(graph, cmd.node, cmd.binding if cmd.binding is not None else cmd.target, cmd.at)
        if v == "setval":
            return self.edit_instance_value(graph, cmd.node, cmd.value)
        if v == "insert":
            return self.insert_operator_into_connection(
                graph, cmd.conn, cmd.kind, cmd.binding if cmd.binding is not None else cmd.target, cmd.at
            )
        if v == "reconnect":
            return self.reconnect(graph, cmd.conn, cmd.end, new_target=cmd.target, new_source=cmd.port)
        if v == "connect":
            return self.create_connection(graph, cmd.port, cmd.target)
        if v == "move":
            return self.move_node(graph, cmd.node, cmd.at)
        raise Rejection("kind", f"unknown verb {v!r}")

    # ------------------------------------------------------------------
    # context-sensitive menus
    # ------------------------------------------------------------------

    def _binding_candidates(self, graph: AxiomGraph, required: ResolvedType | None, anchor_port: Port) -> list[Binding]:
        """Atomic bindings legal in a context requiring `required`."""
        out: list[Binding] = []
        if required is not None and required.kind == "builtin":
            out.append(Binding(kind="lit", builtin=required.builtin, value=CANONICAL_LITERALS[required.builtin]))
            return out
        if required is not None and required.concept is None:
            return []  # unresolved range: nothing can be checked
        if required is not None:
            out.append(Binding(kind="default"))
            for key in self._loaded_concepts():
                if self.store.is_subconcept_of(key, required.concept):
                    out.append(Binding(kind="sub", concept=key))
            for iri, inst in self.store.instances_assignable_to(required):
                out.append(Binding(kind="inst", instance=(iri, inst.id)))
            for (iri, rel), k in self.store.relations_with_compatible_param(required):
                out.append(Binding(kind="rel", relation=(iri, rel.id), param=k))
        else:
            # untyped (root) context: any concept variable or relation atom
            for key in self._loaded_concepts():
                out.append(Binding(kind="sub", concept=key))
            for iri in sorted(self.store.ontologies):
                for rel in self.store.ontologies[iri].relations:
                    for k in range(len(rel.parameters)):
                        out.append(Binding(kind="rel", relation=(iri, rel.id), param=k))
        for node in graph.nodes.values():
            if isinstance(node, VariableNode):
                ok_type = required is None or self.store.compatible(
                    self.node_value_type(graph, node.id), required
                )
                if ok_type and not would_create_cycle(graph, anchor_port, node.id):
                    out.append(Binding(kind="use", node=node.id))
                    out.append(Binding(kind="shared", node=node.id))
        return out

    def _loaded_concepts(self) -> list[ConceptKey]:
        out = []
        for iri in sorted(self.store.ontologies):
            for c in self.store.ontologies[iri].concepts:
                out.append((iri, c.id))
        return out

    def _operand_targets(self, graph: AxiomGraph, op_id: str, required: ResolvedType | None) -> list[str]:
        port = Port(PORT_OPERATOR, op_id)
        existing = {c.target for c in graph.conns_from(port)}
        out = []
        for node in graph.nodes.values():
            if isinstance(node, RootNode) or node.id in existing or node.id == op_id:
                continue
            try:
                self.check_node_as_value(graph, node.id, required)
                self._check_accepts_arc(graph, node.id)
            except Rejection:
                continue
            if would_create_cycle(graph, port, node.id):
                continue
            out.append(node.id)
        return out

    def list_allowed_operations(self, graph: AxiomGraph, selection, mode: str = "advanced") -> list[Command]:
        """Concrete commands whose checks hold for the selection.

        selection: ("node", id) | ("slot", var_id, index) | ("param", rel_id,
        index) | ("conn", conn_id) | ("root",). Free-text commands (rename,
        setval) are returned as templates carrying a sample value.
        """
        advanced = mode == "advanced"
        out: list[Command] = []
        stype = selection[0]

        if stype == "slot":
            var_id, idx = selection[1], selection[2]
            var = self._variable(graph, var_id)
            slot = var.slots[idx]
            port = Port(PORT_SLOT, var_id, idx)
            if slot.binding is None:
                for b in self._binding_candidates(graph, slot.range, port):
                    out.append(Command(verb="refine", node=var_id, attr=slot.name, binding=b))
                if advanced:
                    for target in self._connect_targets(graph, port):
                        out.append(Command(verb="connect", port=port, target=target))
            return out

        if stype == "param":
            rel_id, idx = selection[1], selection[2]
            rel = self._relation(graph, rel_id)
            p = rel.params[idx]
            port = Port(PORT_PARAM, rel_id, idx)
            if p.binding is None:
                for b in self._binding_candidates(graph, p.type, port):
                    out.append(Command(verb="refinep", node=rel_id, index=idx, binding=b))
                if advanced:
                    for node in graph.nodes.values():
                        if isinstance(node, VariableNode):
                            try:
                                self.check_node_as_value(graph, node.id, p.type)
                            except Rejection:
                                continue
                            if not would_create_cycle(graph, port, node.id):
                                out.append(Command(verb="involve", node=node.id, target=rel_id, index=idx))
                    for target in self._connect_targets(graph, port):
                        out.append(Command(verb="connect", port=port, target=target))
            return out

        if stype == "root":
            if advanced:
                port = Port(PORT_ROOT, graph.root_id)
                for target in self._connect_targets(graph, port):
                    out.append(Command(verb="connect", port=port, target=target))
            # creation items carry a placeholder alias the caller may rename
            for key in self._loaded_concepts():
                out.append(Command(verb="var", node="v", element=key, template=True))
            if advanced:
                for kind in OPERATOR_KINDS:
                    out.append(Command(verb="op", node="o", kind=kind, template=True))
                for iri in sorted(self.store.ontologies):
                    ont = self.store.ontologies[iri]
                    for inst in ont.instances:
                        out.append(Command(verb="inst", node="i", element=(iri, inst.id), template=True))
                    for rel in ont.relations:
                        out.append(Command(verb="rel", node="r", element=(iri, rel.id), template=True))
                for builtin, value in CANONICAL_LITERALS.items():
                    out.append(Command(verb="lit", node="l", builtin=builtin, value=value, template=True))
            return out

        if stype == "conn":
            conn = graph.connections.get(selection[1])
            if conn is None:
                return out
            required = self.required_type_of_port(graph, conn.source)
            if conn.source.kind != PORT_ROOT:
                out.append(Command(verb="insert", conn=conn.id, kind="NOT"))
            anchor = conn.source
            for kind in ("OR", "AND"):
                for b in self._binding_candidates(graph, required, anchor):
                    out.append(Command(verb="insert", conn=conn.id, kind=kind, binding=b))
                for target in self._second_operand_nodes(graph, conn, required):
                    out.append(Command(verb="insert", conn=conn.id, kind=kind, target=target))
            if advanced:
                for target in self._retarget_nodes(graph, conn, required):
                    out.append(Command(verb="reconnect", conn=conn.id, end="target", target=target))
                for port in self._resource_ports(graph, conn):
                    out.append(Command(verb="reconnect", conn=conn.id, end="source", port=port))
            return out

        if stype == "node":
            node = graph.nodes.get(selection[1])
            if node is None or isinstance(node, RootNode):
                return out
            out.append(Command(verb="delete", node=node.id))
            if isinstance(node, VariableNode):
                out.append(Command(verb="rename", node=node.id, name=self._auto_name(graph, node.concept[1]), template=True))
            elif isinstance(node, OperatorNode):
                for kind in OPERATOR_KINDS:
                    if kind == "NOT" and graph.out_degree(node.id) > 1:
                        continue
                    out.append(Command(verb="setop", node=node.id, kind=kind))
                if not (node.op == "NOT" and graph.out_degree(node.id) >= 1):
                    required = self.required_type_of_port(graph, Port(PORT_OPERATOR, node.id))
                    for b in self._binding_candidates(graph, required, Port(PORT_OPERATOR, node.id)):
                        out.append(Command(verb="addoperand", node=node.id, binding=b))
                    for target in self._operand_targets(graph, node.id, required):
                        out.append(Command(verb="addoperand", node=node.id, target=target))
            elif isinstance(node, InstanceNode) and node.is_literal:
                out.append(Command(verb="setval", node=node.id, value=CANONICAL_LITERALS[node.builtin], template=True))
            return out

        raise Rejection("kind", f"unknown selection {selection!r}")

    def _connect_targets(self, graph: AxiomGraph, port: Port) -> list[str]:
        required = self.required_type_of_port(graph, port)
        out = []
        for node in graph.nodes.values():
            if isinstance(node, RootNode):
                continue
            if port.kind == PORT_ROOT and isinstance(node, InstanceNode):
                continue
            try:
                self.check_node_as_value(graph, node.id, required)
                self._check_accepts_arc(graph, node.id)
            except Rejection:
                continue
            if would_create_cycle(graph, port, node.id):
                continue
            if any(c.source == port and c.target == node.id for c in graph.connections.values()):
                continue
            out.append(node.id)
        return out

    def _second_operand_nodes(self, graph: AxiomGraph, conn: Connection, required: ResolvedType | None) -> list[str]:
        out = []
        for node in graph.nodes.values():
            if isinstance(node, RootNode) or node.id == conn.target:
                continue
            try:
                self.check_node_as_value(graph, node.id, required)
                self._check_accepts_arc(graph, node.id)
            except Rejection:
                continue
            # after the split the operator sits between source and target;
            # a cycle arises iff the source's owner is reachable from the node
            if would_create_cycle(graph, conn.source, node.id):
                continue
            out.append(node.id)
        return out

    def _retarget_nodes(self, graph: AxiomGraph, conn: Connection, required: ResolvedType | None) -> list[str]:
        out = []
        for node in graph.nodes.values():
            if isinstance(node, RootNode) or node.id == conn.target:
                continue
            if conn.source.kind == PORT_ROOT and isinstance(node, InstanceNode):
                continue
            try:
                self.check_node_as_value(graph, node.id, required)
                self._check_accepts_arc(graph, node.id)
            except Rejection:
                continue
            if would_create_cycle(graph, conn.source, node.id):
                continue
            if any(c.source == conn.source and c.target == node.id for c in graph.connections.values()):
                continue
            out.append(node.id)
        return out

    def _resource_ports(self, graph: AxiomGraph, conn: Connection) -> list[Port]:
        out = []
        candidates: list[Port] = [Port(PORT_ROOT, graph.root_id)]
        for node in graph.nodes.values():
            if isinstance(node, VariableNode):
                candidates.extend(Port(PORT_SLOT, node.id, i) for i in range(len(node.slots)))
            elif isinstance(node, RelationNode):
                candidates.extend(Port(PORT_PARAM, node.id, i) for i in range(len(node.params)))
            elif isinstance(node, OperatorNode):
                candidates.append(Port(PORT_OPERATOR, node.id))
        for port in candidates:
            if port == conn.source or port.node == conn.target:
                continue
            try:
                self._check_port_free(graph, port)
                required = self.required_type_of_port(graph, port)
                if port.kind == PORT_ROOT and isinstance(graph.nodes.get(conn.target), InstanceNode):
                    continue
                self.check_node_as_value(graph, conn.target, required)
            except Rejection:
                continue
            if would_create_cycle(graph, port, conn.target):
                continue
            if any(c.source == port and c.target == conn.target for c in graph.connections.values()):
                continue
            out.append(port)
        return out
