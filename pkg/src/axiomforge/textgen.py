"""Deterministic mapping from the Start-reachable subgraph to WSML text.

Traversal follows connection-creation order everywhere, so identical graphs
produce byte-identical text. A variable's membership molecule is emitted at
its first visit only; later references just reuse its name. Free slots emit
nothing. Spans of the emitted region are recorded per node for editor
highlighting.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .axiom import (
    PORT_OPERATOR,
    AxiomGraph,
    Connection,
    InstanceNode,
    OperatorNode,
    RelationNode,
    RootNode,
    VariableNode,
    validate_complete,
)


class IncompleteGraphError(Exception):
    def __init__(self, violations):
        super().__init__("; ".join(str(v) for v in violations))
        self.violations = violations


@dataclass
class Span:
    node: str
    parts: list = field(default_factory=list)  # str | Span


Frag = object  # str | Span
Piece = list  # list[Frag]; one conjunct


@dataclass
class GeneratedExpression:
    text: str
    element_spans: dict[str, tuple[int, int]]


def _join(pieces: list[Piece], sep: str) -> list:
    out: list = []
    for i, piece in enumerate(pieces):
        if i:
            out.append(sep)
        out.extend(piece)
    return out


class _Emitter:
    def __init__(self, graph: AxiomGraph):
        self.graph = graph
        self.emitted_vars: set[str] = set()
        self.param_names: dict[tuple[str, int], str] = {}
        self.used_names: set[str] = set(graph.variable_names())

    # -- helpers ------------------------------------------------------------

    def _conn(self, cid: str) -> Connection:
        return self.graph.connections[cid]

    def _param_var(self, rel: RelationNode, idx: int) -> str:
        key = (rel.id, idx)
        name = self.param_names.get(key)
        if name is not None:
            return name
        base = f"?{rel.relation[1]}P{idx}"
        name = base
        i = 1
        while name in self.used_names:
            name = f"{base}_{i}"
            i += 1
        self.used_names.add(name)
        self.param_names[key] = name
        return name

    @staticmethod
    def _literal_text(node: InstanceNode) -> str:
        if node.builtin == "_string":
            return f'"{node.value}"'
        return node.value

    def _instance_frag(self, node: InstanceNode) -> Span:
        label = node.instance[1] if node.instance is not None else self._literal_text(node)
        return Span(node.id, [label])

    # -- variables ----------------------------------------------------------

    def emit_var(self, var: VariableNode) -> list[Piece]:
        if var.id in self.emitted_vars:
            return []
        self.emitted_vars.add(var.id)
        pieces: list[Piece] = [[Span(var.id, [f"{var.name} memberOf {var.concept[1]}"])]]
        for slot in var.slots:
            if slot.binding is None:
                continue  # free slots stay free WSML variables and emit nothing
            conn = self._conn(slot.binding)
            pieces.extend(self.emit_bound_value(var.name, slot.name, conn))
        return pieces

    def emit_bound_value(self, owner_name: str, attr: str, conn: Connection) -> list[Piece]:
        """`owner[attr hasValue t]` pieces for the value the connection points at."""
        target = self.graph.nodes[conn.target]
        if isinstance(target, VariableNode):
            piece: Piece = [f"{owner_name}[{attr} hasValue {target.name}]"]
            return [piece] + self.emit_var(target)
        if isinstance(target, InstanceNode):
            return [[f"{owner_name}[{attr} hasValue ", self._instance_frag(target), "]"]]
        if isinstance(target, RelationNode):
            marked = self._marked_param(target, conn)
            if marked is None:
                return self.emit_rel_atom(target, {})
            term = self._param_var(target, marked)
            piece = [f"{owner_name}[{attr} hasValue {term}]"]
            return [piece] + self.emit_rel_atom(target, {marked: term})
        if isinstance(target, OperatorNode):
            return [[self.emit_operator_bind(owner_name, attr, target)]]
        raise AssertionError(f"unexpected bound value node {target!r}")

    @staticmethod
    def _marked_param(rel: RelationNode, conn: Connection) -> int | None:
        for k, p in enumerate(rel.params):
            if p.binding == conn.id:
                return k
        return None

    # -- operators in a slot/parameter context ------------------------------

    def emit_operator_bind(self, owner_name: str, attr: str, op: OperatorNode) -> Span:
        operand_frags: list[list] = []
        compound: list[bool] = []
        from .axiom import Port

        for conn in self.graph.conns_from(Port(PORT_OPERATOR, op.id)):
            target = self.graph.nodes[conn.target]
            if isinstance(target, OperatorNode):
                operand_frags.append([self.emit_operator_bind(owner_name, attr, target)])
                compound.append(False)  # already parenthesized / neg-prefixed
            else:
                pieces = self.emit_bound_value(owner_name, attr, conn)
                operand_frags.append(_join(pieces, " and "))
                compound.append(len(pieces) > 1)
        return self._wrap_operator(op, operand_frags, compound)

    @staticmethod
    def _wrap_operator(op: OperatorNode, operand_frags: list[list], compound: list[bool]) -> Span:
        if op.op == "NOT":
            frags = operand_frags[0]
            if compound[0]:
                return Span(op.id, ["neg ("] + frags + [")"])
            return Span(op.id, ["neg "] + frags)
        sep = " or " if op.op == "OR" else " and "
        inner: list = []
        for i, frags in enumerate(operand_frags):
            if i:
                inner.append(sep)
            inner.extend(frags)
        return Span(op.id, ["("] + inner + [")"])

    # -- relations ------------------------------------------------------------

    def emit_rel_atom(self, rel: RelationNode, presets: dict[int, str]) -> list[Piece]:
        # distribute over the first operator-bound parameter, if any
        for k, p in enumerate(rel.params):
            if k in presets or p.binding is None:
                continue
            conn = self.graph.connections[p.binding]
            if conn.source.node == rel.id and isinstance(self.graph.nodes[conn.target], OperatorNode):
                return [[self._distribute(rel, presets, k, self.graph.nodes[conn.target])]]
        terms: list = []
        extras: list[Piece] = []
        for k, p in enumerate(rel.params):
            if k in presets:
                terms.append(presets[k])
                continue
            if p.binding is None:
                terms.append(self._param_var(rel, k))
                continue
            conn = self.graph.connections[p.binding]
            if conn.target == rel.id:
                # occupied by an incoming refinement; its value variable was
                # chosen by the caller (or stays fresh in a root context)
                terms.append(self._param_var(rel, k))
                continue
            target = self.graph.nodes[conn.target]
            if isinstance(target, VariableNode):
                terms.append(target.name)
                extras.extend(self.emit_var(target))
            elif isinstance(target, InstanceNode):
                terms.append(self._instance_frag(target))
            elif isinstance(target, RelationNode):
                marked = self._marked_param(target, conn)
                if marked is None:
                    terms.append(self._param_var(rel, k))
                    extras.extend(self.emit_rel_atom(target, {}))
                else:
                    term = self._param_var(target, marked)
                    terms.append(term)
                    extras.extend(self.emit_rel_atom(target, {marked: term}))
            else:
                terms.append(self._param_var(rel, k))
        atom: Piece = [Span(rel.id, self._atom_frags(rel, terms))]
        return [atom] + extras

    @staticmethod
    def _atom_frags(rel: RelationNode, terms: list) -> list:
        frags: list = [f"{rel.relation[1]}("]
        for i, t in enumerate(terms):
            if i:
                frags.append(", ")
            frags.append(t)
        frags.append(")")
        return frags

    def _distribute(self, rel: RelationNode, presets: dict[int, str], k: int, op: OperatorNode) -> Span:
        from .axiom import Port

        operand_frags: list[list] = []
        compound: list[bool] = []
        for conn in self.graph.conns_from(Port(PORT_OPERATOR, op.id)):
            target = self.graph.nodes[conn.target]
            if isinstance(target, OperatorNode):
                operand_frags.append([self._distribute(rel, presets, k, target)])
                compound.append(False)
            else:
                term, extras = self._value_term(target, conn)
                pieces = self.emit_rel_atom(rel, {**presets, k: term}) + extras
                operand_frags.append(_join(pieces, " and "))
                compound.append(len(pieces) > 1)
        return self._wrap_operator(op, operand_frags, compound)

    def _value_term(self, target, conn: Connection):
        if isinstance(target, VariableNode):
            return target.name, self.emit_var(target)
        if isinstance(target, InstanceNode):
            return self._instance_frag(target), []
        if isinstance(target, RelationNode):
            marked = self._marked_param(target, conn)
            if marked is None:
                marked = 0
            term = self._param_var(target, marked)
            return term, self.emit_rel_atom(target, {marked: term})
        raise AssertionError(f"unexpected operand {target!r}")

    # -- root context ---------------------------------------------------------

    def emit_root_node(self, node) -> list[Piece]:
        if isinstance(node, VariableNode):
            return self.emit_var(node)
        if isinstance(node, RelationNode):
            return self.emit_rel_atom(node, {})
        if isinstance(node, OperatorNode):
            return [[self.emit_operator_root(node)]]
        raise AssertionError(f"unexpected root child {node!r}")

    def emit_operator_root(self, op: OperatorNode) -> Span:
        from .axiom import Port

        operand_frags: list[list] = []
        compound: list[bool] = []
        for conn in self.graph.conns_from(Port(PORT_OPERATOR, op.id)):
            target = self.graph.nodes[conn.target]
            if isinstance(target, OperatorNode):
                operand_frags.append([self.emit_operator_root(target)])
                compound.append(False)
            else:
                pieces = self.emit_root_node(target)
                if not pieces:
                    # an operand slot must hold a formula: restate the
                    # membership molecule of an already-emitted variable
                    pieces = [[Span(target.id, [f"{target.name} memberOf {target.concept[1]}"])]]
                operand_frags.append(_join(pieces, " and "))
                compound.append(len(pieces) > 1)
        return self._wrap_operator(op, operand_frags, compound)


def _flatten(frags: list, chunks: list[str], spans: dict[str, tuple[int, int]], offset: int) -> int:
    for frag in frags:
        if isinstance(frag, Span):
            start = offset
            offset = _flatten(frag.parts, chunks, spans, offset)
            spans.setdefault(frag.node, (start, offset - start))
        else:
            chunks.append(frag)
            offset += len(frag)
    return offset


def generate(graph: AxiomGraph, pretty: bool = False) -> GeneratedExpression:
    """Map the Start-reachable subgraph to WSML logical-expression text."""
    violations = validate_complete(graph)
    if violations:
        raise IncompleteGraphError(violations)
    from .axiom import PORT_ROOT, Port

    emitter = _Emitter(graph)
    pieces: list[Piece] = []
    for conn in graph.conns_from(Port(PORT_ROOT, graph.root_id)):
        pieces.extend(emitter.emit_root_node(graph.nodes[conn.target]))
    body = _join(pieces, " and ")
    header = "definedBy\n  " if pretty else "definedBy "
    chunks: list[str] = [header]
    spans: dict[str, tuple[int, int]] = {}
    _flatten(body, chunks, spans, len(header))
    return GeneratedExpression(text="".join(chunks), element_spans=spans)
