from axiomforge.axiom import (
    PORT_OPERATOR,
    PORT_ROOT,
    AxiomGraph,
    OperatorNode,
    Port,
    VariableNode,
    is_reachable,
    reachable_from_start,
    validate_complete,
    validate_structural,
    would_create_cycle,
)


def var(graph: AxiomGraph, name: str) -> VariableNode:
    return graph.add_node(lambda nid: VariableNode(id=nid, name=name, concept=("o", "C")))


def op(graph: AxiomGraph, kind: str) -> OperatorNode:
    return graph.add_node(lambda nid: OperatorNode(id=nid, op=kind))


class TestStructure:
    def test_fresh_graph_is_valid_with_single_root(self):
        g = AxiomGraph()
        assert validate_structural(g) == []
        assert g.nodes[g.root_id].kind == "root"

    def test_duplicate_variable_names(self):
        g = AxiomGraph()
        var(g, "?x")
        var(g, "?x")
        rules = {v.rule for v in validate_structural(g)}
        assert "name-uniqueness" in rules

    def test_malformed_variable_name(self):
        g = AxiomGraph()
        var(g, "noQuestionMark")
        assert any(v.rule == "variable-name" for v in validate_structural(g))

    def test_dangling_target(self):
        g = AxiomGraph()
        g.add_connection(Port(PORT_ROOT, g.root_id), "n99")
        assert any(v.rule == "dangling-target" for v in validate_structural(g))

    def test_root_cannot_be_a_target(self):
        g = AxiomGraph()
        o = op(g, "AND")
        g.add_connection(Port(PORT_OPERATOR, o.id), g.root_id)
        assert any(v.rule == "root-incoming" for v in validate_structural(g))

    def test_not_out_degree_capped(self):
        g = AxiomGraph()
        o = op(g, "NOT")
        a, b = var(g, "?a"), var(g, "?b")
        g.add_connection(Port(PORT_OPERATOR, o.id), a.id)
        g.add_connection(Port(PORT_OPERATOR, o.id), b.id)
        assert any(v.rule == "not-arity" for v in validate_structural(g))

    def test_operator_single_incoming(self):
        g = AxiomGraph()
        o = op(g, "AND")
        p = op(g, "OR")
        q = op(g, "OR")
        g.add_connection(Port(PORT_OPERATOR, p.id), o.id)
        g.add_connection(Port(PORT_OPERATOR, q.id), o.id)
        assert any(v.rule == "operator-incoming" for v in validate_structural(g))

    def test_cycle_detected(self):
        g = AxiomGraph()
        a, b = op(g, "AND"), op(g, "AND")
        g.add_connection(Port(PORT_OPERATOR, a.id), b.id)
        g.add_connection(Port(PORT_OPERATOR, b.id), a.id)
        assert any(v.rule == "cycle" for v in validate_structural(g))


class TestReachability:
    def test_reachable_set(self):
        g = AxiomGraph()
        a, b = var(g, "?a"), var(g, "?b")
        g.add_connection(Port(PORT_ROOT, g.root_id), a.id)
        assert reachable_from_start(g) == {g.root_id, a.id}
        assert not is_reachable(g, a.id, b.id)

    def test_would_create_cycle(self):
        g = AxiomGraph()
        a, b = op(g, "AND"), op(g, "AND")
        g.add_connection(Port(PORT_OPERATOR, a.id), b.id)
        assert would_create_cycle(g, Port(PORT_OPERATOR, b.id), a.id)
        assert not would_create_cycle(g, Port(PORT_OPERATOR, a.id), b.id)


class TestCompleteness:
    def test_empty_axiom(self):
        g = AxiomGraph()
        assert any(v.rule == "empty-axiom" for v in validate_complete(g))

    def test_reachable_operator_arity_enforced(self):
        g = AxiomGraph()
        o = op(g, "OR")
        a = var(g, "?a")
        g.add_connection(Port(PORT_ROOT, g.root_id), o.id)
        g.add_connection(Port(PORT_OPERATOR, o.id), a.id)
        assert any(v.rule == "incomplete-operator" for v in validate_complete(g))

    def test_orphaned_incomplete_operator_does_not_block(self):
        g = AxiomGraph()
        a = var(g, "?a")
        g.add_connection(Port(PORT_ROOT, g.root_id), a.id)
        op(g, "OR")  # orphan with zero operands
        assert validate_complete(g) == []


class TestSnapshots:
    def test_restore_round_trips(self):
        g = AxiomGraph()
        a = var(g, "?a")
        g.add_connection(Port(PORT_ROOT, g.root_id), a.id)
        snap = g.clone()
        var(g, "?b")
        g.restore(snap)
        assert set(g.nodes) == {g.root_id, a.id}

    def test_clone_is_deep(self):
        g = AxiomGraph()
        a = var(g, "?a")
        snap = g.clone()
        a.name = "?changed"
        assert snap.nodes[a.id].name == "?a"
