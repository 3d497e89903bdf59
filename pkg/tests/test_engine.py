import pytest

from axiomforge.axiom import PORT_OPERATOR, PORT_PARAM, PORT_ROOT, PORT_SLOT, AxiomGraph, Port, validate_structural
from axiomforge.engine import Binding, Command, EditEngine, Rejection
from axiomforge.persist import graph_to_dict
from axiomforge.textgen import generate
from conftest import BIOLOGY, SOCIOLOGY

PERSON = (SOCIOLOGY, "Person")
COMPANY = (SOCIOLOGY, "Company")
STARTUP = (SOCIOLOGY, "Startup")
HUMAN = (BIOLOGY, "Human")
ORGANIZATION = (BIOLOGY, "Organization")
ACME = (SOCIOLOGY, "Acme")
WORKS_FOR = (SOCIOLOGY, "worksFor")


@pytest.fixture()
def graph() -> AxiomGraph:
    return AxiomGraph()


def person(engine, graph) -> str:
    return engine.create_variable(graph, PERSON)


class TestCreation:
    def test_first_variable_connects_to_start(self, engine, graph):
        vid = person(engine, graph)
        conns = graph.conns_from(Port(PORT_ROOT, graph.root_id))
        assert [c.target for c in conns] == [vid]

    def test_second_variable_stays_isolated(self, engine, graph):
        person(engine, graph)
        other = engine.create_variable(graph, COMPANY)
        assert graph.conns_to(other) == []

    def test_slots_snapshot_effective_attributes(self, engine, graph):
        vid = person(engine, graph)
        assert [s.name for s in graph.nodes[vid].slots] == ["hasEmployer", "hasName", "hasAge"]

    def test_auto_names_are_unique_lower_camel(self, engine, graph):
        a = person(engine, graph)
        b = person(engine, graph)
        assert graph.nodes[a].name == "?person"
        assert graph.nodes[b].name == "?person1"

    def test_unknown_concept_rejected(self, engine, graph):
        with pytest.raises(Rejection):
            engine.create_variable(graph, (SOCIOLOGY, "Ghost"))

    def test_relation_node_parameters_typed(self, engine, graph):
        rid = engine.create_relation_node(graph, WORKS_FOR)
        params = graph.nodes[rid].params
        assert [p.type.concept for p in params] == [PERSON, ORGANIZATION]

    def test_bad_literal_rejected(self, engine, graph):
        with pytest.raises(Rejection):
            engine.create_literal_node(graph, "_integer", "4.2")

    def test_referenced_ontologies_tracked(self, engine, graph):
        person(engine, graph)
        assert graph.referenced_ontologies == {SOCIOLOGY, BIOLOGY}


class TestRefinementRules:
    def test_rule_a_default_variable(self, engine, graph):
        vid = person(engine, graph)
        target = engine.refine_attribute(graph, vid, "hasEmployer", Binding(kind="default"))
        node = graph.nodes[target]
        assert node.concept == ORGANIZATION
        assert node.name == "?hasEmployer"  # named after the attribute at top level

    def test_rule_b_subconcept(self, engine, graph):
        vid = person(engine, graph)
        target = engine.refine_attribute(graph, vid, "hasEmployer", Binding(kind="sub", concept=STARTUP))
        assert graph.nodes[target].concept == STARTUP

    def test_rule_b_rejects_non_subconcept(self, engine, graph):
        vid = person(engine, graph)
        with pytest.raises(Rejection) as exc:
            engine.refine_attribute(graph, vid, "hasEmployer", Binding(kind="sub", concept=HUMAN))
        assert exc.value.rule == "subsumption"

    def test_rule_c_instance(self, engine, graph):
        vid = person(engine, graph)
        target = engine.refine_attribute(graph, vid, "hasEmployer", Binding(kind="inst", instance=ACME))
        assert graph.nodes[vid].slots[0].binding is not None
        assert graph.nodes[target].instance == ACME

    def test_rule_c_rejects_incompatible_instance(self, engine, graph):
        vid = engine.create_variable(graph, COMPANY)
        # Company has only hasLocation (_string); Acme cannot bind a string slot
        with pytest.raises(Rejection):
            engine.refine_attribute(graph, vid, "hasLocation", Binding(kind="inst", instance=ACME))

    def test_literal_binding(self, engine, graph):
        vid = person(engine, graph)
        engine.refine_attribute(graph, vid, "hasAge", Binding(kind="lit", builtin="_integer", value="33"))
        assert "33" in generate(graph).text

    def test_literal_type_must_match_slot(self, engine, graph):
        vid = person(engine, graph)
        with pytest.raises(Rejection):
            engine.refine_attribute(graph, vid, "hasAge", Binding(kind="lit", builtin="_string", value="33"))

    def test_rule_d_relation_marks_parameter(self, engine, graph):
        vid = person(engine, graph)
        rel_id = engine.refine_attribute(graph, vid, "hasEmployer", Binding(kind="rel", relation=WORKS_FOR, param=1))
        rel = graph.nodes[rel_id]
        conn_id = graph.nodes[vid].slots[0].binding
        assert rel.params[1].binding == conn_id  # occupied by the incoming value
        assert rel.params[0].binding is None

    def test_rule_d_rejects_incompatible_parameter(self, engine, graph):
        vid = person(engine, graph)
        # param 0 requires Person; hasEmployer's Organization does not fit
        with pytest.raises(Rejection):
            engine.refine_attribute(graph, vid, "hasEmployer", Binding(kind="rel", relation=WORKS_FOR, param=0))

    def test_rule_e_existing_variable(self, engine, graph):
        vid = person(engine, graph)
        other = engine.create_variable(graph, COMPANY)
        engine.refine_attribute(graph, vid, "hasEmployer", Binding(kind="use", node=other))
        assert graph.connections[graph.nodes[vid].slots[0].binding].target == other

    def test_rule_e_rejects_cycle(self, engine, graph):
        vid = person(engine, graph)
        other = engine.create_variable(graph, COMPANY)
        engine.refine_attribute(graph, vid, "hasEmployer", Binding(kind="use", node=other))
        # other -> vid would close a cycle through the slot binding
        with pytest.raises(Rejection) as exc:
            engine.refine_attribute(graph, other, "hasLocation", Binding(kind="use", node=vid))
        assert exc.value.rule in ("cycle", "subsumption")

    def test_rule_f_shared_flag(self, engine, graph):
        vid = person(engine, graph)
        other = engine.create_variable(graph, COMPANY)
        engine.refine_attribute(graph, vid, "hasEmployer", Binding(kind="shared", node=other))
        assert graph.nodes[other].shared is True

    def test_rule_g_operator_composition(self, engine, graph):
        vid = person(engine, graph)
        binding = Binding(
            kind="op",
            op="OR",
            operands=(Binding(kind="inst", instance=ACME), Binding(kind="default")),
        )
        op_id = engine.refine_attribute(graph, vid, "hasEmployer", binding)
        assert graph.nodes[op_id].op == "OR"
        assert len(graph.conns_from(Port(PORT_OPERATOR, op_id))) == 2

    def test_rule_g_rejects_bad_operand(self, engine, graph):
        vid = person(engine, graph)
        binding = Binding(kind="op", op="OR", operands=(Binding(kind="inst", instance=ACME), Binding(kind="sub", concept=HUMAN)))
        with pytest.raises(Rejection):
            engine.refine_attribute(graph, vid, "hasEmployer", binding)

    def test_rule_g_not_arity(self, engine, graph):
        vid = person(engine, graph)
        binding = Binding(kind="op", op="NOT", operands=(Binding(kind="default"), Binding(kind="default")))
        with pytest.raises(Rejection) as exc:
            engine.refine_attribute(graph, vid, "hasEmployer", binding)
        assert exc.value.rule == "arity"

    def test_occupied_slot_rejected(self, engine, graph):
        vid = person(engine, graph)
        engine.refine_attribute(graph, vid, "hasEmployer", Binding(kind="default"))
        with pytest.raises(Rejection) as exc:
            engine.refine_attribute(graph, vid, "hasEmployer", Binding(kind="default"))
        assert exc.value.rule == "occupied"

    def test_refine_parameter(self, engine, graph):
        rid = engine.create_relation_node(graph, WORKS_FOR)
        target = engine.refine_relation_parameter(graph, rid, 0, Binding(kind="default"))
        assert graph.nodes[target].concept == PERSON
        assert graph.nodes[rid].params[0].binding is not None

    def test_involve_variable(self, engine, graph):
        vid = person(engine, graph)
        rid = engine.create_relation_node(graph, WORKS_FOR)
        engine.involve_variable_in_relation(graph, vid, rid, 0)
        conn = graph.connections[graph.nodes[rid].params[0].binding]
        assert conn.source == Port(PORT_PARAM, rid, 0)
        assert conn.target == vid

    def test_involve_rejects_incompatible(self, engine, graph):
        vid = engine.create_variable(graph, COMPANY)
        rid = engine.create_relation_node(graph, WORKS_FOR)
        with pytest.raises(Rejection):
            engine.involve_variable_in_relation(graph, vid, rid, 0)


class TestTransactionality:
    def test_rejection_leaves_graph_byte_identical(self, engine, graph):
        vid = person(engine, graph)
        engine.refine_attribute(graph, vid, "hasEmployer", Binding(kind="default"))
        before = graph_to_dict(graph)
        attempts = [
            lambda: engine.refine_attribute(graph, vid, "hasEmployer", Binding(kind="default")),
            lambda: engine.refine_attribute(graph, vid, "hasAge", Binding(kind="lit", builtin="_string", value="x")),
            lambda: engine.rename_variable(graph, vid, "not a name"),
            lambda: engine.create_variable(graph, (SOCIOLOGY, "Ghost")),
            lambda: engine.delete_element(graph, graph.root_id),
        ]
        for attempt in attempts:
            with pytest.raises(Rejection):
                attempt()
            assert graph_to_dict(graph) == before

    def test_every_commit_is_structurally_valid(self, engine, graph):
        vid = person(engine, graph)
        engine.refine_attribute(graph, vid, "hasEmployer", Binding(kind="rel", relation=WORKS_FOR, param=1))
        engine.refine_attribute(graph, vid, "hasAge", Binding(kind="lit", builtin="_integer", value="30"))
        assert validate_structural(graph) == []


class TestOtherOperations:
    def test_rename(self, engine, graph):
        vid = person(engine, graph)
        engine.rename_variable(graph, vid, "?employee")
        assert graph.nodes[vid].name == "?employee"

    def test_rename_collision_rejected(self, engine, graph):
        vid = person(engine, graph)
        other = engine.create_variable(graph, COMPANY)
        with pytest.raises(Rejection):
            engine.rename_variable(graph, other, "?person")
        engine.rename_variable(graph, vid, "?person")  # renaming to itself is a no-op

    def test_delete_frees_the_slot(self, engine, graph):
        vid = person(engine, graph)
        target = engine.refine_attribute(graph, vid, "hasEmployer", Binding(kind="default"))
        engine.delete_element(graph, target)
        assert graph.nodes[vid].slots[0].binding is None
        assert validate_structural(graph) == []

    def test_delete_relation_frees_marked_param_connection(self, engine, graph):
        vid = person(engine, graph)
        rel_id = engine.refine_attribute(graph, vid, "hasEmployer", Binding(kind="rel", relation=WORKS_FOR, param=1))
        engine.delete_element(graph, rel_id)
        assert graph.nodes[vid].slots[0].binding is None

    def test_setop_respects_not_arity(self, engine, graph):
        op_id = engine.create_operator(graph, "AND")
        a = person(engine, graph)
        b = engine.create_variable(graph, COMPANY)
        engine.add_operand(graph, op_id, a)
        engine.add_operand(graph, op_id, b)
        with pytest.raises(Rejection):
            engine.change_operator_type(graph, op_id, "NOT")
        engine.change_operator_type(graph, op_id, "OR")
        assert graph.nodes[op_id].op == "OR"

    def test_add_operand_duplicate_rejected(self, engine, graph):
        op_id = engine.create_operator(graph, "AND")
        a = person(engine, graph)
        engine.add_operand(graph, op_id, a)
        with pytest.raises(Rejection) as exc:
            engine.add_operand(graph, op_id, a)
        assert exc.value.rule == "duplicate-connection"

    def test_setval_only_for_literals(self, engine, graph):
        lit = engine.create_literal_node(graph, "_integer", "1")
        engine.edit_instance_value(graph, lit, "2")
        assert graph.nodes[lit].value == "2"
        inst = engine.create_instance_node(graph, ACME)
        with pytest.raises(Rejection) as exc:
            engine.edit_instance_value(graph, inst, "x")
        assert exc.value.rule == "immutable"

    def test_connect_occupies_slot(self, engine, graph):
        vid = person(engine, graph)
        other = engine.create_variable(graph, COMPANY)
        engine.create_connection(graph, Port(PORT_SLOT, vid, 0), other)
        assert graph.nodes[vid].slots[0].binding is not None

    def test_root_rejects_bare_instance(self, engine, graph):
        inst = engine.create_instance_node(graph, ACME)
        with pytest.raises(Rejection) as exc:
            engine.create_connection(graph, Port(PORT_ROOT, graph.root_id), inst)
        assert exc.value.rule == "root-rule"

    def test_relation_is_a_legal_root_conjunct(self, engine, graph):
        person(engine, graph)
        rid = engine.create_relation_node(graph, WORKS_FOR)
        engine.create_connection(graph, Port(PORT_ROOT, graph.root_id), rid)
        assert any(c.target == rid for c in graph.conns_from(Port(PORT_ROOT, graph.root_id)))

    def test_relation_rejected_as_attribute_value(self, engine, graph):
        vid = person(engine, graph)
        rid = engine.create_relation_node(graph, WORKS_FOR)
        with pytest.raises(Rejection):
            engine.create_connection(graph, Port(PORT_SLOT, vid, 0), rid)


class TestInsertOperator:
    def build_refined(self, engine, graph):
        vid = person(engine, graph)
        engine.refine_attribute(graph, vid, "hasEmployer", Binding(kind="inst", instance=ACME))
        conn_id = graph.nodes[vid].slots[0].binding
        return vid, conn_id

    def test_insert_or_with_second_binding(self, engine, graph):
        vid, conn_id = self.build_refined(engine, graph)
        op_id = engine.insert_operator_into_connection(graph, conn_id, "OR", Binding(kind="default"))
        assert graph.connections[conn_id].target == op_id
        assert len(graph.conns_from(Port(PORT_OPERATOR, op_id))) == 2

    def test_insert_not_takes_no_second(self, engine, graph):
        _, conn_id = self.build_refined(engine, graph)
        engine.insert_operator_into_connection(graph, conn_id, "NOT")
        with pytest.raises(Rejection):
            engine.insert_operator_into_connection(graph, conn_id, "NOT", Binding(kind="default"))

    def test_insert_not_rejected_on_root_connection(self, engine, graph):
        person(engine, graph)
        root_conn = graph.conns_from(Port(PORT_ROOT, graph.root_id))[0]
        with pytest.raises(Rejection) as exc:
            engine.insert_operator_into_connection(graph, root_conn.id, "NOT")
        assert exc.value.rule == "root-rule"

    def test_insert_and_requires_second(self, engine, graph):
        _, conn_id = self.build_refined(engine, graph)
        with pytest.raises(Rejection):
            engine.insert_operator_into_connection(graph, conn_id, "AND")

    def test_insert_checks_second_against_slot_type(self, engine, graph):
        _, conn_id = self.build_refined(engine, graph)
        with pytest.raises(Rejection):
            engine.insert_operator_into_connection(graph, conn_id, "OR", Binding(kind="sub", concept=HUMAN))

    def test_insert_moves_param_marking(self, engine, graph):
        vid = person(engine, graph)
        rel_id = engine.refine_attribute(graph, vid, "hasEmployer", Binding(kind="rel", relation=WORKS_FOR, param=1))
        conn_id = graph.nodes[vid].slots[0].binding
        engine.insert_operator_into_connection(graph, conn_id, "OR", Binding(kind="default"))
        rel = graph.nodes[rel_id]
        moved = graph.connections[rel.params[1].binding]
        assert moved.target == rel_id  # still an incoming marking, now from the operator
        assert validate_structural(graph) == []


class TestReconnect:
    def test_retarget(self, engine, graph):
        vid = person(engine, graph)
        engine.refine_attribute(graph, vid, "hasEmployer", Binding(kind="sub", concept=COMPANY))
        conn_id = graph.nodes[vid].slots[0].binding
        startup = engine.create_variable(graph, STARTUP)
        engine.reconnect(graph, conn_id, "target", new_target=startup)
        assert graph.connections[conn_id].target == startup
        assert validate_structural(graph) == []

    def test_retarget_type_checked(self, engine, graph):
        vid = person(engine, graph)
        engine.refine_attribute(graph, vid, "hasEmployer", Binding(kind="sub", concept=COMPANY))
        conn_id = graph.nodes[vid].slots[0].binding
        human = engine.create_variable(graph, HUMAN)
        with pytest.raises(Rejection):
            engine.reconnect(graph, conn_id, "target", new_target=human)

    def test_move_source_updates_bindings(self, engine, graph):
        vid = person(engine, graph)
        org = engine.refine_attribute(graph, vid, "hasEmployer", Binding(kind="default"))
        conn_id = graph.nodes[vid].slots[0].binding
        rid = engine.create_relation_node(graph, WORKS_FOR)
        engine.reconnect(graph, conn_id, "source", new_source=Port(PORT_PARAM, rid, 1))
        assert graph.nodes[vid].slots[0].binding is None
        assert graph.nodes[rid].params[1].binding == conn_id
        assert graph.connections[conn_id].target == org
        assert validate_structural(graph) == []

    def test_move_source_to_occupied_port_rejected(self, engine, graph):
        vid = person(engine, graph)
        engine.refine_attribute(graph, vid, "hasEmployer", Binding(kind="default"))
        engine.refine_attribute(graph, vid, "hasAge", Binding(kind="lit", builtin="_integer", value="9"))
        conn_age = graph.nodes[vid].slots[2].binding
        with pytest.raises(Rejection) as exc:
            engine.reconnect(graph, conn_age, "source", new_source=Port(PORT_SLOT, vid, 0))
        assert exc.value.rule == "occupied"


class TestMenus:
    def test_free_slot_offers_all_rule_kinds(self, engine, graph):
        vid = person(engine, graph)
        engine.create_variable(graph, COMPANY)  # a reusable compatible variable
        cmds = engine.list_allowed_operations(graph, ("slot", vid, 0))
        kinds = {c.binding.kind for c in cmds if c.binding is not None}
        assert {"default", "sub", "inst", "rel", "use", "shared"} <= kinds

    def test_occupied_slot_offers_nothing(self, engine, graph):
        vid = person(engine, graph)
        engine.refine_attribute(graph, vid, "hasEmployer", Binding(kind="default"))
        assert engine.list_allowed_operations(graph, ("slot", vid, 0)) == []

    def test_builtin_slot_offers_canonical_literal(self, engine, graph):
        vid = person(engine, graph)
        cmds = engine.list_allowed_operations(graph, ("slot", vid, 2))
        bindings = [c.binding for c in cmds if c.binding is not None]
        assert all(b.kind == "lit" and b.builtin == "_integer" for b in bindings)

    def test_standard_mode_hides_advanced_verbs(self, engine, graph):
        vid = person(engine, graph)
        engine.create_variable(graph, COMPANY)
        advanced = engine.list_allowed_operations(graph, ("slot", vid, 0), mode="advanced")
        standard = engine.list_allowed_operations(graph, ("slot", vid, 0), mode="standard")
        assert any(c.verb == "connect" for c in advanced)
        assert all(c.verb != "connect" for c in standard)

    def test_every_offered_slot_command_commits(self, engine, graph):
        vid = person(engine, graph)
        engine.create_variable(graph, COMPANY)
        for cmd in engine.list_allowed_operations(graph, ("slot", vid, 0)):
            scratch = graph.clone()
            engine.apply(scratch, cmd)  # must not raise

    def test_command_lines_round_trip_through_parser(self, engine, graph, store):
        from axiomforge.script import ScriptRunner

        vid = person(engine, graph)
        runner = ScriptRunner(store)
        runner.graph = graph.clone()
        for cmd in engine.list_allowed_operations(graph, ("slot", vid, 0)):
            parsed = runner.parse_line(cmd.to_line(), 1)
            assert parsed.command == cmd
