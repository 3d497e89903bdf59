import random

from axiomforge.lexer import KIND_IRI, KIND_KEYWORD, KIND_VARIABLE, tokenize
from axiomforge.parser import parse_ontology, validate_expression_text, write_ontology
from conftest import FIXTURE_DIR, make_random_ontology

SOCIOLOGY_SRC = (FIXTURE_DIR / "sociology.wsml").read_text(encoding="utf-8")


class TestTokenize:
    def test_iri_variable_and_keyword_kinds(self):
        result = tokenize('ontology _"http://x.org/a"\nconcept A\n// note\n?who')
        assert result.ok
        kinds = [t.kind for t in result.tokens]
        assert kinds == [KIND_KEYWORD, KIND_IRI, KIND_KEYWORD, "identifier", KIND_VARIABLE]

    def test_positions_are_one_based(self):
        result = tokenize("concept A")
        assert (result.tokens[0].line, result.tokens[0].column) == (1, 1)
        assert (result.tokens[1].line, result.tokens[1].column) == (1, 9)

    def test_unterminated_string_is_an_error(self):
        result = tokenize('instance X memberOf Y\n  a hasValue "oops')
        assert not result.ok
        assert any("string" in d.message for d in result.diagnostics)

    def test_illegal_character_reported_with_position(self):
        result = tokenize("concept A\n  §")
        assert not result.ok
        assert result.diagnostics[0].line == 2

    def test_builtin_type_names_lex_as_identifiers(self):
        result = tokenize("_string _integer")
        assert [t.kind for t in result.tokens] == ["identifier", "identifier"]


class TestParseOntology:
    def test_fixture_counts(self):
        # 3 concepts, 1 relation, 1 instance, 1 import
        result = parse_ontology(SOCIOLOGY_SRC)
        assert result.ok
        ont = result.ontology
        assert ont.iri == "http://example.org/sociology"
        assert len(ont.concepts) == 3
        assert len(ont.relations) == 1
        assert len(ont.instances) == 1
        assert ont.imports == ["http://example.org/biology"]

    def test_each_id_recorded_once(self):
        ont = parse_ontology(SOCIOLOGY_SRC).ontology
        ids = [c.id for c in ont.concepts] + [r.id for r in ont.relations] + [i.id for i in ont.instances]
        assert len(ids) == len(set(ids))

    def test_attribute_constraints_and_ranges(self):
        ont = parse_ontology(SOCIOLOGY_SRC).ontology
        person = ont.concept("Person")
        assert [a.name for a in person.attributes] == ["hasEmployer"]
        attr = person.attributes[0]
        assert attr.constraint == "ofType"
        assert attr.range.concept.id == "Organization"

    def test_duplicate_concept_is_an_error(self):
        src = 'ontology _"http://x.org/a"\nconcept A\nconcept A\n'
        result = parse_ontology(src)
        assert not result.ok
        assert any("duplicate" in d.message.lower() for d in result.diagnostics)

    def test_recovery_continues_after_bad_construct(self):
        src = 'ontology _"http://x.org/a"\nconcept A subConceptOf )\nconcept B\n'
        result = parse_ontology(src)
        assert not result.ok
        assert result.ontology is None
        # diagnostics mention the offending position, and B was still seen
        assert result.diagnostics[0].line == 2

    def test_relation_parameters(self):
        ont = parse_ontology(SOCIOLOGY_SRC).ontology
        rel = ont.relation("worksFor")
        assert len(rel.parameters) == 2
        assert rel.parameters[0].concept.id == "Person"
        assert rel.parameters[1].concept.id == "Organization"

    def test_instance_values(self):
        ont = parse_ontology(SOCIOLOGY_SRC).ontology
        acme = ont.instance("Acme")
        assert acme.member_of.id == "Company"
        # values keep their source lexeme (quoted form for strings)
        assert ("hasLocation", '"Sofia"') in acme.values

    def test_cardinality_block(self):
        src = 'ontology _"http://x.org/a"\nconcept A\n  p ofType (1 3) _string\n'
        result = parse_ontology(src)
        assert result.ok
        assert result.ontology.concept("A").attributes[0].cardinality == (1, 3)


class TestWriteRoundTrip:
    def test_fixture_round_trip(self):
        ont = parse_ontology(SOCIOLOGY_SRC).ontology
        again = parse_ontology(write_ontology(ont))
        assert again.ok
        assert again.ontology == ont

    def test_random_ontologies_round_trip(self):
        rng = random.Random(7)
        for _ in range(25):
            ont = make_random_ontology(rng, max_concepts=12)
            result = parse_ontology(write_ontology(ont))
            assert result.ok, result.diagnostics
            assert result.ontology == ont

    def test_canonical_printer_is_stable(self):
        ont = parse_ontology(SOCIOLOGY_SRC).ontology
        text = write_ontology(ont)
        assert write_ontology(parse_ontology(text).ontology) == text


class TestExpressionGrammar:
    def test_accepts_molecules_and_operators(self):
        good = [
            "definedBy ?p memberOf Person",
            "definedBy ?p memberOf Person and ?p[hasEmployer hasValue Acme]",
            'definedBy ?p[hasName hasValue "Ann"] or neg ?p memberOf Person',
            "definedBy (?a memberOf A or ?b memberOf B) and worksFor(?a, ?b)",
            "definedBy neg (?a memberOf A and ?b memberOf B)",
            "definedBy ?p[hasAge hasValue 42] and ?p[hasRate hasValue 3.14]",
        ]
        for text in good:
            assert validate_expression_text(text) == [], text

    def test_rejects_malformed_expressions(self):
        bad = [
            "",
            "?p memberOf Person",  # missing definedBy
            "definedBy",
            "definedBy ?p memberOf",
            "definedBy ?p memberOf Person and",
            "definedBy (?p memberOf Person",
            "definedBy ?p[hasValue Acme]",
            "definedBy worksFor(?a,)",
        ]
        for text in bad:
            assert validate_expression_text(text) != [], text
