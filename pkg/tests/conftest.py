import random
from pathlib import Path

import pytest

from axiomforge.axiom import AxiomGraph
from axiomforge.engine import CANONICAL_LITERALS, Binding, Command, EditEngine, Rejection
from axiomforge.ontology import AttributeDef, Concept, ConceptRef, Ontology, TypeRef
from axiomforge.store import OntologyStore

SOCIOLOGY = "http://example.org/sociology"
BIOLOGY = "http://example.org/biology"

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "ontologies"


@pytest.fixture()
def store() -> OntologyStore:
    s = OntologyStore(file_store_dir=FIXTURE_DIR)
    s.load_imported_ontology(SOCIOLOGY)
    s.load_imported_ontology(BIOLOGY)
    return s


@pytest.fixture()
def soc_store() -> OntologyStore:
    s = OntologyStore(file_store_dir=FIXTURE_DIR)
    s.load_imported_ontology(SOCIOLOGY)
    return s


@pytest.fixture()
def engine(store) -> EditEngine:
    return EditEngine(store)


# ---------------------------------------------------------------------------
# random ontology hierarchies (shared by the oracle tests)
# ---------------------------------------------------------------------------


def make_random_ontology(rng: random.Random, iri: str = "http://example.org/random", max_concepts: int = 30) -> Ontology:
    """A random super-concept DAG: each concept picks up to 3 parents among
    earlier concepts, and declares attributes with globally unique names."""
    n = rng.randint(1, max_concepts)
    concepts = []
    for i in range(n):
        parents = []
        if i > 0:
            k = rng.randint(0, min(3, i))
            parents = rng.sample(range(i), k)
        attrs = [
            AttributeDef(
                name=f"attr_{i}_{j}",
                constraint=rng.choice(("ofType", "impliesType")),
                range=TypeRef.of_builtin(rng.choice(("_string", "_integer"))),
                origin=ConceptRef(id=f"C{i}", ontology=iri),
            )
            for j in range(rng.randint(0, 2))
        ]
        concepts.append(
            Concept(
                id=f"C{i}",
                super_concepts=[TypeRef.of_concept(f"C{p}").concept for p in parents],
                attributes=attrs,
            )
        )
    return Ontology(iri=iri, concepts=concepts)


# ---------------------------------------------------------------------------
# graph fuzzing over the fixture store
# ---------------------------------------------------------------------------

CONCEPT_KEYS = [
    (SOCIOLOGY, "Person"),
    (SOCIOLOGY, "Company"),
    (SOCIOLOGY, "Startup"),
    (BIOLOGY, "Human"),
    (BIOLOGY, "Organization"),
]
INSTANCE_KEY = (SOCIOLOGY, "Acme")
RELATION_KEY = (SOCIOLOGY, "worksFor")


class GraphFuzzer:
    """Drives random menu-offered edits plus creations, recording the command
    lines that committed so a run can be replayed as a script."""

    def __init__(self, store: OntologyStore, rng: random.Random):
        self.engine = EditEngine(store)
        self.graph = AxiomGraph()
        self.rng = rng
        self.recorded: list[str] = []

    def selections(self) -> list[tuple]:
        out: list[tuple] = [("root",)]
        for node in self.graph.nodes.values():
            if node.kind == "root":
                continue
            out.append(("node", node.id))
            if node.kind == "variable":
                out.extend(("slot", node.id, i) for i in range(len(node.slots)))
            elif node.kind == "relation":
                out.extend(("param", node.id, i) for i in range(len(node.params)))
        out.extend(("conn", cid) for cid in self.graph.connections)
        return out

    def random_creation(self) -> Command:
        rng = self.rng
        choice = rng.randrange(5)
        if choice == 0:
            return Command(verb="var", element=rng.choice(CONCEPT_KEYS))
        if choice == 1:
            return Command(verb="op", kind=rng.choice(("AND", "OR", "NOT")))
        if choice == 2:
            return Command(verb="inst", element=INSTANCE_KEY)
        if choice == 3:
            builtin = rng.choice(list(CANONICAL_LITERALS))
            return Command(verb="lit", builtin=builtin, value=CANONICAL_LITERALS[builtin])
        return Command(verb="rel", element=RELATION_KEY)

    def step(self) -> tuple[Command, bool]:
        """One random edit; returns (command, committed)."""
        rng = self.rng
        if len(self.graph.nodes) > 14 and rng.random() < 0.6:
            victim = rng.choice([n for n in self.graph.nodes if n != self.graph.root_id])
            cmd = Command(verb="delete", node=victim)
        elif rng.random() < 0.3:
            cmd = self.random_creation()
        else:
            sel = rng.choice(self.selections())
            offered = self.engine.list_allowed_operations(self.graph, sel, mode="advanced")
            offered = [c for c in offered if not c.template]
            if not offered:
                cmd = self.random_creation()
            else:
                cmd = rng.choice(offered)
        return cmd, self.apply(cmd)

    def apply(self, cmd: Command) -> bool:
        try:
            result = self.engine.apply(self.graph, cmd)
        except Rejection:
            return False
        if cmd.verb in ("var", "op", "inst", "lit", "rel"):
            cmd = Command(
                verb=cmd.verb, node=result, kind=cmd.kind, builtin=cmd.builtin,
                value=cmd.value, element=cmd.element, at=cmd.at,
            )
        self.recorded.append(cmd.to_line())
        return True


def random_bindings(store: OntologyStore, graph: AxiomGraph) -> list[Binding]:
    """Every atomic binding expressible over the fixture vocabulary,
    independent of the engine's own candidate enumeration."""
    out: list[Binding] = [Binding(kind="default")]
    for iri in sorted(store.ontologies):
        ont = store.ontologies[iri]
        for c in ont.concepts:
            out.append(Binding(kind="sub", concept=(iri, c.id)))
        for inst in ont.instances:
            out.append(Binding(kind="inst", instance=(iri, inst.id)))
        for rel in ont.relations:
            for k in range(len(rel.parameters)):
                out.append(Binding(kind="rel", relation=(iri, rel.id), param=k))
    for builtin, value in CANONICAL_LITERALS.items():
        out.append(Binding(kind="lit", builtin=builtin, value=value))
    for node in graph.nodes.values():
        if node.kind == "variable":
            out.append(Binding(kind="use", node=node.id))
            out.append(Binding(kind="shared", node=node.id))
    return out
