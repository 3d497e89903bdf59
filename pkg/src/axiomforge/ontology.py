"""Data model for parsed WSML ontologies.

These are plain immutable-ish dataclasses produced by the parser and consumed
by the ontology store. Cross-ontology references (e.g. a super-concept living
in an imported ontology) are kept as unresolved names until the store can
match them against loaded ontologies.
"""

from __future__ import annotations

from dataclasses import dataclass, field

BUILTIN_TYPES = ("_string", "_integer", "_decimal", "_boolean", "_date")


@dataclass(frozen=True)
class ConceptRef:
    """Reference to a concept by local id, optionally pinned to an ontology IRI."""

    id: str
    ontology: str | None = None


@dataclass(frozen=True)
class TypeRef:
    """Either a built-in datatype or a concept reference, never both."""

    kind: str  # "builtin" | "concept"
    builtin: str | None = None
    concept: ConceptRef | None = None

    def __post_init__(self):
        if self.kind == "builtin":
            if self.builtin not in BUILTIN_TYPES or self.concept is not None:
                raise ValueError(f"malformed builtin TypeRef: {self}")
        elif self.kind == "concept":
            if self.concept is None or self.builtin is not None:
                raise ValueError(f"malformed concept TypeRef: {self}")
        else:
            raise ValueError(f"unknown TypeRef kind {self.kind!r}")

    @staticmethod
    def of_builtin(name: str) -> "TypeRef":
        return TypeRef(kind="builtin", builtin=name)

    @staticmethod
    def of_concept(id: str, ontology: str | None = None) -> "TypeRef":
        return TypeRef(kind="concept", concept=ConceptRef(id=id, ontology=ontology))


@dataclass
class AttributeDef:
    name: str
    constraint: str  # "ofType" | "impliesType"
    range: TypeRef
    cardinality: tuple[int, int] | None = None
    origin: ConceptRef | None = None  # declaring concept, filled by the parser


@dataclass
class Concept:
    id: str
    super_concepts: list[ConceptRef] = field(default_factory=list)
    attributes: list[AttributeDef] = field(default_factory=list)
    nfp: list[tuple[str, str]] = field(default_factory=list)


@dataclass
class RelationDef:
    id: str
    parameters: list[TypeRef] = field(default_factory=list)


@dataclass
class InstanceDef:
    id: str
    member_of: ConceptRef = None  # type: ignore[assignment]
    values: list[tuple[str, str]] = field(default_factory=list)
    nfp: list[tuple[str, str]] = field(default_factory=list)


@dataclass
class RelationInstance:
    relation: str
    args: list[str] = field(default_factory=list)


@dataclass
class Ontology:
    iri: str
    variant: str | None = None
    namespaces: list[tuple[str, str]] = field(default_factory=list)  # prefix ("_" = default) -> IRI
    imports: list[str] = field(default_factory=list)
    concepts: list[Concept] = field(default_factory=list)
    relations: list[RelationDef] = field(default_factory=list)
    instances: list[InstanceDef] = field(default_factory=list)
    relation_instances: list[RelationInstance] = field(default_factory=list)
    nfp: list[tuple[str, str]] = field(default_factory=list)

    def concept(self, id: str) -> Concept | None:
        for c in self.concepts:
            if c.id == id:
                return c
        return None

    def relation(self, id: str) -> RelationDef | None:
        for r in self.relations:
            if r.id == id:
                return r
        return None

    def instance(self, id: str) -> InstanceDef | None:
        for i in self.instances:
            if i.id == id:
                return i
        return None
