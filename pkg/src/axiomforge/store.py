"""In-memory ontology store shared by all open axioms.

Answers the semantic queries everything else is built on: subsumption,
attribute inheritance, instance assignability and relation-parameter
compatibility. Imported ontologies are resolved on demand from the ontology
file store, a directory of *.wsml files indexed by the IRI declared inside
each file (never by filename).
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass, field
from pathlib import Path

from .lexer import ParseDiagnostic
from .ontology import (
    AttributeDef,
    Concept,
    ConceptRef,
    InstanceDef,
    Ontology,
    RelationDef,
    TypeRef,
)
from .parser import parse_ontology

ConceptKey = tuple[str, str]  # (ontology IRI, concept id)


class StoreError(Exception):
    pass


class DuplicateOntologyError(StoreError):
    def __init__(self, iri: str):
        super().__init__(f"an ontology with IRI {iri!r} and different content is already registered")
        self.iri = iri


class HierarchyCycleError(StoreError):
    def __init__(self, key: ConceptKey):
        super().__init__(f"super-concept cycle through {key[1]!r} in {key[0]!r}")
        self.key = key


class OntologyNotFoundError(StoreError):
    def __init__(self, iri: str):
        super().__init__(f"no file in the ontology store declares IRI {iri!r}")
        self.iri = iri


class OntologyParseError(StoreError):
    def __init__(self, path: str, diagnostics: list[ParseDiagnostic]):
        first = diagnostics[0] if diagnostics else None
        super().__init__(f"failed to parse {path}: {first}")
        self.path = path
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class ResolvedType:
    """A TypeRef with its concept reference pinned to a loaded ontology.

    An unresolvable concept range keeps its name but has concept=None; such a
    type never satisfies a compatibility check.
    """

    kind: str  # "builtin" | "concept"
    builtin: str | None = None
    concept: ConceptKey | None = None
    concept_name: str | None = None

    def display(self) -> str:
        if self.kind == "builtin":
            return self.builtin
        return self.concept[1] if self.concept else (self.concept_name or "?")


@dataclass(frozen=True)
class ResolvedAttribute:
    name: str
    constraint: str
    range: ResolvedType
    cardinality: tuple[int, int] | None
    origin: ConceptKey


@dataclass
class TreeNode:
    label: str
    kind: str
    children: list["TreeNode"] = field(default_factory=list)

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()


_DATE_RE = re.compile(r"^\d{4}-\d{2}-\d{2}$")
_INT_RE = re.compile(r"^[+-]?\d+$")
_DEC_RE = re.compile(r"^[+-]?\d+\.\d+$")


def literal_conforms(value: str, builtin: str) -> bool:
    """Lexical conformance of a literal to a built-in datatype."""
    if builtin == "_string":
        return True
    if builtin == "_integer":
        return bool(_INT_RE.match(value))
    if builtin == "_decimal":
        return bool(_DEC_RE.match(value))
    if builtin == "_boolean":
        return value in ("true", "false")
    if builtin == "_date":
        if not _DATE_RE.match(value):
            return False
        month = int(value[5:7])
        day = int(value[8:10])
        return 1 <= month <= 12 and 1 <= day <= 31
    return False


class OntologyStore:
    """Set of loaded ontologies plus the semantic query surface."""

    def __init__(self, file_store_dir: str | Path | None = None):
        self.ontologies: dict[str, Ontology] = {}
        self.file_store_dir = Path(file_store_dir) if file_store_dir else None
        self._lock = threading.RLock()
        self._ancestor_cache: dict[ConceptKey, frozenset[ConceptKey]] = {}

    # -- registration -------------------------------------------------------

    def register_ontology(self, ontology: Ontology) -> None:
        with self._lock:
            existing = self.ontologies.get(ontology.iri)
            if existing is not None:
                if existing == ontology:
                    return  # idempotent
                raise DuplicateOntologyError(ontology.iri)
            self.ontologies[ontology.iri] = ontology
            self._ancestor_cache.clear()
            cycle = self._find_hierarchy_cycle()
            if cycle is not None:
                del self.ontologies[ontology.iri]
                self._ancestor_cache.clear()
                raise HierarchyCycleError(cycle)

    def load_imported_ontology(self, iri: str) -> str:
        """Load the file-store ontology declaring `iri`.

        Returns "loaded" or "already"; raises OntologyNotFoundError when no
        file declares the IRI and OntologyParseError when the matching file
        does not parse (the store is left unchanged in both cases).
        """
        with self._lock:
            if iri in self.ontologies:
                return "already"
            if self.file_store_dir is None or not self.file_store_dir.is_dir():
                raise OntologyNotFoundError(iri)
            for path in sorted(self.file_store_dir.glob("*.wsml")):
                source = path.read_text(encoding="utf-8")
                result = parse_ontology(source)
                if result.ok:
                    if result.ontology.iri == iri:
                        self.register_ontology(result.ontology)
                        return "loaded"
                elif self._declares_iri(source, iri):
                    raise OntologyParseError(str(path), result.diagnostics)
            raise OntologyNotFoundError(iri)

    @staticmethod
    def _declares_iri(source: str, iri: str) -> bool:
        m = re.search(r'ontology\s+_"([^"]*)"', source)
        return bool(m and m.group(1) == iri)

    # -- reference resolution ----------------------------------------------

    def resolve_concept(self, ref: ConceptRef | ConceptKey, scope: str | None = None) -> ConceptKey | None:
        """Resolve a concept reference to (ontology IRI, id) among loaded ontologies.

        Lookup order for unpinned references: the scope ontology itself, its
        transitive imports, then every loaded ontology in IRI order.
        """
        if isinstance(ref, tuple):
            iri, cid = ref
            ont = self.ontologies.get(iri)
            return (iri, cid) if ont and ont.concept(cid) else None
        if ref.ontology is not None:
            ont = self.ontologies.get(ref.ontology)
            return (ref.ontology, ref.id) if ont and ont.concept(ref.id) else None
        for iri in self._scope_order(scope):
            ont = self.ontologies[iri]
            if ont.concept(ref.id) is not None:
                return (iri, ref.id)
        return None

    def _scope_order(self, scope: str | None) -> list[str]:
        order: list[str] = []
        seen: set[str] = set()
        if scope is not None and scope in self.ontologies:
            queue = [scope]
            while queue:
                iri = queue.pop(0)
                if iri in seen or iri not in self.ontologies:
                    continue
                seen.add(iri)
                order.append(iri)
                queue.extend(self.ontologies[iri].imports)
        for iri in sorted(self.ontologies):
            if iri not in seen:
                order.append(iri)
        return order

    def get_concept(self, key: ConceptKey) -> Concept | None:
        ont = self.ontologies.get(key[0])
        return ont.concept(key[1]) if ont else None

    def get_relation(self, key: ConceptKey) -> RelationDef | None:
        ont = self.ontologies.get(key[0])
        return ont.relation(key[1]) if ont else None

    def get_instance(self, key: ConceptKey) -> InstanceDef | None:
        ont = self.ontologies.get(key[0])
        return ont.instance(key[1]) if ont else None

    def resolve_type(self, t: TypeRef, scope: str | None = None) -> ResolvedType:
        if t.kind == "builtin":
            return ResolvedType(kind="builtin", builtin=t.builtin)
        key = self.resolve_concept(t.concept, scope=scope)
        return ResolvedType(kind="concept", concept=key, concept_name=t.concept.id)

    # -- subsumption and inheritance ---------------------------------------

    def _find_hierarchy_cycle(self) -> ConceptKey | None:
        for iri, ont in self.ontologies.items():
            for c in ont.concepts:
                key = (iri, c.id)
                if key in self.ancestors(key):
                    return key
        return None

    def _direct_supers(self, key: ConceptKey) -> list[ConceptKey]:
        concept = self.get_concept(key)
        if concept is None:
            return []
        supers = []
        for ref in concept.super_concepts:
            resolved = self.resolve_concept(ref, scope=key[0])
            if resolved is not None:
                supers.append(resolved)
        return supers

    def ancestors(self, key: ConceptKey) -> frozenset[ConceptKey]:
        """Strict ancestors of a concept over loaded ontologies (cycle-safe)."""
        cached = self._ancestor_cache.get(key)
        if cached is not None:
            return cached
        seen: set[ConceptKey] = set()
        queue = list(self._direct_supers(key))
        while queue:
            k = queue.pop(0)
            if k in seen:
                continue
            seen.add(k)
            queue.extend(self._direct_supers(k))
        result = frozenset(seen)
        self._ancestor_cache[key] = result
        return result

    def is_subconcept_of(self, a: ConceptRef | ConceptKey, b: ConceptRef | ConceptKey) -> bool:
        """Reflexive-transitive subsumption across loaded ontologies."""
        ka = self.resolve_concept(a)
        kb = self.resolve_concept(b)
        if ka is None or kb is None:
            return False
        return ka == kb or kb in self.ancestors(ka)

    def effective_attributes(self, c: ConceptRef | ConceptKey) -> list[ResolvedAttribute]:
        """Own attributes first, then inherited ones in closure discovery order.

        Ancestors living in unloaded ontologies contribute nothing; a name
        declared at several levels keeps the most-derived declaration.
        """
        key = self.resolve_concept(c)
        if key is None:
            return []
        order: list[ConceptKey] = [key]
        seen = {key}
        queue = list(self._direct_supers(key))
        while queue:
            k = queue.pop(0)
            if k in seen:
                continue
            seen.add(k)
            order.append(k)
            queue.extend(self._direct_supers(k))
        out: list[ResolvedAttribute] = []
        names: set[str] = set()
        for k in order:
            concept = self.get_concept(k)
            for attr in concept.attributes:
                if attr.name in names:
                    continue
                names.add(attr.name)
                out.append(
                    ResolvedAttribute(
                        name=attr.name,
                        constraint=attr.constraint,
                        range=self.resolve_type(attr.range, scope=k[0]),
                        cardinality=attr.cardinality,
                        origin=k,
                    )
                )
        return out

    # -- compatibility ------------------------------------------------------

    def compatible(self, candidate: ResolvedType, required: ResolvedType) -> bool:
        """candidate fits where required is demanded: equal builtins, or
        candidate's concept is a (reflexive) subconcept of required's."""
        if candidate.kind == "builtin" and required.kind == "builtin":
            return candidate.builtin == required.builtin
        if candidate.kind == "concept" and required.kind == "concept":
            if candidate.concept is None or required.concept is None:
                return False
            return self.is_subconcept_of(candidate.concept, required.concept)
        return False

    def instances_assignable_to(self, t: ResolvedType) -> list[tuple[str, InstanceDef]]:
        if t.kind != "concept" or t.concept is None:
            return []
        out = []
        for iri in sorted(self.ontologies):
            for inst in self.ontologies[iri].instances:
                member = self.resolve_concept(inst.member_of, scope=iri)
                if member is not None and self.is_subconcept_of(member, t.concept):
                    out.append((iri, inst))
        return out

    def relations_with_compatible_param(self, t: ResolvedType) -> list[tuple[tuple[str, RelationDef], int]]:
        out = []
        for iri in sorted(self.ontologies):
            for rel in self.ontologies[iri].relations:
                for k, param in enumerate(rel.parameters):
                    if self.compatible(t, self.resolve_type(param, scope=iri)):
                        out.append(((iri, rel), k))
        return out

    # -- display tree -------------------------------------------------------

    def tree_view(self, iri: str) -> TreeNode:
        """Hierarchy view of one ontology.

        A concept appears once under each of its loaded super-concepts (local
        or external stub); subsequent occurrences are collapsed references so
        the occurrence count equals max(1, loaded supers).
        """
        ont = self.ontologies.get(iri)
        if ont is None:
            raise StoreError(f"ontology {iri!r} is not loaded")
        root = TreeNode(label=f"ontology {iri}", kind="ontology")
        imports = TreeNode("importsOntology", "section")
        for imp in ont.imports:
            imports.children.append(TreeNode(imp, "import"))
        namespaces = TreeNode("namespaces", "section")
        for prefix, ns in ont.namespaces:
            namespaces.children.append(TreeNode(f"{prefix} {ns}", "namespace"))
        nfp = TreeNode("nonFunctionalProperties", "section")
        for k, v in ont.nfp:
            nfp.children.append(TreeNode(f"{k} = {v}", "nfp"))

        concepts = TreeNode("concepts", "section")
        expanded: set[str] = set()

        def concept_node(c: Concept) -> TreeNode:
            if c.id in expanded:
                return TreeNode(c.id, "concept-ref")
            expanded.add(c.id)
            node = TreeNode(c.id, "concept")
            for a in c.attributes:
                node.children.append(TreeNode(f"{a.name} {a.constraint} {a.range.builtin or a.range.concept.id}", "attribute"))
            for child in ont.concepts:
                supers = {self.resolve_concept(ref, scope=iri) for ref in child.super_concepts}
                if (iri, c.id) in supers:
                    node.children.append(concept_node(child))
            return node

        # external loaded supers become stub roots
        stubs: dict[ConceptKey, TreeNode] = {}
        for c in ont.concepts:
            for ref in c.super_concepts:
                resolved = self.resolve_concept(ref, scope=iri)
                if resolved is not None and resolved[0] != iri and resolved not in stubs:
                    stubs[resolved] = TreeNode(resolved[1], "external-concept")
        for key in sorted(stubs):
            stub = stubs[key]
            for c in ont.concepts:
                supers = {self.resolve_concept(ref, scope=iri) for ref in c.super_concepts}
                if key in supers:
                    stub.children.append(concept_node(c))
            concepts.children.append(stub)
        for c in ont.concepts:
            loaded_supers = [self.resolve_concept(ref, scope=iri) for ref in c.super_concepts]
            if not any(s is not None for s in loaded_supers):
                concepts.children.append(concept_node(c))

        relations = TreeNode("relations", "section")
        for r in ont.relations:
            rnode = TreeNode(r.id, "relation")
            for k, p in enumerate(r.parameters):
                rnode.children.append(TreeNode(f"parameter {k}: {p.builtin or p.concept.id}", "parameter"))
            relations.children.append(rnode)
        instances = TreeNode("instances", "section")
        for inst in ont.instances:
            inode = TreeNode(f"{inst.id} memberOf {inst.member_of.id}", "instance")
            for attr, value in inst.values:
                inode.children.append(TreeNode(f"{attr} hasValue {value}", "value"))
            instances.children.append(inode)
        relinsts = TreeNode("relationInstances", "section")
        for ri in ont.relation_instances:
            relinsts.children.append(TreeNode(f"{ri.relation}({', '.join(ri.args)})", "relation-instance"))

        root.children = [imports, namespaces, nfp, concepts, relations, instances, relinsts]
        return root
