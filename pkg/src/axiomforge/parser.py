"""Recursive-descent parser for the WSML subset and the logical-expression
grammar used to check generated axiom text.

Errors are reported as positioned diagnostics; on a syntax error inside a
top-level element the parser recovers at the next top-level keyword so that
several problems can be reported in one pass. An error diagnostic means no
Ontology value is produced.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .lexer import (
    KIND_BOOLEAN,
    KIND_DECIMAL,
    KIND_IDENTIFIER,
    KIND_INTEGER,
    KIND_IRI,
    KIND_KEYWORD,
    KIND_PUNCTUATION,
    KIND_STRING,
    KIND_VARIABLE,
    ParseDiagnostic,
    Token,
    tokenize,
)
from .ontology import (
    BUILTIN_TYPES,
    AttributeDef,
    Concept,
    ConceptRef,
    InstanceDef,
    Ontology,
    RelationDef,
    RelationInstance,
    TypeRef,
)

TOP_LEVEL_KEYWORDS = ("concept", "relation", "instance", "relationInstance", "ontology", "importsOntology")

LITERAL_KINDS = (KIND_STRING, KIND_INTEGER, KIND_DECIMAL, KIND_BOOLEAN)


@dataclass
class ParseResult:
    ontology: Ontology | None
    diagnostics: list[ParseDiagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.ontology is not None


class _SyntaxError(Exception):
    def __init__(self, diagnostic: ParseDiagnostic):
        self.diagnostic = diagnostic


def _iri_value(lexeme: str) -> str:
    # _"..." -> inner text
    return lexeme[2:-1]


def _string_value(lexeme: str) -> str:
    return lexeme[1:-1]


class _Cursor:
    def __init__(self, tokens: list[Token], source: str):
        self.tokens = tokens
        self.pos = 0
        lines = source.split("\n")
        self.end_line = len(lines)
        self.end_col = len(lines[-1]) + 1

    def peek(self, offset: int = 0) -> Token | None:
        p = self.pos + offset
        return self.tokens[p] if p < len(self.tokens) else None

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def here(self) -> tuple[int, int]:
        tok = self.peek()
        if tok is None:
            return self.end_line, self.end_col
        return tok.line, tok.column

    def error(self, message: str, expected: list[str] | None = None) -> _SyntaxError:
        line, col = self.here()
        return _SyntaxError(ParseDiagnostic("error", message, line, col, expected=expected))

    def expect_kind(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != kind:
            got = tok.lexeme if tok else "end of input"
            raise self.error(f"expected {what}, got {got!r}" if tok else f"expected {what} at end of input", expected=[kind])
        return self.advance()

    def expect_keyword(self, word: str) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != KIND_KEYWORD or tok.lexeme != word:
            got = tok.lexeme if tok else "end of input"
            raise self.error(f"expected '{word}', got {got!r}", expected=[KIND_KEYWORD])
        return self.advance()

    def at_keyword(self, *words: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == KIND_KEYWORD and tok.lexeme in words

    def at_punct(self, ch: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == KIND_PUNCTUATION and tok.lexeme == ch

    def eat_punct(self, ch: str) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != KIND_PUNCTUATION or tok.lexeme != ch:
            got = tok.lexeme if tok else "end of input"
            raise self.error(f"expected {ch!r}, got {got!r}", expected=[KIND_PUNCTUATION])
        return self.advance()


def parse_ontology(source: str) -> ParseResult:
    """Parse one WSML ontology document. Diagnostics instead of exceptions."""
    tr = tokenize(source)
    diags = list(tr.diagnostics)
    cur = _Cursor(tr.tokens, source)
    ont: Ontology | None = None
    try:
        variant = None
        if cur.at_keyword("wsmlVariant"):
            cur.advance()
            variant = _iri_value(cur.expect_kind(KIND_IRI, "IRI").lexeme)
        namespaces: list[tuple[str, str]] = []
        if cur.at_keyword("namespace"):
            cur.advance()
            cur.eat_punct("{")
            while True:
                tok = cur.peek()
                if tok is not None and tok.kind == KIND_IDENTIFIER:
                    prefix = cur.advance().lexeme
                else:
                    raise cur.error("expected namespace prefix or '_'", expected=[KIND_IDENTIFIER])
                iri = _iri_value(cur.expect_kind(KIND_IRI, "IRI").lexeme)
                namespaces.append((prefix, iri))
                if cur.at_punct(","):
                    cur.advance()
                    continue
                break
            cur.eat_punct("}")
        cur.expect_keyword("ontology")
        iri = _iri_value(cur.expect_kind(KIND_IRI, "IRI").lexeme)
        ont = Ontology(iri=iri, variant=variant, namespaces=namespaces)
    except _SyntaxError as exc:
        diags.append(exc.diagnostic)
        return ParseResult(None, diags)

    while not cur.at_end():
        try:
            if cur.at_keyword("importsOntology"):
                cur.advance()
                first = _iri_value(cur.expect_kind(KIND_IRI, "IRI").lexeme)
                ont.imports.append(first)
                while cur.peek() is not None and cur.peek().kind == KIND_IRI:
                    ont.imports.append(_iri_value(cur.advance().lexeme))
            elif cur.at_keyword("nonFunctionalProperties"):
                ont.nfp.extend(_parse_nfp_block(cur))
            elif cur.at_keyword("concept"):
                concept, dup_diag = _parse_concept(cur, ont)
                if dup_diag is not None:
                    diags.append(dup_diag)
                else:
                    ont.concepts.append(concept)
            elif cur.at_keyword("relation"):
                rel = _parse_relation(cur)
                if ont.relation(rel.id) is not None:
                    line, col = cur.here()
                    diags.append(ParseDiagnostic("error", f"duplicate relation id {rel.id!r}", line, col))
                else:
                    ont.relations.append(rel)
            elif cur.at_keyword("instance"):
                inst = _parse_instance(cur)
                if ont.instance(inst.id) is not None:
                    line, col = cur.here()
                    diags.append(ParseDiagnostic("error", f"duplicate instance id {inst.id!r}", line, col))
                else:
                    ont.instances.append(inst)
            elif cur.at_keyword("relationInstance"):
                ont.relation_instances.append(_parse_relation_instance(cur))
            else:
                tok = cur.peek()
                raise cur.error(
                    f"expected a top-level element, got {tok.lexeme!r}" if tok else "expected a top-level element",
                    expected=[KIND_KEYWORD],
                )
        except _SyntaxError as exc:
            diags.append(exc.diagnostic)
            _recover(cur)

    if any(d.severity == "error" for d in diags):
        return ParseResult(None, diags)
    return ParseResult(ont, diags)


def _recover(cur: _Cursor):
    """Skip forward to the next top-level keyword so parsing can continue."""
    while not cur.at_end():
        if cur.at_keyword(*TOP_LEVEL_KEYWORDS):
            return
        cur.advance()


def _parse_nfp_block(cur: _Cursor) -> list[tuple[str, str]]:
    cur.expect_keyword("nonFunctionalProperties")
    pairs: list[tuple[str, str]] = []
    while not cur.at_keyword("endNonFunctionalProperties"):
        if cur.at_end():
            raise cur.error("unterminated nonFunctionalProperties block", expected=[KIND_KEYWORD])
        name = cur.expect_kind(KIND_IDENTIFIER, "property name").lexeme
        cur.expect_keyword("hasValue")
        tok = cur.peek()
        if tok is None or tok.kind not in LITERAL_KINDS:
            raise cur.error("expected a literal value", expected=list(LITERAL_KINDS))
        cur.advance()
        value = _string_value(tok.lexeme) if tok.kind == KIND_STRING else tok.lexeme
        pairs.append((name, value))
    cur.expect_keyword("endNonFunctionalProperties")
    return pairs


def _parse_type(cur: _Cursor) -> TypeRef:
    tok = cur.peek()
    if tok is None or tok.kind != KIND_IDENTIFIER:
        raise cur.error("expected a type name", expected=[KIND_IDENTIFIER])
    cur.advance()
    if tok.lexeme in BUILTIN_TYPES:
        return TypeRef.of_builtin(tok.lexeme)
    return TypeRef.of_concept(tok.lexeme)


def _parse_concept(cur: _Cursor, ont: Ontology) -> tuple[Concept, ParseDiagnostic | None]:
    cur.expect_keyword("concept")
    name_tok = cur.expect_kind(KIND_IDENTIFIER, "identifier")
    concept = Concept(id=name_tok.lexeme)
    dup: ParseDiagnostic | None = None
    if ont.concept(concept.id) is not None:
        dup = ParseDiagnostic(
            "error", f"duplicate concept id {concept.id!r}", name_tok.line, name_tok.column
        )
    if cur.at_keyword("subConceptOf"):
        cur.advance()
        seen: set[str] = set()
        for name in _parse_idlist(cur):
            if name not in seen:  # SuperConcepts is a set
                seen.add(name)
                concept.super_concepts.append(ConceptRef(id=name))
    if cur.at_keyword("nonFunctionalProperties"):
        concept.nfp.extend(_parse_nfp_block(cur))
    # attributes: ident (ofType|impliesType) card? typ
    while True:
        tok = cur.peek()
        nxt = cur.peek(1)
        if (
            tok is not None
            and tok.kind == KIND_IDENTIFIER
            and nxt is not None
            and nxt.kind == KIND_KEYWORD
            and nxt.lexeme in ("ofType", "impliesType")
        ):
            attr_name = cur.advance().lexeme
            constraint = cur.advance().lexeme
            card = None
            if cur.at_punct("("):
                cur.advance()
                lo = int(cur.expect_kind(KIND_INTEGER, "integer").lexeme)
                hi = int(cur.expect_kind(KIND_INTEGER, "integer").lexeme)
                cur.eat_punct(")")
                card = (lo, hi)
            rng = _parse_type(cur)
            concept.attributes.append(
                AttributeDef(
                    name=attr_name,
                    constraint=constraint,
                    range=rng,
                    cardinality=card,
                    origin=ConceptRef(id=concept.id, ontology=ont.iri),
                )
            )
        else:
            break
    return concept, dup


def _parse_idlist(cur: _Cursor) -> list[str]:
    names: list[str] = []
    braced = cur.at_punct("{")
    if braced:
        cur.advance()
    names.append(cur.expect_kind(KIND_IDENTIFIER, "identifier").lexeme)
    while cur.at_punct(","):
        cur.advance()
        names.append(cur.expect_kind(KIND_IDENTIFIER, "identifier").lexeme)
    if braced:
        cur.eat_punct("}")
    return names


def _parse_relation(cur: _Cursor) -> RelationDef:
    cur.expect_keyword("relation")
    name = cur.expect_kind(KIND_IDENTIFIER, "identifier").lexeme
    cur.eat_punct("(")
    params: list[TypeRef] = []
    cur.expect_keyword("ofType")
    params.append(_parse_type(cur))
    while cur.at_punct(","):
        cur.advance()
        cur.expect_keyword("ofType")
        params.append(_parse_type(cur))
    cur.eat_punct(")")
    return RelationDef(id=name, parameters=params)


def _parse_instance(cur: _Cursor) -> InstanceDef:
    cur.expect_keyword("instance")
    name = cur.expect_kind(KIND_IDENTIFIER, "identifier").lexeme
    cur.expect_keyword("memberOf")
    member = cur.expect_kind(KIND_IDENTIFIER, "identifier").lexeme
    inst = InstanceDef(id=name, member_of=ConceptRef(id=member))
    if cur.at_keyword("nonFunctionalProperties"):
        inst.nfp.extend(_parse_nfp_block(cur))
    while True:
        tok = cur.peek()
        nxt = cur.peek(1)
        if (
            tok is not None
            and tok.kind == KIND_IDENTIFIER
            and nxt is not None
            and nxt.kind == KIND_KEYWORD
            and nxt.lexeme == "hasValue"
        ):
            attr = cur.advance().lexeme
            cur.advance()  # hasValue
            vtok = cur.peek()
            if vtok is None or (vtok.kind != KIND_IDENTIFIER and vtok.kind not in LITERAL_KINDS):
                raise cur.error("expected an identifier or literal", expected=[KIND_IDENTIFIER, *LITERAL_KINDS])
            cur.advance()
            inst.values.append((attr, vtok.lexeme))
        else:
            break
    return inst


def _parse_relation_instance(cur: _Cursor) -> RelationInstance:
    cur.expect_keyword("relationInstance")
    name = cur.expect_kind(KIND_IDENTIFIER, "identifier").lexeme
    cur.eat_punct("(")
    args = [_parse_arg(cur)]
    while cur.at_punct(","):
        cur.advance()
        args.append(_parse_arg(cur))
    cur.eat_punct(")")
    return RelationInstance(relation=name, args=args)


def _parse_arg(cur: _Cursor) -> str:
    tok = cur.peek()
    if tok is None or (tok.kind != KIND_IDENTIFIER and tok.kind not in LITERAL_KINDS):
        raise cur.error("expected an identifier or literal", expected=[KIND_IDENTIFIER, *LITERAL_KINDS])
    cur.advance()
    return tok.lexeme


# ---------------------------------------------------------------------------
# Canonical printer (round-trip support)
# ---------------------------------------------------------------------------


def write_ontology(ont: Ontology) -> str:
    """Serialize an Ontology back to WSML text in canonical layout."""
    out: list[str] = []
    if ont.variant:
        out.append(f'wsmlVariant _"{ont.variant}"')
    if ont.namespaces:
        decls = ", ".join(f'{prefix} _"{iri}"' for prefix, iri in ont.namespaces)
        out.append(f"namespace {{ {decls} }}")
    out.append(f'ontology _"{ont.iri}"')
    for imp in ont.imports:
        out.append(f'  importsOntology _"{imp}"')
    if ont.nfp:
        out.append("  " + _write_nfp(ont.nfp))
    for c in ont.concepts:
        line = f"concept {c.id}"
        if c.super_concepts:
            line += " subConceptOf " + ", ".join(ref.id for ref in c.super_concepts)
        out.append(line)
        if c.nfp:
            out.append("  " + _write_nfp(c.nfp))
        for a in c.attributes:
            piece = f"  {a.name} {a.constraint}"
            if a.cardinality:
                piece += f" ({a.cardinality[0]} {a.cardinality[1]})"
            piece += f" {_write_type(a.range)}"
            out.append(piece)
    for r in ont.relations:
        params = ", ".join(f"ofType {_write_type(t)}" for t in r.parameters)
        out.append(f"relation {r.id} ({params})")
    for i in ont.instances:
        out.append(f"instance {i.id} memberOf {i.member_of.id}")
        if i.nfp:
            out.append("  " + _write_nfp(i.nfp))
        for attr, value in i.values:
            out.append(f"  {attr} hasValue {value}")
    for ri in ont.relation_instances:
        out.append(f"relationInstance {ri.relation} ({', '.join(ri.args)})")
    return "\n".join(out) + "\n"


def _write_type(t: TypeRef) -> str:
    return t.builtin if t.kind == "builtin" else t.concept.id


def _write_nfp(pairs: list[tuple[str, str]]) -> str:
    body = " ".join(f'{k} hasValue "{v}"' for k, v in pairs)
    return f"nonFunctionalProperties {body} endNonFunctionalProperties"


# ---------------------------------------------------------------------------
# Logical-expression checker
# ---------------------------------------------------------------------------


def validate_expression_text(text: str) -> list[ParseDiagnostic]:
    """Check axiom text against the logical-expression grammar.

    Returns an empty list when the text is well formed.
    """
    tr = tokenize(text)
    diags = [d for d in tr.diagnostics if d.severity == "error"]
    if diags:
        return diags
    cur = _Cursor(tr.tokens, text)
    try:
        cur.expect_keyword("definedBy")
        _expr(cur)
        if not cur.at_end():
            tok = cur.peek()
            raise cur.error(f"unexpected trailing input {tok.lexeme!r}")
    except _SyntaxError as exc:
        return [exc.diagnostic]
    return []


def _expr(cur: _Cursor):
    _conj(cur)
    while cur.at_keyword("or"):
        cur.advance()
        _conj(cur)


def _conj(cur: _Cursor):
    _unary(cur)
    while cur.at_keyword("and"):
        cur.advance()
        _unary(cur)


def _unary(cur: _Cursor):
    if cur.at_keyword("neg"):
        cur.advance()
        _unary(cur)
        return
    if cur.at_punct("("):
        cur.advance()
        _expr(cur)
        cur.eat_punct(")")
        return
    tok = cur.peek()
    if tok is not None and tok.kind == KIND_VARIABLE:
        cur.advance()
        if cur.at_keyword("memberOf"):
            cur.advance()
            cur.expect_kind(KIND_IDENTIFIER, "concept name")
            return
        if cur.at_punct("["):
            cur.advance()
            cur.expect_kind(KIND_IDENTIFIER, "attribute name")
            cur.expect_keyword("hasValue")
            _term(cur)
            cur.eat_punct("]")
            return
        raise cur.error("expected 'memberOf' or '[' after variable", expected=[KIND_KEYWORD, KIND_PUNCTUATION])
    if tok is not None and tok.kind == KIND_IDENTIFIER:
        cur.advance()
        cur.eat_punct("(")
        _term(cur)
        while cur.at_punct(","):
            cur.advance()
            _term(cur)
        cur.eat_punct(")")
        return
    got = tok.lexeme if tok else "end of input"
    raise cur.error(f"expected a molecule, atom, 'neg' or '(', got {got!r}")


def _term(cur: _Cursor):
    tok = cur.peek()
    if tok is not None and (tok.kind in (KIND_VARIABLE, KIND_IDENTIFIER) or tok.kind in LITERAL_KINDS):
        cur.advance()
        return
    got = tok.lexeme if tok else "end of input"
    raise cur.error(f"expected a term, got {got!r}")
