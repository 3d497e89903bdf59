"""Tokenizer for the WSML conceptual-syntax subset.

Produces positioned tokens; never raises on bad input, bad bytes come back as
diagnostics so callers can report every problem with line/column info.
"""

from __future__ import annotations

from dataclasses import dataclass, field

KEYWORDS = frozenset(
    {
        "wsmlVariant",
        "namespace",
        "ontology",
        "importsOntology",
        "concept",
        "subConceptOf",
        "ofType",
        "impliesType",
        "relation",
        "instance",
        "memberOf",
        "hasValue",
        "relationInstance",
        "nonFunctionalProperties",
        "endNonFunctionalProperties",
        "definedBy",
        "and",
        "or",
        "neg",
    }
)

PUNCTUATION = "{}()[],"

KIND_KEYWORD = "keyword"
KIND_IDENTIFIER = "identifier"
KIND_IRI = "iri"
KIND_VARIABLE = "variable"
KIND_STRING = "string-literal"
KIND_INTEGER = "integer-literal"
KIND_DECIMAL = "decimal-literal"
KIND_BOOLEAN = "boolean-literal"
KIND_PUNCTUATION = "punctuation"


@dataclass(frozen=True)
class Token:
    kind: str
    lexeme: str
    line: int  # 1-based
    column: int  # 1-based


@dataclass
class ParseDiagnostic:
    severity: str  # "error" | "warning"
    message: str
    line: int
    column: int
    expected: list[str] | None = None

    def __str__(self):
        return f"{self.severity}: {self.line}:{self.column}: {self.message}"


@dataclass
class TokenizeResult:
    tokens: list[Token] = field(default_factory=list)
    diagnostics: list[ParseDiagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not any(d.severity == "error" for d in self.diagnostics)


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _is_ident_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


def tokenize(source: str) -> TokenizeResult:
    """Tokenize WSML source. Comments (`//` to end of line) are skipped."""
    result = TokenizeResult()
    i = 0
    line = 1
    col = 1
    n = len(source)

    def error(msg: str, ln: int, cl: int):
        result.diagnostics.append(ParseDiagnostic("error", msg, ln, cl))

    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if source.startswith("//", i):
            while i < n and source[i] != "\n":
                i += 1
                col += 1
            continue

        start_line, start_col = line, col

        # IRI literal: _"..."
        if source.startswith('_"', i):
            j = i + 2
            while j < n and source[j] not in '"\n':
                j += 1
            if j >= n or source[j] != '"':
                error("unterminated IRI literal", start_line, start_col)
                lex = source[i:j]
                i = j
                col += len(lex)
                continue
            lex = source[i : j + 1]
            result.tokens.append(Token(KIND_IRI, lex, start_line, start_col))
            col += len(lex)
            i = j + 1
            continue

        if ch == '"':
            j = i + 1
            while j < n and source[j] not in '"\n':
                j += 1
            if j >= n or source[j] != '"':
                error("unterminated string literal", start_line, start_col)
                lex = source[i:j]
                i = j
                col += len(lex)
                continue
            lex = source[i : j + 1]
            result.tokens.append(Token(KIND_STRING, lex, start_line, start_col))
            col += len(lex)
            i = j + 1
            continue

        if ch == "?":
            j = i + 1
            while j < n and _is_ident_char(source[j]):
                j += 1
            if j == i + 1:
                error("'?' must be followed by a variable name", start_line, start_col)
                i += 1
                col += 1
                continue
            lex = source[i:j]
            result.tokens.append(Token(KIND_VARIABLE, lex, start_line, start_col))
            col += len(lex)
            i = j
            continue

        if ch.isdigit() or (ch in "+-" and i + 1 < n and source[i + 1].isdigit()):
            j = i + 1
            while j < n and source[j].isdigit():
                j += 1
            kind = KIND_INTEGER
            if j < n and source[j] == "." and j + 1 < n and source[j + 1].isdigit():
                kind = KIND_DECIMAL
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            lex = source[i:j]
            result.tokens.append(Token(kind, lex, start_line, start_col))
            col += len(lex)
            i = j
            continue

        if _is_ident_start(ch):
            j = i + 1
            while j < n and _is_ident_char(source[j]):
                j += 1
            lex = source[i:j]
            if lex in KEYWORDS:
                kind = KIND_KEYWORD
            elif lex in ("true", "false"):
                kind = KIND_BOOLEAN
            else:
                kind = KIND_IDENTIFIER
            result.tokens.append(Token(kind, lex, start_line, start_col))
            col += len(lex)
            i = j
            continue

        if ch in PUNCTUATION:
            result.tokens.append(Token(KIND_PUNCTUATION, ch, start_line, start_col))
            i += 1
            col += 1
            continue

        error(f"illegal character {ch!r}", start_line, start_col)
        i += 1
        col += 1

    return result
