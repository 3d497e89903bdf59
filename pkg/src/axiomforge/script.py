"""Line-oriented edit scripts: parse, execute, emit.

Each line is one editing command. Creation verbs name their result with an
alias; later lines may refer to elements by alias or directly by the engine's
own ids (n2, c3, ...), so recorded command logs replay verbatim.
"""

from __future__ import annotations

import re
import shlex
from dataclasses import dataclass

from .axiom import PORT_OPERATOR, PORT_PARAM, PORT_ROOT, PORT_SLOT, AxiomGraph, Port
from .engine import Binding, Command, EditEngine, Rejection
from .store import OntologyNotFoundError, OntologyStore
from .textgen import GeneratedExpression, IncompleteGraphError, generate

_AT_RE = re.compile(r"^@(-?\d+),(-?\d+)$")
_PARAM_RE = re.compile(r"^([A-Za-z_][\w]*)\[(\d+)\]$")
_SLOT_RE = re.compile(r"^([A-Za-z_][\w]*)\.(\d+)$")

OPERATOR_WORDS = ("AND", "OR", "NOT")
BINDING_HEADS = ("default", "sub", "inst", "lit", "rel", "use", "shared", "op")


class ScriptError(Exception):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no
        self.reason = message


@dataclass
class ParsedLine:
    command: Command
    alias: str | None = None  # registered to the created node id after apply


def _key(tok: str, line_no: int) -> tuple[str, str]:
    if "#" not in tok:
        raise ScriptError(line_no, f"expected <ontologyIRI>#<id>, got {tok!r}")
    iri, _, local = tok.rpartition("#")
    return (iri, local)


def _take_at(toks: list[str]) -> tuple[int, int] | None:
    if toks and (m := _AT_RE.match(toks[-1])):
        toks.pop()
        return (int(m.group(1)), int(m.group(2)))
    return None


class ScriptRunner:
    def __init__(self, store: OntologyStore, name: str = "axiom"):
        self.engine = EditEngine(store)
        self.graph = AxiomGraph(name=name)
        self.aliases: dict[str, str] = {}

    def _resolve(self, tok: str) -> str:
        return self.aliases.get(tok, tok)

    def _port(self, tok: str, line_no: int) -> Port:
        if tok == "root":
            return Port(PORT_ROOT, self.graph.root_id)
        if m := _PARAM_RE.match(tok):
            return Port(PORT_PARAM, self._resolve(m.group(1)), int(m.group(2)))
        if m := _SLOT_RE.match(tok):
            return Port(PORT_SLOT, self._resolve(m.group(1)), int(m.group(2)))
        return Port(PORT_OPERATOR, self._resolve(tok))

    # -- bindings ------------------------------------------------------------

    def _binding(self, toks: list[str], i: int, line_no: int) -> tuple[Binding, int]:
        head = toks[i]
        if head == "default":
            return Binding(kind="default"), i + 1
        if head == "sub":
            return Binding(kind="sub", concept=_key(toks[i + 1], line_no)), i + 2
        if head == "inst":
            return Binding(kind="inst", instance=_key(toks[i + 1], line_no)), i + 2
        if head == "lit":
            return Binding(kind="lit", builtin=toks[i + 1], value=toks[i + 2]), i + 3
        if head == "rel":
            ref = toks[i + 1]
            if ":" not in ref:
                raise ScriptError(line_no, f"expected <relation>:<paramIndex>, got {ref!r}")
            key_part, _, k = ref.rpartition(":")
            return Binding(kind="rel", relation=_key(key_part, line_no), param=int(k)), i + 2
        if head == "use":
            return Binding(kind="use", node=self._resolve(toks[i + 1])), i + 2
        if head == "shared":
            return Binding(kind="shared", node=self._resolve(toks[i + 1])), i + 2
        if head == "op":
            kind = toks[i + 1]
            if i + 2 >= len(toks) or toks[i + 2] != "(":
                raise ScriptError(line_no, "operator binding operands must be parenthesized")
            i += 3
            operands: list[Binding] = []
            while True:
                if i >= len(toks):
                    raise ScriptError(line_no, "unterminated operator binding")
                if toks[i] == ")":
                    return Binding(kind="op", op=kind, operands=tuple(operands)), i + 1
                if toks[i] == ";":
                    i += 1
                    continue
                operand, i = self._binding(toks, i, line_no)
                operands.append(operand)
        raise ScriptError(line_no, f"unknown binding form {head!r}")

    def _binding_or_node(self, toks: list[str], i: int, line_no: int) -> tuple[Binding | None, str | None]:
        if toks[i] in BINDING_HEADS:
            binding, j = self._binding(toks, i, line_no)
            if j != len(toks):
                raise ScriptError(line_no, f"trailing tokens after binding: {toks[j:]!r}")
            return binding, None
        if i + 1 != len(toks):
            raise ScriptError(line_no, f"trailing tokens: {toks[i + 1:]!r}")
        return None, self._resolve(toks[i])

    # -- line parsing ----------------------------------------------------------

    def parse_line(self, line: str, line_no: int) -> ParsedLine | None:
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            return None
        try:
            toks = shlex.split(stripped)
        except ValueError as exc:
            raise ScriptError(line_no, f"bad quoting: {exc}") from exc
        verb = toks[0]
        try:
            return self._parse_toks(verb, toks[1:], line_no)
        except (IndexError, ValueError) as exc:
            raise ScriptError(line_no, f"malformed {verb!r} command: {exc}") from exc

    def _parse_toks(self, verb: str, args: list[str], line_no: int) -> ParsedLine:
        if verb in ("var", "inst", "rel"):
            at = _take_at(args)
            return ParsedLine(Command(verb=verb, element=_key(args[1], line_no), at=at), alias=args[0])
        if verb == "op":
            at = _take_at(args)
            return ParsedLine(Command(verb="op", kind=args[1], at=at), alias=args[0])
        if verb == "lit":
            at = _take_at(args)
            return ParsedLine(Command(verb="lit", builtin=args[1], value=args[2], at=at), alias=args[0])
        if verb == "refine":
            subject = args[0]
            if "." not in subject:
                raise ScriptError(line_no, "refine needs <varId>.<attrName>")
            var, _, attr = subject.partition(".")
            binding, i = self._binding(args, 1, line_no)
            if i != len(args):
                raise ScriptError(line_no, f"trailing tokens: {args[i:]!r}")
            return ParsedLine(Command(verb="refine", node=self._resolve(var), attr=attr, binding=binding))
        if verb == "refinep":
            m = _PARAM_RE.match(args[0])
            if not m:
                raise ScriptError(line_no, "refinep needs <relId>[<paramIndex>]")
            binding, i = self._binding(args, 1, line_no)
            if i != len(args):
                raise ScriptError(line_no, f"trailing tokens: {args[i:]!r}")
            return ParsedLine(
                Command(verb="refinep", node=self._resolve(m.group(1)), index=int(m.group(2)), binding=binding)
            )
        if verb == "involve":
            m = _PARAM_RE.match(args[1])
            if not m:
                raise ScriptError(line_no, "involve needs <varId> <relId>[<paramIndex>]")
            return ParsedLine(
                Command(verb="involve", node=self._resolve(args[0]), target=self._resolve(m.group(1)), index=int(m.group(2)))
            )
        if verb == "rename":
            return ParsedLine(Command(verb="rename", node=self._resolve(args[0]), name=args[1]))
        if verb == "delete":
            return ParsedLine(Command(verb="delete", node=self._resolve(args[0])))
        if verb == "setop":
            return ParsedLine(Command(verb="setop", node=self._resolve(args[0]), kind=args[1]))
        if verb == "addoperand":
            binding, node = self._binding_or_node(args, 1, line_no)
            return ParsedLine(Command(verb="addoperand", node=self._resolve(args[0]), binding=binding, target=node))
        if verb == "setval":
            return ParsedLine(Command(verb="setval", node=self._resolve(args[0]), value=args[1]))
        if verb == "insert":
            conn = self._resolve(args[0])
            kind = args[1]
            binding = node = None
            if len(args) > 2:
                binding, node = self._binding_or_node(args, 2, line_no)
            return ParsedLine(Command(verb="insert", conn=conn, kind=kind, binding=binding, target=node))
        if verb == "reconnect":
            conn, end = self._resolve(args[0]), args[1]
            if end == "source":
                return ParsedLine(Command(verb="reconnect", conn=conn, end=end, port=self._port(args[2], line_no)))
            return ParsedLine(Command(verb="reconnect", conn=conn, end=end, target=self._resolve(args[2])))
        if verb == "connect":
            return ParsedLine(
                Command(verb="connect", port=self._port(args[0], line_no), target=self._resolve(args[1]))
            )
        if verb == "move":
            at = _take_at(args)
            if at is None:
                raise ScriptError(line_no, "move needs @x,y")
            return ParsedLine(Command(verb="move", node=self._resolve(args[0]), at=at))
        raise ScriptError(line_no, f"unknown verb {verb!r}")

    # -- execution ---------------------------------------------------------

    def ensure_ontologies(self, command: Command) -> None:
        """Load any file-store ontology the command references but the store
        lacks; unknown IRIs are left for the engine to reject."""
        iris = set()
        if command.element is not None:
            iris.add(command.element[0])
        stack = [command.binding] if command.binding is not None else []
        while stack:
            b = stack.pop()
            for key in (b.concept, b.instance, b.relation):
                if key is not None:
                    iris.add(key[0])
            stack.extend(b.operands)
        store = self.engine.store
        queue = list(iris)
        while queue:
            iri = queue.pop()
            if iri not in store.ontologies:
                try:
                    store.load_imported_ontology(iri)
                except OntologyNotFoundError:
                    continue
            # referenced ontologies pull in their transitive imports so that
            # attribute ranges and super-concepts resolve in batch runs
            queue.extend(i for i in store.ontologies[iri].imports if i not in store.ontologies)

    def run_line(self, line: str, line_no: int) -> None:
        parsed = self.parse_line(line, line_no)
        if parsed is None:
            return
        self.ensure_ontologies(parsed.command)
        try:
            result = self.engine.apply(self.graph, parsed.command)
        except Rejection as exc:
            raise ScriptError(line_no, f"{exc.rule} violation: {exc.message}") from exc
        if parsed.alias is not None and isinstance(result, str):
            self.aliases[parsed.alias] = result


def run_script(store: OntologyStore, text: str, name: str = "axiom", pretty: bool = False) -> tuple[AxiomGraph, GeneratedExpression]:
    """Apply a whole script to a fresh graph and emit its text.

    Raises ScriptError at the first rejected or malformed line, or when the
    finished graph is not emission-ready (an empty script gives "empty axiom").
    """
    runner = ScriptRunner(store, name=name)
    for line_no, line in enumerate(text.splitlines(), start=1):
        runner.run_line(line, line_no)
    try:
        expr = generate(runner.graph, pretty=pretty)
    except IncompleteGraphError as exc:
        if any(v.rule == "empty-axiom" for v in exc.violations):
            raise ScriptError(len(text.splitlines()) or 1, "empty axiom") from exc
        raise ScriptError(len(text.splitlines()) or 1, f"incomplete axiom: {exc}") from exc
    return runner.graph, expr
