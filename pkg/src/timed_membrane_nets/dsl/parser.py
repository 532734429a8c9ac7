"""Recursive-descent parsers for the two model formats.

Membrane systems::

    psystem  = "psystem" "{" "alphabet" { IDENT } ";" membrane "}"
    membrane = "membrane" INT "{" { item } "}"
    item     = "contents" multiset ";" | rule | membrane
    rule     = "rule" IDENT ":" multiset "->" rhs [ "@" INT ] ";"
    rhs      = "eps" | message { message }
    message  = "(" multiset "," target ")"
    target   = "here" | "out" | "in" INT
    multiset = "eps" | factor { factor }
    factor   = IDENT [ "^" INT ]

Petri nets::

    petri      = "petri" "{" { decl } "}"
    decl       = "place" IDENT { IDENT } ";"
               | "transition" IDENT [ "@" INT ] [ "loc" "=" INT ] ";"
               | IDENT [ "-" INT ] "->" IDENT ";"
               | "marking" { IDENT "=" INT } ";"

An arc joins a place and a transition in either direction; its weight
defaults to 1. Comments run from ``#`` to the end of the line.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Union

from ..const import EMPTY_MULTISET, MAX_COUNT, MAX_NESTING
from ..exception import CountOverflowError, ModelValidationError, ParseError
from ..multiset import Alphabet, Multiset, Symbol
from ..petri import TimedPetriNet, place_table, transition_table
from ..psystem import MembraneStructure, Rule, Target, TimedPSystem
from .lexer import SourceSpan, Token, TokenKind, tokenize

logger = logging.getLogger(__name__)

Factors = list[tuple[str, int, SourceSpan]]


class _TokenStream:
    """Cursor over a token list with expectation helpers."""

    def __init__(self, source: Union[str, bytes]) -> None:
        self.tokens = tokenize(source)
        self.position = 0

    def peek(self, offset: int = 0) -> Token:
        index = min(self.position + offset, len(self.tokens) - 1)
        return self.tokens[index]

    def advance(self) -> Token:
        token = self.peek()
        if token.kind is not TokenKind.EOF:
            self.position += 1
        return token

    def at(self, kind: TokenKind, text: Optional[str] = None) -> bool:
        token = self.peek()
        return token.kind is kind and (text is None or token.text == text)

    def accept(self, kind: TokenKind, text: Optional[str] = None) -> bool:
        if self.at(kind, text):
            self.advance()
            return True
        return False

    def fail(self, *expected: str) -> ParseError:
        token = self.peek()
        return ParseError(token.span, expected, token.describe())

    def expect(self, kind: TokenKind, text: Optional[str] = None) -> Token:
        if not self.at(kind, text):
            raise self.fail(f"'{text}'" if text else kind.value)
        return self.advance()

    def keyword(self, text: str) -> Token:
        return self.expect(TokenKind.IDENT, text)

    def name(self) -> Token:
        token = self.expect(TokenKind.IDENT)
        if token.text == EMPTY_MULTISET:
            raise ParseError(
                token.span,
                [TokenKind.IDENT.value],
                token.describe(),
                f"'{EMPTY_MULTISET}' is reserved for the empty multiset",
            )
        return token

    def integer(self, minimum: int = 0) -> tuple[int, SourceSpan]:
        token = self.expect(TokenKind.INT)
        value = int(token.text)
        if not minimum <= value <= MAX_COUNT:
            raise ParseError(
                token.span,
                [f"integer in {minimum}..{MAX_COUNT}"],
                token.describe(),
            )
        return value, token.span

    def multiset(self) -> Factors:
        """Parse ``eps`` or factors; returns (name, count, span) triples."""
        if self.accept(TokenKind.IDENT, EMPTY_MULTISET):
            return []
        factors: Factors = []
        while self.at(TokenKind.IDENT) and not self.at(
            TokenKind.IDENT, EMPTY_MULTISET
        ):
            token = self.advance()
            count = 1
            if self.accept(TokenKind.CARET):
                count, _ = self.integer(minimum=1)
            factors.append((token.text, count, token.span))
        if not factors:
            raise self.fail(TokenKind.IDENT.value, f"'{EMPTY_MULTISET}'")
        return factors


def _resolve(
    factors: Factors, table, what: str = "symbol"
) -> Multiset:
    pairs = []
    for name, count, span in factors:
        handle = table.get(name)
        if handle is None:
            raise ModelValidationError(f"Unknown {what} '{name}'", span)
        pairs.append((handle, count))
    try:
        return Multiset(pairs)
    except CountOverflowError as exc:
        raise ModelValidationError(str(exc), factors[0][2]) from None


# Membrane systems


@dataclass
class _RuleSyntax:
    name: str
    span: SourceSpan
    lhs: Factors
    rhs: list[tuple[Target, Factors, SourceSpan]]
    delay: int


@dataclass
class _MembraneSyntax:
    label: int
    span: SourceSpan
    contents: Factors = field(default_factory=list)
    rules: list[_RuleSyntax] = field(default_factory=list)
    children: list["_MembraneSyntax"] = field(default_factory=list)


def _target(stream: _TokenStream) -> tuple[Target, SourceSpan]:
    token = stream.peek()
    if stream.accept(TokenKind.IDENT, "here"):
        return Target.here(), token.span
    if stream.accept(TokenKind.IDENT, "out"):
        return Target.out(), token.span
    if stream.accept(TokenKind.IDENT, "in"):
        child, span = stream.integer(minimum=1)
        return Target.into(child), span
    raise stream.fail("'here'", "'out'", "'in'")


def _rule(stream: _TokenStream) -> _RuleSyntax:
    stream.keyword("rule")
    name = stream.name()
    stream.expect(TokenKind.COLON)
    lhs = stream.multiset()
    stream.expect(TokenKind.ARROW)
    rhs: list[tuple[Target, Factors, SourceSpan]] = []
    if not stream.accept(TokenKind.IDENT, EMPTY_MULTISET):
        if not stream.at(TokenKind.LPAREN):
            raise stream.fail(TokenKind.LPAREN.value, f"'{EMPTY_MULTISET}'")
        while stream.accept(TokenKind.LPAREN):
            objects = stream.multiset()
            stream.expect(TokenKind.COMMA)
            target, span = _target(stream)
            stream.expect(TokenKind.RPAREN)
            rhs.append((target, objects, span))
    delay = 0
    if stream.accept(TokenKind.AT):
        delay, _ = stream.integer()
    stream.expect(TokenKind.SEMI)
    return _RuleSyntax(name.text, name.span, lhs, rhs, delay)


def _membrane(stream: _TokenStream, depth: int) -> _MembraneSyntax:
    start = stream.keyword("membrane")
    if depth > MAX_NESTING:
        raise ParseError(
            start.span,
            ["'}'"],
            start.describe(),
            f"membranes nested deeper than {MAX_NESTING}",
        )
    label, span = stream.integer(minimum=1)
    membrane = _MembraneSyntax(label, span)
    seen_contents = False
    stream.expect(TokenKind.LBRACE)
    while not stream.accept(TokenKind.RBRACE):
        if stream.at(TokenKind.IDENT, "contents"):
            token = stream.advance()
            if seen_contents:
                raise ModelValidationError(
                    f"Membrane {label} declares its contents twice", token.span
                )
            seen_contents = True
            membrane.contents = stream.multiset()
            stream.expect(TokenKind.SEMI)
        elif stream.at(TokenKind.IDENT, "rule"):
            membrane.rules.append(_rule(stream))
        elif stream.at(TokenKind.IDENT, "membrane"):
            membrane.children.append(_membrane(stream, depth + 1))
        else:
            raise stream.fail("'contents'", "'rule'", "'membrane'", "'}'")
    return membrane


def _walk(root: _MembraneSyntax):
    stack: list[tuple[_MembraneSyntax, Optional[int]]] = [(root, None)]
    while stack:
        membrane, parent = stack.pop()
        yield membrane, parent
        for child in reversed(membrane.children):
            stack.append((child, membrane.label))


def parse_psystem(source: Union[str, bytes]) -> TimedPSystem:
    """Parse and validate a timed membrane system."""
    stream = _TokenStream(source)
    stream.keyword("psystem")
    stream.expect(TokenKind.LBRACE)
    stream.keyword("alphabet")
    names: list[Token] = []
    while stream.at(TokenKind.IDENT):
        names.append(stream.name())
    stream.expect(TokenKind.SEMI)
    root = _membrane(stream, 1)
    stream.expect(TokenKind.RBRACE)
    stream.expect(TokenKind.EOF)

    declared: set[str] = set()
    for token in names:
        if token.text in declared:
            raise ModelValidationError(
                f"Duplicate symbol '{token.text}'", token.span
            )
        declared.add(token.text)
    alphabet = Alphabet(token.text for token in names)

    parents: dict[int, Optional[int]] = {}
    for membrane, parent in _walk(root):
        if membrane.label in parents:
            raise ModelValidationError(
                f"Duplicate membrane label {membrane.label}", membrane.span
            )
        parents[membrane.label] = parent
    structure = MembraneStructure.from_parents(parents)

    initial: dict[int, Multiset[Symbol]] = {}
    rules: list[Rule] = []
    rule_names: set[str] = set()
    for membrane, _ in _walk(root):
        initial[membrane.label] = _resolve(membrane.contents, alphabet)
        for syntax in membrane.rules:
            if syntax.name in rule_names:
                raise ModelValidationError(
                    f"Duplicate rule name '{syntax.name}'", syntax.span
                )
            rule_names.add(syntax.name)
            rhs = []
            for target, objects, span in syntax.rhs:
                if target.child is not None and not structure.is_child(
                    target.child, membrane.label
                ):
                    raise ModelValidationError(
                        f"Membrane {target.child} is not a child of "
                        f"membrane {membrane.label}",
                        span,
                    )
                rhs.append((target, _resolve(objects, alphabet)))
            try:
                rules.append(
                    Rule(
                        syntax.name,
                        membrane.label,
                        _resolve(syntax.lhs, alphabet),
                        tuple(rhs),
                        syntax.delay,
                    )
                )
            except ModelValidationError as exc:
                raise ModelValidationError(exc.message, syntax.span) from None
    system = TimedPSystem(alphabet, structure, initial, tuple(rules))
    logger.debug(
        "Parsed membrane system with %d membranes and %d rules",
        structure.n,
        len(system.rules),
    )
    return system


# Petri nets


@dataclass
class _TransitionSyntax:
    name: str
    span: SourceSpan
    delay: int
    locality: int


def parse_petri(source: Union[str, bytes]) -> TimedPetriNet:
    """Parse and validate a timed Petri net with localities."""
    stream = _TokenStream(source)
    stream.keyword("petri")
    stream.expect(TokenKind.LBRACE)
    places: list[Token] = []
    transitions: list[_TransitionSyntax] = []
    arcs: list[tuple[Token, Token, int]] = []
    marking: Factors = []
    while not stream.accept(TokenKind.RBRACE):
        following = stream.peek(1).kind
        if stream.at(TokenKind.IDENT) and following in (
            TokenKind.ARROW,
            TokenKind.MINUS,
        ):
            source_token = stream.advance()
            weight = 1
            if stream.accept(TokenKind.MINUS):
                weight, _ = stream.integer(minimum=1)
            stream.expect(TokenKind.ARROW)
            target_token = stream.name()
            stream.expect(TokenKind.SEMI)
            arcs.append((source_token, target_token, weight))
        elif stream.accept(TokenKind.IDENT, "place"):
            places.append(stream.name())
            while stream.at(TokenKind.IDENT):
                places.append(stream.name())
            stream.expect(TokenKind.SEMI)
        elif stream.accept(TokenKind.IDENT, "transition"):
            name = stream.name()
            delay = 0
            locality = 0
            if stream.accept(TokenKind.AT):
                delay, _ = stream.integer()
            if stream.accept(TokenKind.IDENT, "loc"):
                stream.expect(TokenKind.EQUALS)
                locality, _ = stream.integer()
            stream.expect(TokenKind.SEMI)
            transitions.append(
                _TransitionSyntax(name.text, name.span, delay, locality)
            )
        elif stream.accept(TokenKind.IDENT, "marking"):
            while stream.at(TokenKind.IDENT):
                place = stream.name()
                stream.expect(TokenKind.EQUALS)
                count, _ = stream.integer()
                if count:
                    marking.append((place.text, count, place.span))
            stream.expect(TokenKind.SEMI)
        else:
            raise stream.fail(
                "'place'", "'transition'", "'marking'", "an arc", "'}'"
            )
    stream.expect(TokenKind.EOF)

    seen: set[str] = set()
    for name, span in [(t.text, t.span) for t in places] + [
        (t.name, t.span) for t in transitions
    ]:
        if name in seen:
            raise ModelValidationError(f"'{name}' is declared twice", span)
        seen.add(name)
    place_handles = place_table(token.text for token in places)
    transition_handles = transition_table(t.name for t in transitions)

    weights_in: list[dict] = [{} for _ in transitions]
    weights_out: list[dict] = [{} for _ in transitions]
    for source_token, target_token, weight in arcs:
        for token in (source_token, target_token):
            if token.text not in seen:
                raise ModelValidationError(
                    f"'{token.text}' is not a declared place or transition",
                    token.span,
                )
        source_place = place_handles.get(source_token.text)
        target_place = place_handles.get(target_token.text)
        if source_place is not None and target_place is None:
            column = weights_in[transition_handles[target_token.text].id]
            place = source_place
        elif source_place is None and target_place is not None:
            column = weights_out[transition_handles[source_token.text].id]
            place = target_place
        else:
            raise ModelValidationError(
                "An arc must join a place and a transition", source_token.span
            )
        if place in column:
            raise ModelValidationError(
                f"Duplicate arc {source_token.text} -> {target_token.text}",
                source_token.span,
            )
        column[place] = weight

    initial = _resolve(marking, place_handles, "place")
    try:
        net = TimedPetriNet(
            place_handles,
            transition_handles,
            tuple(Multiset(column) for column in weights_in),
            tuple(Multiset(column) for column in weights_out),
            tuple(t.locality for t in transitions),
            tuple(t.delay for t in transitions),
            initial,
        )
    except ModelValidationError as exc:
        span = transitions[0].span if transitions else None
        for syntax in transitions:
            if f"'{syntax.name}'" in exc.message:
                span = syntax.span
                break
        raise ModelValidationError(exc.message, exc.span or span) from None
    logger.debug(
        "Parsed Petri net with %d places and %d transitions",
        len(net.places),
        len(net.transitions),
    )
    return net


def parse_model(source: Union[str, bytes]) -> Union[TimedPSystem, TimedPetriNet]:
    """Parse either format, chosen by the leading keyword."""
    first = _TokenStream(source).peek()
    if first.kind is TokenKind.IDENT and first.text == "psystem":
        return parse_psystem(source)
    if first.kind is TokenKind.IDENT and first.text == "petri":
        return parse_petri(source)
    raise ParseError(first.span, ["'psystem'", "'petri'"], first.describe())
