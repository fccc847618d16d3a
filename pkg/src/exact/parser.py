"""Lexer, recursive-descent parser, and canonical printer for motion programs.

Surface syntax, one program per string:

    [0,300]LArm.x(0.3);[300,600]RArm.y(0.1)

A program is one or more motions separated by ';'. A motion is a closed
timestep window '[t1,t2]' followed by one or more sensors separated by a
single space. A sensor is 'Joint.axis(target)' with axis in {x,y,z} and
target in [-1,1] with at most four fraction digits.

The language is deliberately rigid so that text, AST, and the prefix
automaton in :mod:`exact.grammar` agree exactly:

* whitespace is legal only as the single-space sensor separator;
* integer literals carry no sign and no leading zeros;
* number literals are '-'? digits ('.' digits)? with the same leading-zero
  rule and a bounded fraction.

``parse`` raises :class:`ParseError` on the first syntax violation and
:class:`~exact.errors.ValidationError` on semantic violations (target out of
range, unknown joint, duplicate channel, t1 >= t2, horizon overflow).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterator

from .core import (DEFAULT_REGISTRY, Horizon, JointAxisChannel, MotionProgram,
                   MotionSpec, Registry, SensorTarget, TARGET_SCALE,
                   ValidationIssue, as_horizon, canonicalize, validate)
from .errors import ExactError, RegistryError, ValidationError

MAX_TARGET_DECIMALS = 4


class TokenKind(Enum):
    LBRACKET = "LBracket"
    RBRACKET = "RBracket"
    COMMA = "Comma"
    SEMICOLON = "Semicolon"
    DOT = "Dot"
    LPAREN = "LParen"
    RPAREN = "RParen"
    INTEGER = "Integer"
    NUMBER = "Number"
    IDENTIFIER = "Identifier"
    EOF = "EOF"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    start: int
    end: int

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


class ParseError(ExactError):
    def __init__(self, span: tuple[int, int], expected: frozenset[TokenKind],
                 found: Token | None, note: str | None = None):
        self.span = span
        self.expected = expected
        self.found = found
        what = f"{found.kind.value} {found.lexeme!r}" if found is not None else "unlexable input"
        names = ", ".join(sorted(k.value for k in expected))
        msg = f"expected one of [{names}], found {what} at {span[0]}..{span[1]}"
        if note:
            msg += f" ({note})"
        super().__init__(msg)


_TOKEN_RE = re.compile(
    r"(?P<Number>-\d+(?:\.\d+)?|\d+\.\d+)"
    r"|(?P<Integer>\d+)"
    r"|(?P<Identifier>[A-Za-z][A-Za-z0-9]*)"
    r"|(?P<LBracket>\[)|(?P<RBracket>\])|(?P<LParen>\()|(?P<RParen>\))"
    r"|(?P<Comma>,)|(?P<Semicolon>;)|(?P<Dot>\.)"
    r"|(?P<Space> )"
)

_KIND_BY_GROUP = {k.value: k for k in TokenKind}


def tokenize(text: str) -> list[Token]:
    """Scan the whole input. Single spaces are skipped (the parser re-checks
    their placement through token spans); any other character is an error."""
    tokens: list[Token] = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError((pos, pos + 1), frozenset(_KIND_BY_GROUP.values()) - {TokenKind.EOF},
                             None, note=f"cannot lex character {text[pos]!r}")
        group = m.lastgroup
        pos = m.end()
        if group == "Space":
            continue
        tokens.append(Token(_KIND_BY_GROUP[group], m.group(), m.start(), m.end()))
    tokens.append(Token(TokenKind.EOF, "", n, n))
    return tokens


@dataclass(frozen=True)
class ParsedProgram:
    """Parse result: the AST in source order plus validation warnings."""

    program: MotionProgram
    warnings: tuple[ValidationIssue, ...]


class _Parser:
    def __init__(self, text: str, horizon: Horizon, registry: Registry, max_decimals: int):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.horizon = horizon
        self.registry = registry
        self.max_decimals = max_decimals

    def peek(self) -> Token:
        return self.tokens[self.i]

    def prev_end(self) -> int:
        return self.tokens[self.i - 1].end if self.i > 0 else 0

    def take(self, kind: TokenKind, gap: int = 0) -> Token:
        tok = self.peek()
        want_start = self.prev_end() + gap
        if tok.kind is not kind or tok.start != want_start:
            exp = frozenset({kind})
            if tok.start != want_start:
                raise ParseError((self.prev_end(), tok.start), exp, tok,
                                 note="whitespace is only allowed as a single space between sensors")
            raise ParseError(tok.span, exp, tok)
        self.i += 1
        return tok

    def _check_int_lexeme(self, tok: Token, digits: str) -> int:
        if len(digits) > 1 and digits[0] == "0":
            raise ParseError(tok.span, frozenset({tok.kind}), tok, note="leading zeros are not allowed")
        return int(digits)

    def timestep(self) -> int:
        tok = self.take(TokenKind.INTEGER)
        return self._check_int_lexeme(tok, tok.lexeme)

    def target(self) -> int:
        """Target literal as a fixed-point integer, exact (no float rounding)."""
        tok = self.peek()
        if tok.kind not in (TokenKind.INTEGER, TokenKind.NUMBER):
            raise ParseError(tok.span, frozenset({TokenKind.INTEGER, TokenKind.NUMBER}), tok)
        self.take(tok.kind)
        body = tok.lexeme
        sign = 1
        if body.startswith("-"):
            sign, body = -1, body[1:]
        int_part, _, frac = body.partition(".")
        self._check_int_lexeme(tok, int_part)
        if len(frac) > self.max_decimals:
            raise ParseError(tok.span, frozenset({tok.kind}), tok,
                             note=f"at most {self.max_decimals} fraction digits")
        scaled = sign * (int(int_part) * TARGET_SCALE + int(frac or "0") * 10 ** (4 - len(frac)))
        if not -TARGET_SCALE <= scaled <= TARGET_SCALE:
            raise ValidationError(f"target {tok.lexeme} out of [-1, 1]", tok.span)
        return scaled

    def sensor(self, used: set[int]) -> SensorTarget:
        name_tok = self.peek()
        name = self.take(TokenKind.IDENTIFIER).lexeme
        try:
            joint = self.registry.resolve(name)
        except RegistryError as e:
            raise ValidationError(str(e), name_tok.span) from None
        self.take(TokenKind.DOT)
        axis_tok = self.peek()
        axis = self.take(TokenKind.IDENTIFIER).lexeme
        if axis not in ("x", "y", "z"):
            raise ValidationError(f"unknown axis {axis!r}, expected x, y or z", axis_tok.span)
        chan = self.registry.channel_index(joint.name, axis)
        if chan in used:
            raise ValidationError(
                f"duplicate channel {joint.name}.{axis} in one motion",
                (name_tok.start, axis_tok.end))
        used.add(chan)
        self.take(TokenKind.LPAREN)
        scaled = self.target()
        self.take(TokenKind.RPAREN)
        return SensorTarget(JointAxisChannel(joint.name, axis), scaled)

    def motion(self) -> tuple[MotionSpec, tuple[int, int]]:
        start = self.take(TokenKind.LBRACKET).start
        t1 = self.timestep()
        self.take(TokenKind.COMMA)
        t2 = self.timestep()
        self.take(TokenKind.RBRACKET)
        used: set[int] = set()
        sensors = [self.sensor(used)]
        while True:
            nxt = self.peek()
            if nxt.kind is TokenKind.IDENTIFIER and nxt.start == self.prev_end() + 1 \
                    and self.text[self.prev_end()] == " ":
                sensors.append(self.sensor(used))
            else:
                break
        return MotionSpec(t1, t2, tuple(sensors)), (start, self.prev_end())

    def program(self) -> ParsedProgram:
        motions = []
        spans = []
        m, sp = self.motion()
        motions.append(m)
        spans.append(sp)
        while self.peek().kind is TokenKind.SEMICOLON:
            self.take(TokenKind.SEMICOLON)
            m, sp = self.motion()
            motions.append(m)
            spans.append(sp)
        self.take(TokenKind.EOF)
        prog = MotionProgram(tuple(motions))
        report = validate(prog, self.horizon)
        if report.errors:
            first = report.errors[0]
            span = spans[first.motion_index] if first.motion_index is not None else None
            raise ValidationError(first.message, span)
        return ParsedProgram(prog, report.warnings)


def parse_with_report(text: str, horizon: Horizon | int | None = None, *,
                      registry: Registry = DEFAULT_REGISTRY,
                      max_decimals: int = MAX_TARGET_DECIMALS) -> ParsedProgram:
    return _Parser(text, as_horizon(horizon), registry, max_decimals).program()


def parse(text: str, horizon: Horizon | int | None = None, *,
          registry: Registry = DEFAULT_REGISTRY,
          max_decimals: int = MAX_TARGET_DECIMALS) -> MotionProgram:
    """Parse a program, raising on syntax or validation errors.

    The returned AST reflects source order; warnings (window overlap) are
    available through :func:`parse_with_report`.
    """
    return parse_with_report(text, horizon, registry=registry, max_decimals=max_decimals).program


def format_target(scaled: int) -> str:
    """Fixed-point target as canonical text: trailing zeros trimmed, at least
    one fraction digit, no negative zero."""
    sign = "-" if scaled < 0 else ""
    mag = abs(scaled)
    int_part, frac = divmod(mag, TARGET_SCALE)
    digits = f"{frac:04d}".rstrip("0") or "0"
    return f"{sign}{int_part}.{digits}"


def format_program(program: MotionProgram, registry: Registry = DEFAULT_REGISTRY) -> str:
    """Canonical text: motions canonically ordered and joined by ';', sensors
    joined by single spaces, shoulder joints printed via their arm aliases.

    ``parse(format_program(p))`` equals ``canonicalize(p)``.
    """
    parts = []
    for m in canonicalize(program).motions:
        sensors = " ".join(
            f"{registry.print_name(s.channel.joint)}.{s.channel.axis}({format_target(s.scaled)})"
            for s in m.sensors)
        parts.append(f"[{m.t_start},{m.t_end}]{sensors}")
    return ";".join(parts)


def iter_program_lines(path_text: str) -> Iterator[str]:
    """Yield non-empty stripped lines; convenience for collection handling."""
    for line in path_text.splitlines():
        line = line.strip()
        if line:
            yield line
