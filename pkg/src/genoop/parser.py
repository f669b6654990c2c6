"""Lexer, recursive-descent parser and renderer for MiniGen.

Grammar::

    unit    := class*
    class   := "class" IDENT tparams? ("extends" type)? "{" member* "}"
    tparams := "<" tparam ("," tparam)* ">"
    tparam  := IDENT ("extends" type)? | "[" IDENT ":" type "-" type "]"
    type    := IDENT targs? | "?" (("extends" | "super") type)*
    targs   := "<" type ("," type)* ">"
    member  := modifier* (field | ctor | method)

Statement bodies are not parsed.  Their text is kept as is, except that the
type of every ``new C<...>(`` expression is parsed into a term so later stages
can rewrite it.
"""
from __future__ import annotations

import bisect
import re
from dataclasses import dataclass
from typing import Collection, Iterable, Optional

from .errors import DeclarationError, MiniGenSyntaxError
from .syntax import (
    Body,
    ClassDecl,
    Ctor,
    Field,
    Instantiation,
    Method,
    Param,
    SourceUnit,
    TypeParamDecl,
)
from .terms import BOTTOM, TOP, VOID, App, Bottom, Var, Wildcard, render_type

MODIFIERS = frozenset({"private", "public", "protected", "static", "final", "abstract"})
TOP_NAMES = frozenset({"Object", "O"})
BOTTOM_NAMES = frozenset({"Null", "N"})

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>//[^\n]*|/\*.*?\*/)
  | (?P<ident>[A-Za-z_$][A-Za-z0-9_$]*)
  | (?P<number>\d+)
  | (?P<punct>[<>\[\]{}(),:;?\-.=])
    """,
    re.VERBOSE | re.DOTALL,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "number", "punct" or "eof"
    text: str
    start: int
    end: int


class _Scanner:
    def __init__(self, text: str, source_name: str, pos: int = 0):
        self.text = text
        self.source_name = source_name
        self.pos = pos
        self._buffer: list[Token] = []
        self._line_starts = [0] + [m.end() for m in re.finditer(r"\n", text)]
        self.last_end = pos

    def where(self, offset: int) -> tuple:
        line = bisect.bisect_right(self._line_starts, offset)
        return line, offset - self._line_starts[line - 1] + 1

    def error(self, message: str, offset: int, expected=()) -> MiniGenSyntaxError:
        line, col = self.where(offset)
        return MiniGenSyntaxError(message, line, col, expected, self.source_name)

    def _lex(self) -> Token:
        while True:
            if self.pos >= len(self.text):
                return Token("eof", "", self.pos, self.pos)
            if self.text.startswith("/*", self.pos) and "*/" not in self.text[self.pos + 2:]:
                raise self.error("unterminated comment", self.pos)
            m = _TOKEN.match(self.text, self.pos)
            if m is None:
                raise self.error(f"unexpected character {self.text[self.pos]!r}", self.pos)
            self.pos = m.end()
            kind = m.lastgroup
            if kind in ("ws", "comment"):
                continue
            return Token(kind, m.group(), m.start(), m.end())

    def peek(self, k: int = 0) -> Token:
        while len(self._buffer) <= k:
            self._buffer.append(self._lex())
        return self._buffer[k]

    def next(self) -> Token:
        tok = self.peek()
        self._buffer.pop(0)
        self.last_end = tok.end
        return tok

    def at(self, text: str, k: int = 0) -> bool:
        tok = self.peek(k)
        return tok.kind != "eof" and tok.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.next()
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.text != text or tok.kind == "eof":
            raise self.error(f"unexpected {_describe(tok)}", tok.start, [repr(text)])
        return self.next()

    def ident(self, what: str = "identifier") -> Token:
        tok = self.peek()
        if tok.kind != "ident":
            raise self.error(f"unexpected {_describe(tok)}", tok.start, [what])
        return self.next()

    def raw_block(self) -> tuple:
        """Consume raw text up to the brace matching an already-consumed ``{``.

        Returns the inner text, its start offset, and the offsets of ``new``
        keywords found outside comments and literals.
        """
        assert not self._buffer, "raw_block needs an empty lookahead buffer"
        text, i, start = self.text, self.pos, self.pos
        depth, news = 1, []
        while i < len(text):
            ch = text[i]
            if text.startswith("//", i):
                j = text.find("\n", i)
                i = len(text) if j < 0 else j
                continue
            if text.startswith("/*", i):
                j = text.find("*/", i + 2)
                if j < 0:
                    raise self.error("unterminated comment", i)
                i = j + 2
                continue
            if ch in "\"'":
                j = i + 1
                while j < len(text) and text[j] != ch:
                    j += 2 if text[j] == "\\" else 1
                if j >= len(text):
                    raise self.error("unterminated literal", i)
                i = j + 1
                continue
            if ch.isalpha() or ch in "_$":
                m = re.compile(r"[A-Za-z0-9_$]+").match(text, i)
                if m.group() == "new":
                    news.append(i)
                i = m.end()
                continue
            if ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
                if depth == 0:
                    self.pos = self.last_end = i + 1
                    return text[start:i], start, news
            i += 1
        raise self.error("unterminated block", start - 1, ["'}'"])


def _describe(tok: Token) -> str:
    return "end of input" if tok.kind == "eof" else repr(tok.text)


class _Parser:
    def __init__(self, text: str, source_name: str = "<input>"):
        self.text = text
        self.source_name = source_name
        self.s = _Scanner(text, source_name)

    # -- types -------------------------------------------------------------

    def type(self, scope: Collection[str], allow_wildcard: bool = False):
        s = self.s
        tok = s.peek()
        if s.at("?"):
            if not allow_wildcard:
                raise s.error("wildcard is only allowed as a type argument", tok.start)
            s.next()
            lower, upper = BOTTOM, TOP
            seen = set()
            while s.at("extends") or s.at("super"):
                kw = s.next()
                if kw.text in seen:
                    raise s.error(f"duplicate '{kw.text}' bound", kw.start)
                seen.add(kw.text)
                bound = self.type(scope)
                if kw.text == "extends":
                    upper = bound
                else:
                    lower = bound
            return Wildcard(lower, upper)
        name = s.ident("type")
        args = []
        if s.at("<"):
            s.next()
            args.append(self.type(scope, allow_wildcard=True))
            while s.accept(","):
                args.append(self.type(scope, allow_wildcard=True))
            if not s.at(">"):
                tok = s.peek()
                raise s.error(f"unexpected {_describe(tok)}", tok.start, ["','", "'>'"])
            s.next()
        if name.text in scope:
            if args:
                raise s.error(f"type variable {name.text} cannot take arguments", name.start)
            return Var(name.text)
        if not args and name.text in TOP_NAMES:
            return TOP
        if not args and name.text in BOTTOM_NAMES:
            return BOTTOM
        return App(name.text, tuple(args))

    # -- declarations ------------------------------------------------------

    def unit(self) -> SourceUnit:
        classes, seen = [], set()
        while self.s.peek().kind != "eof":
            tok = self.s.peek()
            decl = self.class_decl()
            if decl.name in seen:
                line, col = self.s.where(tok.start)
                raise DeclarationError(
                    f"{self.source_name}:{line}:{col}: duplicate class {decl.name}"
                )
            seen.add(decl.name)
            classes.append(decl)
        return SourceUnit(tuple(classes), self.source_name)

    def class_decl(self) -> ClassDecl:
        s = self.s
        s.expect("class")
        name = s.ident("class name").text
        params = self.type_params() if s.at("<") else ()
        scope = {p.name for p in params}
        superclass = None
        if s.accept("extends"):
            tok = s.peek()
            superclass = self.type(scope)
            if isinstance(superclass, (Var, Bottom)):
                raise s.error("superclass must be a class type", tok.start)
        s.expect("{")
        members = []
        while not s.at("}"):
            if s.peek().kind == "eof":
                raise s.error("unexpected end of input", s.peek().start, ["'}'"])
            members.append(self.member(name, scope))
        s.expect("}")
        decl = ClassDecl(name, params, superclass, tuple(members))
        _check_members(decl, self.source_name)
        return decl

    def type_params(self) -> tuple:
        s = self.s
        s.expect("<")
        raw = [self.type_param()]
        while s.accept(","):
            raw.append(self.type_param())
        s.expect(">")
        names = [p.name for p, _ in raw]
        for (p, tok) in raw:
            if names.count(p.name) > 1:
                line, col = s.where(tok.start)
                raise DeclarationError(
                    f"{self.source_name}:{line}:{col}: duplicate type parameter {p.name}"
                )
        # The scope of a parameter is the whole clause.
        scope = set(names)
        return tuple(
            TypeParamDecl(
                p.name,
                None if p.lower is None else _bind_vars(p.lower, scope),
                None if p.upper is None else _bind_vars(p.upper, scope),
            )
            for p, _ in raw
        )

    def type_param(self):
        s = self.s
        tok = s.peek()
        if s.accept("["):
            name = s.ident("type parameter").text
            s.expect(":")
            lower = self.type(())
            s.expect("-")
            upper = self.type(())
            s.expect("]")
            return TypeParamDecl(name, lower, upper), tok
        name = s.ident("type parameter").text
        upper = self.type(()) if s.accept("extends") else None
        return TypeParamDecl(name, None, upper), tok

    def member(self, class_name: str, scope):
        s = self.s
        mods = []
        while s.peek().kind == "ident" and s.peek().text in MODIFIERS:
            mods.append(s.next().text)
        mods = tuple(mods)
        if s.at(class_name) and s.at("(", 1):
            s.next()
            params = self.params(scope)
            return Ctor(params, self.body(scope), mods)
        if s.accept("void"):
            ret = VOID
        else:
            ret = self.type(scope)
        label = s.ident("member name").text
        if s.at("("):
            params = self.params(scope)
            return Method(label, ret, params, self.body(scope), mods)
        tok = s.peek()
        if ret is VOID:
            raise s.error("field cannot have type void", tok.start, ["'('"])
        if not s.at(";"):
            raise s.error(f"unexpected {_describe(tok)}", tok.start, ["'('", "';'"])
        s.next()
        return Field(label, ret, mods)

    def params(self, scope) -> tuple:
        s = self.s
        s.expect("(")
        out = []
        if not s.at(")"):
            while True:
                while s.peek().text == "final" and s.peek().kind == "ident":
                    s.next()
                ty = self.type(scope)
                out.append(Param(s.ident("parameter name").text, ty))
                if not s.accept(","):
                    break
        s.expect(")")
        return tuple(out)

    def body(self, scope) -> Body:
        self.s.expect("{")
        inner, start, news = self.s.raw_block()
        segments, cursor = [], 0
        for offset in news:
            found = self._instantiation(offset + 3, scope)
            if found is None:
                continue
            ty_start, ty_end, term = found
            rel_start, rel_end = ty_start - start, ty_end - start
            if rel_start < cursor:
                continue
            segments.append(inner[cursor:rel_start])
            segments.append(Instantiation(term))
            cursor = rel_end
        segments.append(inner[cursor:])
        return Body(tuple(seg for seg in segments if seg != ""))

    def _instantiation(self, pos: int, scope) -> Optional[tuple]:
        sub = _Parser(self.text, self.source_name)
        sub.s = _Scanner(self.text, self.source_name, pos)
        try:
            first = sub.s.peek()
            if first.kind != "ident":
                return None
            term = sub.type(scope)
            end = sub.s.last_end
            if not sub.s.at("("):
                return None
        except MiniGenSyntaxError:
            return None
        return first.start, end, term


def _bind_vars(term, scope):
    """Turn bare class names that are in ``scope`` into variables."""
    if isinstance(term, App):
        if term.name in scope:
            if term.args:
                raise DeclarationError(f"type variable {term.name} cannot take arguments")
            return Var(term.name)
        return App(term.name, tuple(_bind_vars(a, scope) for a in term.args))
    if isinstance(term, Wildcard):
        return Wildcard(_bind_vars(term.lower, scope), _bind_vars(term.upper, scope))
    return term


def _check_members(decl: ClassDecl, source_name: str) -> None:
    fields, methods, ctors = set(), set(), 0
    for m in decl.members:
        if isinstance(m, Field):
            if m.label in fields:
                raise DeclarationError(f"{source_name}: duplicate field {decl.name}.{m.label}")
            fields.add(m.label)
        elif isinstance(m, Method):
            if m.label in methods:
                raise DeclarationError(f"{source_name}: duplicate method {decl.name}.{m.label}")
            methods.add(m.label)
        else:
            ctors += 1
            if ctors > 1:
                raise DeclarationError(f"{source_name}: class {decl.name} has more than one constructor")


def parse_program(source: str, source_name: str = "<input>") -> SourceUnit:
    return _Parser(source, source_name).unit()


def parse_class(source: str, source_name: str = "<input>") -> ClassDecl:
    unit = parse_program(source, source_name)
    if len(unit.classes) != 1:
        raise MiniGenSyntaxError(f"expected exactly one class, found {len(unit.classes)}",
                                 source_name=source_name)
    return unit.classes[0]


def parse_type(source: str, variables: Iterable[str] = ()):
    """Parse a single type.  Names listed in ``variables`` become ``Var``s."""
    p = _Parser(source, "<type>")
    term = p.type(frozenset(variables))
    tok = p.s.peek()
    if tok.kind != "eof":
        raise p.s.error(f"unexpected {_describe(tok)} after type", tok.start, ["end of input"])
    return term


# -- rendering ---------------------------------------------------------------


def render(node, short_names: bool = False) -> str:
    if isinstance(node, SourceUnit):
        return "\n\n".join(render(c, short_names) for c in node.classes) + (
            "\n" if node.classes else ""
        )
    if isinstance(node, ClassDecl):
        return _render_class(node, short_names)
    if isinstance(node, TypeParamDecl):
        return _render_param(node, short_names)
    return render_type(node, short_names)


def _render_param(p: TypeParamDecl, short: bool) -> str:
    if p.is_plain:
        return p.name
    if p.lower is None:
        return f"{p.name} extends {render_type(p.upper, short)}"
    upper = TOP if p.upper is None else p.upper
    return f"[{p.name}:{render_type(p.lower, short)}-{render_type(upper, short)}]"


def _render_body(body: Body, short: bool) -> str:
    out = []
    for seg in body.segments:
        out.append(render_type(seg.type, short) if isinstance(seg, Instantiation) else seg)
    return "{" + "".join(out) + "}"


def _render_params(params, short: bool) -> str:
    return ", ".join(f"{render_type(p.type, short)} {p.label}" for p in params)


def _render_class(decl: ClassDecl, short: bool) -> str:
    head = f"class {decl.name}"
    if decl.type_params:
        head += "<" + ", ".join(_render_param(p, short) for p in decl.type_params) + ">"
    if decl.superclass is not None:
        head += f" extends {render_type(decl.superclass, short)}"
    lines = [head + " {"]
    for m in decl.members:
        mods = "".join(f"{x} " for x in m.modifiers)
        if isinstance(m, Field):
            lines.append(f"  {mods}{render_type(m.type, short)} {m.label};")
        elif isinstance(m, Ctor):
            lines.append(
                f"  {mods}{decl.name}({_render_params(m.params, short)}) {_render_body(m.body, short)}"
            )
        else:
            lines.append(
                f"  {mods}{render_type(m.return_type, short)} {m.label}"
                f"({_render_params(m.params, short)}) {_render_body(m.body, short)}"
            )
    lines.append("}")
    return "\n".join(lines)


_NORMALIZE = re.compile(r"//[^\n]*|/\*.*?\*/", re.DOTALL)


def token_stream(text: str) -> list:
    """Tokens of ``text`` with comments and whitespace dropped.

    Used to compare rendered source against reference listings.
    """
    return re.findall(r"\w+|\S", _NORMALIZE.sub(" ", text))
