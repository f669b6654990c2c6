"""Type terms shared by every stage of the pipeline.

A term is one of ``Var``, ``App``, ``Top``, ``Bottom`` or ``Wildcard``.
``Wildcard`` is an interval with a lower and an upper bound; the surface
forms ``?``, ``? extends U`` and ``? super L`` are the three ways of
leaving one or both bounds at the extremes.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, Union


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return render_type(self)


@dataclass(frozen=True)
class App:
    name: str
    args: tuple = ()

    def __str__(self) -> str:
        return render_type(self)


@dataclass(frozen=True)
class Top:
    def __str__(self) -> str:
        return "Object"


@dataclass(frozen=True)
class Bottom:
    def __str__(self) -> str:
        return "Null"


TOP = Top()
BOTTOM = Bottom()


@dataclass(frozen=True)
class Wildcard:
    lower: "TypeTerm" = BOTTOM
    upper: "TypeTerm" = TOP

    @classmethod
    def extends(cls, upper: "TypeTerm") -> "Wildcard":
        return cls(BOTTOM, upper)

    @classmethod
    def super_(cls, lower: "TypeTerm") -> "Wildcard":
        return cls(lower, TOP)

    @classmethod
    def bare(cls) -> "Wildcard":
        return cls(BOTTOM, TOP)

    @property
    def is_bare(self) -> bool:
        return self.lower == BOTTOM and self.upper == TOP

    def __str__(self) -> str:
        return render_type(self)


@dataclass(frozen=True)
class Void:
    """Return marker for methods and constructors; never a type."""

    def __str__(self) -> str:
        return "void"


VOID = Void()

TypeTerm = Union[Var, App, Top, Bottom, Wildcard]

# Primitive names in signature position and the class they stand for.
BOXED = {
    "boolean": "Boolean",
    "byte": "Byte",
    "char": "Character",
    "short": "Short",
    "int": "Integer",
    "long": "Long",
    "float": "Float",
    "double": "Double",
}


def render_type(term, short: bool = False) -> str:
    if isinstance(term, Var):
        return term.name
    if isinstance(term, App):
        if not term.args:
            return term.name
        inner = ", ".join(render_type(a, short) for a in term.args)
        return f"{term.name}<{inner}>"
    if isinstance(term, Top):
        return "O" if short else "Object"
    if isinstance(term, Bottom):
        return "N" if short else "Null"
    if isinstance(term, Wildcard):
        parts = ["?"]
        if term.upper != TOP:
            parts.append(f"extends {render_type(term.upper, short)}")
        if term.lower != BOTTOM:
            parts.append(f"super {render_type(term.lower, short)}")
        return " ".join(parts)
    if isinstance(term, Void):
        return "void"
    raise TypeError(f"not a type term: {term!r}")


def subterms(term) -> Iterator:
    """Pre-order walk over a term and everything nested in it."""
    yield term
    if isinstance(term, App):
        for a in term.args:
            yield from subterms(a)
    elif isinstance(term, Wildcard):
        yield from subterms(term.lower)
        yield from subterms(term.upper)


def free_vars(term) -> frozenset:
    return frozenset(t.name for t in subterms(term) if isinstance(t, Var))


def is_ground(term) -> bool:
    return not free_vars(term)


def substitute(term, mapping: Mapping[str, object]):
    """Simultaneous substitution of terms for variable names."""
    if isinstance(term, Var):
        return mapping.get(term.name, term)
    if isinstance(term, App):
        if not term.args:
            return term
        return App(term.name, tuple(substitute(a, mapping) for a in term.args))
    if isinstance(term, Wildcard):
        return Wildcard(substitute(term.lower, mapping), substitute(term.upper, mapping))
    return term


def map_classes(term, rename: Callable[[str], str]):
    if isinstance(term, App):
        return App(rename(term.name), tuple(map_classes(a, rename) for a in term.args))
    if isinstance(term, Wildcard):
        return Wildcard(map_classes(term.lower, rename), map_classes(term.upper, rename))
    return term


def box_primitive(term):
    if isinstance(term, App) and not term.args and term.name in BOXED:
        return App(BOXED[term.name])
    return term


def normalize(term):
    """Canonical form: a wildcard whose bounds coincide is that bound."""
    if isinstance(term, App):
        if not term.args:
            return term
        return App(term.name, tuple(normalize_arg(a) for a in term.args))
    if isinstance(term, Wildcard):
        return Wildcard(normalize(term.lower), normalize(term.upper))
    return term


def normalize_arg(arg):
    if isinstance(arg, Wildcard):
        lower, upper = normalize(arg.lower), normalize(arg.upper)
        if lower == upper:
            return lower
        return Wildcard(lower, upper)
    return normalize(arg)


def bounds_of(arg) -> tuple:
    """(lower, upper) of a type argument; a proper type is its own point interval."""
    if isinstance(arg, Wildcard):
        return arg.lower, arg.upper
    return arg, arg


def canonical(term) -> str:
    return render_type(normalize(term))
