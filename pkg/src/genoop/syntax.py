"""Syntax tree for MiniGen source units."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .terms import BOTTOM, TOP, App, TypeTerm, Void


@dataclass(frozen=True)
class TypeParamDecl:
    """A type parameter.

    Plain ``T`` has both bounds ``None``; ``T extends U`` sets only ``upper``;
    the interval form ``[T:L-U]`` sets both.
    """

    name: str
    lower: Optional[TypeTerm] = None
    upper: Optional[TypeTerm] = None

    @property
    def is_plain(self) -> bool:
        return self.lower is None and self.upper is None

    def as_interval(self) -> "TypeParamDecl":
        return TypeParamDecl(
            self.name,
            BOTTOM if self.lower is None else self.lower,
            TOP if self.upper is None else self.upper,
        )


@dataclass(frozen=True)
class Instantiation:
    """The type inside a ``new C<...>(...)`` expression."""

    type: TypeTerm


@dataclass(frozen=True)
class Body:
    """Statement text kept verbatim, split around instantiation types."""

    segments: tuple = ()

    @property
    def instantiations(self) -> tuple:
        return tuple(s for s in self.segments if isinstance(s, Instantiation))


@dataclass(frozen=True)
class Param:
    label: str
    type: TypeTerm


@dataclass(frozen=True)
class Field:
    label: str
    type: TypeTerm
    modifiers: tuple = ()


@dataclass(frozen=True)
class Ctor:
    params: tuple = ()
    body: Body = field(default_factory=Body)
    modifiers: tuple = ()


@dataclass(frozen=True)
class Method:
    label: str
    return_type: Union[TypeTerm, Void]
    params: tuple = ()
    body: Body = field(default_factory=Body)
    modifiers: tuple = ()


MemberDecl = Union[Field, Ctor, Method]


@dataclass(frozen=True)
class ClassDecl:
    name: str
    type_params: tuple = ()
    superclass: Optional[TypeTerm] = None
    members: tuple = ()

    @property
    def param_names(self) -> tuple:
        return tuple(p.name for p in self.type_params)

    def as_type(self) -> App:
        from .terms import Var

        return App(self.name, tuple(Var(n) for n in self.param_names))


@dataclass(frozen=True)
class SourceUnit:
    classes: tuple = ()
    source_name: str = "<input>"

    def __getitem__(self, name: str) -> ClassDecl:
        for c in self.classes:
            if c.name == name:
                return c
        raise KeyError(name)

    def __eq__(self, other):
        # The label is diagnostics only.
        return isinstance(other, SourceUnit) and self.classes == other.classes

    def __hash__(self):
        return hash(self.classes)
