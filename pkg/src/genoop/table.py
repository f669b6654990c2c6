"""Class tables: the universe of declarations that names resolve against."""
from __future__ import annotations

from typing import Iterable, Optional

from .errors import ArityError, DeclarationError, ResolutionError, WildcardError
from .parser import parse_program
from .syntax import ClassDecl, SourceUnit, TypeParamDecl
from .terms import App, Bottom, Top, Var, Wildcard, substitute

# Object and Null are built in; these are the boxed primitives every table has.
CORE_SOURCE = """
class Boolean {}
class Byte {}
class Character {}
class Short {}
class Integer {}
class Long {}
class Float {}
class Double {}
class String {}
"""

# Demo classes used by the worked examples (enabled with --stdlib).
STDLIB_SOURCE = """
class Comparable<T> {}
class Enum<E> extends Comparable<E> {}
class List<T> {}
class Shape {}
class Canvas {}
"""


class ClassTable:
    """Immutable mapping from class names to declarations.

    ``Object`` and ``Null`` are always present and have no declaration.
    Construction checks that every superclass resolves with the right arity
    and that inheritance is acyclic.
    """

    BUILTIN = ("Object", "Null")

    def __init__(self, classes: Iterable[ClassDecl] = (), origins: Optional[dict] = None):
        origins = origins or {}
        self._classes: dict[str, ClassDecl] = {}
        for decl in classes:
            if decl.name in self._classes or decl.name in self.BUILTIN:
                where = f"{origins[decl.name]}: " if decl.name in origins else ""
                raise DeclarationError(f"{where}duplicate class {decl.name}")
            self._classes[decl.name] = decl
        for decl in self._classes.values():
            if decl.superclass is not None:
                try:
                    self.check_type(decl.superclass, decl.param_names)
                except (ResolutionError, ArityError) as e:
                    where = f"{origins[decl.name]}: " if decl.name in origins else ""
                    raise type(e)(f"{where}class {decl.name}, superclass: {e}") from None
        self._check_acyclic()

    @classmethod
    def build(cls, *units: SourceUnit, stdlib: bool = False) -> "ClassTable":
        sources = [parse_program(CORE_SOURCE, "<core>")]
        if stdlib:
            sources.append(parse_program(STDLIB_SOURCE, "<stdlib>"))
        sources.extend(units)
        origins = {}
        for u in sources:
            for c in u.classes:
                origins.setdefault(c.name, u.source_name)
        return cls((c for u in sources for c in u.classes), origins)

    @classmethod
    def core(cls) -> "ClassTable":
        return cls.build()

    @classmethod
    def stdlib(cls, *units: SourceUnit) -> "ClassTable":
        return cls.build(*units, stdlib=True)

    def extended(self, *decls: ClassDecl) -> "ClassTable":
        return ClassTable([*self._classes.values(), *decls])

    def __contains__(self, name: str) -> bool:
        return name in self._classes or name in self.BUILTIN

    def __iter__(self):
        return iter(self._classes.values())

    def __len__(self):
        return len(self._classes)

    def get(self, name: str) -> ClassDecl:
        try:
            return self._classes[name]
        except KeyError:
            if name in self.BUILTIN:
                return ClassDecl(name)
            raise ResolutionError(f"unknown class {name}") from None

    def params(self, name: str) -> tuple:
        return self.get(name).type_params

    def arity(self, name: str) -> int:
        return len(self.params(name))

    def supertypes(self, t: App) -> list:
        """Declared supertypes of ``t`` with its arguments substituted in.

        Wildcard arguments are substituted as they stand, so the superclass of
        ``Enum<? extends C>`` is ``Comparable<? extends C>``.
        """
        decl = self.get(t.name)
        if decl.superclass is None or isinstance(decl.superclass, Top):
            return []
        if len(t.args) != len(decl.type_params):
            raise ArityError(f"{t.name} expects {len(decl.type_params)} arguments, got {len(t.args)}")
        mapping = dict(zip(decl.param_names, t.args))
        return [substitute(decl.superclass, mapping)]

    def check_type(self, term, variables: Iterable[str] = (), *, allow_wildcards: bool = True,
                   allow_raw: bool = False, extra: Optional[ClassDecl] = None) -> None:
        """Raise unless every name in ``term`` resolves with the declared arity."""
        variables = frozenset(variables)

        def arity(name):
            if extra is not None and name == extra.name:
                return len(extra.type_params)
            return self.arity(name)

        def walk(t, in_arg):
            if isinstance(t, Var):
                if t.name not in variables:
                    raise ResolutionError(f"unknown type variable {t.name}")
            elif isinstance(t, App):
                n = arity(t.name)
                if len(t.args) != n and not (allow_raw and not t.args):
                    raise ArityError(f"{t.name} expects {n} type arguments, got {len(t.args)}")
                for a in t.args:
                    walk(a, True)
            elif isinstance(t, Wildcard):
                if not in_arg:
                    raise WildcardError(f"wildcard {t} outside a type argument")
                if not allow_wildcards:
                    raise WildcardError(f"wildcard {t} not allowed here")
                walk(t.lower, False)
                walk(t.upper, False)
            elif not isinstance(t, (Top, Bottom)):
                raise TypeError(f"not a type term: {t!r}")

        walk(term, False)

    def _check_acyclic(self) -> None:
        state: dict[str, int] = {}

        def visit(name, trail):
            if state.get(name) == 2:
                return
            if state.get(name) == 1:
                cycle = trail[trail.index(name):]
                raise DeclarationError("cyclic inheritance: " + " -> ".join(cycle + [name]))
            state[name] = 1
            sup = self._classes[name].superclass
            if isinstance(sup, App) and sup.name in self._classes:
                visit(sup.name, trail + [name])
            state[name] = 2

        for name in self._classes:
            visit(name, [])


def param_interval(p: TypeParamDecl) -> tuple:
    q = p.as_interval()
    return q.lower, q.upper
