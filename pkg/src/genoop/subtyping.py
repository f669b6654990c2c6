"""Variance-aware subtyping over interval-argument types.

Type arguments are intervals: a proper type ``X`` is the point ``[X, X]`` and
a wildcard carries its own lower and upper bound.  Two instantiations of the
same class are related when every argument of the supertype encloses the
corresponding argument of the subtype.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .errors import ArityError, ResolutionError, WildcardError
from .table import ClassTable
from .terms import (
    BOTTOM,
    TOP,
    App,
    Bottom,
    Top,
    Var,
    Wildcard,
    bounds_of,
    normalize,
    normalize_arg,
    render_type,
)

# Guards against expansive inheritance, where the subtype side grows forever.
MAX_DEPTH = 256


@dataclass(frozen=True)
class Derivation:
    rule: str
    sub: object
    sup: object
    premises: tuple = ()

    def lines(self, indent: int = 0) -> list:
        head = f"{'  ' * indent}{render_type(self.sub)} <: {render_type(self.sup)}  [{self.rule}]"
        out = [head]
        for p in self.premises:
            out.extend(p.lines(indent + 1))
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


class SubtypeChecker:
    """Decides ``s <: t`` for one class table.

    ``bounds`` gives the interval of each type variable in scope; ground
    queries need none.  Results are memoized for the lifetime of the checker.
    A pair that is re-entered while still being decided fails (inductive
    reading), and such failures are never memoized.
    """

    def __init__(self, table: ClassTable, bounds: Optional[Mapping[str, tuple]] = None):
        self.table = table
        self.bounds = dict(bounds or {})
        self._memo: dict = {}
        self._active: set = set()
        self._cutoffs = 0
        self._depth = 0

    def is_subtype(self, s, t) -> bool:
        return self.derive(s, t) is not None

    def contains(self, inner, outer) -> bool:
        return self._contains(normalize_arg(inner), normalize_arg(outer)) is not None

    def derive(self, s, t) -> Optional[Derivation]:
        self._check(s)
        self._check(t)
        return self._derive(normalize(s), normalize(t))

    def _check(self, term) -> None:
        if isinstance(term, Wildcard):
            raise WildcardError(f"wildcard {term} is not a type")
        self.table.check_type(term, self.bounds.keys())

    def _derive(self, s, t) -> Optional[Derivation]:
        key = (s, t)
        if key in self._memo:
            return self._memo[key]
        if key in self._active or self._depth > MAX_DEPTH:
            self._cutoffs += 1
            return None
        self._active.add(key)
        self._depth += 1
        before = self._cutoffs
        try:
            result = self._rules(s, t)
        finally:
            self._active.discard(key)
            self._depth -= 1
        if result is not None or self._cutoffs == before:
            self._memo[key] = result
        return result

    def _rules(self, s, t) -> Optional[Derivation]:
        if s == t:
            return Derivation("reflexivity", s, t)
        if isinstance(s, Bottom):
            return Derivation("bottom", s, t)
        if isinstance(t, Top):
            return Derivation("top", s, t)
        if isinstance(s, Var):
            d = self._derive(self._bound(s.name)[1], t)
            if d is not None:
                return Derivation("variable-upper", s, t, (d,))
        if isinstance(t, Var):
            d = self._derive(s, self._bound(t.name)[0])
            if d is not None:
                return Derivation("variable-lower", s, t, (d,))
        if isinstance(s, App):
            if isinstance(t, App) and t.name == s.name:
                if len(s.args) != len(t.args):
                    raise ArityError(f"arity mismatch between {s} and {t}")
                premises = []
                for a, b in zip(s.args, t.args):
                    d = self._contains(a, b)
                    if d is None:
                        break
                    premises.extend(d)
                else:
                    return Derivation("containment", s, t, tuple(premises))
            for sup in self.table.supertypes(s):
                d = self._derive(normalize(sup), t)
                if d is not None:
                    return Derivation("inheritance", s, t, (d,))
        return None

    def _contains(self, inner, outer) -> Optional[tuple]:
        """Premises showing ``outer`` encloses ``inner``, or None."""
        if inner == outer:
            return ()
        in_lo, in_hi = bounds_of(inner)
        out_lo, out_hi = bounds_of(outer)
        lo = self._derive(out_lo, in_lo)
        if lo is None:
            return None
        hi = self._derive(in_hi, out_hi)
        if hi is None:
            return None
        return tuple(d for d in (lo, hi) if d.rule != "reflexivity")

    def _bound(self, name: str) -> tuple:
        try:
            return self.bounds[name]
        except KeyError:
            raise ResolutionError(f"unknown type variable {name}") from None


def is_subtype(s, t, table: ClassTable) -> bool:
    return SubtypeChecker(table).is_subtype(s, t)


def derive(s, t, table: ClassTable) -> Optional[Derivation]:
    return SubtypeChecker(table).derive(s, t)


def contains(inner, outer, table: ClassTable) -> bool:
    """Whether interval argument ``outer`` encloses ``inner``."""
    return SubtypeChecker(table).contains(inner, outer)


def oracle_for(table: ClassTable, params=()) -> SubtypeChecker:
    """A checker whose variable bounds come from a parameter clause.

    ``params`` holds ``TypeParamDecl``s or ``NominalInterval``s.
    """
    bounds = {}
    for p in params:
        lower = BOTTOM if p.lower is None else p.lower
        upper = TOP if p.upper is None else p.upper
        bounds[p.name] = (normalize(lower), normalize(upper))
    return SubtypeChecker(table, bounds)


# -- supertype chains ----------------------------------------------------------


def supertype_chain(t, k: int, table: ClassTable) -> list:
    """The first ``k`` steps of the canonical ascending chain from ``t``.

    Each step, in order of preference: widen the leftmost point argument
    ``X`` to ``? extends X``; otherwise advance the upper bound of the
    leftmost ``? extends U`` argument one step up its own chain; otherwise
    take the declared superclass.  The chain stops early when none applies.
    """
    if k < 0:
        raise ValueError("depth must be non-negative")
    table.check_type(t)
    chain = [normalize(t)]
    while len(chain) <= k:
        step = _chain_step(chain[-1], table)
        if step is None:
            break
        chain.append(normalize(step))
    return chain


def _chain_step(t, table: ClassTable):
    if not isinstance(t, App):
        return None
    for i, a in enumerate(t.args):
        if not isinstance(a, Wildcard):
            return _replace_arg(t, i, Wildcard.extends(a))
    for i, a in enumerate(t.args):
        if a.lower == BOTTOM and a.upper != TOP:
            up = _chain_step(a.upper, table)
            if up is not None:
                return _replace_arg(t, i, Wildcard.extends(up))
    sups = table.supertypes(t)
    return sups[0] if sups else None


def _replace_arg(t: App, i: int, arg) -> App:
    args = list(t.args)
    args[i] = arg
    return App(t.name, tuple(args))
