"""Class signature constructors, fully-generified signatures and their checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .errors import ArityError, DeclarationError, GenoopError, WildcardError
from .syntax import ClassDecl, Ctor, Field, Method, TypeParamDecl
from .table import ClassTable
from .terms import (
    BOTTOM,
    TOP,
    VOID,
    App,
    Bottom,
    Top,
    Var,
    Void,
    Wildcard,
    box_primitive,
    free_vars,
    map_classes,
    render_type,
    substitute,
)

INIT = "<init>"

SubtypeOracle = Callable[[object, object], bool]


@dataclass(frozen=True)
class SignatureConstructor:
    """``(name, params, supers, fields, methods)``.

    Fields are ``(label, type)`` pairs and methods ``(label, param types,
    return type)`` triples.  A constructor is the method ``<init>`` returning
    ``VOID``.
    """

    name: str
    params: tuple = ()
    supers: tuple = ()
    fields: tuple = ()
    methods: tuple = ()

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "params": [
                {"name": p, "lower": "Null", "upper": "Object", "synthetic": False}
                for p in self.params
            ],
            "supers": [render_type(s) for s in self.supers],
            "fields": [{"label": l, "type": render_type(t)} for l, t in self.fields],
            "methods": [
                {"label": l, "params": [render_type(p) for p in ps], "returns": render_type(r)}
                for l, ps, r in self.methods
            ],
        }


@dataclass(frozen=True)
class GroundSignature:
    """A signature constructor applied to ground arguments."""

    name: str
    args: tuple
    supers: tuple
    fields: tuple
    methods: tuple

    def same_members(self, other) -> bool:
        return (self.supers, self.fields, self.methods) == (other.supers, other.fields, other.methods)


@dataclass(frozen=True)
class NominalInterval:
    """A named interval ``[name: lower - upper]``.

    Equality and hashing go by name only; two intervals with the same bounds
    and different names stand for different types.  Use ``same_bounds`` to
    compare bounds.
    """

    name: str
    lower: object = field(default=BOTTOM, compare=False)
    upper: object = field(default=TOP, compare=False)
    synthetic: bool = field(default=False, compare=False)

    @classmethod
    def of(cls, p: TypeParamDecl, synthetic: bool = False) -> "NominalInterval":
        q = p.as_interval()
        return cls(q.name, q.lower, q.upper, synthetic)

    def render(self, short: bool = True) -> str:
        return f"[{self.name}:{render_type(self.lower, short)}-{render_type(self.upper, short)}]"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "lower": render_type(self.lower),
            "upper": render_type(self.upper),
            "synthetic": self.synthetic,
        }


def same_bounds(a: NominalInterval, b: NominalInterval) -> bool:
    return a.lower == b.lower and a.upper == b.upper


@dataclass(frozen=True)
class GenerifiedSignatureConstructor:
    """Fully-generified signature: every member type is a variable name."""

    name: str
    params: tuple = ()
    supers: tuple = ()
    fields: tuple = ()
    methods: tuple = ()

    @property
    def param_names(self) -> tuple:
        return tuple(p.name for p in self.params)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "params": [p.to_json() for p in self.params],
            "supers": [render_type(s) for s in self.supers],
            "fields": [{"label": l, "type": v} for l, v in self.fields],
            "methods": [
                {"label": l, "params": list(ps), "returns": render_type(r) if isinstance(r, Void) else r}
                for l, ps, r in self.methods
            ],
        }


@dataclass(frozen=True)
class Check:
    """Outcome of a well-formedness check; truthy when it passed."""

    ok: bool
    detail: str = ""
    names: tuple = ()

    def __bool__(self) -> bool:
        return self.ok


OK = Check(True)


# -- building and instantiating -------------------------------------------------


def build_signature(decl: ClassDecl, table: ClassTable, *, allow_wildcards: bool = False,
                    allow_raw: bool = False) -> SignatureConstructor:
    """Project a class declaration onto its signature constructor.

    Parameter bounds are dropped.  Wildcards are rejected unless
    ``allow_wildcards`` is set, which is how generified pipelines compare
    against the original class.
    """
    names = decl.param_names
    if len(set(names)) != len(names):
        raise DeclarationError(f"duplicate type parameter in {decl.name}")

    def conv(t):
        t = box_primitive(t)
        try:
            table.check_type(t, names, allow_wildcards=allow_wildcards, allow_raw=allow_raw,
                             extra=decl)
        except WildcardError as e:
            raise WildcardError(f"class {decl.name}: {e}; wildcards belong to the generified form") from None
        except GenoopError as e:
            raise type(e)(f"class {decl.name}: {e}") from None
        return t

    supers = () if decl.superclass is None else (conv(decl.superclass),)
    fields, methods = [], []
    for m in decl.members:
        if isinstance(m, Field):
            fields.append((m.label, conv(m.type)))
        elif isinstance(m, Ctor):
            methods.append((INIT, tuple(conv(p.type) for p in m.params), VOID))
        elif isinstance(m, Method):
            ret = VOID if isinstance(m.return_type, Void) else conv(m.return_type)
            methods.append((m.label, tuple(conv(p.type) for p in m.params), ret))
    return SignatureConstructor(decl.name, names, supers, tuple(fields), tuple(methods))


def substitute_members(sig, mapping) -> tuple:
    """Apply ``mapping`` to the supers, fields and methods of a signature."""

    def sub(t):
        if isinstance(t, Void):
            return t
        if isinstance(t, str):
            t = Var(t)
        return substitute(t, mapping)

    supers = tuple(sub(s) for s in sig.supers)
    fields = tuple((l, sub(t)) for l, t in sig.fields)
    methods = tuple((l, tuple(sub(p) for p in ps), sub(r)) for l, ps, r in sig.methods)
    return supers, fields, methods


def instantiate(sc: SignatureConstructor, args: Sequence) -> GroundSignature:
    """Substitute ``args`` for the parameters of ``sc``, matched by position."""
    args = tuple(args)
    if len(args) != len(sc.params):
        raise ArityError(f"{sc.name} takes {len(sc.params)} type arguments, got {len(args)}")
    for a in args:
        if free_vars(a):
            raise GenoopError(f"argument {render_type(a)} is not ground")
    supers, fields, methods = substitute_members(sc, dict(zip(sc.params, args)))
    return GroundSignature(sc.name, args, supers, fields, methods)


def rename_classes(sc: SignatureConstructor, rename: Callable[[str], str]) -> SignatureConstructor:
    def ren(t):
        return t if isinstance(t, Void) else map_classes(t, rename)

    return SignatureConstructor(
        rename(sc.name),
        sc.params,
        tuple(ren(s) for s in sc.supers),
        tuple((l, ren(t)) for l, t in sc.fields),
        tuple((l, tuple(ren(p) for p in ps), ren(r)) for l, ps, r in sc.methods),
    )


# -- checks ---------------------------------------------------------------------


def check_interval(iv: NominalInterval, oracle: SubtypeOracle) -> Check:
    """Valid iff the oracle confirms ``iv.lower <: iv.upper``."""
    holds = oracle(iv.lower, iv.upper)
    if holds:
        return OK
    return Check(False, f"{render_type(iv.lower)} <: {render_type(iv.upper)} fails", (iv.name,))


def check_noncircularity(params: Sequence) -> Check:
    """Reject a parameter clause in which some variable bounds itself nakedly.

    There is an edge ``X -> Z`` when ``Z`` is the whole lower or upper bound
    of ``X``.  Occurrences under a class application (``Comparable<X>``) do
    not count, so F-bounds pass.  On failure ``names`` lists one cycle.
    """
    declared = {p.name for p in params}
    edges = {p.name: [] for p in params}
    for p in params:
        for b in (p.lower, p.upper):
            if isinstance(b, Var) and b.name in declared:
                edges[p.name].append(b.name)

    colour: dict = {}
    stack: list = []

    def visit(n):
        colour[n] = 1
        stack.append(n)
        for m in edges[n]:
            if colour.get(m) == 1:
                return stack[stack.index(m):]
            if m not in colour:
                found = visit(m)
                if found:
                    return found
        stack.pop()
        colour[n] = 2
        return None

    for p in params:
        if p.name not in colour:
            cycle = visit(p.name)
            if cycle:
                return Check(False, "naked bound cycle: " + " -> ".join(cycle + [cycle[0]]),
                             tuple(cycle))
    return OK


def check_single_nesting(gsc: GenerifiedSignatureConstructor) -> Check:
    """Every class argument in bounds and supers is a declared variable, and
    every member type is a variable reference."""
    declared = set(gsc.param_names)
    problems = []

    def flat(t, where):
        if isinstance(t, (Top, Bottom)):
            return
        if isinstance(t, Var):
            if t.name not in declared:
                problems.append(f"{where}: undeclared variable {t.name}")
            return
        if isinstance(t, App):
            for a in t.args:
                if not (isinstance(a, Var) and a.name in declared):
                    problems.append(f"{where}: argument {render_type(a)} of {render_type(t)}")
            return
        problems.append(f"{where}: {render_type(t)} is not a flat type")

    for p in gsc.params:
        flat(p.lower, f"lower bound of {p.name}")
        flat(p.upper, f"upper bound of {p.name}")
    for s in gsc.supers:
        if not isinstance(s, App):
            problems.append(f"supertype {render_type(s)}")
        else:
            flat(s, f"supertype {render_type(s)}")

    def var(v, where):
        if not (isinstance(v, str) and v in declared):
            problems.append(f"{where}: {v} is not a declared variable")

    for label, v in gsc.fields:
        var(v, f"field {label}")
    for label, ps, r in gsc.methods:
        for i, v in enumerate(ps):
            var(v, f"parameter {i} of {label}")
        if not isinstance(r, Void):
            var(r, f"return type of {label}")
    if problems:
        return Check(False, "; ".join(problems))
    return OK
