"""Full generification.

Every type occurring in a member signature or in a ``new`` expression is
replaced by a fresh synthetic type parameter whose interval records what was
there.  Arguments are captured before the application that holds them, so the
resulting parameter clause is single-nested: class arguments are always
variables.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .errors import GenoopError, ResolutionError
from .signatures import (
    INIT,
    GenerifiedSignatureConstructor,
    NominalInterval,
    SignatureConstructor,
    substitute_members,
)
from .syntax import Body, ClassDecl, Ctor, Field, Instantiation, Method, Param, TypeParamDecl
from .table import ClassTable
from .terms import BOTTOM, TOP, VOID, App, Var, Void, Wildcard, box_primitive, free_vars

FIELD = "field"
CTOR_PARAM = "ctor_param"
METHOD_RETURN = "method_return"
METHOD_PARAM = "method_param"
TYPE_ARGUMENT = "type_argument"
WILDCARD = "wildcard"
INSTANTIATION = "instantiation"
BOUND_ARGUMENT = "bound_argument"
SUPER_ARGUMENT = "super_argument"


@dataclass(frozen=True)
class Site:
    """Where an occurrence sits in a class declaration.

    ``member`` is the member index, or -1 for the class header.  ``slot`` is
    one of ``bound``, ``super``, ``field``, ``return``, ``param`` or ``new``;
    ``index`` picks the type parameter, method parameter or instantiation.
    ``path`` descends from there: integers select type arguments and the
    strings ``lower``/``upper`` select the bounds of a wildcard or interval.
    """

    member: int
    slot: str
    index: int = 0
    path: tuple = ()

    def child(self, *steps) -> "Site":
        return replace(self, path=self.path + steps)

    def describe(self, decl: Optional[ClassDecl] = None) -> str:
        where = f"member {self.member}"
        if decl is not None and 0 <= self.member < len(decl.members):
            m = decl.members[self.member]
            where = INIT if isinstance(m, Ctor) else m.label
        if self.member < 0:
            where = "class header"
        text = f"{where}/{self.slot}"
        if self.slot in ("param", "new", "bound"):
            text += f"[{self.index}]"
        if self.path:
            text += "/" + "/".join(str(p) for p in self.path)
        return text


@dataclass(frozen=True)
class Occurrence:
    site: Site
    role: str
    term: object


@dataclass(frozen=True)
class CaptureRecord:
    synthetic: str
    site: Site
    role: str
    captured_term: object
    interval: NominalInterval


@dataclass(frozen=True)
class GenerifiedClassDecl:
    decl: ClassDecl
    original: ClassDecl
    records: tuple
    signature: GenerifiedSignatureConstructor

    def to_json(self, short_names: bool = True) -> dict:
        from .parser import render, render_type

        return {
            "class": self.decl.name,
            "original_params": [render(p) for p in self.original.type_params],
            "synthetics": [
                {
                    "name": r.synthetic,
                    "role": r.role,
                    "site": r.site.describe(self.original),
                    "term": render_type(r.captured_term),
                    "lower": render_type(r.interval.lower, short_names),
                    "upper": render_type(r.interval.upper, short_names),
                }
                for r in self.records
            ],
            "generified_source": render(self.decl, short_names),
        }


# -- locating terms ------------------------------------------------------------


def root_term(decl: ClassDecl, site: Site):
    """The term at ``site`` with an empty path, or None when absent."""
    if site.member < 0:
        if site.slot == "super":
            return decl.superclass
        if site.slot == "bound" and site.index < len(decl.type_params):
            return decl.type_params[site.index]
        return None
    if site.member >= len(decl.members):
        return None
    m = decl.members[site.member]
    if site.slot == FIELD and isinstance(m, Field):
        return box_primitive(m.type)
    if site.slot == "return" and isinstance(m, Method) and not isinstance(m.return_type, Void):
        return box_primitive(m.return_type)
    if site.slot == "param" and isinstance(m, (Method, Ctor)) and site.index < len(m.params):
        return box_primitive(m.params[site.index].type)
    if site.slot == "new" and isinstance(m, (Method, Ctor)):
        news = m.body.instantiations
        if site.index < len(news):
            return news[site.index].type
    return None


def term_at(decl: ClassDecl, site: Site):
    """Follow ``site`` into ``decl``; None when the declaration has no such spot."""
    t = root_term(decl, site)
    for step in site.path:
        if t is None:
            return None
        if isinstance(step, int):
            if not isinstance(t, App) or step >= len(t.args):
                return None
            t = t.args[step]
        elif isinstance(t, (Wildcard, TypeParamDecl)):
            t = getattr(t, step)
        else:
            return None
    return t


# -- the capture plan -----------------------------------------------------------


def capture_plan(decl: ClassDecl) -> list:
    """Every occurrence ``generify`` will capture, in capture order.

    Header first (non-variable arguments of parameter bounds, then of the
    superclass), then members in declaration order.  Within a member the
    return type comes first, then parameters left to right, then ``new``
    expressions in body order.  Within a type, arguments come before the
    application holding them.  ``void`` is never captured and primitive
    names are boxed.
    """
    out: list = []
    for i, p in enumerate(decl.type_params):
        for which in ("lower", "upper"):
            b = getattr(p, which)
            if isinstance(b, App):
                _walk_args(b, Site(-1, "bound", i, (which,)), out, BOUND_ARGUMENT)
    if isinstance(decl.superclass, App):
        _walk_args(decl.superclass, Site(-1, "super"), out, SUPER_ARGUMENT)
    for k, m in enumerate(decl.members):
        if isinstance(m, Field):
            _walk(box_primitive(m.type), Site(k, FIELD), FIELD, out)
            continue
        if isinstance(m, Method) and not isinstance(m.return_type, Void):
            _walk(box_primitive(m.return_type), Site(k, "return"), METHOD_RETURN, out)
        role = CTOR_PARAM if isinstance(m, Ctor) else METHOD_PARAM
        for j, p in enumerate(m.params):
            _walk(box_primitive(p.type), Site(k, "param", j), role, out)
        for j, inst in enumerate(m.body.instantiations):
            _walk(inst.type, Site(k, "new", j), INSTANTIATION, out)
    return out


def _walk_args(app: App, site: Site, out: list, role: str) -> None:
    # Header types keep their head and their variable arguments.
    for j, a in enumerate(app.args):
        if not isinstance(a, Var):
            _walk(a, site.child(j), role, out)


def _walk(term, site: Site, role: str, out: list) -> None:
    if isinstance(term, Wildcard):
        for which in ("lower", "upper"):
            b = getattr(term, which)
            if isinstance(b, App):
                for j, a in enumerate(b.args):
                    _walk(a, site.child(which, j), _arg_role(a), out)
        out.append(Occurrence(site, WILDCARD, term))
        return
    if isinstance(term, App):
        for j, a in enumerate(term.args):
            _walk(a, site.child(j), _arg_role(a), out)
    out.append(Occurrence(site, role, term))


def _arg_role(a) -> str:
    return WILDCARD if isinstance(a, Wildcard) else TYPE_ARGUMENT


# -- generification -------------------------------------------------------------


def fresh_names(count: int, taken) -> list:
    """``T1 .. Tcount``, each suffixed with ``_`` until it avoids ``taken``."""
    taken = set(taken)
    names = []
    for i in range(1, count + 1):
        name = f"T{i}"
        while name in taken:
            name += "_"
        taken.add(name)
        names.append(name)
    return names


def generify(decl: ClassDecl, table: ClassTable) -> GenerifiedClassDecl:
    _resolve(decl, table)
    plan = capture_plan(decl)
    names = fresh_names(len(plan), decl.param_names)
    assigned: dict = {}
    records = []
    for occ, name in zip(plan, names):
        lower, upper = _interval(occ, assigned, decl, table)
        assigned[occ.site] = name
        records.append(
            CaptureRecord(name, occ.site, occ.role, occ.term, NominalInterval(name, lower, upper, True))
        )

    params = []
    for i, p in enumerate(decl.type_params):
        q = p.as_interval()
        params.append(TypeParamDecl(
            q.name,
            _flatten(q.lower, Site(-1, "bound", i, ("lower",)), assigned),
            _flatten(q.upper, Site(-1, "bound", i, ("upper",)), assigned),
        ))
    originals = [NominalInterval(p.name, p.lower, p.upper) for p in params]
    synthetics = [r.interval for r in records]
    params += [TypeParamDecl(r.synthetic, r.interval.lower, r.interval.upper) for r in records]
    superclass = decl.superclass
    if isinstance(superclass, App):
        superclass = _flatten(superclass, Site(-1, "super"), assigned)

    members, sig_fields, sig_methods = [], [], []
    for k, m in enumerate(decl.members):
        if isinstance(m, Field):
            v = assigned[Site(k, FIELD)]
            members.append(replace(m, type=Var(v)))
            sig_fields.append((m.label, v))
            continue
        new_params = tuple(Param(p.label, Var(assigned[Site(k, "param", j)]))
                           for j, p in enumerate(m.params))
        body = _retype_body(m.body, k, assigned)
        ptypes = tuple(p.type.name for p in new_params)
        if isinstance(m, Ctor):
            members.append(replace(m, params=new_params, body=body))
            sig_methods.append((INIT, ptypes, VOID))
        else:
            ret = m.return_type
            if not isinstance(ret, Void):
                ret = Var(assigned[Site(k, "return")])
            members.append(replace(m, return_type=ret, params=new_params, body=body))
            sig_methods.append((m.label, ptypes, ret if isinstance(ret, Void) else ret.name))

    new_decl = ClassDecl(decl.name, tuple(params), superclass, tuple(members))
    signature = GenerifiedSignatureConstructor(
        decl.name,
        tuple(originals + synthetics),
        () if superclass is None else (superclass,),
        tuple(sig_fields),
        tuple(sig_methods),
    )
    return GenerifiedClassDecl(new_decl, decl, tuple(records), signature)


def _retype_body(body: Body, k: int, assigned: dict) -> Body:
    segments, j = [], 0
    for seg in body.segments:
        if isinstance(seg, Instantiation):
            seg = Instantiation(Var(assigned[Site(k, "new", j)]))
            j += 1
        segments.append(seg)
    return Body(tuple(segments))


def _interval(occ: Occurrence, assigned: dict, decl: ClassDecl, table: ClassTable) -> tuple:
    term, site = occ.term, occ.site
    if isinstance(term, Wildcard):
        if term.is_bare:
            return _bare_wildcard(site, decl, table)
        return (_flatten(term.lower, site.child("lower"), assigned),
                _flatten(term.upper, site.child("upper"), assigned))
    point = _flatten(term, site, assigned)
    return point, point


def _flatten(t, site: Site, assigned: dict):
    """Replace the captured arguments of ``t`` by their synthetic variables."""
    if not isinstance(t, App) or not t.args:
        return t
    return App(t.name, tuple(
        Var(assigned[site.child(j)]) if site.child(j) in assigned else a
        for j, a in enumerate(t.args)
    ))


def _bare_wildcard(site: Site, decl: ClassDecl, table: ClassTable) -> tuple:
    """Interval for a bare ``?`` argument.

    Inside its own class, ``C<?>`` at position k is tied to the k-th original
    parameter, giving the point interval on that parameter.  On any other
    class the interval runs from Null up to the declared upper bound of the
    governing parameter, or up to Object when that bound mentions the other
    class's own variables or is itself parameterized.
    """
    parent = term_at(decl, Site(site.member, site.slot, site.index, site.path[:-1]))
    position = site.path[-1] if site.path else None
    if not isinstance(parent, App) or not isinstance(position, int):
        raise GenoopError(f"cannot determine the parameter governing '?' at {site.describe(decl)}")
    if parent.name == decl.name:
        if position >= len(decl.type_params):
            raise GenoopError(f"'?' at {site.describe(decl)} has no governing parameter")
        v = Var(decl.type_params[position].name)
        return v, v
    params = table.params(parent.name)
    if position >= len(params):
        raise GenoopError(f"'?' at {site.describe(decl)} has no governing parameter")
    upper = params[position].upper
    if upper is None or free_vars(upper) or (isinstance(upper, App) and upper.args):
        upper = TOP
    return BOTTOM, upper


def _resolve(decl: ClassDecl, table: ClassTable) -> None:
    names = decl.param_names
    if len(set(names)) != len(names):
        raise ResolutionError(f"duplicate type parameter in {decl.name}")

    def check(t, where):
        try:
            table.check_type(box_primitive(t), names, extra=decl)
        except GenoopError as e:
            raise type(e)(f"class {decl.name}, {where}: {e}") from None

    for p in decl.type_params:
        for b in (p.lower, p.upper):
            if b is not None:
                check(b, f"bound of {p.name}")
    if decl.superclass is not None:
        check(decl.superclass, "superclass")
    for m in decl.members:
        where = INIT if isinstance(m, Ctor) else m.label
        if isinstance(m, Field):
            check(m.type, where)
            continue
        if isinstance(m, Method) and not isinstance(m.return_type, Void):
            check(m.return_type, where)
        for p in m.params:
            check(p.type, f"{where} parameter {p.label}")
        for i in m.body.instantiations:
            check(i.type, f"{where} body")


# -- recovering the capture map ------------------------------------------------


def recover_instantiation(g: GenerifiedClassDecl) -> list:
    """The term each parameter stands for, in parameter order.

    Original parameters stand for themselves; a synthetic stands for the
    term it captured, with the arguments it absorbed expanded back in.
    """
    out = [Var(p.name) for p in g.original.type_params]
    out.extend(r.captured_term for r in g.records)
    return out


def expand_signature(g: GenerifiedClassDecl, instantiation=None) -> SignatureConstructor:
    """Substitute an instantiation for the synthetic parameters of ``g``.

    With the default (recovered) instantiation the result equals the
    signature of the original class, wildcards included.
    """
    if instantiation is None:
        instantiation = recover_instantiation(g)
    mapping = dict(zip(g.signature.param_names, instantiation))
    originals = g.original.param_names
    for name in originals:
        mapping.pop(name, None)
    supers, fields, methods = substitute_members(g.signature, mapping)
    return SignatureConstructor(g.signature.name, originals, supers, fields, methods)
