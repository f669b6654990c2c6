"""Raw types as instantiations of a fully-generified class.

The legacy (non-generic) declaration is lined up with the generic one using
the sites recorded during generification: whatever type the legacy code has
at the spot a synthetic parameter captured becomes that parameter's argument.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import PartialSubstitutionError, ShapeMismatchError
from .generify import GenerifiedClassDecl, Site, term_at
from .signatures import GenerifiedSignatureConstructor, GroundSignature, substitute_members
from .syntax import ClassDecl, Ctor, Field, Method
from .terms import TOP, App, Top, Var, Void, Wildcard, render_type


@dataclass(frozen=True)
class RawModel:
    class_name: str
    substitution: tuple  # ((variable, term), ...) in parameter order
    residual: tuple = ()

    @property
    def mapping(self) -> dict:
        return dict(self.substitution)

    def to_json(self) -> dict:
        return {
            "class": self.class_name,
            "substitution": {v: render_type(t) for v, t in self.substitution},
            "residual": list(self.residual),
        }


def _member_shape(m) -> tuple:
    if isinstance(m, Field):
        return ("field", m.label)
    if isinstance(m, Ctor):
        return ("ctor", len(m.params))
    return ("method", m.label, len(m.params))


def _check_shapes(legacy: ClassDecl, generic: ClassDecl) -> None:
    if legacy.name != generic.name:
        raise ShapeMismatchError(f"class names differ: {legacy.name} vs {generic.name}")
    a = [_member_shape(m) for m in legacy.members]
    b = [_member_shape(m) for m in generic.members]
    if a != b:
        raise ShapeMismatchError(f"{legacy.name}: legacy members {a} do not match generic members {b}")
    for lm, gm in zip(legacy.members, generic.members):
        if isinstance(lm, Method) and isinstance(lm.return_type, Void) != isinstance(gm.return_type, Void):
            raise ShapeMismatchError(f"{legacy.name}.{lm.label}: only one side returns void")


def _erase(term, mapping: dict):
    """Erasure of a bound: classes lose their arguments, variables their identity."""
    if isinstance(term, Var):
        return mapping.get(term.name, TOP)
    if isinstance(term, App):
        return App(term.name)
    if isinstance(term, Wildcard):
        return _erase(term.upper, mapping)
    return term


def model_raw_type(legacy: ClassDecl, generified: GenerifiedClassDecl) -> RawModel:
    """Recover the instantiation of ``generified`` that models ``legacy``.

    A synthetic parameter takes the legacy type found at its capture site.
    When the legacy code has a raw type around that site (so the spot does
    not exist) the parameter takes the erasure of its upper bound.  An
    original parameter takes the legacy type found where it was captured as
    a point, or the erasure of its own upper bound when it never was.
    Disagreements between the two declarations are listed in ``residual``.
    """
    original = generified.original
    _check_shapes(legacy, original)
    residual = []
    revealed: dict = {}

    for r in generified.records:
        found = term_at(legacy, r.site)
        if found is None:
            if not _under_raw(legacy, r.site):
                residual.append(f"{r.synthetic}: legacy code has nothing at {r.site.describe(original)}")
            continue
        if isinstance(found, Wildcard) and not isinstance(r.captured_term, Wildcard):
            residual.append(f"{r.synthetic}: legacy wildcard {render_type(found)} "
                            f"at {r.site.describe(original)}")
        captured = r.captured_term
        if isinstance(captured, App) and isinstance(found, App) and captured.name != found.name:
            residual.append(f"{r.synthetic}: legacy {render_type(found)} vs generic "
                            f"{render_type(captured)} at {r.site.describe(original)}")
        revealed[r.synthetic] = found

    mapping: dict = {}
    for p in generified.signature.params:
        if p.synthetic:
            break
        seen = []
        for r in generified.records:
            if r.captured_term == Var(p.name) and r.synthetic in revealed:
                t = revealed[r.synthetic]
                if t not in seen:
                    seen.append(t)
        if len(seen) > 1:
            residual.append(f"{p.name}: conflicting legacy types "
                            + ", ".join(render_type(t) for t in seen))
        mapping[p.name] = seen[0] if seen else _erase(p.upper, mapping)

    for r in generified.records:
        if r.synthetic in revealed:
            mapping[r.synthetic] = revealed[r.synthetic]
        else:
            mapping[r.synthetic] = _erase(r.interval.upper, mapping)

    substitution = tuple((name, mapping[name]) for name in generified.signature.param_names)
    return RawModel(original.name, substitution, tuple(residual))


def _under_raw(legacy: ClassDecl, site: Site) -> bool:
    """Whether some enclosing legacy type along ``site`` is a raw class type.

    A bound of a parameter the legacy class does not declare counts as raw.
    """
    if site.member < 0 and site.slot == "bound" and site.index >= len(legacy.type_params):
        return True
    for cut in range(len(site.path)):
        t = term_at(legacy, Site(site.member, site.slot, site.index, site.path[:cut]))
        if isinstance(t, App) and not t.args:
            return True
        if isinstance(t, (Top, Var)):
            return True
    return False


def apply_raw_model(m: RawModel, gsc: GenerifiedSignatureConstructor) -> GroundSignature:
    """Instantiate ``gsc`` with the model's substitution."""
    if m.residual:
        raise PartialSubstitutionError(f"{m.class_name}: unresolved residual: {'; '.join(m.residual)}")
    mapping = m.mapping
    missing = [n for n in gsc.param_names if n not in mapping]
    if missing:
        raise PartialSubstitutionError(f"{m.class_name}: no argument for {', '.join(missing)}")
    supers, fields, methods = substitute_members(gsc, mapping)
    return GroundSignature(gsc.name, tuple(mapping[n] for n in gsc.param_names),
                           supers, fields, methods)
