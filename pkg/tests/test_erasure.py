import dataclasses

import pytest
from hypothesis import assume, given, settings

from conftest import SAMPLES, golden_class, stdlib_with
from genoop.erasure import apply_raw_model, model_raw_type
from genoop.errors import PartialSubstitutionError, ShapeMismatchError
from genoop.generify import generify
from genoop.parser import parse_class, parse_program
from genoop.signatures import build_signature
from genoop.syntax import Body, ClassDecl, Ctor, Field, Instantiation, Method, Param
from genoop.table import ClassTable
from genoop.terms import TOP, free_vars, substitute, subterms, App, Top, Var, Void, Wildcard
from strategies import classes


def _generify(decl, table=None):
    return generify(decl, (table or ClassTable.stdlib()).extended(decl))


def _erase_type(t, bounds):
    """Legacy view of a generic type: variables become the erasure of
    their upper bound and every class type is raw."""
    if isinstance(t, Var):
        return _erase_type(bounds.get(t.name) or TOP, bounds)
    if isinstance(t, App):
        return App(t.name)
    if isinstance(t, Wildcard):
        return _erase_type(t.upper, bounds)
    return t


def erase_class(decl: ClassDecl) -> ClassDecl:
    bounds = {p.name: p.upper for p in decl.type_params}
    e = lambda t: t if isinstance(t, Void) else _erase_type(t, bounds)
    body = lambda b: Body(tuple(Instantiation(e(s.type)) if isinstance(s, Instantiation) else s for s in b.segments))
    members = []
    for m in decl.members:
        if isinstance(m, Field):
            members.append(dataclasses.replace(m, type=e(m.type)))
        elif isinstance(m, Ctor):
            members.append(dataclasses.replace(m, params=tuple(Param(p.label, e(p.type)) for p in m.params),
                                               body=body(m.body)))
        else:
            members.append(dataclasses.replace(m, return_type=e(m.return_type), body=body(m.body),
                                               params=tuple(Param(p.label, e(p.type)) for p in m.params)))
    # a legacy class still extends the library class at some instantiation
    erased = {v: TOP for v in bounds}
    sup = None if decl.superclass is None else substitute(decl.superclass, erased)
    return ClassDecl(decl.name, (), sup, tuple(members))


def test_class_c_model():
    legacy = parse_program((SAMPLES / "c_legacy.mg").read_text()).classes[0]
    g = _generify(golden_class("c"))
    m = model_raw_type(legacy, g)
    assert m.mapping == {"T": TOP, "T1": App("Integer"), "T2": TOP, "T3": TOP}
    assert m.residual == ()
    ground = apply_raw_model(m, g.signature)
    assert ground.same_members(build_signature(legacy, ClassTable.stdlib().extended(legacy)))
    assert m.to_json() == {"class": "C", "substitution": {"T": "Object", "T1": "Integer", "T2": "Object",
                                                          "T3": "Object"}, "residual": []}


def test_zero_parameter_class():
    decl = parse_class("class Z { void run() {} }")
    g = _generify(decl)
    m = model_raw_type(decl, g)
    assert m.substitution == () and m.residual == ()
    assert apply_raw_model(m, g.signature).fields == ()


def test_raw_list_copier():
    g = _generify(golden_class("list_copier"))
    legacy = parse_class("class ListCopier { void copy(List src, List dest) {} }")
    m = model_raw_type(legacy, g)
    assert m.residual == ()
    assert m.mapping["T2"] == App("List") and m.mapping["T1"] == TOP
    ground = apply_raw_model(m, g.signature)
    assert ground.methods == (("copy", (App("List"), App("List")), ground.methods[0][2]),)


def test_shape_mismatch():
    g = _generify(golden_class("c"))
    with pytest.raises(ShapeMismatchError):
        model_raw_type(parse_class("class C { Integer count; }"), g)
    with pytest.raises(ShapeMismatchError):
        model_raw_type(parse_class("class D { Integer count; Object t; D(Object t) {} }"), g)


def test_disagreeing_legacy_type_is_residual():
    g = _generify(golden_class("c"))
    legacy = parse_class("class C { String count; Object t; C(Object t) {} }")
    m = model_raw_type(legacy, g)
    assert len(m.residual) == 1 and "String" in m.residual[0]
    with pytest.raises(PartialSubstitutionError, match="residual"):
        apply_raw_model(m, g.signature)


def test_conflicting_evidence_for_original_parameter():
    g = _generify(golden_class("c"))
    legacy = parse_class("class C { Integer count; String t; C(Integer t) {} }")
    m = model_raw_type(legacy, g)
    assert any(r.startswith("T: conflicting") for r in m.residual)


def test_missing_argument():
    g = _generify(golden_class("c"))
    m = model_raw_type(parse_program((SAMPLES / "c_legacy.mg").read_text()).classes[0], g)
    short = dataclasses.replace(m, substitution=m.substitution[:2])
    with pytest.raises(PartialSubstitutionError, match="T2, T3"):
        apply_raw_model(short, g.signature)


def test_bounds_absent_from_legacy_class_fall_back():
    decl = parse_class("class K<X extends Comparable<List<Integer>>> { X x; }")
    g = _generify(decl)
    m = model_raw_type(erase_class(decl), g)
    assert m.residual == ()
    assert m.mapping["X"] == App("Comparable")


@pytest.mark.parametrize("name", ["c", "list_copier", "box", "decor_canvas"])
def test_goldens_round_trip_through_erasure(name):
    decl = golden_class(name)
    legacy = erase_class(decl)
    g = _generify(decl)
    m = model_raw_type(legacy, g)
    assert m.residual == ()
    want = build_signature(legacy, ClassTable.stdlib().extended(legacy), allow_raw=True)
    assert apply_raw_model(m, g.signature).same_members(want)


@settings(max_examples=200, deadline=None)
@given(classes)
def test_erasure_round_trip(decl):
    # a legacy class cannot extend a raw instance of itself
    assume(decl.superclass is None or decl.name not in {t.name for t in subterms(decl.superclass)
                                                        if isinstance(t, App)})
    legacy = erase_class(decl)
    g = _generify(decl)
    m = model_raw_type(legacy, g)
    assert m.residual == ()
    ground = apply_raw_model(m, g.signature)
    want = build_signature(legacy, ClassTable.stdlib().extended(legacy), allow_raw=True, allow_wildcards=True)
    assert (ground.fields, ground.methods) == (want.fields, want.methods)
    # the header is not captured where it mentions variables
    if decl.superclass is not None and not free_vars(decl.superclass):
        assert ground.supers == want.supers
    assert [t.name for t in ground.supers] == [t.name for t in want.supers]
