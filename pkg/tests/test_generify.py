import pytest
from hypothesis import assume, given, settings

from conftest import APPENDIX_C, golden, golden_class, stdlib_with
from genoop.errors import GenoopError, ResolutionError
from genoop.generify import (
    BOUND_ARGUMENT,
    CTOR_PARAM,
    FIELD,
    INSTANTIATION,
    METHOD_PARAM,
    METHOD_RETURN,
    SUPER_ARGUMENT,
    TYPE_ARGUMENT,
    WILDCARD,
    Site,
    capture_plan,
    expand_signature,
    fresh_names,
    generify,
    recover_instantiation,
)
from genoop.parser import parse_class, parse_program, parse_type, render, token_stream
from genoop.signatures import build_signature, check_interval, check_single_nesting
from genoop.subtyping import oracle_for
from genoop.syntax import Ctor, Field, Method, TypeParamDecl
from genoop.table import ClassTable
from genoop.terms import BOTTOM, TOP, App, Var, Void, Wildcard, box_primitive, subterms, substitute
from strategies import classes

T = Var("T")


def _generify(name):
    decl = golden_class(name)
    return generify(decl, ClassTable.stdlib().extended(decl))


@pytest.mark.parametrize("name", APPENDIX_C)
def test_golden_translation(name):
    g = _generify(name)
    assert token_stream(render(g.decl, short_names=True)) == token_stream(golden(name + ".generified"))


def _intervals(g):
    return [(p.name, render(p.lower, True), render(p.upper, True)) for p in g.signature.params]


def test_class_c_intervals():
    assert _intervals(_generify("c")) == [
        ("T", "N", "O"), ("T1", "Integer", "Integer"), ("T2", "T", "T"), ("T3", "T", "T"),
    ]


def test_list_copier_intervals():
    assert _intervals(_generify("list_copier")) == [
        ("T", "N", "O"), ("T1", "N", "T"), ("T2", "List<T1>", "List<T1>"),
        ("T3", "T", "O"), ("T4", "List<T3>", "List<T3>"),
    ]


def test_box_intervals():
    g = _generify("box")
    iv = _intervals(g)
    assert len(iv) == 12
    assert iv[5] == ("T5", "Boolean", "Boolean")
    assert iv[6] == ("T6", "T", "T")  # not [T6:N-O]
    assert iv[7] == ("T7", "Box<T6>", "Box<T6>")
    assert iv[10:] == [("T10", "T", "T"), ("T11", "Box<T10>", "Box<T10>")]
    copy = g.decl.members[-1]
    assert "new T11(t)" in render(g.decl)
    assert copy.return_type == Var("T9")


def test_records_are_per_occurrence():
    g = _generify("box")
    box_t = [r for r in g.records if r.captured_term == App("Box", (T,))]
    assert [r.synthetic for r in box_t] == ["T9", "T11"]
    assert [r.role for r in box_t] == [METHOD_RETURN, INSTANTIATION]


def test_capture_plan_decor_canvas():
    plan = capture_plan(golden_class("decor_canvas"))
    assert [(o.site, o.role, render(o.term)) for o in plan] == [
        (Site(0, "param", 0, (0,)), WILDCARD, "? extends Shape"),
        (Site(0, "param", 0), METHOD_PARAM, "List<? extends Shape>"),
    ]


def test_capture_plan_box_roles():
    plan = capture_plan(golden_class("box"))
    assert [o.role for o in plan] == [
        FIELD, CTOR_PARAM, METHOD_PARAM, METHOD_RETURN, METHOD_RETURN, WILDCARD, METHOD_PARAM,
        TYPE_ARGUMENT, METHOD_RETURN, TYPE_ARGUMENT, INSTANTIATION,
    ]
    assert plan[4].term == App("Boolean")


def test_capture_plan_empty_class():
    assert capture_plan(parse_class("class E {}")) == []


def test_nothing_to_capture():
    decl = parse_class("class E<X> { void run() { go(); } }")
    g = generify(decl, ClassTable.stdlib().extended(decl))
    assert g.records == ()
    assert g.decl.type_params == (TypeParamDecl("X", BOTTOM, TOP),)
    assert g.decl.members == decl.members
    assert recover_instantiation(g) == [Var("X")]


def test_recover_instantiation_empty():
    decl = parse_class("class E {}")
    assert recover_instantiation(generify(decl, ClassTable.core().extended(decl))) == []


def _substitution_oracle(g):
    """Substitute the recovered terms into the rewritten declaration and
    return (rewritten types, original types) for every captured position."""
    mapping = dict(zip((p.name for p in g.decl.type_params), recover_instantiation(g)))
    mapping = {k: v for k, v in mapping.items() if k not in g.original.param_names}
    got, want = [], []
    for new, old in zip(g.decl.members, g.original.members):
        if isinstance(new, Field):
            got.append(substitute(new.type, mapping))
            want.append(box_primitive(old.type))
            continue
        if isinstance(new, Method) and not isinstance(new.return_type, Void):
            got.append(substitute(new.return_type, mapping))
            want.append(box_primitive(old.return_type))
        for pn, po in zip(new.params, old.params):
            got.append(substitute(pn.type, mapping))
            want.append(box_primitive(po.type))
        for inew, iold in zip(new.body.instantiations, old.body.instantiations):
            got.append(substitute(inew.type, mapping))
            want.append(iold.type)
    if g.decl.superclass is not None:
        got.append(substitute(g.decl.superclass, mapping))
        want.append(g.original.superclass)
    return got, want


def test_recover_instantiation_class_c():
    g = _generify("c")
    assert recover_instantiation(g) == [T, App("Integer"), T, T]
    got, want = _substitution_oracle(g)
    assert got == want


def test_recover_instantiation_list_copier():
    g = _generify("list_copier")
    assert recover_instantiation(g) == [
        T,
        Wildcard(BOTTOM, T),
        App("List", (Wildcard(BOTTOM, T),)),
        Wildcard(T, TOP),
        App("List", (Wildcard(T, TOP),)),
    ]
    got, want = _substitution_oracle(g)
    assert got == want


@pytest.mark.parametrize("name", APPENDIX_C)
def test_expand_signature_matches_original(name):
    g = _generify(name)
    table = ClassTable.stdlib().extended(g.original)
    assert expand_signature(g) == build_signature(g.original, table, allow_wildcards=True)


def test_fresh_names_avoid_originals():
    assert fresh_names(3, {"T1", "T3_"}) == ["T1_", "T2", "T3"]
    assert fresh_names(1, {"T1", "T1_"}) == ["T1__"]


def test_synthetic_names_do_not_collide():
    decl = parse_class("class K<T1> { T1 a; Integer b; }")
    g = generify(decl, ClassTable.core().extended(decl))
    assert g.signature.param_names == ("T1", "T1_", "T2")


def test_bare_wildcard_on_foreign_class_uses_declared_bound():
    table = stdlib_with("class Num {} class Holder<X extends Num> {}")
    decl = parse_class("class K { Holder<?> h; List<?> l; }")
    g = generify(decl, table.extended(decl))
    assert _intervals(g)[0] == ("T1", "N", "Num")
    assert _intervals(g)[2] == ("T3", "N", "O")


def test_bare_wildcard_under_f_bound_falls_back_to_object():
    table = stdlib_with("class Rec<X extends Comparable<X>> {}")
    decl = parse_class("class K { Rec<?> r; }")
    g = generify(decl, table.extended(decl))
    assert _intervals(g)[0] == ("T1", "N", "O")


def test_nested_concrete_arguments_are_captured_depth_first():
    decl = parse_class("class K { List<List<String>> xs; }")
    g = generify(decl, ClassTable.stdlib().extended(decl))
    assert _intervals(g) == [
        ("T1", "String", "String"), ("T2", "List<T1>", "List<T1>"), ("T3", "List<T2>", "List<T2>"),
    ]


def test_wildcard_bound_arguments_are_captured():
    decl = parse_class("class K { List<? extends List<String>> xs; }")
    g = generify(decl, ClassTable.stdlib().extended(decl))
    assert _intervals(g) == [
        ("T1", "String", "String"), ("T2", "N", "List<T1>"), ("T3", "List<T2>", "List<T2>"),
    ]


def test_superclass_arguments_flattened_but_head_kept():
    table = stdlib_with()
    decl = parse_class("class C extends Enum<C> {}")
    g = generify(decl, table.extended(decl))
    assert render(g.decl, True).startswith("class C<[T1:C-C]> extends Enum<T1>")
    decor = _generify("decor_canvas")
    assert decor.decl.superclass == App("Canvas")


def test_nested_parameter_bounds_are_flattened():
    decl = parse_class("class K<X extends Comparable<List<Integer>>> { X x; }")
    g = generify(decl, ClassTable.stdlib().extended(decl))
    assert [(r.synthetic, r.role) for r in g.records[:2]] == [("T1", TYPE_ARGUMENT), ("T2", BOUND_ARGUMENT)]
    assert g.decl.type_params[0] == TypeParamDecl("X", BOTTOM, App("Comparable", (Var("T2"),)))
    assert check_single_nesting(g.signature)


def test_unresolved_and_bad_wildcard():
    decl = parse_class("class K { Foo f; }")
    with pytest.raises(ResolutionError, match="class K, f"):
        generify(decl, ClassTable.core().extended(decl))


def test_generified_json_report():
    data = _generify("decor_canvas").to_json()
    assert data["class"] == "DecorCanvas"
    assert data["original_params"] == []
    assert data["synthetics"][0] == {
        "name": "T1", "role": WILDCARD, "site": "drawShapes/param[0]/0",
        "term": "? extends Shape", "lower": "N", "upper": "Shape",
    }
    assert token_stream(data["generified_source"]) == token_stream(golden("decor_canvas.generified"))


def test_generify_twice_round_trips():
    # the second pass sees only variables in member positions
    g1 = _generify("list_copier")
    table = ClassTable.stdlib().extended(g1.decl)
    g2 = generify(g1.decl, table)
    assert len(g2.records) == 2
    assert all(r.interval.lower == r.interval.upper for r in g2.records)
    assert expand_signature(g2) == build_signature(g1.decl, table)


def test_self_reference_blocks_second_pass():
    # the rewritten Box mentions Box<T6> with the old arity
    g1 = _generify("box")
    with pytest.raises(GenoopError, match="expects 12 type arguments"):
        generify(g1.decl, ClassTable.stdlib().extended(g1.decl))


def _table_for(decl):
    return ClassTable.stdlib().extended(decl)


@settings(max_examples=200, deadline=None)
@given(classes)
def test_generified_output_is_single_nested(decl):
    g = generify(decl, _table_for(decl))
    assert check_single_nesting(g.signature)
    assert len(g.records) == len(capture_plan(decl))
    reparsed = parse_program(render(g.decl)).classes[0]
    assert reparsed.type_params == g.decl.type_params


@settings(max_examples=200, deadline=None)
@given(classes)
def test_synthetic_intervals_are_valid(decl):
    g = generify(decl, _table_for(decl))
    oracle = oracle_for(_table_for(decl), g.signature.params)
    for iv in g.signature.params:
        if iv.synthetic:
            assert check_interval(iv, oracle.is_subtype)


@settings(max_examples=200, deadline=None)
@given(classes)
def test_recovered_instantiation_round_trips(decl):
    table = _table_for(decl)
    g = generify(decl, table)
    assert expand_signature(g) == build_signature(decl, table, allow_wildcards=True)
    got, want = _substitution_oracle(g)
    assert got == want


@settings(max_examples=100, deadline=None)
@given(classes)
def test_generifying_generified_output_round_trips(decl):
    assume(decl.name not in {c for m in decl.members for c in _class_names(m)})
    assume(all(decl.name not in _class_names_of(p.upper) | _class_names_of(p.lower) for p in decl.type_params))
    assume(decl.name not in _class_names_of(decl.superclass))
    table = _table_for(decl)
    once = generify(decl, table)
    table2 = ClassTable.stdlib().extended(once.decl)
    twice = generify(once.decl, table2)
    assert expand_signature(twice) == build_signature(once.decl, table2)


def _class_names_of(t):
    return {s.name for s in subterms(t) if isinstance(s, App)} if t is not None else set()


def _class_names(member):
    types = []
    if isinstance(member, Field):
        types.append(member.type)
    else:
        if isinstance(member, Method):
            types.append(member.return_type)
        types += [p.type for p in member.params]
        types += [i.type for i in member.body.instantiations]
    return set().union(*(_class_names_of(t) for t in types if not isinstance(t, Void)))
