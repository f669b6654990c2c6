"""Bounded exploration of the subtyping graph and its self-similar copies."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import ArityError
from .subtyping import SubtypeChecker
from .table import ClassTable
from .terms import BOTTOM, TOP, App, Wildcard, canonical, normalize, normalize_arg

INHERITANCE = "inheritance"
CONTAINMENT = "containment"
VARIANCES = ("invariant", "covariant", "contravariant")


@dataclass(frozen=True)
class Edge:
    sub: str
    sup: str
    rule: str


@dataclass
class SubtypeGraph:
    nodes: dict = field(default_factory=dict)  # canonical rendering -> term
    edges: list = field(default_factory=list)
    depth: int = 0

    def to_json(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "edges": [{"sub": e.sub, "sup": e.sup, "rule": e.rule} for e in self.edges],
        }


def one_step(t, table: ClassTable) -> list:
    """Immediate supertypes of ``t`` as ``(type, rule)`` pairs.

    Inheritance gives the declared superclass.  Containment widens one
    argument: a point ``X`` becomes ``? extends X``, ``? super X`` or ``?``;
    an interval moves its upper bound one step up, or drops a bound.
    """
    if not isinstance(t, App):
        return []
    out = [(normalize(s), INHERITANCE) for s in table.supertypes(t)]
    for i, a in enumerate(t.args):
        for w in _widenings(a, table):
            args = list(t.args)
            args[i] = w
            out.append((normalize(App(t.name, tuple(args))), CONTAINMENT))
    seen, unique = set(), []
    for s, rule in out:
        if s != t and (s, rule) not in seen:
            seen.add((s, rule))
            unique.append((s, rule))
    return unique


def _widenings(arg, table: ClassTable) -> list:
    if not isinstance(arg, Wildcard):
        cands = [Wildcard(BOTTOM, arg), Wildcard(arg, TOP), Wildcard(BOTTOM, TOP)]
    else:
        cands = [Wildcard(arg.lower, up) for up, _ in one_step(arg.upper, table)]
        if arg.lower != BOTTOM:
            cands.append(Wildcard(BOTTOM, arg.upper))
        if arg.upper != TOP:
            cands.append(Wildcard(arg.lower, TOP))
    out = []
    for c in cands:
        c = normalize_arg(c)
        if c != arg and c not in out:
            out.append(c)
    return out


def build_graph(table: ClassTable, seeds: Iterable, depth: int) -> SubtypeGraph:
    """Close ``seeds`` under ``one_step`` for ``depth`` generations."""
    g = SubtypeGraph(depth=depth)
    frontier = []
    for s in seeds:
        table.check_type(s)
        s = normalize(s)
        key = canonical(s)
        if key not in g.nodes:
            g.nodes[key] = s
            frontier.append(s)
    edges = set()
    for _ in range(depth):
        nxt = []
        for n in frontier:
            for sup, rule in one_step(n, table):
                key = canonical(sup)
                e = Edge(canonical(n), key, rule)
                if e not in edges:
                    edges.add(e)
                    g.edges.append(e)
                if key not in g.nodes:
                    g.nodes[key] = sup
                    nxt.append(sup)
        frontier = nxt
    return g


# -- self-similarity ------------------------------------------------------------


def embed(variance: str, class_name: str, t):
    """Image of ``t`` under one of the three variance copies."""
    if variance == "covariant":
        arg = Wildcard(BOTTOM, t)
    elif variance == "contravariant":
        arg = Wildcard(t, TOP)
    elif variance == "invariant":
        arg = t
    else:
        raise ValueError(f"unknown variance {variance!r}")
    return normalize(App(class_name, (arg,)))


@dataclass
class EmbeddingReport:
    variance: str
    pairs_checked: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def check_self_similarity(g: SubtypeGraph, class_name: str, table: ClassTable,
                          checker: Optional[SubtypeChecker] = None) -> dict:
    """Check the three variance copies of the fragment inside the relation.

    Over all ordered node pairs ``(S, T)``: when ``S <: T`` the covariant copy
    must give ``c<? extends S> <: c<? extends T>`` and the contravariant copy
    ``c<? super T> <: c<? super S>``; the invariant copy must relate
    ``c<S>`` and ``c<T>`` exactly when ``S`` and ``T`` are the same type.
    """
    if table.arity(class_name) != 1:
        raise ArityError(f"{class_name} must take exactly one type parameter")
    sub = (checker or SubtypeChecker(table)).is_subtype
    reports = {v: EmbeddingReport(v) for v in VARIANCES}
    nodes = list(g.nodes.items())
    for ks, s in nodes:
        for kt, t in nodes:
            related = sub(s, t)
            inv = reports["invariant"]
            inv.pairs_checked += 1
            if sub(embed("invariant", class_name, s), embed("invariant", class_name, t)) != (ks == kt):
                inv.counterexamples.append((ks, kt))
            if not related:
                continue
            cov = reports["covariant"]
            cov.pairs_checked += 1
            if not sub(embed("covariant", class_name, s), embed("covariant", class_name, t)):
                cov.counterexamples.append((ks, kt))
            con = reports["contravariant"]
            con.pairs_checked += 1
            if not sub(embed("contravariant", class_name, t), embed("contravariant", class_name, s)):
                con.counterexamples.append((ks, kt))
    return reports


# -- DOT -----------------------------------------------------------------------

_COLOURS = {INHERITANCE: "black", CONTAINMENT: "blue"}


def _q(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(g: SubtypeGraph, highlight: Optional[str] = None, via: Optional[str] = None) -> str:
    """DOT digraph of ``g``; edges point from subtype to supertype.

    With ``highlight`` set to a variance, the images of all nodes under that
    copy through class ``via`` are drawn in a cluster; images outside the
    explored fragment are dashed.
    """
    lines = ["digraph G {"]
    if g.nodes:
        lines.append("  rankdir=BT;")
        lines.append("  node [shape=box, fontname=monospace];")
    for key in g.nodes:
        lines.append(f"  {_q(key)};")
    for e in g.edges:
        colour = _COLOURS.get(e.rule, "gray")
        lines.append(f"  {_q(e.sub)} -> {_q(e.sup)} [label={_q(e.rule)}, color={colour}];")
    if highlight is not None:
        if via is None:
            raise ValueError("highlight needs the class the copy is taken through")
        images = []
        for t in g.nodes.values():
            key = canonical(embed(highlight, via, t))
            if key not in images:
                images.append(key)
        lines.append(f"  subgraph cluster_{highlight} {{")
        lines.append(f"    label={_q(f'{highlight} copy via {via}')};")
        lines.append("    style=filled; color=lightyellow;")
        for key in images:
            style = "" if key in g.nodes else " [style=dashed]"
            lines.append(f"    {_q(key)}{style};")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
