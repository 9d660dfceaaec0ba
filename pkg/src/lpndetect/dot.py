"""DOT (graphviz) export for nets, state graphs, observers, and
coverability trees. Output is deterministic under declared orders."""

from __future__ import annotations

from .analyze import Observer
from .explore import OMEGA, KMNode, ReachabilityGraph, km_nodes
from .net import EPSILON, LabeledPetriNet


def _q(s: str) -> str:
    return '"' + str(s).replace('"', r"\"") + '"'


def _fmt_count(n) -> str:
    return "ω" if n == OMEGA else str(n)


def _marking_caption(m) -> str:
    return "[" + ",".join(_fmt_count(x) for x in m) + "]"


def net_to_dot(net: LabeledPetriNet) -> str:
    lines = ["digraph net {", "  rankdir=LR;"]
    newline = "\\n"
    for p, n in zip(net.places, net.initial_marking):
        caption = _q(p + newline + str(n))
        lines.append(f"  {_q(p)} [shape=circle label={caption}];")
    for ti, t in enumerate(net.transitions):
        lab = net.labels[ti]
        shown = "~" if lab is EPSILON else lab
        lines.append(f"  {_q(t)} [shape=box label={_q(f'{t} [{shown}]')}];")
        for i, p in enumerate(net.places):
            w = net.pre[ti][i]
            if w:
                suffix = f" [label={_q(w)}]" if w > 1 else ""
                lines.append(f"  {_q(p)} -> {_q(t)}{suffix};")
        for i, p in enumerate(net.places):
            w = net.post[ti][i]
            if w:
                suffix = f" [label={_q(w)}]" if w > 1 else ""
                lines.append(f"  {_q(t)} -> {_q(p)}{suffix};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_dot(graph: ReachabilityGraph) -> str:
    lines = ["digraph reach {"]
    for v, m in enumerate(graph.markings):
        shape = "doublecircle" if v == graph.initial else "circle"
        lines.append(f"  n{v} [shape={shape} label={_q(_marking_caption(m))}];")
    for v, t, w in graph.edges:
        lines.append(f"  n{v} -> n{w} [label={_q(t)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def observer_to_dot(obs: Observer) -> str:
    lines = ["digraph observer {"]
    for v, state in enumerate(obs.states):
        caption = "{" + ",".join(
            _marking_caption(m) for m in sorted(state)
        ) + "}"
        shape = "doubleoctagon" if v == obs.initial else "octagon"
        lines.append(f"  n{v} [shape={shape} label={_q(caption)}];")
    for v, sym, w in obs.edges:
        lines.append(f"  n{v} -> n{w} [label={_q(sym)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def km_to_dot(root: KMNode) -> str:
    nodes = list(km_nodes(root))
    ids = {id(n): i for i, n in enumerate(nodes)}
    lines = ["digraph coverability {"]
    for n in nodes:
        v = ids[id(n)]
        shape = "doublecircle" if n.parent is None else "circle"
        lines.append(f"  n{v} [shape={shape} label={_q(_marking_caption(n.marking))}];")
    for n in nodes:
        for c in n.children:
            lines.append(f"  n{ids[id(n)]} -> n{ids[id(c)]} [label={_q(c.via)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
