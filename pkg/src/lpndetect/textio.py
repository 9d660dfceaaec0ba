"""Line-oriented text format for labeled Petri nets.

Grammar (one directive per line, '#' starts a comment, '~' denotes the
unobservable label):

    places <id>+
    initial (<id>=<nat>)*          # optional; unlisted places hold 0
    alphabet <sym>+                # optional; widens the inferred alphabet
    trans <id> label (<sym>|~) [pre (<id>:<nat>)*] [post (<id>:<nat>)*]

Rendering is canonical in declared order and parse(render(net)) is the
identity up to object equality.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .net import EPSILON, InputError, LabeledPetriNet

EPSILON_MARK = "~"

_TOKEN = re.compile(r"\S+")


class ParseError(InputError):
    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass
class NetDocument:
    net: LabeledPetriNet
    spans: dict = field(default_factory=dict)  # id -> (line, column)


def _tokens(line: str):
    body = line.split("#", 1)[0]
    return [(m.group(0), m.start() + 1) for m in _TOKEN.finditer(body)]


def _nat(text, line, col, what):
    if not text.isdigit():
        raise ParseError(f"expected a natural number for {what}, got {text!r}", line, col)
    return int(text)


def parse_lpn(text: str) -> NetDocument:
    places = []
    spans = {}
    initial = {}
    alphabet_extra = []
    transitions = {}  # id -> (label, pre map, post map)

    def known_place(pid, line, col):
        if pid not in set(places):
            raise ParseError(f"unknown place {pid!r}", line, col)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw)
        if not toks:
            continue
        head, hcol = toks[0]
        rest = toks[1:]
        if head == "places":
            for pid, col in rest:
                if pid in spans:
                    raise ParseError(f"duplicate identifier {pid!r}", lineno, col)
                places.append(pid)
                spans[pid] = (lineno, col)
        elif head == "initial":
            for tok, col in rest:
                if "=" not in tok:
                    raise ParseError(f"expected <place>=<count>, got {tok!r}", lineno, col)
                pid, _, num = tok.partition("=")
                known_place(pid, lineno, col)
                initial[pid] = _nat(num, lineno, col, f"initial count of {pid!r}")
        elif head == "alphabet":
            for sym, col in rest:
                if sym == EPSILON_MARK:
                    raise ParseError("the unobservable label cannot be an alphabet symbol",
                                     lineno, col)
                alphabet_extra.append(sym)
        elif head == "trans":
            if not rest:
                raise ParseError("missing transition identifier", lineno, hcol)
            tid, tcol = rest[0]
            if tid in spans or tid in transitions:
                raise ParseError(f"duplicate identifier {tid!r}", lineno, tcol)
            spans[tid] = (lineno, tcol)
            body = rest[1:]
            if len(body) < 2 or body[0][0] != "label":
                raise ParseError(f"transition {tid!r} is missing a label", lineno, tcol)
            lab = body[1][0]
            label = EPSILON if lab == EPSILON_MARK else lab
            pre_map, post_map = {}, {}
            section = None
            for tok, col in body[2:]:
                if tok in ("pre", "post"):
                    section = pre_map if tok == "pre" else post_map
                    continue
                if section is None:
                    raise ParseError(f"unexpected token {tok!r} before pre/post", lineno, col)
                if ":" not in tok:
                    raise ParseError(f"expected <place>:<weight>, got {tok!r}", lineno, col)
                pid, _, num = tok.rpartition(":")
                known_place(pid, lineno, col)
                section[pid] = _nat(num, lineno, col, f"arc weight on {pid!r}")
            transitions[tid] = (label, pre_map, post_map)
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, hcol)

    used = {lab for (lab, _, _) in transitions.values() if lab is not EPSILON}
    alphabet = used | set(alphabet_extra)
    if not alphabet:
        # A net may be entirely unobservable; keep a nonempty alphabet
        # placeholder only if one was declared. An empty alphabet is allowed
        # by the data model except for observation symbols.
        alphabet = set(alphabet_extra)

    pre_rows, post_rows, labels = [], [], []
    pidx = {p: i for i, p in enumerate(places)}
    for tid, (label, pre_map, post_map) in transitions.items():
        pre_rows.append(tuple(pre_map.get(p, 0) for p in places))
        post_rows.append(tuple(post_map.get(p, 0) for p in places))
        labels.append(label)
    net = LabeledPetriNet(
        places=tuple(places),
        transitions=tuple(transitions),
        pre=tuple(pre_rows),
        post=tuple(post_rows),
        labels=tuple(labels),
        alphabet=frozenset(alphabet),
        initial_marking=tuple(initial.get(p, 0) for p in places),
    )
    return NetDocument(net=net, spans=spans)


def render_lpn(net: LabeledPetriNet, comments=()) -> str:
    """Canonical serialization; comments are emitted first, one per line."""
    lines = [f"# {c}" for c in comments]
    lines.append("places " + " ".join(net.places))
    pairs = [
        f"{p}={n}" for p, n in zip(net.places, net.initial_marking) if n > 0
    ]
    if pairs:
        lines.append("initial " + " ".join(pairs))
    used = {lab for lab in net.labels if lab is not EPSILON}
    if set(net.alphabet) != used:
        lines.append("alphabet " + " ".join(sorted(net.alphabet)))
    for ti, t in enumerate(net.transitions):
        lab = net.labels[ti]
        parts = [
            "trans", t, "label", EPSILON_MARK if lab is EPSILON else lab,
        ]
        pre = [f"{p}:{w}" for p, w in zip(net.places, net.pre[ti]) if w > 0]
        post = [f"{p}:{w}" for p, w in zip(net.places, net.post[ti]) if w > 0]
        if pre:
            parts.append("pre")
            parts.extend(pre)
        if post:
            parts.append("post")
            parts.extend(post)
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def parse_marking(net: LabeledPetriNet, text: str, where="marking") -> tuple:
    """Parse one marking given as whitespace-separated <place>=<count> pairs."""
    counts = {}
    for tok in text.split():
        if "=" not in tok:
            raise InputError(f"{where}: expected <place>=<count>, got {tok!r}")
        pid, _, num = tok.partition("=")
        if pid not in net.place_index:
            raise InputError(f"{where}: unknown place {pid!r}")
        if not num.isdigit():
            raise InputError(f"{where}: bad count {num!r} for {pid!r}")
        counts[pid] = int(num)
    return tuple(counts.get(p, 0) for p in net.places)


def parse_secret_file(net: LabeledPetriNet, text: str) -> list:
    """One marking per line, each a list of <place>=<count> pairs."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        out.append(parse_marking(net, body, where=f"secret line {lineno}"))
    if not out:
        raise InputError("secret file contains no markings")
    return out
