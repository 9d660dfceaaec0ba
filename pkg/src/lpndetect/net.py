"""Labeled Petri net structures and firing semantics.

A net is a set of places and transitions with natural-valued pre/post arc
weights. Each transition carries a label: either a symbol of the alphabet
(observable) or None (unobservable). Markings are dense tuples of token
counts in declared place order; all values are immutable, so nets and
markings can be shared freely.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

# Label of an unobservable transition.
EPSILON = None

Marking = tuple  # tuple[int, ...], indexed by declared place order
FiringSequence = tuple  # tuple[str, ...] of transition ids
ObservationWord = tuple  # tuple[str, ...] of alphabet symbols


class NetError(Exception):
    """Base class for all net-level errors."""


class InputError(NetError):
    """Malformed input: unknown identifiers, bad dimensions, bad arguments."""


class FiringError(NetError):
    """A disabled transition was fired.

    Carries the transition, the first violating place, and (for sequences)
    the index of the offending step.
    """

    def __init__(self, message, transition=None, place=None, index=None):
        super().__init__(message)
        self.transition = transition
        self.place = place
        self.index = index


@dataclass(frozen=True)
class LabeledPetriNet:
    """A labeled Petri net with its initial marking.

    pre/post are arc-weight matrices indexed [transition][place] in declared
    order. labels maps each transition (by position) to a symbol or EPSILON.
    """

    places: tuple
    transitions: tuple
    pre: tuple  # tuple[tuple[int, ...], ...], shape |T| x |P|
    post: tuple  # same shape
    labels: tuple  # tuple[Optional[str], ...], one per transition
    alphabet: frozenset
    initial_marking: Marking

    # index maps, filled in __post_init__
    place_index: dict = field(default_factory=dict, compare=False, repr=False)
    transition_index: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not (self.places or self.transitions):
            raise InputError("net must have at least one place or transition")
        if set(self.places) & set(self.transitions):
            raise InputError("place and transition identifiers must be disjoint")
        if len(set(self.places)) != len(self.places):
            raise InputError("duplicate place identifier")
        if len(set(self.transitions)) != len(self.transitions):
            raise InputError("duplicate transition identifier")
        if len(self.labels) != len(self.transitions):
            raise InputError("labeling must cover every transition")
        for lab in self.labels:
            if lab is not EPSILON and lab not in self.alphabet:
                raise InputError(f"label {lab!r} not in alphabet")
        if len(self.initial_marking) != len(self.places):
            raise InputError("initial marking has wrong dimension")
        if any(n < 0 for n in self.initial_marking):
            raise InputError("initial marking must be non-negative")
        for mat in (self.pre, self.post):
            if len(mat) != len(self.transitions):
                raise InputError("arc table has wrong transition dimension")
            for row in mat:
                if len(row) != len(self.places):
                    raise InputError("arc table has wrong place dimension")
                if any(w < 0 for w in row):
                    raise InputError("arc weights must be non-negative")
        object.__setattr__(
            self, "place_index", {p: i for i, p in enumerate(self.places)}
        )
        object.__setattr__(
            self, "transition_index", {t: i for i, t in enumerate(self.transitions)}
        )

    def label(self, t: str):
        return self.labels[self._tindex(t)]

    def is_observable(self, t: str) -> bool:
        return self.labels[self._tindex(t)] is not EPSILON

    def _tindex(self, t: str) -> int:
        try:
            return self.transition_index[t]
        except KeyError:
            raise InputError(f"unknown transition {t!r}") from None

    def _check_marking(self, m: Marking):
        if len(m) != len(self.places):
            raise InputError(
                f"marking has {len(m)} entries, net has {len(self.places)} places"
            )


def make_net(
    places: Sequence[str],
    transitions: Mapping[str, tuple],
    initial: Mapping[str, int] | Sequence[int] = (),
    alphabet: Optional[Iterable[str]] = None,
) -> LabeledPetriNet:
    """Convenience constructor.

    transitions maps id -> (label-or-None, {place: pre-weight}, {place: post-weight}).
    initial is either a place->count mapping (unlisted places default to 0)
    or a full vector in place order.
    """
    places = tuple(places)
    pidx = {p: i for i, p in enumerate(places)}
    tids = tuple(transitions)
    pre_rows, post_rows, labels = [], [], []
    for t, (lab, pre_map, post_map) in transitions.items():
        for q in list(pre_map) + list(post_map):
            if q not in pidx:
                raise InputError(f"transition {t!r} references unknown place {q!r}")
        pre_rows.append(tuple(pre_map.get(p, 0) for p in places))
        post_rows.append(tuple(post_map.get(p, 0) for p in places))
        labels.append(lab)
    if isinstance(initial, Mapping):
        m0 = tuple(initial.get(p, 0) for p in places)
    else:
        m0 = tuple(initial)
    if alphabet is None:
        alphabet = {lab for lab in labels if lab is not EPSILON}
    return LabeledPetriNet(
        places=places,
        transitions=tids,
        pre=tuple(pre_rows),
        post=tuple(post_rows),
        labels=tuple(labels),
        alphabet=frozenset(alphabet),
        initial_marking=m0,
    )


def enabled(net: LabeledPetriNet, m: Marking, t: str) -> bool:
    """True iff every place holds at least the pre-weight of t."""
    net._check_marking(m)
    row = net.pre[net._tindex(t)]
    return all(m[i] >= row[i] for i in range(len(m)))


def fire(net: LabeledPetriNet, m: Marking, t: str) -> Marking:
    """Fire t at m, returning the successor marking. m is not modified."""
    net._check_marking(m)
    ti = net._tindex(t)
    pre_row, post_row = net.pre[ti], net.post[ti]
    for i in range(len(m)):
        if m[i] < pre_row[i]:
            raise FiringError(
                f"transition {t!r} disabled: place {net.places[i]!r} holds "
                f"{m[i]} < {pre_row[i]}",
                transition=t,
                place=net.places[i],
            )
    return tuple(m[i] - pre_row[i] + post_row[i] for i in range(len(m)))


def fire_sequence(net: LabeledPetriNet, m: Marking, seq: Sequence[str]) -> Marking:
    """Fire a sequence of transitions left to right; the empty sequence is m."""
    cur = tuple(m)
    for k, t in enumerate(seq):
        try:
            cur = fire(net, cur, t)
        except FiringError as e:
            raise FiringError(
                f"step {k} ({t!r}) disabled: {e}",
                transition=t,
                place=e.place,
                index=k,
            ) from None
    return cur


def observation(net: LabeledPetriNet, seq: Sequence[str]) -> ObservationWord:
    """Project a firing sequence to its observation (unobservable steps drop)."""
    out = []
    for t in seq:
        lab = net.labels[net._tindex(t)]
        if lab is not EPSILON:
            out.append(lab)
    return tuple(out)


def leq(a: Marking, b: Marking) -> bool:
    """Componentwise partial order on markings."""
    return len(a) == len(b) and all(x <= y for x, y in zip(a, b))
