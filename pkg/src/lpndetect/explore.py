"""State-space machinery.

Provides budgeted reachability graphs with completeness tracking, Karp-Miller
coverability trees, coverability queries, current-marking estimation, and a
restricted multi-segment path-pattern search. The pattern search looks for a
computation split into up to four segments with componentwise-covering
constraints between adjacent segment endpoints, per-segment length
restrictions, and a disjunctive place-comparison predicate on the final
marking. On a net whose reachability graph closes within budget the answer
is exact; otherwise a found witness is sound and everything else is
reported as inconclusive.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

import networkx as nx

from .net import (
    EPSILON,
    FiringError,
    InputError,
    LabeledPetriNet,
    Marking,
    enabled,
    fire,
    fire_sequence,
    leq,
)

HOLDS = "holds"
FAILS = "fails"
INCONCLUSIVE = "inconclusive"

# Token count standing for "arbitrarily many" in coverability trees.
OMEGA = float("inf")


@dataclass(frozen=True)
class Budget:
    max_states: int = 100_000
    max_depth: int = 10_000

    def __post_init__(self):
        if self.max_states < 1 or self.max_depth < 1:
            raise InputError("budget bounds must be >= 1")


@dataclass
class SearchStats:
    states: int = 0
    depth: int = 0
    wall_time: float = 0.0


@dataclass(frozen=True)
class Witness:
    """A replayable certificate: per-segment firing sequences plus the
    markings reached at each segment boundary."""

    segments: tuple  # tuple[tuple[str, ...], ...]
    markings: tuple  # tuple[Marking, ...], one per segment end


@dataclass(frozen=True)
class Verdict:
    outcome: str  # HOLDS | FAILS | INCONCLUSIVE
    witness: object = None
    stats: SearchStats = field(default_factory=SearchStats)
    message: str = ""

    def __post_init__(self):
        if self.outcome == FAILS and self.witness is None:
            # Checkers for properties whose failure has no finite certificate
            # (e.g. absence of a resolving trajectory) construct Verdicts via
            # fails_without_witness below.
            raise InputError("a failing verdict must carry a witness")

    @property
    def holds(self):
        return self.outcome == HOLDS

    @property
    def fails(self):
        return self.outcome == FAILS


def fails_without_witness(stats=None, message="") -> Verdict:
    """Failing verdict for universal properties with no finite witness."""
    v = Verdict.__new__(Verdict)
    object.__setattr__(v, "outcome", FAILS)
    object.__setattr__(v, "witness", None)
    object.__setattr__(v, "stats", stats or SearchStats())
    object.__setattr__(v, "message", message)
    return v


# ---------------------------------------------------------------------------
# Reachability graphs
# ---------------------------------------------------------------------------


@dataclass
class ReachabilityGraph:
    net: LabeledPetriNet
    markings: list  # list[Marking], index = node id
    index: dict  # Marking -> node id
    edges: list  # list[(src, transition-id, dst)]
    succ: list  # adjacency: succ[v] = [(transition-id, w), ...]
    depth: list  # BFS depth per node
    initial: int = 0
    complete: bool = True


def build_reachability_graph(
    net: LabeledPetriNet, budget: Budget, start: Optional[Marking] = None
) -> ReachabilityGraph:
    """BFS over reachable markings in declared transition order.

    complete is True iff every enabled firing from every stored node lands in
    a stored node. Edges are only recorded between stored nodes.
    """
    if start is None:
        start = net.initial_marking
    net._check_marking(start)
    markings = [tuple(start)]
    index = {tuple(start): 0}
    depth = [0]
    edges = []
    succ = [[]]
    complete = True
    queue = deque([0])
    while queue:
        v = queue.popleft()
        m = markings[v]
        d = depth[v]
        for ti, t in enumerate(net.transitions):
            row = net.pre[ti]
            if any(m[i] < row[i] for i in range(len(m))):
                continue
            post_row = net.post[ti]
            m2 = tuple(m[i] - row[i] + post_row[i] for i in range(len(m)))
            w = index.get(m2)
            if w is None:
                if len(markings) >= budget.max_states or d + 1 > budget.max_depth:
                    complete = False
                    continue
                w = len(markings)
                markings.append(m2)
                index[m2] = w
                depth.append(d + 1)
                succ.append([])
                queue.append(w)
            edges.append((v, t, w))
            succ[v].append((t, w))
    return ReachabilityGraph(
        net=net,
        markings=markings,
        index=index,
        edges=edges,
        succ=succ,
        depth=depth,
        complete=complete,
    )


# ---------------------------------------------------------------------------
# Karp-Miller coverability tree
# ---------------------------------------------------------------------------


@dataclass
class KMNode:
    marking: tuple  # entries are naturals or OMEGA
    via: Optional[str]  # transition fired from the parent, None at the root
    parent: Optional["KMNode"]
    children: list = field(default_factory=list)


def build_km_tree(net: LabeledPetriNet) -> KMNode:
    """Standard Karp-Miller construction; terminates on every net."""
    root = KMNode(tuple(net.initial_marking), None, None)
    queue = deque([root])
    while queue:
        node = queue.popleft()
        # A marking repeating an ancestor adds nothing below it.
        anc = node.parent
        repeated = False
        while anc is not None:
            if anc.marking == node.marking:
                repeated = True
                break
            anc = anc.parent
        if repeated:
            continue
        m = node.marking
        for ti, t in enumerate(net.transitions):
            row = net.pre[ti]
            if any(m[i] < row[i] for i in range(len(m))):
                continue
            post_row = net.post[ti]
            child = tuple(m[i] - row[i] + post_row[i] for i in range(len(m)))
            child = _accelerate(child, node)
            kid = KMNode(child, t, node)
            node.children.append(kid)
            queue.append(kid)
    return root


def _accelerate(marking: tuple, node: KMNode) -> tuple:
    """Replace strictly-increased coordinates over any ancestor by OMEGA."""
    changed = True
    while changed:
        changed = False
        anc = node
        while anc is not None:
            a = anc.marking
            if a != marking and all(a[i] <= marking[i] for i in range(len(a))):
                accel = tuple(
                    OMEGA if marking[i] > a[i] else marking[i]
                    for i in range(len(marking))
                )
                if accel != marking:
                    marking = accel
                    changed = True
            anc = anc.parent
    return marking


def km_nodes(root: KMNode):
    stack = [root]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(n.children))


def coverable(net: LabeledPetriNet, target: Marking) -> bool:
    """Whether some reachable marking dominates target componentwise."""
    net._check_marking(target)
    root = build_km_tree(net)
    for node in km_nodes(root):
        if all(node.marking[i] >= target[i] for i in range(len(target))):
            return True
    return False


# ---------------------------------------------------------------------------
# Path patterns
# ---------------------------------------------------------------------------

LEN_ANY = "any"
LEN_EMPTY = "empty"
LEN_NONEMPTY = "nonempty"
LEN_NONEMPTY_UNOBS = "nonempty-unobservable"

_LENGTHS = (LEN_ANY, LEN_EMPTY, LEN_NONEMPTY, LEN_NONEMPTY_UNOBS)


@dataclass(frozen=True)
class PathPattern:
    """A segmented-computation query.

    covering lists pairs (i, j) requiring marking-after-segment-i <= marking-
    after-segment-j; only adjacent pairs (j == i + 1) are supported, which is
    all the detectability checks need. lengths gives one restriction per
    segment. mismatch_pairs is a disjunction of place-index inequalities
    evaluated on the final marking; empty means no final restriction.
    """

    segment_count: int
    covering: tuple = ()
    lengths: tuple = ()
    mismatch_pairs: tuple = ()

    def __post_init__(self):
        if not 1 <= self.segment_count <= 4:
            raise InputError("segment count must be between 1 and 4")
        if len(self.lengths) != self.segment_count:
            raise InputError("one length restriction per segment required")
        for lc in self.lengths:
            if lc not in _LENGTHS:
                raise InputError(f"unknown length restriction {lc!r}")
        for i, j in self.covering:
            if not (0 <= i < j <= self.segment_count):
                raise InputError(f"covering pair {(i, j)} out of range")
            if j != i + 1:
                raise InputError("only adjacent covering pairs are supported")

    def validate_for(self, net: LabeledPetriNet):
        n = len(net.places)
        for a, b in self.mismatch_pairs:
            if not (0 <= a < n and 0 <= b < n):
                raise InputError(f"final-predicate place index {(a, b)} out of range")

    def final_ok(self, m: Marking) -> bool:
        if not self.mismatch_pairs:
            return True
        return any(m[a] != m[b] for a, b in self.mismatch_pairs)


def strong_detectability_pattern(n_places: int) -> PathPattern:
    """Three segments over a twin net: reach, pump (covering, nonempty),
    then reach a marking whose two halves disagree."""
    half = n_places // 2
    return PathPattern(
        segment_count=3,
        covering=((1, 2),),
        lengths=(LEN_ANY, LEN_NONEMPTY, LEN_ANY),
        mismatch_pairs=tuple((i, i + half) for i in range(half)),
    )


def unobservable_cycle_pattern() -> PathPattern:
    """Two segments: reach, then a nonempty all-unobservable pump (covering)."""
    return PathPattern(
        segment_count=2,
        covering=((1, 2),),
        lengths=(LEN_ANY, LEN_NONEMPTY_UNOBS),
    )


# ---------------------------------------------------------------------------
# Pattern search
# ---------------------------------------------------------------------------


def _cycle_nodes(n_nodes: int, edge_list) -> set:
    """Node ids lying on some nontrivial cycle (self-loops included)."""
    g = nx.DiGraph()
    g.add_nodes_from(range(n_nodes))
    selfloop = set()
    for v, w in edge_list:
        if v == w:
            selfloop.add(v)
        g.add_edge(v, w)
    out = set(selfloop)
    for comp in nx.strongly_connected_components(g):
        if len(comp) > 1:
            out.update(comp)
    return out


def _step_allowed(net: LabeledPetriNet, lc: str, t: str) -> bool:
    if lc == LEN_EMPTY:
        return False
    if lc == LEN_NONEMPTY_UNOBS:
        return net.label(t) is EPSILON
    return True


def _exact_exists(graph: ReachabilityGraph, pattern: PathPattern) -> bool:
    """Decide the pattern on a complete (hence bounded) reachability graph.

    On a bounded net a covering pair with the later marking reachable from
    the earlier one forces equality, so a covering segment degenerates to a
    nontrivial cycle in the segment's allowed-edge subgraph.
    """
    net = graph.net
    covering = set(pattern.covering)
    cur = {graph.initial}
    n = len(graph.markings)
    for j in range(1, pattern.segment_count + 1):
        lc = pattern.lengths[j - 1]
        allowed = [
            (v, w)
            for v in range(n)
            for (t, w) in graph.succ[v]
            if _step_allowed(net, lc, t)
        ]
        if (j - 1, j) in covering:
            if lc == LEN_EMPTY:
                continue  # empty segment satisfies covering trivially
            cyc = _cycle_nodes(n, allowed)
            cur = {v for v in cur if v in cyc}
        elif lc == LEN_EMPTY:
            pass
        else:
            g = nx.DiGraph()
            g.add_nodes_from(range(n))
            g.add_edges_from(allowed)
            reach = set()
            if lc == LEN_ANY:
                frontier = set(cur)
                reach = set(cur)
            else:  # at least one step
                frontier = {w for v in cur for w in g.successors(v)}
                reach = set(frontier)
            while frontier:
                nxt = {w for v in frontier for w in g.successors(v)} - reach
                reach |= nxt
                frontier = nxt
            cur = reach
        if not cur:
            return False
    return any(pattern.final_ok(graph.markings[v]) for v in cur)


def _witness_search(
    net: LabeledPetriNet,
    start: Marking,
    pattern: PathPattern,
    max_states: Optional[int],
    max_depth: Optional[int],
):
    """0/1-BFS over (segment, marking, covering anchor, moved) states.

    Returns (witness-or-None, exhausted, states-seen, max-cost). The BFS
    layers count fired transitions, so the first accepted state yields a
    witness of minimal total segment length; ties break on declared
    transition order.
    """
    covering = set(pattern.covering)
    k = pattern.segment_count

    def entered(j, m):
        anchor = m if (j - 1, j) in covering else None
        return (j, m, anchor, False)

    start = tuple(start)
    init = entered(1, start)
    parents = {init: None}  # state -> (prev_state, action)
    cost = {init: 0}
    seen_markings = {start}
    truncated = False
    queue = deque([init])
    accepted = None
    max_cost = 0

    def can_close(state):
        j, m, anchor, moved = state
        lc = pattern.lengths[j - 1]
        if lc in (LEN_NONEMPTY, LEN_NONEMPTY_UNOBS) and not moved:
            return False
        if anchor is not None and not leq(anchor, m):
            return False
        return True

    while queue:
        state = queue.popleft()
        j, m, anchor, moved = state
        c = cost[state]
        max_cost = max(max_cost, c)
        if can_close(state):
            if j == k:
                if pattern.final_ok(m):
                    accepted = ("accept", state)
                    break
            else:
                nxt = entered(j + 1, m)
                if nxt not in parents:
                    parents[nxt] = (state, ("close",))
                    cost[nxt] = c
                    queue.appendleft(nxt)
        lc = pattern.lengths[j - 1]
        if lc == LEN_EMPTY:
            continue
        if max_depth is not None and c >= max_depth:
            truncated = True
            continue
        for ti, t in enumerate(net.transitions):
            if lc == LEN_NONEMPTY_UNOBS and net.labels[ti] is not EPSILON:
                continue
            row = net.pre[ti]
            if any(m[i] < row[i] for i in range(len(m))):
                continue
            post_row = net.post[ti]
            m2 = tuple(m[i] - row[i] + post_row[i] for i in range(len(m)))
            if m2 not in seen_markings:
                if max_states is not None and len(seen_markings) >= max_states:
                    truncated = True
                    continue
                seen_markings.add(m2)
            nxt = (j, m2, anchor, True)
            if nxt not in parents:
                parents[nxt] = (state, ("step", t))
                cost[nxt] = c + 1
                queue.append(nxt)

    if accepted is None:
        return None, not truncated, len(seen_markings), max_cost

    # Reconstruct segments from the parent chain.
    _, final_state = accepted
    actions = []
    cur = final_state
    while parents[cur] is not None:
        prev, act = parents[cur]
        actions.append((act, cur))
        cur = prev
    actions.reverse()
    segments = [[] for _ in range(k)]
    boundary_markings = [None] * k
    seg = 0
    for act, state in actions:
        if act[0] == "step":
            segments[seg].append(act[1])
        else:  # close: the state is the entry of the next segment
            boundary_markings[seg] = state[1]
            seg += 1
    boundary_markings[k - 1] = final_state[1]
    witness = Witness(
        segments=tuple(tuple(s) for s in segments),
        markings=tuple(boundary_markings),
    )
    return witness, False, len(seen_markings), max_cost


def replay_witness(
    net: LabeledPetriNet, start: Marking, pattern: PathPattern, witness: Witness
) -> bool:
    """Re-fire a witness from start and check every pattern constraint."""
    if len(witness.segments) != pattern.segment_count:
        return False
    m = tuple(start)
    boundary = [tuple(start)]
    for seg_i, seg in enumerate(witness.segments):
        lc = pattern.lengths[seg_i]
        if lc == LEN_EMPTY and len(seg) > 0:
            return False
        if lc in (LEN_NONEMPTY, LEN_NONEMPTY_UNOBS) and len(seg) == 0:
            return False
        if lc == LEN_NONEMPTY_UNOBS and any(
            net.label(t) is not EPSILON for t in seg
        ):
            return False
        try:
            m = fire_sequence(net, m, seg)
        except FiringError:
            return False
        if m != witness.markings[seg_i]:
            return False
        boundary.append(m)
    for i, j in pattern.covering:
        if not leq(boundary[i], boundary[j]):
            return False
    return pattern.final_ok(m)


def search_pattern(
    net: LabeledPetriNet,
    start: Marking,
    pattern: PathPattern,
    budget: Budget,
) -> Verdict:
    """Search for a computation matching pattern from start.

    FAILS carries a minimal replay-checked witness. HOLDS is emitted only
    when the reachability graph from start closed within budget, so absence
    is a proof. Everything else is INCONCLUSIVE.
    """
    t0 = time.perf_counter()
    pattern.validate_for(net)
    net._check_marking(start)
    graph = build_reachability_graph(net, budget, start=start)
    if graph.complete:
        if _exact_exists(graph, pattern):
            witness, _, states, depth = _witness_search(net, start, pattern, None, None)
            assert witness is not None and replay_witness(net, start, pattern, witness)
            stats = SearchStats(states, depth, time.perf_counter() - t0)
            return Verdict(FAILS, witness, stats)
        stats = SearchStats(len(graph.markings), max(graph.depth), time.perf_counter() - t0)
        return Verdict(HOLDS, None, stats)
    witness, _, states, depth = _witness_search(
        net, start, pattern, budget.max_states, budget.max_depth
    )
    stats = SearchStats(states, depth, time.perf_counter() - t0)
    if witness is not None:
        assert replay_witness(net, start, pattern, witness)
        return Verdict(FAILS, witness, stats)
    return Verdict(
        INCONCLUSIVE,
        stats=stats,
        message="state space did not close within budget",
    )


# ---------------------------------------------------------------------------
# Current-marking estimation
# ---------------------------------------------------------------------------


def estimate(net: LabeledPetriNet, word: Sequence[str], budget: Budget):
    """Markings consistent with observing word from the initial marking.

    Returns (frozenset of markings, complete). When complete is False the
    set is a sound under-approximation.
    """
    for sym in word:
        if sym not in net.alphabet:
            raise InputError(f"symbol {sym!r} not in alphabet")
    word = tuple(word)
    start = (net.initial_marking, 0)
    seen = {start}
    seen_markings = {net.initial_marking}
    queue = deque([(start, 0)])
    complete = True
    result = set()
    if len(word) == 0:
        result.add(net.initial_marking)
    while queue:
        (m, pos), d = queue.popleft()
        if d >= budget.max_depth:
            complete = False
            continue
        for ti, t in enumerate(net.transitions):
            lab = net.labels[ti]
            if lab is EPSILON:
                pos2 = pos
            elif pos < len(word) and lab == word[pos]:
                pos2 = pos + 1
            else:
                continue
            row = net.pre[ti]
            if any(m[i] < row[i] for i in range(len(m))):
                continue
            post_row = net.post[ti]
            m2 = tuple(m[i] - row[i] + post_row[i] for i in range(len(m)))
            if m2 not in seen_markings:
                if len(seen_markings) >= budget.max_states:
                    complete = False
                    continue
                seen_markings.add(m2)
            nxt = (m2, pos2)
            if nxt in seen:
                continue
            seen.add(nxt)
            if pos2 == len(word):
                result.add(m2)
            queue.append((nxt, d + 1))
    return frozenset(result), complete
