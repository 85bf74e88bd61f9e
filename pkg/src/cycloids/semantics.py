"""Token game, exhaustive reachability and behavioural property checks.

Markings are multisets.  Under the default ``plain`` rule a transition needs
one token on every input place and nothing else, so places can accumulate
tokens and safety becomes a checkable property rather than an assumption.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import CycloidError, NotEnabledError
from .nets import Net, NodeId

__all__ = [
    "FiringRule",
    "PropertyReport",
    "ReachabilityGraph",
    "DEFAULT_MAX_STATES",
    "enabled_set",
    "fire",
    "replay",
    "reachability",
    "find_state",
    "check_safety",
    "check_liveness",
    "check_fold_bisimulation",
    "without_stop_transitions",
]

DEFAULT_MAX_STATES = 1_000_000


class FiringRule(str, Enum):
    PLAIN = "plain"
    CONTACT_FREE = "contact_free"


def _rule(rule) -> FiringRule:
    if isinstance(rule, str):
        rule = rule.replace("-", "_")
    return FiringRule(rule)


@dataclass
class PropertyReport:
    property: str
    holds: bool
    witness: dict | None = None
    stats: dict = field(default_factory=dict)
    inconclusive: bool = False

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "holds": self.holds,
            "inconclusive": self.inconclusive,
            "witness": _jsonable(self.witness),
            "stats": _jsonable(self.stats),
        }


def _jsonable(obj):
    if isinstance(obj, NodeId):
        return str(obj)
    if isinstance(obj, Mapping):
        return {str(k) if isinstance(k, NodeId) else k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return [_jsonable(v) for v in sorted(obj)]
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


class _Compiled:
    """Index-based view of a net used by the exploration loops."""

    def __init__(self, net: Net):
        self.net = net
        self.places = tuple(sorted(net.places))
        self.transitions = tuple(sorted(net.transitions))
        self.pidx = {p: i for i, p in enumerate(self.places)}
        self.tidx = {t: i for i, t in enumerate(self.transitions)}
        self.pre = [tuple(self.pidx[p] for p in net.preset[t]) for t in self.transitions]
        self.post = [tuple(self.pidx[p] for p in net.postset[t]) for t in self.transitions]

    def vector(self, m: Mapping) -> tuple:
        vec = [0] * len(self.places)
        for place, count in m.items():
            if place not in self.pidx:
                raise CycloidError(f"marking refers to unknown place {place}")
            if count < 0:
                raise CycloidError(f"negative token count on {place}")
            vec[self.pidx[place]] += count
        return tuple(vec)

    def marking(self, vec: Sequence[int]) -> dict:
        return {self.places[i]: c for i, c in enumerate(vec) if c}

    def enabled(self, vec: Sequence[int], rule: FiringRule) -> list:
        out = []
        contact = rule is FiringRule.CONTACT_FREE
        for t, pre in enumerate(self.pre):
            if all(vec[p] for p in pre) and not (contact and any(vec[p] for p in self.post[t])):
                out.append(t)
        return out

    def fire(self, vec: Sequence[int], t: int) -> tuple:
        nxt = list(vec)
        for p in self.pre[t]:
            nxt[p] -= 1
        for p in self.post[t]:
            nxt[p] += 1
        return tuple(nxt)


_COMPILED: dict = {}


def _compile(net: Net) -> _Compiled:
    # nets are immutable; cache by identity
    entry = _COMPILED.get(id(net))
    if entry is None or entry.net is not net:
        entry = _Compiled(net)
        if len(_COMPILED) > 64:
            _COMPILED.clear()
        _COMPILED[id(net)] = entry
    return entry


def enabled_set(net: Net, m: Mapping, rule=FiringRule.PLAIN) -> list:
    """Transitions enabled in ``m``, sorted by node id."""
    c = _compile(net)
    return [c.transitions[t] for t in c.enabled(c.vector(m), _rule(rule))]


def fire(net: Net, m: Mapping, t: NodeId, rule=FiringRule.PLAIN) -> dict:
    rule = _rule(rule)
    c = _compile(net)
    if t not in c.tidx:
        raise CycloidError(f"{t} is not a transition of this net")
    vec = c.vector(m)
    ti = c.tidx[t]
    for p in c.pre[ti]:
        if vec[p] < 1:
            raise NotEnabledError(t, c.places[p])
    if rule is FiringRule.CONTACT_FREE:
        for p in c.post[ti]:
            if vec[p]:
                raise NotEnabledError(t, c.places[p], f"{t} is not enabled: output place {c.places[p]} is marked")
    return c.marking(c.fire(vec, ti))


def replay(net: Net, m: Mapping, sequence: Iterable[NodeId], rule=FiringRule.PLAIN) -> dict:
    for t in sequence:
        m = fire(net, m, t, rule)
    return dict(m)


@dataclass
class ReachabilityGraph:
    net: Net
    rule: FiringRule
    places: tuple
    transitions: tuple
    states: list
    edges: list  # (source state, transition index, target state)
    parent: list  # (predecessor state, transition index) on a BFS tree
    complete: bool
    initial: int = 0

    @property
    def n_states(self) -> int:
        return len(self.states)

    def marking(self, i: int) -> dict:
        return {self.places[k]: c for k, c in enumerate(self.states[i]) if c}

    def path_to(self, i: int) -> list:
        seq = []
        while i != self.initial:
            i, t = self.parent[i]
            seq.append(self.transitions[t])
        return seq[::-1]

    def labelled_edges(self):
        for s, t, d in self.edges:
            yield s, self.transitions[t], d


def reachability(net: Net, m0: Mapping, rule=FiringRule.PLAIN, max_states: int = DEFAULT_MAX_STATES) -> ReachabilityGraph:
    """Breadth-first state-space exploration in sorted transition order."""
    rule = _rule(rule)
    c = _compile(net)
    start = c.vector(m0)
    states = [start]
    index = {start: 0}
    parent: list = [(0, -1)]
    edges = []
    complete = True
    queue = deque([0])
    while queue and complete:
        s = queue.popleft()
        vec = states[s]
        for t in c.enabled(vec, rule):
            nxt = c.fire(vec, t)
            d = index.get(nxt)
            if d is None:
                if len(states) >= max_states:
                    complete = False
                    break
                d = len(states)
                index[nxt] = d
                states.append(nxt)
                parent.append((s, t))
                queue.append(d)
            edges.append((s, t, d))
    return ReachabilityGraph(net, rule, c.places, c.transitions, states, edges, parent, complete)


def _base_stats(rg: ReachabilityGraph) -> dict:
    return {"states": rg.n_states, "edges": len(rg.edges), "complete": rg.complete}


def find_state(rg: ReachabilityGraph, predicate) -> tuple | None:
    """Shortest firing sequence to a stored state whose marking satisfies ``predicate``.

    Returns ``(sequence, marking)`` or ``None``; BFS numbering makes the first
    match a shortest one.
    """
    for i in range(rg.n_states):
        m = rg.marking(i)
        if predicate(m):
            return rg.path_to(i), m
    return None


def check_safety(rg: ReachabilityGraph) -> PropertyReport:
    first = None
    unsafe = set()
    for i, vec in enumerate(rg.states):
        if max(vec, default=0) > 1:
            unsafe.update(rg.places[k] for k, c in enumerate(vec) if c > 1)
            if first is None:
                first = i
    if first is not None:
        vec = rg.states[first]
        worst = max(vec)
        witness = {
            "sequence": rg.path_to(first),
            "marking": rg.marking(first),
            "place": rg.places[vec.index(worst)],
            "tokens": worst,
        }
        stats = _base_stats(rg)
        stats["unsafe_places"] = sorted(unsafe)
        return PropertyReport("safe", False, witness, stats)
    if not rg.complete:
        return PropertyReport("safe", False, None, _base_stats(rg), inconclusive=True)
    return PropertyReport("safe", True, None, _base_stats(rg))


def check_liveness(rg: ReachabilityGraph, transitions: Iterable[NodeId] | None = None) -> PropertyReport:
    """Liveness via terminal strongly connected components of the state graph.

    ``t`` is live iff every terminal component contains an edge labelled ``t``
    (inside a terminal component every enabled transition stays inside).
    """
    wanted = list(rg.transitions) if transitions is None else sorted(transitions)
    tpos = {t: i for i, t in enumerate(rg.transitions)}
    for t in wanted:
        if t not in tpos:
            raise CycloidError(f"{t} is not a transition of the explored net")
    stats = _base_stats(rg)
    if not rg.complete:
        return PropertyReport("live", False, None, stats, inconclusive=True)

    n = rg.n_states
    if rg.edges:
        e = np.asarray(rg.edges, dtype=np.int64)
        src, lab, dst = e[:, 0], e[:, 1], e[:, 2]
    else:
        src = lab = dst = np.zeros(0, dtype=np.int64)
    graph = csr_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
    ncomp, comp = connected_components(graph, directed=True, connection="strong")
    cross = comp[src] != comp[dst]
    terminal = np.ones(ncomp, dtype=bool)
    terminal[comp[src[cross]]] = False
    term_ids = np.flatnonzero(terminal)
    inner = ~cross & terminal[comp[src]]
    fired = {int(k): set() for k in term_ids}
    for k, t in zip(comp[src[inner]].tolist(), lab[inner].tolist()):
        fired[k].add(t)
    # lowest state index of each terminal component, for stable witnesses
    first_state = {}
    for i, k in enumerate(comp.tolist()):
        if k in fired and k not in first_state:
            first_state[k] = i

    dead = []
    witness_state = None
    for t in wanted:
        missing = [k for k in fired if tpos[t] not in fired[k]]
        if missing:
            dead.append(t)
            s = min(first_state[k] for k in missing)
            witness_state = s if witness_state is None else min(witness_state, s)
    stats.update(terminal_sccs=len(fired), checked=len(wanted), not_live=dead)
    if not dead:
        return PropertyReport("live", True, None, stats)
    witness = {
        "sequence": rg.path_to(witness_state),
        "marking": rg.marking(witness_state),
        "unreachable": [t for t in dead if tpos[t] not in fired[int(comp[witness_state])]],
    }
    return PropertyReport("live", False, witness, stats)


def check_fold_bisimulation(
    base: Net,
    m0: Mapping,
    folded: Net,
    rule=FiringRule.PLAIN,
    max_states: int = DEFAULT_MAX_STATES,
) -> PropertyReport:
    """Lockstep exploration of a cycloid and its backward folding.

    Each base marking ``M`` is paired with its image ``[M]``; the relation holds
    iff both sides always enable the same transitions and successors re-pair.
    """
    rule = _rule(rule)
    if base.transitions != folded.transitions:
        raise CycloidError("base and folded nets must share their transitions")
    if not folded.is_folded:
        raise CycloidError("the second net must be a backward folding")
    cb, cf = _compile(base), _compile(folded)
    cls = folded.class_of
    try:
        proj = [cf.pidx[cls.get(p, p)] for p in cb.places]
    except KeyError as exc:
        raise CycloidError(f"base place {exc.args[0]} has no image in the folded net") from None

    def image(vec):
        out = [0] * len(cf.places)
        for i, c in enumerate(vec):
            if c:
                out[proj[i]] += c
        return tuple(out)

    start = cb.vector(m0)
    states = [start]
    index = {start: 0}
    parent = [(0, -1)]
    queue = deque([0])
    n_pairs = 0

    def seq_to(i):
        out = []
        while i:
            i, t = parent[i]
            out.append(cb.transitions[t])
        return out[::-1]

    while queue:
        s = queue.popleft()
        vec = states[s]
        img = image(vec)
        n_pairs += 1
        en_b = cb.enabled(vec, rule)
        en_f = cf.enabled(img, rule)
        if en_b != en_f:
            only_f = sorted(set(en_f) - set(en_b))
            only_b = sorted(set(en_b) - set(en_f))
            witness = {
                "sequence": seq_to(s),
                "base_marking": cb.marking(vec),
                "folded_marking": cf.marking(img),
                "enabled_only_in_folded": [cf.transitions[t] for t in only_f],
                "enabled_only_in_base": [cb.transitions[t] for t in only_b],
            }
            return PropertyReport("bisimilar", False, witness, {"pairs": n_pairs, "complete": False})
        for t in en_b:
            nxt = cb.fire(vec, t)
            if image(nxt) != cf.fire(img, t):
                witness = {"sequence": seq_to(s) + [cb.transitions[t]], "note": "successors do not re-pair"}
                return PropertyReport("bisimilar", False, witness, {"pairs": n_pairs, "complete": False})
            if nxt not in index:
                if len(states) >= max_states:
                    return PropertyReport("bisimilar", False, None, {"pairs": n_pairs, "complete": False}, inconclusive=True)
                index[nxt] = len(states)
                states.append(nxt)
                parent.append((s, t))
                queue.append(index[nxt])
    return PropertyReport("bisimilar", True, None, {"pairs": n_pairs, "complete": True})


def without_stop_transitions(net: Net) -> Net:
    """Copy of ``net`` with every stop transition and its arcs removed."""
    stops = set(net.stop_transitions)
    return replace(
        net,
        transitions=net.transitions - stops,
        arcs=frozenset((a, b) for a, b in net.arcs if a not in stops and b not in stops),
    )
