"""Explicit cycloid nets: synthesis, regular labels, foldings, stop transitions.

Node identity is always the fundamental-parallelogram point (or a class /
process index for nodes introduced by foldings and stop transitions); regular
coordinates are attached as labels and never used as identities.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple

from .algebra import (
    CoordKind,
    CycloidSpec,
    Point,
    RegularCoordinate,
    fundamental_points,
    normalize,
    regular_label,
    stand,
)
from .errors import CycloidError, ParseError

__all__ = [
    "NodeId",
    "T",
    "SF",
    "SB",
    "SBCLASS",
    "TSTOP",
    "Net",
    "Marking",
    "FoldSpec",
    "FoldClass",
    "BfPath",
    "synthesize",
    "standard_marking",
    "regular_marking",
    "attach_regular_labels",
    "fold_classes",
    "backward_fold",
    "project_marking",
    "bf_path",
    "reduced_spec",
    "delete_process",
    "add_stop_transitions",
    "make_stop_resilient",
    "initial_marking",
    "tr",
    "fp",
    "bp",
]

TRANSITION_KINDS = frozenset({"T", "TSTOP"})
PLACE_KINDS = frozenset({"SF", "SB", "SBCLASS"})


class NodeId(NamedTuple):
    kind: str
    x: int
    y: int = 0

    @property
    def is_transition(self) -> bool:
        return self.kind in TRANSITION_KINDS

    @property
    def is_place(self) -> bool:
        return self.kind in PLACE_KINDS

    @property
    def point(self) -> Point:
        return Point(self.x, self.y)

    def __str__(self):
        k = self.kind
        if k == "T":
            return f"t({self.x},{self.y})"
        if k == "SF":
            return f"sf({self.x},{self.y})"
        if k == "SB":
            return f"sb({self.x},{self.y})"
        if k == "SBCLASS":
            return f"SB{{{self.x}}}"
        return f"tstop[{self.x}]"

    @classmethod
    def parse(cls, text: str) -> "NodeId":
        m = _ID_RE.fullmatch(text)
        if m is None:
            raise ParseError(f"not a node id: {text!r}")
        if m["pt"]:
            return cls(_PT_KIND[m["pt"]], int(m["x"]), int(m["y"]))
        if m["cls"] is not None:
            return cls("SBCLASS", int(m["cls"]))
        return cls("TSTOP", int(m["stop"]))


_ID_RE = re.compile(r"(?P<pt>t|sf|sb)\((?P<x>-?\d+),(?P<y>-?\d+)\)|SB\{(?P<cls>\d+)\}|tstop\[(?P<stop>\d+)\]")
_PT_KIND = {"t": "T", "sf": "SF", "sb": "SB"}


def T(x: int, y: int) -> NodeId:
    return NodeId("T", x, y)


def SF(x: int, y: int) -> NodeId:
    return NodeId("SF", x, y)


def SB(x: int, y: int) -> NodeId:
    return NodeId("SB", x, y)


def SBCLASS(i: int) -> NodeId:
    return NodeId("SBCLASS", i)


def TSTOP(j: int) -> NodeId:
    return NodeId("TSTOP", j)


def tr(i: int, j: int) -> RegularCoordinate:
    """Shorthand for ``[t_i, a_j]``."""
    return RegularCoordinate(CoordKind.TRANSITION, i, j)


def fp(i: int, j: int) -> RegularCoordinate:
    """Shorthand for ``[s_i, a_j]``."""
    return RegularCoordinate(CoordKind.FWD_PLACE, i, j)


def bp(i: int, j: int) -> RegularCoordinate:
    """Shorthand for ``[s'_i, a_j]``."""
    return RegularCoordinate(CoordKind.BWD_PLACE, i, j)


# A marking is a multiset of places; zero counts are never stored.
Marking = dict


@dataclass(frozen=True)
class FoldSpec:
    back_indices: frozenset

    def __post_init__(self):
        object.__setattr__(self, "back_indices", frozenset(self.back_indices))
        if len(self.back_indices) <= 1:
            raise CycloidError(f"a backward folding needs |D| > 1, got D={sorted(self.back_indices)}")
        if any(not isinstance(j, int) or j < 0 for j in self.back_indices):
            raise CycloidError(f"back indices must be non-negative integers: {sorted(self.back_indices)}")

    @classmethod
    def total(cls, beta: int) -> "FoldSpec":
        return cls(frozenset(range(beta)))

    def is_total(self, beta: int) -> bool:
        return self.back_indices == frozenset(range(beta))

    def __str__(self):
        return "{" + ",".join(map(str, sorted(self.back_indices))) + "}"


@dataclass(frozen=True)
class FoldClass:
    index: int
    members: frozenset

    @property
    def node(self) -> NodeId:
        return SBCLASS(self.index)


@dataclass(frozen=True)
class BfPath:
    index: int
    nodes: tuple
    shared: Mapping  # process j -> forward place shared with the bf-path


@dataclass(frozen=True, eq=False)
class Net:
    """Place/transition net with canonical node identities.

    ``labels`` maps nodes to regular coordinates (regular cycloids only);
    ``classes`` lists the backward-place classes fused by a folding.
    """

    spec: CycloidSpec | None
    places: frozenset
    transitions: frozenset
    arcs: frozenset
    labels: Mapping = field(default_factory=dict)
    fold: FoldSpec | None = None
    classes: tuple = ()

    def __post_init__(self):
        for src, dst in self.arcs:
            if not ((src in self.places and dst in self.transitions) or (src in self.transitions and dst in self.places)):
                raise CycloidError(f"arc {src}->{dst} does not connect a place and a transition")

    def __eq__(self, other):
        if not isinstance(other, Net):
            return NotImplemented
        return (
            self.spec == other.spec
            and self.places == other.places
            and self.transitions == other.transitions
            and self.arcs == other.arcs
            and dict(self.labels) == dict(other.labels)
            and self.fold == other.fold
            and tuple(self.classes) == tuple(other.classes)
        )

    __hash__ = None  # type: ignore[assignment]

    @cached_property
    def preset(self) -> dict:
        pre = {x: [] for x in self.nodes}
        for src, dst in self.arcs:
            pre[dst].append(src)
        return {x: tuple(sorted(v)) for x, v in pre.items()}

    @cached_property
    def postset(self) -> dict:
        post = {x: [] for x in self.nodes}
        for src, dst in self.arcs:
            post[src].append(dst)
        return {x: tuple(sorted(v)) for x, v in post.items()}

    @cached_property
    def nodes(self) -> tuple:
        return tuple(sorted(self.places | self.transitions))

    @cached_property
    def class_of(self) -> dict:
        """Original backward place -> the fused class node that replaced it."""
        return {m: c.node for c in self.classes for m in c.members}

    @cached_property
    def _by_label(self) -> dict:
        return {rc: node for node, rc in self.labels.items()}

    @property
    def is_folded(self) -> bool:
        return self.fold is not None

    @property
    def stop_transitions(self) -> tuple:
        return tuple(sorted(t for t in self.transitions if t.kind == "TSTOP"))

    def locate(self, rc: RegularCoordinate) -> NodeId:
        """Node of this net carrying regular coordinate ``rc``.

        Backward places fused by a folding resolve to their class node.
        """
        node = self._by_label.get(RegularCoordinate(*rc))
        if node is not None:
            return node
        if self.spec is None or not self.spec.is_regular:
            raise CycloidError("regular coordinates need a regular cycloid")
        pt = stand(self.spec, rc)
        node = {CoordKind.TRANSITION: T, CoordKind.FWD_PLACE: SF, CoordKind.BWD_PLACE: SB}[CoordKind(rc[0])](*pt)
        node = self.class_of.get(node, node)
        if node not in self.places and node not in self.transitions:
            raise CycloidError(f"{RegularCoordinate(*rc)} is not part of this net")
        return node

    def process_of(self, node: NodeId) -> int | None:
        if node.kind == "TSTOP":
            return node.x
        rc = self.labels.get(node)
        return None if rc is None else rc.j


def _node_for(kind: str, pt: Point) -> NodeId:
    return NodeId(kind, pt.xi, pt.eta)


def synthesize(spec: CycloidSpec) -> Net:
    places, transitions, arcs = set(), set(), set()
    for pt in fundamental_points(spec):
        t = _node_for("T", pt)
        transitions.add(t)
        sf, sb = _node_for("SF", pt), _node_for("SB", pt)
        places.update((sf, sb))
        arcs.add((t, sf))
        arcs.add((t, sb))
        arcs.add((_node_for("SF", normalize(spec, (pt.xi - 1, pt.eta)).representative), t))
        arcs.add((_node_for("SB", normalize(spec, (pt.xi, pt.eta - 1)).representative), t))
    return Net(spec, frozenset(places), frozenset(transitions), frozenset(arcs))


def _add(m: dict, node: NodeId, count: int = 1) -> None:
    m[node] = m.get(node, 0) + count


def standard_marking(spec: CycloidSpec) -> Marking:
    """Tokens on the places right below the line ``beta*xi + alpha*eta = 0``."""
    al, be = spec.alpha, spec.beta
    m: dict = {}
    # solution sets are invariant under (alpha, -beta); xi in [0, alpha) picks
    # one point per orbit
    for x in range(al):
        lo = (-be * x - al - be) // al - 1
        hi = (-be * x) // al + 1
        for y in range(lo, hi + 1):
            w = be * x + al * y
            if w <= 0 and w + be > 0:
                _add(m, _node_for("SF", normalize(spec, (x, y)).representative))
            if w <= 0 and w + al > 0:
                _add(m, _node_for("SB", normalize(spec, (x, y)).representative))
    return m


def regular_marking(spec: CycloidSpec, k: int = 0) -> Marking:
    """The regular initial marking (``k = 0``) or its k-regular follower."""
    if isinstance(k, bool) or not isinstance(k, int) or k < 0:
        raise CycloidError(f"k must be a non-negative integer, got {k!r}")
    m: dict = {}
    if k == 0:
        for i in range(0, -spec.beta, -1):
            _add(m, _node_for("SF", normalize(spec, (-1, i)).representative))
        for i in range(spec.alpha):
            _add(m, _node_for("SB", normalize(spec, (i, -spec.beta)).representative))
        return m
    if not spec.is_regular:
        raise CycloidError(f"k-regular markings with k > 0 need a regular cycloid; {spec} is not")
    p = spec.process_length
    if k >= p:
        raise CycloidError(f"k must satisfy 0 <= k < p = {p}, got {k}")
    _add(m, _node_for("SF", stand(spec, tr((p - 1 + k) % p, 0))))
    for i in range(spec.beta - 1):
        _add(m, _node_for("SF", stand(spec, tr((i + k) % p, i + 1))))
    for i in range(p - spec.alpha, p):
        _add(m, _node_for("SB", stand(spec, tr((i + k) % p, 0))))
    return m


def attach_regular_labels(net: Net) -> Net:
    spec = net.spec
    if spec is None or not spec.is_regular:
        raise CycloidError(f"regular labels need a regular cycloid, got {spec}")
    if net.is_folded or net.stop_transitions:
        raise CycloidError("labels are attached to an unfolded cycloid")
    kinds = {"T": CoordKind.TRANSITION, "SF": CoordKind.FWD_PLACE, "SB": CoordKind.BWD_PLACE}
    labels = {node: regular_label(spec, node.point, kinds[node.kind]) for node in net.nodes}
    return replace(net, labels=labels)


def _check_back_indices(spec: CycloidSpec, D: FoldSpec) -> None:
    if not spec.is_regular:
        raise CycloidError(f"foldings are defined on regular cycloids; {spec} is not")
    if spec.beta <= 1:
        raise CycloidError("a backward folding needs beta > 1")
    bad = [j for j in D.back_indices if j >= spec.beta]
    if bad:
        raise CycloidError(f"back indices {bad} outside [0, {spec.beta})")


def fold_classes(spec: CycloidSpec, D: FoldSpec) -> list:
    """The p non-trivial classes of the folding with back indices ``D``."""
    _check_back_indices(spec, D)
    p, n = spec.process_length, spec.n
    out = []
    for i in range(p):
        coords = [bp((i + n) % p, j) for j in sorted(D.back_indices) if j != 0]
        if 0 in D.back_indices:
            coords.insert(0, bp(i, 0))
        members = frozenset(_node_for("SB", stand(spec, rc)) for rc in coords)
        out.append(FoldClass(i, members))
    return out


def project_marking(net: Net, m: Mapping) -> Marking:
    """Push a marking of the unfolded cycloid through ``net``'s class map."""
    out: dict = {}
    cls = net.class_of
    for place, count in m.items():
        if count:
            _add(out, cls.get(place, place), count)
    return out


def backward_fold(net: Net, D: FoldSpec) -> Net:
    spec = net.spec
    if spec is None:
        raise CycloidError("folding needs a cycloid net")
    _check_back_indices(spec, D)
    if not net.labels:
        raise CycloidError("folding needs a regularly labelled net (see attach_regular_labels)")
    if net.is_folded or net.stop_transitions:
        raise CycloidError("only unfolded cycloids can be folded")
    classes = fold_classes(spec, D)
    mapping = {m: c.node for c in classes for m in c.members}
    arcs = frozenset((mapping.get(a, a), mapping.get(b, b)) for a, b in net.arcs)
    places = frozenset(mapping.get(s, s) for s in net.places)
    labels = {k: v for k, v in net.labels.items() if k not in mapping}
    return Net(spec, places, net.transitions, arcs, labels, D, tuple(classes))


def bf_path(spec: CycloidSpec, i: int) -> BfPath:
    """The path through every member of the total-fold class of ``[s'_i, a_0]``."""
    if not spec.is_regular:
        raise CycloidError(f"bf-paths are defined on regular cycloids; {spec} is not")
    p, n, beta = spec.process_length, spec.n, spec.beta
    if not (isinstance(i, int) and 0 <= i < p):
        raise CycloidError(f"bf-path index must satisfy 0 <= i < {p}, got {i!r}")
    k = (i + n - 1) % p

    def node(rc):
        kind = {CoordKind.TRANSITION: "T", CoordKind.FWD_PLACE: "SF", CoordKind.BWD_PLACE: "SB"}[rc.kind]
        return _node_for(kind, stand(spec, rc))

    seq = [bp(i, 0), tr(k, beta - 1)]
    shared = {}
    for j in range(beta - 1, 0, -1):
        seq += [fp(k, j), tr((k + 1) % p, j), bp((k + 1) % p, j), tr(k, j - 1)]
        shared[j] = node(fp(k, j))
    return BfPath(i, tuple(node(rc) for rc in seq), shared)


def reduced_spec(spec: CycloidSpec) -> CycloidSpec:
    """``C(alpha+1, beta-1, p-(alpha+1), beta-1)``: one process fewer, same p."""
    if not spec.is_regular:
        raise CycloidError(f"{spec} is not regular")
    if spec.beta <= 1:
        raise CycloidError("process elimination needs beta > 1")
    p = spec.process_length
    if p <= spec.alpha + 1:
        raise CycloidError(f"p - (alpha + 1) = {p - spec.alpha - 1} must stay positive")
    return CycloidSpec(spec.alpha + 1, spec.beta - 1, p - (spec.alpha + 1), spec.beta - 1)


def delete_process(net: Net, j: int) -> Net:
    """Remove the transitions and forward places of process ``a_j`` and all stop transitions."""
    spec = net.spec
    if not net.is_folded or spec is None:
        raise CycloidError("process deletion is defined on folded cycloids")
    if spec.beta <= 1:
        raise CycloidError("process deletion needs beta > 1")
    if isinstance(j, bool) or not isinstance(j, int) or not 0 <= j < spec.beta:
        raise CycloidError(f"process index must satisfy 0 <= j < {spec.beta}, got {j!r}")
    gone = {x for x in net.nodes if x.kind == "TSTOP" or (x.kind in ("T", "SF") and net.labels[x].j == j)}
    arcs = frozenset((a, b) for a, b in net.arcs if a not in gone and b not in gone)
    labels = {k: v for k, v in net.labels.items() if k not in gone}
    return replace(
        net,
        places=net.places - gone,
        transitions=net.transitions - gone,
        arcs=arcs,
        labels=labels,
    )


def add_stop_transitions(net: Net, processes: Iterable[int] | None = None, force: bool = False) -> Net:
    """Add ``[t_stop, a_j]`` for each requested process.

    The stop transition takes the control token of ``a_j`` (the input place of
    ``[t_j, a_j]``) and emits the permit token ``[t_j, a_j]`` would emit on its
    backward output place.  Without ``force`` only total foldings of
    ``C(g,c,c,c)`` are accepted.
    """
    spec = net.spec
    if spec is None or not net.is_folded:
        raise CycloidError("stop transitions are added to a backward folding")
    c = spec.beta
    if c <= 1:
        raise CycloidError("stop-resilient cycloids need c > 1")
    if not force:
        if not net.fold.is_total(c):
            raise CycloidError("stop transitions need a total folding (use force to override)")
        if not (spec.gamma == c and spec.delta == c):
            raise CycloidError(f"{spec} is not of the form C(g,c,c,c) (use force to override)")
    p = spec.process_length
    procs = range(c) if processes is None else sorted(set(processes))
    transitions, arcs = set(net.transitions), set(net.arcs)
    for j in procs:
        if not 0 <= j < c:
            raise CycloidError(f"process index must satisfy 0 <= j < {c}, got {j}")
        t = TSTOP(j)
        transitions.add(t)
        arcs.add((net.locate(fp((j - 1) % p, j)), t))
        arcs.add((t, net.locate(bp(j, j))))
    return replace(net, transitions=frozenset(transitions), arcs=frozenset(arcs))


def make_stop_resilient(
    g: int,
    c: int,
    force: bool = False,
    gamma: int | None = None,
    delta: int | None = None,
    processes: Iterable[int] | None = None,
) -> Net:
    """Total backward folding of ``C(g,c,c,c)`` extended by stop transitions.

    ``gamma``/``delta`` select a different regular base cycloid, which is only
    accepted with ``force``.
    """
    if c <= 1:
        raise CycloidError("stop-resilient cycloids need c > 1")
    gamma = c if gamma is None else gamma
    delta = c if delta is None else delta
    if (gamma, delta) != (c, c) and not force:
        raise CycloidError(f"C({g},{c},{gamma},{delta}) is not of the form C(g,c,c,c) (use force to override)")
    spec = CycloidSpec(g, c, gamma, delta)
    folded = backward_fold(attach_regular_labels(synthesize(spec)), FoldSpec.total(c))
    return add_stop_transitions(folded, processes, force=force)


def initial_marking(net: Net, kind: str = "regular", k: int = 0) -> Marking:
    """Standard or k-regular marking of ``net``'s cycloid, projected through any folding."""
    if net.spec is None:
        raise CycloidError("initial markings are defined for cycloid nets")
    if kind == "regular":
        m = regular_marking(net.spec, k)
    elif kind == "standard":
        if k:
            raise CycloidError("k applies to regular markings only")
        m = standard_marking(net.spec)
    else:
        raise CycloidError(f"unknown marking kind {kind!r}")
    return {s: c for s, c in project_marking(net, m).items() if s in net.places}
