"""Net isomorphism by colour refinement plus backtracking.

A net isomorphism is a bijection mapping places to places and transitions to
transitions that preserves the flow relation in both directions.  With
markings supplied it must also preserve token counts.
"""

from __future__ import annotations

from collections import Counter, deque
from typing import Mapping

from .errors import ResourceError
from .nets import Net
from .semantics import PropertyReport

__all__ = ["isomorphic", "validate_mapping", "DEFAULT_MAX_NODES"]

DEFAULT_MAX_NODES = 1000


class _Graph:
    def __init__(self, net: Net, marking: Mapping | None):
        self.nodes = list(net.nodes)
        idx = {x: i for i, x in enumerate(self.nodes)}
        self.out = [set() for _ in self.nodes]
        self.inn = [set() for _ in self.nodes]
        for a, b in net.arcs:
            self.out[idx[a]].add(idx[b])
            self.inn[idx[b]].add(idx[a])
        marking = marking or {}
        self.tokens = [marking.get(x, 0) for x in self.nodes]
        self.is_transition = [x.is_transition for x in self.nodes]
        self.undirected = [sorted(self.out[i] | self.inn[i]) for i in range(len(self.nodes))]

    def shortest_cycle(self, v: int) -> int:
        dist = {v: 0}
        queue = deque([v])
        while queue:
            u = queue.popleft()
            for w in self.out[u]:
                if w == v:
                    return dist[u] + 1
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return 0

    def signature(self, v: int) -> tuple:
        return (self.is_transition[v], len(self.inn[v]), len(self.out[v]), self.tokens[v], self.shortest_cycle(v))


def _refine(ga: _Graph, gb: _Graph) -> tuple[list, list]:
    """Joint colour refinement; colours are comparable across both graphs."""
    palette: dict = {}
    ca = [palette.setdefault(ga.signature(v), len(palette)) for v in range(len(ga.nodes))]
    cb = [palette.setdefault(gb.signature(v), len(palette)) for v in range(len(gb.nodes))]
    n_colors = len(palette)
    while True:
        palette = {}

        def step(g, col):
            return [
                palette.setdefault(
                    (col[v], tuple(sorted(col[w] for w in g.out[v])), tuple(sorted(col[w] for w in g.inn[v]))),
                    len(palette),
                )
                for v in range(len(g.nodes))
            ]

        ca, cb = step(ga, ca), step(gb, cb)
        if len(palette) == n_colors:
            return ca, cb
        n_colors = len(palette)


def _order(g: _Graph, colors: list, class_size: Counter) -> list:
    """Visit order where every node after the first of a component touches an earlier one."""
    seen = [False] * len(g.nodes)
    order = []
    pending = sorted(range(len(g.nodes)), key=lambda v: (class_size[colors[v]], v))
    for root in pending:
        if seen[root]:
            continue
        seen[root] = True
        queue = deque([root])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in g.undirected[v]:
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
    return order


def _search(ga: _Graph, gb: _Graph, ca: list, cb: list) -> dict | None:
    by_color: dict = {}
    for w, c in enumerate(cb):
        by_color.setdefault(c, []).append(w)
    order = _order(ga, ca, Counter(ca))
    fwd: dict = {}
    back: dict = {}

    def candidates(v):
        c = ca[v]
        for u in ga.inn[v]:
            if u in fwd:
                return [w for w in sorted(gb.out[fwd[u]]) if cb[w] == c and w not in back]
        for u in ga.out[v]:
            if u in fwd:
                return [w for w in sorted(gb.inn[fwd[u]]) if cb[w] == c and w not in back]
        return [w for w in by_color.get(c, ()) if w not in back]

    def consistent(v, w):
        for u in ga.out[v]:
            if u in fwd and fwd[u] not in gb.out[w]:
                return False
        for u in ga.inn[v]:
            if u in fwd and fwd[u] not in gb.inn[w]:
                return False
        for x in gb.out[w]:
            if x in back and back[x] not in ga.out[v]:
                return False
        for x in gb.inn[w]:
            if x in back and back[x] not in ga.inn[v]:
                return False
        return True

    stack = [iter(candidates(order[0]))] if order else []
    depth = 0
    while stack:
        v = order[depth]
        if v in fwd:
            del back[fwd.pop(v)]
        for w in stack[-1]:
            if consistent(v, w):
                fwd[v] = w
                back[w] = v
                break
        else:
            stack.pop()
            depth -= 1
            continue
        depth += 1
        if depth == len(order):
            return fwd
        stack.append(iter(candidates(order[depth])))
    return {} if not order else None


def validate_mapping(a: Net, b: Net, mapping: Mapping, markings: tuple | None = None) -> list:
    """Return the list of problems with ``mapping`` as an isomorphism (empty if valid)."""
    problems = []
    if set(mapping) != set(a.nodes) or set(mapping.values()) != set(b.nodes) or len(set(mapping.values())) != len(mapping):
        problems.append("mapping is not a bijection between node sets")
        return problems
    for x, y in mapping.items():
        if x.is_transition != y.is_transition:
            problems.append(f"{x} -> {y} changes node kind")
    image = {(mapping[s], mapping[d]) for s, d in a.arcs}
    for arc in sorted(image - b.arcs):
        problems.append(f"arc {arc[0]}->{arc[1]} missing in target")
    for arc in sorted(b.arcs - image):
        problems.append(f"arc {arc[0]}->{arc[1]} has no preimage")
    if markings is not None:
        ma, mb = markings
        for x, y in mapping.items():
            if ma.get(x, 0) != mb.get(y, 0):
                problems.append(f"{x} carries {ma.get(x, 0)} tokens but {y} carries {mb.get(y, 0)}")
    return problems


def isomorphic(a: Net, b: Net, respect_marking: tuple | None = None, max_nodes: int = DEFAULT_MAX_NODES) -> PropertyReport:
    """Search for a (marking-preserving) net isomorphism from ``a`` onto ``b``."""
    size = max(len(a.nodes), len(b.nodes))
    if size > max_nodes:
        raise ResourceError(f"isomorphism search limited to {max_nodes} nodes, got {size}")
    stats = {"nodes": [len(a.nodes), len(b.nodes)]}

    def refuse(reason):
        return PropertyReport("isomorphic", False, {"reason": reason}, stats)

    counts_a = (len(a.transitions), len(a.places), len(a.arcs))
    counts_b = (len(b.transitions), len(b.places), len(b.arcs))
    if counts_a != counts_b:
        return refuse(f"(transitions, places, arcs) differ: {counts_a} vs {counts_b}")
    ma, mb = respect_marking if respect_marking is not None else (None, None)
    ga, gb = _Graph(a, ma), _Graph(b, mb)
    ca, cb = _refine(ga, gb)
    if Counter(ca) != Counter(cb):
        return refuse("colour refinement separates the nets")
    stats["colour_classes"] = len(set(ca))
    found = _search(ga, gb, ca, cb)
    if found is None:
        return refuse("exhaustive search found no isomorphism")
    mapping = {ga.nodes[v]: gb.nodes[w] for v, w in sorted(found.items())}
    problems = validate_mapping(a, b, mapping, respect_marking)
    if problems:
        raise AssertionError(f"internal error, invalid isomorphism: {problems[:3]}")
    return PropertyReport("isomorphic", True, {"mapping": mapping}, stats)
