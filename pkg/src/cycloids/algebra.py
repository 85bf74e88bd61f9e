"""Integer algebra of cycloid parameters and Petri-space coordinates.

A cycloid ``C(alpha, beta, gamma, delta)`` is the quotient of the integer grid
by the lattice spanned by ``(alpha, -beta)`` and ``(gamma, delta)``.  Everything
here is exact integer arithmetic; floors round toward minus infinity.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import NamedTuple

from .errors import CycloidError, ParameterError

__all__ = [
    "Point",
    "CycloidSpec",
    "CycloidMetrics",
    "ParameterVector",
    "NormalizationWitness",
    "CoordKind",
    "RegularCoordinate",
    "MinimalCycle",
    "metrics",
    "parameter_vector",
    "equivalent",
    "normalize",
    "fundamental_points",
    "dual",
    "shear",
    "minimal_cycle_length",
    "stand",
    "regular_label",
]


class Point(NamedTuple):
    xi: int
    eta: int

    def __add__(self, other):  # type: ignore[override]
        return Point(self.xi + other[0], self.eta + other[1])

    def __sub__(self, other):
        return Point(self.xi - other[0], self.eta - other[1])

    def __str__(self):
        return f"({self.xi},{self.eta})"


@dataclass(frozen=True, order=True)
class CycloidSpec:
    alpha: int
    beta: int
    gamma: int
    delta: int

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ParameterError(f"{name} must be an integer, got {value!r}")
            if value < 1:
                raise ParameterError(f"{name} must be >= 1, got {value}")

    # aliases used for stop-resilient constructions: c cars, g gaps
    @property
    def g(self) -> int:
        return self.alpha

    @property
    def c(self) -> int:
        return self.beta

    @property
    def area(self) -> int:
        return self.alpha * self.delta + self.beta * self.gamma

    @property
    def n(self) -> int:
        return self.alpha + self.beta

    @property
    def is_regular(self) -> bool:
        return self.delta % self.beta == 0

    @property
    def is_coregular(self) -> bool:
        return self.gamma % self.alpha == 0

    @property
    def process_length(self) -> int:
        """Length p of every process; only defined for regular cycloids."""
        if not self.is_regular:
            raise CycloidError(f"{self} is not regular (beta does not divide delta)")
        return self.area // self.beta

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.alpha, self.beta, self.gamma, self.delta)

    def __str__(self):
        return "C({},{},{},{})".format(*self.as_tuple())


@dataclass(frozen=True)
class CycloidMetrics:
    area: int
    n: int
    fwd_cycle_len: int
    bwd_cycle_len: int
    fwd_cycle_count: int
    bwd_cycle_count: int
    fwd_tokens_per_cycle: int
    bwd_tokens_per_cycle: int
    is_regular: bool
    is_coregular: bool
    process_len: int | None
    coprocess_len: int | None
    min_cycle: int
    min_cycle_source: str


@dataclass(frozen=True)
class ParameterVector:
    """``B @ v / A`` kept as two numerators over the common denominator ``A``."""

    num1: int
    num2: int
    den: int

    @property
    def is_integral(self) -> bool:
        return self.num1 % self.den == 0 and self.num2 % self.den == 0

    @property
    def value(self) -> tuple[Fraction, Fraction]:
        return Fraction(self.num1, self.den), Fraction(self.num2, self.den)


@dataclass(frozen=True)
class NormalizationWitness:
    m: int
    n_steps: int
    representative: Point


class CoordKind(str, Enum):
    TRANSITION = "transition"
    FWD_PLACE = "fwd_place"
    BWD_PLACE = "bwd_place"


_COORD_PREFIX = {CoordKind.TRANSITION: "t", CoordKind.FWD_PLACE: "s", CoordKind.BWD_PLACE: "s'"}


class RegularCoordinate(NamedTuple):
    kind: CoordKind
    i: int
    j: int

    def __str__(self):
        return f"[{_COORD_PREFIX[self.kind]}_{self.i},a_{self.j}]"

    @property
    def short(self) -> str:
        return f"{_COORD_PREFIX[self.kind]}[{self.i},{self.j}]"


class MinimalCycle(NamedTuple):
    value: int
    source: str  # formula_a | formula_b | formula_c | search


def _check_spec(spec) -> CycloidSpec:
    if not isinstance(spec, CycloidSpec):
        raise TypeError(f"expected CycloidSpec, got {type(spec).__name__}")
    return spec


def parameter_vector(spec: CycloidSpec, v) -> ParameterVector:
    a, b, g, d = _check_spec(spec).as_tuple()
    x, y = v
    return ParameterVector(d * x - g * y, b * x + a * y, spec.area)


def equivalent(spec: CycloidSpec, a, b) -> bool:
    return parameter_vector(spec, Point(b[0] - a[0], b[1] - a[1])).is_integral


def normalize(spec: CycloidSpec, u) -> NormalizationWitness:
    """Map ``u`` to its representative in the fundamental parallelogram."""
    al, be, ga, de = _check_spec(spec).as_tuple()
    area = spec.area
    x, y = u
    m = (x * de - y * ga) // area
    n = (y * al + x * be) // area
    rep = Point(x - al * m - ga * n, y + be * m - de * n)
    return NormalizationWitness(m, n, rep)


def _rep(spec: CycloidSpec, x: int, y: int) -> Point:
    return normalize(spec, (x, y)).representative


@lru_cache(maxsize=None)
def fundamental_points(spec: CycloidSpec) -> tuple[Point, ...]:
    """All normalize fixed points, sorted; there are exactly ``spec.area`` of them."""
    al, be, ga, de = spec.as_tuple()
    pts = []
    # bounding box of the parallelogram spanned by (al, -be) and (ga, de)
    for x in range(0, al + ga + 1):
        for y in range(-be, de + 1):
            w = normalize(spec, (x, y))
            if w.m == 0 and w.n_steps == 0:
                pts.append(Point(x, y))
    return tuple(sorted(pts))


def dual(spec: CycloidSpec) -> CycloidSpec:
    return CycloidSpec(spec.beta, spec.alpha, spec.delta, spec.gamma)


def shear(spec: CycloidSpec, q: int, direction: str) -> CycloidSpec:
    al, be, ga, de = spec.as_tuple()
    if isinstance(q, bool) or not isinstance(q, int) or q < 1:
        raise ParameterError(f"q must be a positive integer, got {q!r}")
    if direction == "reduce_gamma":
        if not ga > q * al:
            raise ParameterError(f"gamma > q*alpha violated: {ga} > {q * al} is false")
        return CycloidSpec(al, be, ga - q * al, de + q * be)
    if direction == "reduce_delta":
        if not de > q * be:
            raise ParameterError(f"delta > q*beta violated: {de} > {q * be} is false")
        return CycloidSpec(al, be, ga + q * al, de - q * be)
    raise ParameterError(f"unknown shear direction {direction!r}")


def _search_min_cycle(spec: CycloidSpec) -> int:
    # BFS over fundamental-parallelogram transitions; each transition has
    # exactly two successors, one step in xi and one step in eta.
    origin = Point(0, 0)
    dist = {origin: 0}
    queue = deque([origin])
    while queue:
        cur = queue.popleft()
        for nxt in (_rep(spec, cur.xi + 1, cur.eta), _rep(spec, cur.xi, cur.eta + 1)):
            if nxt == origin:
                return dist[cur] + 1
            if nxt not in dist:
                dist[nxt] = dist[cur] + 1
                queue.append(nxt)
    raise AssertionError("a cycloid always has a cycle through the origin")


def _formula_min_cycle(spec: CycloidSpec) -> MinimalCycle | None:
    if not spec.is_regular:
        return None
    al, be, ga, de = spec.as_tuple()
    p = spec.process_length
    if al <= be:
        return MinimalCycle(p, "formula_a")
    if p % al == 0:
        return MinimalCycle(be * p // al, "formula_b")
    if be == ga == de:
        return MinimalCycle(2 * be, "formula_c")
    return None


def minimal_cycle_length(spec: CycloidSpec, verify: bool = False) -> MinimalCycle:
    """Shortest transition cycle length.

    Regular cycloids matching one of the closed-form cases use the formula;
    everything else falls back to breadth-first search from the origin.  With
    ``verify`` the search is run anyway and must agree.
    """
    found = _formula_min_cycle(_check_spec(spec))
    if found is None:
        return MinimalCycle(_search_min_cycle(spec), "search")
    if verify:
        searched = _search_min_cycle(spec)
        if searched != found.value:
            raise AssertionError(f"{spec}: {found.source} gives {found.value}, search gives {searched}")
    return found


def metrics(spec: CycloidSpec) -> CycloidMetrics:
    al, be, ga, de = _check_spec(spec).as_tuple()
    area = spec.area
    gf, gb = gcd(be, de), gcd(al, ga)
    cyc = minimal_cycle_length(spec)
    return CycloidMetrics(
        area=area,
        n=al + be,
        fwd_cycle_len=area // gf,
        bwd_cycle_len=area // gb,
        fwd_cycle_count=gf,
        bwd_cycle_count=gb,
        fwd_tokens_per_cycle=be // gf,
        bwd_tokens_per_cycle=al // gb,
        is_regular=spec.is_regular,
        is_coregular=spec.is_coregular,
        process_len=area // be if spec.is_regular else None,
        coprocess_len=area // al if spec.is_coregular else None,
        min_cycle=cyc.value,
        min_cycle_source=cyc.source,
    )


def _require_regular(spec: CycloidSpec) -> int:
    if not spec.is_regular:
        raise CycloidError(f"{spec} is not regular: regular coordinates need beta | delta")
    return spec.process_length


def stand(spec: CycloidSpec, rc: RegularCoordinate) -> Point:
    """Standard (fundamental-parallelogram) coordinate of ``[t_i, a_j]``.

    Place coordinates are accepted too and resolve to their input transition,
    which is where places take their names from.
    """
    p = _require_regular(_check_spec(spec))
    kind, i, j = rc
    if not (0 <= i < p and 0 <= j < spec.beta):
        raise CycloidError(f"regular coordinate {rc} out of range for p={p}, beta={spec.beta}")
    return _rep(spec, i - j, -j)


@lru_cache(maxsize=None)
def _label_table(spec: CycloidSpec) -> dict[Point, tuple[int, int]]:
    p = spec.process_length
    table = {}
    for j in range(spec.beta):
        for i in range(p):
            pt = _rep(spec, i - j, -j)
            if pt in table:
                raise AssertionError(f"stand is not injective on {spec}")
            table[pt] = (i, j)
    return table


def regular_label(spec: CycloidSpec, pt, kind: CoordKind = CoordKind.TRANSITION) -> RegularCoordinate:
    """Inverse of :func:`stand` on fundamental-parallelogram transitions."""
    _require_regular(_check_spec(spec))
    i, j = _label_table(spec)[normalize(spec, pt).representative]
    return RegularCoordinate(CoordKind(kind), i, j)
