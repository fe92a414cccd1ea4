"""Structural classification of colorings: the link-color component
decomposition, bad cycles, membership in the structured class, distance to
that class, and the low-color hub predicate.

The structured class ("cr" below) is: for even r, every color lies in
[r/2, r]; for odd r, some vertex partition puts within-part colors in
[(r-1)/2, r-1] and cross-part colors in [(r+1)/2, r]. For odd r membership
is decided in polynomial time through the components of the graph formed by
edges of the link color m(r)-1: a coloring with every color >= m(r)-1 is a
member iff no component of that graph contains an internal pair of color r
(equivalently, iff there is no bad cycle). Tests validate this criterion
against a brute-force search over all vertex partitions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Union

from .core import MetricColoring, Pair, m_of
from .errors import CapacityError, DomainError

DEFAULT_PARTITION_LIMIT = 10


@dataclass(frozen=True)
class ComponentDecomposition:
    """Vertex sets connected through edges of color m(r)-1, canonically
    ordered by size and then by minimum element; `large_threshold` is 2r."""

    components: tuple[tuple[int, ...], ...]
    large_threshold: int

    def large(self) -> tuple[tuple[int, ...], ...]:
        return tuple(c for c in self.components if len(c) >= self.large_threshold)

    def to_json_dict(self) -> dict:
        return {
            "components": [list(c) for c in self.components],
            "large_threshold": self.large_threshold,
        }


@dataclass(frozen=True)
class CrMembershipCertificate:
    """Outcome of the structured-class membership test.

    Odd-r members carry the witnessing partition; non-members carry either
    a low pair or a bad cycle. Even-r members need no witness.
    """

    member: bool
    partition: Optional[tuple[tuple[int, ...], ...]] = None
    violation: Optional[dict] = None

    def to_json_dict(self) -> dict:
        return {
            "member": self.member,
            "partition": None
            if self.partition is None
            else [list(p) for p in self.partition],
            "violation": self.violation,
        }


def _link_components(g: MetricColoring) -> list[list[int]]:
    n = g.params.n
    link = m_of(g.params.r) - 1
    parent = list(range(n + 1))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for (x, y), value in g.pairs():
        if value == link:
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry
    groups: dict[int, list[int]] = {}
    for v in range(1, n + 1):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values(), key=lambda c: (len(c), c[0]))


def component_decomposition(g: MetricColoring) -> ComponentDecomposition:
    comps = _link_components(g)
    return ComponentDecomposition(
        components=tuple(tuple(c) for c in comps),
        large_threshold=2 * g.params.r,
    )


def minimal_large_component(
    decomposition: ComponentDecomposition,
) -> Optional[tuple[int, ...]]:
    """The order-least component of size >= 2r, if any."""
    for comp in decomposition.components:
        if len(comp) >= decomposition.large_threshold:
            return comp
    return None


def _lex_shortest_path(
    adjacency: dict[int, list[int]], start: int, goal: int
) -> Optional[list[int]]:
    # BFS distances from the goal, then a greedy descent picking the
    # smallest next vertex: the lexicographically least shortest path.
    from collections import deque

    dist = {goal: 0}
    queue = deque([goal])
    while queue:
        v = queue.popleft()
        for w in adjacency.get(v, ()):
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    if start not in dist:
        return None
    path = [start]
    current = start
    while current != goal:
        current = min(
            w for w in adjacency[current] if dist.get(w, -1) == dist[current] - 1
        )
        path.append(current)
    return path


def find_bad_cycle(g: MetricColoring) -> Optional[tuple[int, ...]]:
    """Shortest sequence of distinct vertices linked by color m(r)-1 whose
    endpoints have color r; ties broken lexicographically. None if no pair
    of color r lies inside a link component."""
    n, r = g.params.n, g.params.r
    link = m_of(r) - 1
    adjacency: dict[int, list[int]] = {v: [] for v in range(1, n + 1)}
    for (x, y), value in g.pairs():
        if value == link:
            adjacency[x].append(y)
            adjacency[y].append(x)
    best: Optional[tuple[int, ...]] = None
    for (x, y), value in g.pairs():
        if value != r:
            continue
        for a, b in ((x, y), (y, x)):
            path = _lex_shortest_path(adjacency, a, b)
            if path is None:
                continue
            candidate = tuple(path)
            key = (len(candidate), candidate)
            if best is None or key < (len(best), best):
                best = candidate
    return best


def cr_membership(g: MetricColoring) -> CrMembershipCertificate:
    r = g.params.r
    if r % 2 == 0:
        low = r // 2
        for pair, value in g.pairs():
            if value < low:
                return CrMembershipCertificate(
                    member=False,
                    violation={"kind": "low_pair", "pair": list(pair), "color": value},
                )
        return CrMembershipCertificate(member=True)
    low = m_of(r) - 1
    for pair, value in g.pairs():
        if value < low:
            return CrMembershipCertificate(
                member=False,
                violation={"kind": "low_pair", "pair": list(pair), "color": value},
            )
    cycle = find_bad_cycle(g)
    if cycle is not None:
        return CrMembershipCertificate(
            member=False,
            violation={
                "kind": "bad_cycle",
                "cycle": list(cycle),
                "length": len(cycle),
            },
        )
    decomposition = component_decomposition(g)
    return CrMembershipCertificate(member=True, partition=decomposition.components)


def set_partitions(n: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All partitions of [n] in restricted-growth-string order; parts are
    listed by first occurrence, elements ascending."""
    rgs = [0] * n

    def rec(i: int, mx: int) -> Iterator[tuple[tuple[int, ...], ...]]:
        if i == n:
            parts: dict[int, list[int]] = {}
            for v, grp in enumerate(rgs, start=1):
                parts.setdefault(grp, []).append(v)
            yield tuple(tuple(p) for p in parts.values())
            return
        for value in range(mx + 2):
            rgs[i] = value
            yield from rec(i + 1, max(mx, value))

    yield from rec(0, -1)


def _partition_cost(g: MetricColoring, labels: dict[int, int]) -> int:
    r = g.params.r
    m = m_of(r)
    cost = 0
    for (x, y), value in g.pairs():
        if labels[x] == labels[y]:
            if not (m - 1 <= value <= r - 1):
                cost += 1
        else:
            if value < m:
                cost += 1
    return cost


def nearest_cr_distance(
    g: MetricColoring, partition_limit: int = DEFAULT_PARTITION_LIMIT
) -> tuple[int, MetricColoring]:
    """Minimum number of pair re-colorings taking g into the structured
    class, together with a witness.

    Even r: exactly the pairs colored below r/2, re-colored to r/2. Odd r:
    minimized over all vertex partitions (first minimum in partition order
    wins), re-coloring every mismatched pair to m(r), which is legal both
    within and across parts.
    """
    r = g.params.r
    if r % 2 == 0:
        low = r // 2
        updates = {pair: low for pair, value in g.pairs() if value < low}
        return len(updates), g.with_distances(updates)
    n = g.params.n
    if n > partition_limit:
        raise CapacityError(
            "partition search over %d vertices exceeds the limit %d"
            % (n, partition_limit)
        )
    m = m_of(r)
    best_cost: Optional[int] = None
    best_labels: Optional[dict[int, int]] = None
    for parts in set_partitions(n):
        labels = {v: i for i, part in enumerate(parts) for v in part}
        cost = _partition_cost(g, labels)
        if best_cost is None or cost < best_cost:
            best_cost, best_labels = cost, labels
            if cost == 0:
                break
    assert best_labels is not None
    updates: dict[Pair, int] = {}
    for (x, y), value in g.pairs():
        if best_labels[x] == best_labels[y]:
            if not (m - 1 <= value <= r - 1):
                updates[(x, y)] = m
        elif value < m:
            updates[(x, y)] = m
    assert best_cost == len(updates)
    return best_cost, g.with_distances(updates)


def low_color_hub(
    g: MetricColoring, epsilon: Union[Fraction, float]
) -> Optional[tuple[int, int]]:
    """First (vertex, color) with color <= m(r)-2 whose color-degree is at
    least epsilon * n, scanning vertices then colors; None when no vertex
    qualifies (in particular whenever m(r) <= 2)."""
    if not (0 < epsilon <= 1):
        raise DomainError("epsilon must lie in (0, 1], got %r" % (epsilon,))
    r, n = g.params.r, g.params.n
    top = m_of(r) - 2
    if top < 1:
        return None
    for x in range(1, n + 1):
        degree = [0] * (top + 1)
        for y in range(1, n + 1):
            if y == x:
                continue
            value = g.d(x, y)
            if value <= top:
                degree[value] += 1
        for color in range(1, top + 1):
            if degree[color] >= epsilon * n:
                return (x, color)
    return None


def has_low_color_pair(g: MetricColoring) -> bool:
    """True iff some pair uses a color in [1, m(r)-2]."""
    top = m_of(g.params.r) - 2
    return top >= 1 and any(value <= top for _, value in g.pairs())
