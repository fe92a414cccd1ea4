"""Primitive types for complete edge-colored graphs with distances in {1,...,r}.

Vertices are 1-based. Edge data is stored as an upper-triangular sequence in
row-major pair order (1,2),(1,3),...,(1,n),(2,3),...,(n-1,n); every
deterministic "first" choice in the package follows this order. Colors are
1-based in memory and in all serialized forms.

A coloring is *not* required to satisfy the triangle inequality: being a
metric coloring is a checked predicate (`find_violating_triangle`), not a
type invariant, so that rejection sampling and violation search can
represent arbitrary colorings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from .errors import DomainError

Pair = tuple[int, int]

# ColorSetGraph stores one bitmask per pair; keep masks inside a machine word.
MAX_SET_COLORS = 32


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def pair_order(n: int) -> list[Pair]:
    """All unordered pairs of [n] in the fixed row-major order."""
    return list(combinations(range(1, n + 1), 2))


def pair_index(n: int, x: int, y: int) -> int:
    """Index of pair {x, y} within the fixed order; x != y required."""
    if x == y:
        raise DomainError("reflexive pair (%d, %d) has no entry" % (x, y))
    if x > y:
        x, y = y, x
    if not (1 <= x and y <= n):
        raise DomainError("pair (%d, %d) out of range for n=%d" % (x, y, n))
    return (x - 1) * (2 * n - x) // 2 + (y - x - 1)


def m_of(r: int) -> int:
    """ceil((r+1)/2): the base of every lower bound in this package."""
    if r < 3:
        raise DomainError("color count r must be at least 3, got %d" % r)
    return (r + 2) // 2


def is_violating_triple(i: int, j: int, k: int) -> bool:
    """True iff |i-j| <= k <= i+j fails for positive colors i, j, k."""
    return not (abs(i - j) <= k <= i + j)


def is_metric_triangle(i: int, j: int, k: int) -> bool:
    """True iff each of i, j, k is at most the sum of the other two."""
    return i <= j + k and j <= i + k and k <= i + j


@dataclass(frozen=True)
class Params:
    """Shared problem parameters: r colors (r >= 3) on n vertices (n >= 1)."""

    r: int
    n: int

    def __post_init__(self) -> None:
        if self.r < 3:
            raise DomainError("r must be at least 3, got %d" % self.r)
        if self.n < 1:
            raise DomainError("n must be at least 1, got %d" % self.n)


@dataclass(frozen=True)
class MetricColoring:
    """A complete graph on [n] with one color in [r] per unordered pair.

    Immutable after construction; safe to share across threads and usable
    as a dict key. `dist` follows the fixed pair order.
    """

    params: Params
    dist: tuple[int, ...]

    def __post_init__(self) -> None:
        expected = pair_count(self.params.n)
        if len(self.dist) != expected:
            raise DomainError(
                "expected %d distances for n=%d, got %d"
                % (expected, self.params.n, len(self.dist))
            )
        for value in self.dist:
            if not (1 <= value <= self.params.r):
                raise DomainError(
                    "distance %r outside [1, %d]" % (value, self.params.r)
                )

    @property
    def r(self) -> int:
        return self.params.r

    @property
    def n(self) -> int:
        return self.params.n

    def d(self, x: int, y: int) -> int:
        return self.dist[pair_index(self.params.n, x, y)]

    def pairs(self) -> Iterator[tuple[Pair, int]]:
        for pair, value in zip(pair_order(self.params.n), self.dist):
            yield pair, value

    def with_distances(self, updates: Mapping[Pair, int]) -> "MetricColoring":
        """Copy with the given pairs re-colored."""
        new = list(self.dist)
        for (x, y), value in updates.items():
            new[pair_index(self.params.n, x, y)] = value
        return MetricColoring(self.params, tuple(new))

    def to_json_dict(self) -> dict:
        return {"r": self.params.r, "n": self.params.n, "d": list(self.dist)}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, payload: Mapping) -> "MetricColoring":
        try:
            r, n, d = payload["r"], payload["n"], payload["d"]
        except (KeyError, TypeError) as exc:
            raise DomainError("coloring JSON needs keys r, n, d") from exc
        return cls(Params(int(r), int(n)), tuple(int(v) for v in d))

    @classmethod
    def from_json(cls, text: str) -> "MetricColoring":
        return cls.from_json_dict(json.loads(text))


def constant_coloring(r: int, n: int, color: int) -> MetricColoring:
    return MetricColoring(Params(r, n), (color,) * pair_count(n))


def find_violating_triangle(g: MetricColoring) -> Optional[tuple[int, int, int]]:
    """Lexicographically first vertex triple whose colors are non-metric."""
    n = g.params.n
    dist = g.dist
    for x in range(1, n - 1):
        for y in range(x + 1, n):
            dxy = dist[pair_index(n, x, y)]
            for z in range(y + 1, n + 1):
                dxz = dist[pair_index(n, x, z)]
                dyz = dist[pair_index(n, y, z)]
                if not is_metric_triangle(dxy, dxz, dyz):
                    return (x, y, z)
    return None


def is_metric(g: MetricColoring) -> bool:
    return find_violating_triangle(g) is None


def is_metric_set(r: int, colors: Iterable[int]) -> bool:
    """True iff no triple drawn from the set (with repeats) is violating."""
    values = sorted(set(colors))
    if not values:
        raise DomainError("metric-set test needs a nonempty color set")
    if values[0] < 1 or values[-1] > r:
        raise DomainError("color set %r not contained in [1, %d]" % (values, r))
    for a in values:
        for b in values:
            for c in values:
                if is_violating_triple(a, b, c):
                    return False
    return True


@dataclass(frozen=True)
class EditSet:
    """A set of unordered vertex pairs, kept sorted in the fixed pair order."""

    pairs: tuple[Pair, ...]

    def __post_init__(self) -> None:
        for x, y in self.pairs:
            if not (1 <= x < y):
                raise DomainError("invalid pair (%r, %r) in edit set" % (x, y))

    @classmethod
    def of(cls, pairs: Iterable[Pair]) -> "EditSet":
        normalized = {(min(x, y), max(x, y)) for x, y in pairs}
        return cls(tuple(sorted(normalized)))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[Pair]:
        return iter(self.pairs)

    def __contains__(self, pair: Pair) -> bool:
        x, y = pair
        return (min(x, y), max(x, y)) in set(self.pairs)

    def to_json_dict(self) -> dict:
        return {"pairs": [list(p) for p in self.pairs]}


def delta(g: MetricColoring, h: MetricColoring) -> EditSet:
    """Pairs on which the two colorings disagree."""
    if g.params != h.params:
        raise DomainError("colorings have different parameters")
    diff = [
        pair
        for pair, (a, b) in zip(pair_order(g.params.n), zip(g.dist, h.dist))
        if a != b
    ]
    return EditSet(tuple(diff))


def is_delta_close(
    g: MetricColoring, h: MetricColoring, bound: Union[Fraction, float, int]
) -> bool:
    """True iff the colorings differ on at most bound * n^2 pairs."""
    if bound < 0:
        raise DomainError("closeness bound must be nonnegative")
    n = g.params.n
    return len(delta(g, h)) <= bound * n * n


def color_mask(colors: Iterable[int], r: int) -> int:
    mask = 0
    for c in colors:
        if not (1 <= c <= r):
            raise DomainError("color %r outside [1, %d]" % (c, r))
        mask |= 1 << (c - 1)
    return mask


def mask_colors(mask: int) -> tuple[int, ...]:
    out = []
    c = 1
    while mask:
        if mask & 1:
            out.append(c)
        mask >>= 1
        c += 1
    return tuple(out)


@dataclass(frozen=True)
class ColorSetGraph:
    """A complete graph on [n] whose pairs carry *subsets* of [r].

    Subsets are bitmasks (bit i-1 is color i); empty subsets are allowed,
    as are subsets of any size, so this represents general color-set
    graphs rather than simple complete ones.
    """

    params: Params
    masks: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.params.r > MAX_SET_COLORS:
            raise DomainError(
                "color-set graphs support r <= %d, got %d"
                % (MAX_SET_COLORS, self.params.r)
            )
        expected = pair_count(self.params.n)
        if len(self.masks) != expected:
            raise DomainError(
                "expected %d pair masks for n=%d, got %d"
                % (expected, self.params.n, len(self.masks))
            )
        full = (1 << self.params.r) - 1
        for mask in self.masks:
            if mask < 0 or mask & ~full:
                raise DomainError("pair mask %r not a subset of [1, %d]" % (mask, self.params.r))

    @property
    def r(self) -> int:
        return self.params.r

    @property
    def n(self) -> int:
        return self.params.n

    def mask(self, x: int, y: int) -> int:
        return self.masks[pair_index(self.params.n, x, y)]

    def color_set(self, x: int, y: int) -> tuple[int, ...]:
        return mask_colors(self.mask(x, y))

    @classmethod
    def from_color_lists(
        cls, r: int, n: int, colors: Sequence[Iterable[int]]
    ) -> "ColorSetGraph":
        return cls(Params(r, n), tuple(color_mask(cs, r) for cs in colors))

    @classmethod
    def from_simple(cls, g: MetricColoring) -> "ColorSetGraph":
        return cls(g.params, tuple(1 << (v - 1) for v in g.dist))

    def to_json_dict(self) -> dict:
        return {
            "r": self.params.r,
            "n": self.params.n,
            "c": [list(mask_colors(m)) for m in self.masks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @classmethod
    def from_json_dict(cls, payload: Mapping) -> "ColorSetGraph":
        try:
            r, n, c = payload["r"], payload["n"], payload["c"]
        except (KeyError, TypeError) as exc:
            raise DomainError("color-set JSON needs keys r, n, c") from exc
        return cls.from_color_lists(int(r), int(n), [list(cs) for cs in c])

    @classmethod
    def from_json(cls, text: str) -> "ColorSetGraph":
        return cls.from_json_dict(json.loads(text))
