"""The multiplicity weight of color-set graphs and exhaustive oracles for
the combinatorial facts the rest of the package leans on.

Everything here is exact integer or rational arithmetic; no floats. Each
oracle re-verifies a candidate counterexample through a second, definitional
code path before reporting it, so a returned counterexample is always a
genuine violation of the checked statement.

A triple of color sets (A, B, C) admits a violating triple iff one of
max(A) <= min(B)+min(C), max(B) <= min(A)+min(C), max(C) <= min(A)+min(B)
fails; this is an exact reformulation (a positive triple (a, b, c) is
violating iff some entry exceeds the sum of the other two) and is what
makes the exhaustive sweeps below cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterator, Optional

from .core import (
    ColorSetGraph,
    Params,
    is_violating_triple,
    m_of,
    mask_colors,
    pair_count,
    pair_order,
)
from .errors import CapacityError, DomainError

DEFAULT_BIT_BUDGET = 24
DEFAULT_MAX_R = 8


@dataclass(frozen=True)
class WeightProfile:
    """Per-pair multiplicities f = max(|colors|, 1), their product, and the
    counts of pairs above / below m(r)."""

    weight: int
    a_count: int
    b_count: int
    f_values: tuple[int, ...]

    def to_json_dict(self) -> dict:
        return {
            "weight": self.weight,
            "a_count": self.a_count,
            "b_count": self.b_count,
            "f_values": list(self.f_values),
        }


@dataclass(frozen=True)
class LemmaVerdict:
    """Result of an exhaustive check: how many instances were examined and
    the first counterexample, if any (None means the statement held)."""

    lemma_name: str
    domain_description: str
    checked: int
    counterexample: Optional[dict] = None

    @property
    def holds(self) -> bool:
        return self.counterexample is None

    def to_json_dict(self) -> dict:
        return {
            "lemma": self.lemma_name,
            "domain": self.domain_description,
            "checked": self.checked,
            "counterexample": self.counterexample,
        }


def weight_profile(graph: ColorSetGraph) -> WeightProfile:
    m = m_of(graph.params.r)
    f_values = tuple(max(mask.bit_count(), 1) for mask in graph.masks)
    return WeightProfile(
        weight=math.prod(f_values),
        a_count=sum(1 for f in f_values if f > m),
        b_count=sum(1 for f in f_values if f < m),
        f_values=f_values,
    )


def _mask_min(mask: int) -> int:
    return (mask & -mask).bit_length()


def _mask_max(mask: int) -> int:
    return mask.bit_length()


def masks_triangle_ok(m1: int, m2: int, m3: int) -> bool:
    """No triple drawn from the three sets is violating (vacuous if any set
    is empty)."""
    if m1 == 0 or m2 == 0 or m3 == 0:
        return True
    lo1, hi1 = _mask_min(m1), _mask_max(m1)
    lo2, hi2 = _mask_min(m2), _mask_max(m2)
    lo3, hi3 = _mask_min(m3), _mask_max(m3)
    return hi1 <= lo2 + lo3 and hi2 <= lo1 + lo3 and hi3 <= lo1 + lo2


def sets_admit_violating_triple(a: int, b: int, c: int) -> bool:
    """True iff some (x, y, z) in A x B x C is a violating triple."""
    return not masks_triangle_ok(a, b, c)


def _triangle_indices(n: int) -> list[tuple[int, int, int]]:
    order = {p: i for i, p in enumerate(pair_order(n))}
    return [
        (order[(x, y)], order[(x, z)], order[(y, z)])
        for x, y, z in combinations(range(1, n + 1), 3)
    ]


def enumerate_metric_rgraphs(
    r: int, t: int, bit_budget: int = DEFAULT_BIT_BUDGET
) -> Iterator[ColorSetGraph]:
    """Every assignment of color subsets to the pairs of [t] with no
    violating triangle, streamed in lexicographic mask order.

    The raw space has r * t(t-1)/2 bits; refuse above `bit_budget`.
    """
    if t < 2:
        raise DomainError("need at least 2 vertices, got %d" % t)
    m_of(r)  # validates r >= 3
    n_pairs = pair_count(t)
    if r * n_pairs > bit_budget:
        raise CapacityError(
            "2^%d assignments exceed the %d-bit enumeration budget"
            % (r * n_pairs, bit_budget)
        )
    params = Params(r, t)
    # triangles keyed by the index of their last pair in the fixed order
    closing: dict[int, list[tuple[int, int]]] = {i: [] for i in range(n_pairs)}
    for tri in _triangle_indices(t):
        first, second, last = sorted(tri)
        closing[last].append((first, second))
    masks = [0] * n_pairs
    top = 1 << r

    def rec(p: int) -> Iterator[ColorSetGraph]:
        if p == n_pairs:
            yield ColorSetGraph(params, tuple(masks))
            return
        for mask in range(top):
            masks[p] = mask
            if all(
                masks_triangle_ok(masks[i], masks[j], mask) for i, j in closing[p]
            ):
                yield from rec(p + 1)

    yield from rec(0)


def _confirm_no_violating(r: int, masks: tuple[int, ...], t: int) -> bool:
    """Definitional re-check: brute force over the color products of every
    triangle. Used to validate counterexamples independently."""
    order = {p: i for i, p in enumerate(pair_order(t))}
    for x, y, z in combinations(range(1, t + 1), 3):
        for a in mask_colors(masks[order[(x, y)]]):
            for b in mask_colors(masks[order[(x, z)]]):
                for c in mask_colors(masks[order[(y, z)]]):
                    if is_violating_triple(a, b, c):
                        return False
    return True


def check_weight_bound(
    r: int, t: int, bit_budget: int = DEFAULT_BIT_BUDGET
) -> LemmaVerdict:
    """Exhaustively verify, over every metric color-set graph on t vertices,
    that weight <= m^(C(t,2)+t+5) * ((m^2-1)/m^2)^a_count."""
    if t < 3:
        raise DomainError("the weight bound is checked for t >= 3, got %d" % t)
    m = m_of(r)
    exponent = pair_count(t) + t + 5
    shrink = Fraction(m * m - 1, m * m)
    checked = 0
    for graph in enumerate_metric_rgraphs(r, t, bit_budget=bit_budget):
        checked += 1
        profile = weight_profile(graph)
        bound = Fraction(m) ** exponent * shrink ** profile.a_count
        if profile.weight > bound:
            # independent integer form: W * m^(2a) <= m^exp * (m^2-1)^a
            lhs = profile.weight * m ** (2 * profile.a_count)
            rhs = m**exponent * (m * m - 1) ** profile.a_count
            if lhs > rhs and _confirm_no_violating(r, graph.masks, t):
                return LemmaVerdict(
                    lemma_name="weight-bound",
                    domain_description="metric color-set graphs, r=%d t=%d" % (r, t),
                    checked=checked,
                    counterexample={
                        "graph": graph.to_json_dict(),
                        "weight": profile.weight,
                        "a_count": profile.a_count,
                    },
                )
    return LemmaVerdict(
        lemma_name="weight-bound",
        domain_description="metric color-set graphs, r=%d t=%d" % (r, t),
        checked=checked,
    )


def _subsets_of_size_at_least(r: int, minimum: int) -> list[int]:
    return [mask for mask in range(1, 1 << r) if mask.bit_count() >= minimum]


def check_size_lemma(r: int, max_r: int = DEFAULT_MAX_R) -> LemmaVerdict:
    """Exhaustively verify: if |A| >= |B| >= |C|, |A| > m, |B| >= m, and
    |C| >= max(m - x - y (+2 when r is odd), 1) with x = |A|-m, y = |B|-m,
    then A x B x C contains a violating triple."""
    m = m_of(r)
    if r > max_r:
        raise CapacityError("size-lemma sweep capped at r=%d, got %d" % (max_r, r))
    bump = 2 if r % 2 else 0
    a_masks = _subsets_of_size_at_least(r, m + 1)
    checked = 0
    for a in a_masks:
        sa = a.bit_count()
        x = sa - m
        for b in range(1, 1 << r):
            sb = b.bit_count()
            if sb < m or sb > sa:
                continue
            y = sb - m
            c_floor = max(m - x - y + bump, 1)
            for c in range(1, 1 << r):
                sc = c.bit_count()
                if sc < c_floor or sc > sb:
                    continue
                checked += 1
                if not sets_admit_violating_triple(a, b, c):
                    if _brute_no_violating_product(a, b, c):
                        return LemmaVerdict(
                            lemma_name="size-lemma",
                            domain_description="color-set triples, r=%d" % r,
                            checked=checked,
                            counterexample={
                                "A": list(mask_colors(a)),
                                "B": list(mask_colors(b)),
                                "C": list(mask_colors(c)),
                            },
                        )
    return LemmaVerdict(
        lemma_name="size-lemma",
        domain_description="color-set triples, r=%d" % r,
        checked=checked,
    )


def _brute_no_violating_product(a: int, b: int, c: int) -> bool:
    for i in mask_colors(a):
        for j in mask_colors(b):
            for k in mask_colors(c):
                if is_violating_triple(i, j, k):
                    return False
    return True


def _range_mask(lo: int, hi: int) -> int:
    return ((1 << hi) - 1) ^ ((1 << (lo - 1)) - 1)


def classify_triple_shape(r: int, a: int, b: int, c: int) -> Optional[str]:
    """Shape of a violating-free triple of size-m sets: 'even-full' when all
    equal [m-1, r]; 'odd-low' when all equal [m-1, r-1]; 'odd-high' when two
    equal [m, r] and the third sits inside [m-1, r]. None if no shape fits."""
    m = m_of(r)
    if r % 2 == 0:
        if a == b == c == _range_mask(m - 1, r):
            return "even-full"
        return None
    low = _range_mask(m - 1, r - 1)
    high = _range_mask(m, r)
    wide = _range_mask(m - 1, r)
    if a == b == c == low:
        return "odd-low"
    for two, one in (((a, b), c), ((a, c), b), ((b, c), a)):
        if two[0] == high and two[1] == high and one & ~wide == 0:
            return "odd-high"
    return None


def check_triangle_classification(r: int, max_r: int = DEFAULT_MAX_R) -> LemmaVerdict:
    """Exhaustively verify that every triple of size-m(r) color sets with no
    violating triple matches the known shapes (see classify_triple_shape)."""
    if r > max_r:
        raise CapacityError(
            "triangle classification capped at r=%d, got %d" % (max_r, r)
        )
    m = m_of(r)
    size_m = [mask for mask in range(1 << r) if mask.bit_count() == m]
    checked = 0
    for a in size_m:
        for b in size_m:
            for c in size_m:
                if sets_admit_violating_triple(a, b, c):
                    continue
                checked += 1
                if classify_triple_shape(r, a, b, c) is None:
                    if _brute_no_violating_product(a, b, c):
                        return LemmaVerdict(
                            lemma_name="triangle-class",
                            domain_description="size-m(r) set triples, r=%d" % r,
                            checked=checked,
                            counterexample={
                                "A": list(mask_colors(a)),
                                "B": list(mask_colors(b)),
                                "C": list(mask_colors(c)),
                            },
                        )
    return LemmaVerdict(
        lemma_name="triangle-class",
        domain_description="size-m(r) set triples, r=%d" % r,
        checked=checked,
    )


def check_importantcor(r: int, max_r: int = 6) -> LemmaVerdict:
    """Over every metric color-set triangle: whenever two pairs sharing a
    vertex both have multiplicity above m(r), the opposite pair has
    multiplicity below m(r) and both leg*opposite products are at most
    m(r)^2 - 1."""
    if r > max_r:
        raise CapacityError("multiplicity sweep capped at r=%d, got %d" % (max_r, r))
    m = m_of(r)
    limit = m * m - 1
    checked = 0
    top = 1 << r
    # pair indices on 3 vertices: 0=(1,2), 1=(1,3), 2=(2,3); each choice of
    # "opposite" pair leaves two legs sharing a vertex.
    legs_by_opposite = {0: (1, 2), 1: (0, 2), 2: (0, 1)}
    for m0 in range(top):
        for m1 in range(top):
            for m2 in range(top):
                if not masks_triangle_ok(m0, m1, m2):
                    continue
                masks = (m0, m1, m2)
                f = tuple(max(mask.bit_count(), 1) for mask in masks)
                for opposite, (l1, l2) in legs_by_opposite.items():
                    if f[l1] <= m or f[l2] <= m:
                        continue
                    checked += 1
                    bad = (
                        f[opposite] >= m
                        or f[l1] * f[opposite] > limit
                        or f[l2] * f[opposite] > limit
                    )
                    if bad and _confirm_no_violating(r, masks, 3):
                        return LemmaVerdict(
                            lemma_name="importantcor",
                            domain_description="metric color-set triangles, r=%d" % r,
                            checked=checked,
                            counterexample={
                                "masks": [list(mask_colors(x)) for x in masks],
                                "f": list(f),
                                "opposite": opposite,
                            },
                        )
    return LemmaVerdict(
        lemma_name="importantcor",
        domain_description="metric color-set triangles, r=%d" % r,
        checked=checked,
    )
