"""Exact counting, streaming enumeration, and seeded sampling of metric
colorings, plus the matching-based family and summary statistics.

Counting walks the pairs in the fixed row-major order, keeping one closed
interval of still-feasible colors per unassigned pair. Assigning pair (a, b)
tightens, for every vertex z with a < z < b, the interval of (z, b) to
[|v - d(a,z)|, v + d(a,z)]: that pair is exactly the one that closes the
triangle {a, z, b} last, so when the walk reaches any pair its interval
already carries every triangle constraint against assigned pairs, and
interval emptiness is the only pruning test needed. Leaves of the walk are
exactly the metric colorings; at the final pair the interval width is added
directly instead of iterating.

All counts are exact big integers; ratios are exact rationals and only the
serialization layer renders them as decimals.
"""

from __future__ import annotations

import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterator, Optional, Sequence

from .core import (
    MetricColoring,
    Params,
    m_of,
    pair_count,
    pair_order,
)
from .errors import CapacityError, DomainError
from .structure import cr_membership, low_color_hub, nearest_cr_distance

DEFAULT_NODE_BUDGET = 200_000_000
DEFAULT_MIN_ACCEPTANCE = 1e-8


def _propagation_table(n: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """For each pair (a, b): the (source, target) pair indices such that
    assigning (a, b) narrows target (z, b) using assigned source (a, z)."""
    order = pair_order(n)
    index = {p: i for i, p in enumerate(order)}
    table = []
    for a, b in order:
        entries = [
            (index[(a, z)], index[(z, b)]) for z in range(a + 1, b)
        ]
        table.append(tuple(entries))
    return tuple(table)


def _count_nodes(
    r: int,
    n: int,
    lo_color: int,
    node_budget: int,
    prefix: Sequence[int] = (),
) -> int:
    n_pairs = pair_count(n)
    if n_pairs == 0:
        return 1
    table = _propagation_table(n)
    dom_lo = [max(1, lo_color)] * n_pairs
    dom_hi = [r] * n_pairs
    dist = [0] * n_pairs
    nodes = 0

    def apply_value(p: int, v: int) -> Optional[list[tuple[int, int, int]]]:
        """Assign dist[p] = v and narrow downstream intervals; returns the
        undo list, or None when some interval became empty (already undone)."""
        dist[p] = v
        saved: list[tuple[int, int, int]] = []
        for source, target in table[p]:
            dv = dist[source]
            new_lo = v - dv if v > dv else dv - v
            new_hi = v + dv
            cur_lo, cur_hi = dom_lo[target], dom_hi[target]
            if new_lo < cur_lo:
                new_lo = cur_lo
            if new_hi > cur_hi:
                new_hi = cur_hi
            if new_lo != cur_lo or new_hi != cur_hi:
                saved.append((target, cur_lo, cur_hi))
                dom_lo[target], dom_hi[target] = new_lo, new_hi
                if new_lo > new_hi:
                    undo(saved)
                    return None
        return saved

    def undo(saved: list[tuple[int, int, int]]) -> None:
        for target, cur_lo, cur_hi in reversed(saved):
            dom_lo[target], dom_hi[target] = cur_lo, cur_hi

    # force the prefix assignments before recursing
    for p, v in enumerate(prefix):
        if not (dom_lo[p] <= v <= dom_hi[p]):
            return 0
        if apply_value(p, v) is None:
            return 0
    start = len(prefix)
    if start == n_pairs:
        return 1

    def rec(p: int) -> int:
        nonlocal nodes
        if p == n_pairs - 1:
            width = dom_hi[p] - dom_lo[p] + 1
            return width if width > 0 else 0
        total = 0
        for v in range(dom_lo[p], dom_hi[p] + 1):
            nodes += 1
            if nodes > node_budget:
                raise CapacityError(
                    "search exceeded the %d-node budget at r=%d n=%d"
                    % (node_budget, r, n)
                )
            saved = apply_value(p, v)
            if saved is not None:
                total += rec(p + 1)
                undo(saved)
        return total

    return rec(start)


def _count_task(args: tuple) -> int:
    r, n, lo_color, node_budget, prefix = args
    return _count_nodes(r, n, lo_color, node_budget, prefix)


def _count_parallel(
    r: int, n: int, lo_color: int, node_budget: int, threads: int
) -> int:
    # split on assignments of the first pairs until there are enough tasks;
    # summing big integers over the fixed task order keeps the result
    # identical to the serial count
    depth = 1
    lo = max(1, lo_color)
    while (r - lo + 1) ** depth < 4 * threads and depth < pair_count(n):
        depth += 1
    prefixes = list(product(range(lo, r + 1), repeat=depth))
    tasks = [(r, n, lo_color, node_budget, prefix) for prefix in prefixes]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return sum(pool.map(_count_task, tasks, chunksize=1))


def count_metric(
    r: int,
    n: int,
    node_budget: int = DEFAULT_NODE_BUDGET,
    threads: int = 1,
) -> int:
    """Exact number of metric colorings on [n] with colors in [r]."""
    Params(r, n)
    m_of(r)
    if threads > 1:
        return _count_parallel(r, n, 1, node_budget, threads)
    return _count_metric_cached(r, n, 1, node_budget)


@lru_cache(maxsize=None)
def _count_metric_cached(r: int, n: int, lo_color: int, node_budget: int) -> int:
    return _count_nodes(r, n, lo_color, node_budget)


def enumerate_metric(
    r: int,
    n: int,
    node_budget: int = DEFAULT_NODE_BUDGET,
    lo_color: int = 1,
) -> Iterator[MetricColoring]:
    """Stream every metric coloring in lexicographic distance-vector order;
    `lo_color` restricts the stream to colorings with all colors >= lo_color."""
    params = Params(r, n)
    m_of(r)
    n_pairs = pair_count(n)
    if n_pairs == 0:
        yield MetricColoring(params, ())
        return
    table = _propagation_table(n)
    dom_lo = [max(1, lo_color)] * n_pairs
    dom_hi = [r] * n_pairs
    dist = [0] * n_pairs
    nodes = 0

    def rec(p: int) -> Iterator[MetricColoring]:
        nonlocal nodes
        for v in range(dom_lo[p], dom_hi[p] + 1):
            nodes += 1
            if nodes > node_budget:
                raise CapacityError(
                    "enumeration exceeded the %d-node budget at r=%d n=%d"
                    % (node_budget, r, n)
                )
            dist[p] = v
            saved: list[tuple[int, int, int]] = []
            feasible = True
            for source, target in table[p]:
                dv = dist[source]
                new_lo = max(dom_lo[target], abs(v - dv))
                new_hi = min(dom_hi[target], v + dv)
                if new_lo != dom_lo[target] or new_hi != dom_hi[target]:
                    saved.append((target, dom_lo[target], dom_hi[target]))
                    dom_lo[target], dom_hi[target] = new_lo, new_hi
                    if new_lo > new_hi:
                        feasible = False
                        break
            if feasible:
                if p == n_pairs - 1:
                    yield MetricColoring(params, tuple(dist))
                else:
                    yield from rec(p + 1)
            for target, cur_lo, cur_hi in reversed(saved):
                dom_lo[target], dom_hi[target] = cur_lo, cur_hi

    yield from rec(0)


def count_cr(
    r: int, n: int, node_budget: int = DEFAULT_NODE_BUDGET
) -> int:
    """Exact size of the structured class. Even r has the closed form
    m(r)^(n(n-1)/2); odd r filters the metric stream restricted to colors
    >= m(r)-1 (a sound restriction: every member is metric with colors in
    that range) through the membership test."""
    Params(r, n)
    m = m_of(r)
    if r % 2 == 0:
        return m ** pair_count(n)
    return _count_cr_odd_cached(r, n, node_budget)


@lru_cache(maxsize=None)
def _count_cr_odd_cached(r: int, n: int, node_budget: int) -> int:
    m = m_of(r)
    count = 0
    for graph in enumerate_metric(r, n, node_budget=node_budget, lo_color=m - 1):
        if _is_cr_member_fast(graph):
            count += 1
    return count


def _is_cr_member_fast(g: MetricColoring) -> bool:
    """Odd-r membership for colorings already known to use colors >= m-1:
    no pair of color r inside a link-color component."""
    r, n = g.params.r, g.params.n
    link = m_of(r) - 1
    parent = list(range(n + 1))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    top_pairs = []
    for (x, y), value in g.pairs():
        if value == link:
            ra, rb = find(x), find(y)
            if ra != rb:
                parent[ra] = rb
        elif value == r:
            top_pairs.append((x, y))
    return all(find(x) != find(y) for x, y in top_pairs)


@dataclass(frozen=True)
class CountReport:
    """Exact counts for one (r, n) cell plus the universal lower bound
    m(r)^(n(n-1)/2) and the exact structured-to-metric ratio."""

    r: int
    n: int
    m_count: int
    c_count: int
    lower_bound: int
    ratio_c_over_m: Fraction
    elapsed_ms: Optional[float] = None

    def __post_init__(self) -> None:
        assert self.m_count >= self.c_count >= self.lower_bound
        if self.r % 2 == 0:
            assert self.c_count == self.lower_bound

    def to_json_dict(self) -> dict:
        return {
            "r": self.r,
            "n": self.n,
            "m_count": self.m_count,
            "c_count": self.c_count,
            "lower_bound": self.lower_bound,
            "ratio_c_over_m": "%d/%d"
            % (self.ratio_c_over_m.numerator, self.ratio_c_over_m.denominator),
            "elapsed_ms": self.elapsed_ms,
        }

    def to_csv_row(self) -> str:
        elapsed = "" if self.elapsed_ms is None else "%.3f" % self.elapsed_ms
        return "%d,%d,%d,%d,%.12g,%s" % (
            self.r,
            self.n,
            self.m_count,
            self.c_count,
            float(self.ratio_c_over_m),
            elapsed,
        )

    @staticmethod
    def csv_header() -> str:
        return "r,n,m_count,c_count,ratio,elapsed_ms"


def count_report(
    r: int,
    n: int,
    node_budget: int = DEFAULT_NODE_BUDGET,
    threads: int = 1,
    with_timing: bool = True,
) -> CountReport:
    started = time.perf_counter()
    m_count = count_metric(r, n, node_budget=node_budget, threads=threads)
    c_count = count_cr(r, n, node_budget=node_budget)
    elapsed_ms = (time.perf_counter() - started) * 1000.0 if with_timing else None
    return CountReport(
        r=r,
        n=n,
        m_count=m_count,
        c_count=c_count,
        lower_bound=m_of(r) ** pair_count(n),
        ratio_c_over_m=Fraction(c_count, m_count),
        elapsed_ms=elapsed_ms,
    )


@dataclass(frozen=True)
class SampleBatch:
    """Uniform samples over the metric colorings for one (r, n), produced by
    rejection from i.i.d. uniform colorings with a seeded Mersenne Twister
    (random.Random). The batch is a pure function of (seed, r, n, count)."""

    params: Params
    seed: int
    samples: tuple[MetricColoring, ...]
    attempts: int

    def to_json_dict(self) -> dict:
        return {
            "r": self.params.r,
            "n": self.params.n,
            "seed": self.seed,
            "count": len(self.samples),
            "attempts": self.attempts,
            "samples": [list(g.dist) for g in self.samples],
        }


def _vector_is_metric(r: int, n: int, dist: Sequence[int]) -> bool:
    for x in range(1, n - 1):
        base_x = (x - 1) * (2 * n - x) // 2 - x - 1
        for y in range(x + 1, n):
            dxy = dist[base_x + y]
            base_y = (y - 1) * (2 * n - y) // 2 - y - 1
            for z in range(y + 1, n + 1):
                dxz = dist[base_x + z]
                dyz = dist[base_y + z]
                if dxy > dxz + dyz or dxz > dxy + dyz or dyz > dxy + dxz:
                    return False
    return True


def sample_uniform(
    r: int,
    n: int,
    count: int,
    seed: int,
    min_acceptance: float = DEFAULT_MIN_ACCEPTANCE,
) -> SampleBatch:
    """Rejection-sample `count` uniform metric colorings, reproducibly."""
    params = Params(r, n)
    if count < 0:
        raise DomainError("sample count must be nonnegative")
    n_pairs = pair_count(n)
    estimated_rate = (m_of(r) / r) ** n_pairs
    if estimated_rate < min_acceptance:
        raise CapacityError(
            "estimated acceptance rate %.3g below the %.3g floor; "
            "use exact enumeration instead" % (estimated_rate, min_acceptance)
        )
    rng = random.Random(seed)
    samples: list[MetricColoring] = []
    attempts = 0
    while len(samples) < count:
        attempts += 1
        dist = tuple(rng.randint(1, r) for _ in range(n_pairs))
        if _vector_is_metric(r, n, dist):
            samples.append(MetricColoring(params, dist))
    return SampleBatch(params=params, seed=seed, samples=tuple(samples), attempts=attempts)


def matchings(n: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """All matchings on [n] (the empty matching included), ordered by
    recursively pairing the least unmatched vertex."""
    vertices = tuple(range(1, n + 1))

    def rec(remaining: tuple[int, ...]) -> Iterator[tuple[tuple[int, int], ...]]:
        if not remaining:
            yield ()
            return
        head, rest = remaining[0], remaining[1:]
        # head unmatched
        for rest_match in rec(rest):
            yield rest_match
        # head matched with each later vertex
        for i, partner in enumerate(rest):
            pair = (head, partner)
            for rest_match in rec(rest[:i] + rest[i + 1 :]):
                yield (pair,) + rest_match

    yield from rec(vertices)


def matching_family(
    r: int, n: int, matching: Sequence[tuple[int, int]]
) -> Iterator[MetricColoring]:
    """Members of the family attached to one matching: the matched pairs are
    colored m(r)-1 and every other pair ranges over [m(r), r]."""
    if r % 2 == 0:
        raise DomainError("the matching family is defined for odd r only")
    params = Params(r, n)
    m = m_of(r)
    matched = {(min(x, y), max(x, y)) for x, y in matching}
    seen: set[int] = set()
    for x, y in matched:
        if x in seen or y in seen or not (1 <= x < y <= n):
            raise DomainError("not a matching on [n]: %r" % (sorted(matched),))
        seen.update((x, y))
    order = pair_order(n)
    free_positions = [i for i, p in enumerate(order) if p not in matched]
    base = [m - 1] * len(order)
    for values in product(range(m, r + 1), repeat=len(free_positions)):
        dist = base[:]
        for pos, v in zip(free_positions, values):
            dist[pos] = v
        yield MetricColoring(params, tuple(dist))


def matching_family_count(r: int, n: int) -> tuple[int, int]:
    """(number of matchings on [n], total size of the union of their
    families), the union being disjoint by construction."""
    if r % 2 == 0:
        raise DomainError("the matching family is defined for odd r only")
    if n < 2:
        raise DomainError("need n >= 2, got %d" % n)
    m = m_of(r)
    n_pairs = pair_count(n)
    total = 0
    count = 0
    for matching in matchings(n):
        count += 1
        total += m ** (n_pairs - len(matching))
    return count, total


def structure_stats(
    r: int,
    n: int,
    mode: str = "exact",
    epsilon: Fraction = Fraction(1, 10),
    samples: int = 1000,
    seed: int = 0,
    node_budget: int = DEFAULT_NODE_BUDGET,
    nearest_limit: int = 4,
) -> dict:
    """Summary report for one (r, n): structured fraction, color histogram,
    low-hub fraction, mean distance to the structured class (exact mode,
    small n only), and the excess of log_m |M| over n(n-1)/2.

    The excess is reported, never asserted: no finite-n prediction exists
    for it.
    """
    if mode not in ("exact", "sampled"):
        raise DomainError("mode must be 'exact' or 'sampled', got %r" % mode)
    m = m_of(r)
    report: dict = {"r": r, "n": n, "mode": mode, "epsilon": str(epsilon)}
    histogram = {c: 0 for c in range(1, r + 1)}
    if mode == "exact":
        m_count = 0
        member_count = 0
        hub_count = 0
        nearest_total = 0
        compute_nearest = n <= nearest_limit
        for graph in enumerate_metric(r, n, node_budget=node_budget):
            m_count += 1
            for value in graph.dist:
                histogram[value] += 1
            if cr_membership(graph).member:
                member_count += 1
            if low_color_hub(graph, epsilon) is not None:
                hub_count += 1
            if compute_nearest:
                nearest_total += nearest_cr_distance(graph)[0]
        c_count = count_cr(r, n, node_budget=node_budget)
        assert member_count == c_count
        report.update(
            {
                "m_count": m_count,
                "c_count": c_count,
                "fraction_cr": str(Fraction(c_count, m_count)),
                "fraction_low_hub": str(Fraction(hub_count, m_count)),
                "histogram": histogram,
                "mean_nearest_distance": (
                    str(Fraction(nearest_total, m_count)) if compute_nearest else None
                ),
                "excess_log": math.log(m_count, m) - pair_count(n),
            }
        )
    else:
        batch = sample_uniform(r, n, samples, seed)
        member_count = 0
        hub_count = 0
        for graph in batch.samples:
            for value in graph.dist:
                histogram[value] += 1
            if cr_membership(graph).member:
                member_count += 1
            if low_color_hub(graph, epsilon) is not None:
                hub_count += 1
        report.update(
            {
                "samples": samples,
                "seed": seed,
                "attempts": batch.attempts,
                "fraction_cr": member_count / samples if samples else None,
                "fraction_low_hub": hub_count / samples if samples else None,
                "histogram": histogram,
                "mean_nearest_distance": None,
                "excess_log": None,
            }
        )
    return report
