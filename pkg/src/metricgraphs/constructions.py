"""Explicit constructions: amalgamation of two colorings over a shared
part, the 4-vertex gadget, the case-split re-coloring map that plants the
gadget inside structured colorings, preimage statistics for that map, and
extension axioms with their empirical satisfaction curves.

Amalgamation layout convention: the result keeps the first factor's vertex
labels 1..nA; unshared vertices of the second factor are appended after nA
in increasing order of their original labels. Both factors embed
isometrically under this layout.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, permutations
from math import sqrt
from typing import Iterator, Optional, Sequence

from .core import (
    MetricColoring,
    Pair,
    Params,
    find_violating_triangle,
    m_of,
    pair_count,
    pair_order,
)
from .enumeration import (
    DEFAULT_NODE_BUDGET,
    count_metric,
    enumerate_metric,
    sample_uniform,
)
from .errors import DomainError, UnsupportedInstanceError
from .structure import (
    ComponentDecomposition,
    component_decomposition,
    cr_membership,
    minimal_large_component,
)
from .weights import LemmaVerdict


def _shared_layout(
    a: MetricColoring, b: MetricColoring, shared: Sequence[tuple[int, int]]
) -> tuple[int, dict[int, int]]:
    """Validate the shared correspondence and return (total vertex count,
    mapping from b-vertices to result vertices)."""
    if a.params.r != b.params.r:
        raise DomainError("factors disagree on r: %d vs %d" % (a.params.r, b.params.r))
    a_side = [pair[0] for pair in shared]
    b_side = [pair[1] for pair in shared]
    if len(set(a_side)) != len(a_side) or len(set(b_side)) != len(b_side):
        raise DomainError("shared correspondence must be injective on both sides")
    for va, vb in shared:
        if not (1 <= va <= a.params.n and 1 <= vb <= b.params.n):
            raise DomainError("shared vertex (%d, %d) out of range" % (va, vb))
    partner = dict(zip(b_side, a_side))
    for (vb1, vb2) in combinations(sorted(partner), 2):
        if a.d(partner[vb1], partner[vb2]) != b.d(vb1, vb2):
            raise DomainError(
                "factors disagree on the shared pair (%d, %d)" % (vb1, vb2)
            )
    mapping: dict[int, int] = dict(partner)
    next_label = a.params.n + 1
    for vb in range(1, b.params.n + 1):
        if vb not in mapping:
            mapping[vb] = next_label
            next_label += 1
    return next_label - 1, mapping


def amalgamate_cr(
    a: MetricColoring, b: MetricColoring, shared: Sequence[tuple[int, int]]
) -> MetricColoring:
    """Free amalgamation inside the even-r structured class: keep both
    factors and color every cross pair r. Requires even r and both factors
    to use colors in [r/2, r] only."""
    r = a.params.r
    if r % 2:
        raise DomainError("this amalgamation is defined for even r only")
    for g, name in ((a, "first"), (b, "second")):
        if any(value < r // 2 for value in g.dist):
            raise DomainError("%s factor uses a color below r/2" % name)
    total, mapping = _shared_layout(a, b, shared)
    return _assemble(a, b, shared, total, mapping, cross=lambda x, vb: r)


def amalgamate_mr(
    a: MetricColoring, b: MetricColoring, shared: Sequence[tuple[int, int]]
) -> MetricColoring:
    """Metric amalgamation over a nonempty shared part: a cross pair (x, y)
    receives the shortest connecting value through the shared vertices,
    truncated at r, i.e. min over shared c of min(r, d_A(x,c) + d_B(c,y)).
    Both factors must be metric and agree on the shared part."""
    r = a.params.r
    if not shared:
        raise DomainError("metric amalgamation needs a nonempty shared part")
    for g, name in ((a, "first"), (b, "second")):
        if find_violating_triangle(g) is not None:
            raise DomainError("%s factor is not metric" % name)
    total, mapping = _shared_layout(a, b, shared)

    def cross(x: int, vb: int) -> int:
        best = r
        for va_c, vb_c in shared:
            through = a.d(x, va_c) + b.d(vb_c, vb)
            if through < best:
                best = through
        return best

    result = _assemble(a, b, shared, total, mapping, cross=cross)
    assert find_violating_triangle(result) is None
    return result


def _assemble(
    a: MetricColoring,
    b: MetricColoring,
    shared: Sequence[tuple[int, int]],
    total: int,
    mapping: dict[int, int],
    cross,
) -> MetricColoring:
    r = a.params.r
    shared_a = {va for va, _ in shared}
    dist = [0] * pair_count(total)
    order_index = {p: i for i, p in enumerate(pair_order(total))}

    def put(x: int, y: int, value: int) -> None:
        dist[order_index[(min(x, y), max(x, y))]] = value

    for (x, y), value in a.pairs():
        put(x, y, value)
    for (vb1, vb2), value in b.pairs():
        put(mapping[vb1], mapping[vb2], value)
    for x in range(1, a.params.n + 1):
        if x in shared_a:
            continue
        for vb in range(1, b.params.n + 1):
            target = mapping[vb]
            if target > a.params.n:
                put(x, target, cross(x, vb))
    return MetricColoring(Params(r, total), tuple(dist))


def gadget_h(r: int) -> MetricColoring:
    """The 4-vertex coloring with a chain of three m(r)-1 edges whose ends
    sit at distance r (and the two skew pairs at r-1). Metric for every
    r >= 3; for odd r it never belongs to the structured class."""
    m = m_of(r)
    params = Params(r, 4)
    values = {
        (1, 2): m - 1,
        (1, 3): r - 1,
        (1, 4): r,
        (2, 3): m - 1,
        (2, 4): r - 1,
        (3, 4): m - 1,
    }
    return MetricColoring(params, tuple(values[p] for p in pair_order(4)))


@dataclass(frozen=True)
class InjectionTrace:
    """Record of one application of the gadget-planting map: the case used,
    the component decomposition it read, the four gadget vertices, the index
    sequence and chain (third case only), and the re-colored output."""

    case: str
    cocd: ComponentDecomposition
    selected: tuple[int, ...]
    index_sequence: Optional[tuple[int, ...]]
    chain: Optional[tuple[int, ...]]
    output: MetricColoring

    def to_json_dict(self) -> dict:
        return {
            "case": self.case,
            "cocd": self.cocd.to_json_dict(),
            "selected": list(self.selected),
            "index_sequence": None
            if self.index_sequence is None
            else list(self.index_sequence),
            "chain": None if self.chain is None else list(self.chain),
            "output": self.output.to_json_dict(),
        }


def _induced_components(
    g: MetricColoring, vertices: Sequence[int]
) -> list[list[int]]:
    """Link-color components of the induced subgraph, canonically ordered."""
    link = m_of(g.params.r) - 1
    vertex_set = set(vertices)
    parent = {v: v for v in vertices}

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for x, y in combinations(sorted(vertex_set), 2):
        if g.d(x, y) == link:
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry
    groups: dict[int, list[int]] = {}
    for v in sorted(vertex_set):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values(), key=lambda c: (len(c), c[0]))


def _classification_context(g: MetricColoring):
    r, n = g.params.r, g.params.n
    if r % 2 == 0:
        raise DomainError("case classification is defined for odd r only")
    if n < 4:
        raise DomainError("case classification needs n >= 4, got %d" % n)
    if not cr_membership(g).member:
        raise DomainError("input is not in the structured class")
    decomposition = component_decomposition(g)
    threshold = decomposition.large_threshold
    small = [c for c in decomposition.components if len(c) < threshold]
    if len(small) >= 4:
        return "D1", decomposition, None, None
    ml = minimal_large_component(decomposition)
    if ml is None:
        raise UnsupportedInstanceError(
            "no case applies: fewer than 4 small components and no large one"
        )
    ys = ml[:4]
    remainder = [v for v in ml if v not in ys]
    inner = _induced_components(g, remainder) if remainder else []
    inner_large = [c for c in inner if len(c) >= threshold]
    case = "D2" if len(inner_large) <= 3 else "D3"
    return case, decomposition, ml, inner_large


def classify_d_case(g: MetricColoring) -> str:
    """Which re-coloring case applies: 'D1' (at least four small
    components), 'D2' (few large pieces remain after removing the four
    least elements of the minimal large component), or 'D3' (the rest)."""
    return _classification_context(g)[0]


def inject_f(g: MetricColoring) -> InjectionTrace:
    """Re-color g so that it stays metric but leaves the structured class,
    by planting the gadget; the exact edit depends on the case. The
    postconditions (metric, non-member) are asserted on every call."""
    case, decomposition, ml, inner_large = _classification_context(g)
    r, n = g.params.r, g.params.n
    m = m_of(r)
    h = gadget_h(r)
    updates: dict[Pair, int] = {}
    index_sequence: Optional[tuple[int, ...]] = None
    chain: Optional[tuple[int, ...]] = None

    if case == "D1":
        four = decomposition.components[:4]
        ys = [min(c) for c in four]
        block = sorted(v for c in four for v in c)
        gadget_pairs = {
            (min(a, b), max(a, b)) for a, b in combinations(ys, 2)
        }
        for x, y in combinations(block, 2):
            if (x, y) in gadget_pairs:
                continue
            updates[(x, y)] = r - 1
        for i, j in combinations(range(4), 2):
            updates[(min(ys[i], ys[j]), max(ys[i], ys[j]))] = h.d(i + 1, j + 1)
    else:
        assert ml is not None
        ys = list(ml[:4])
        remainder = [v for v in ml if v not in ys]
        before = [
            c
            for c in decomposition.components
            if len(c) < decomposition.large_threshold
        ]
        outside = sorted(v for c in before for v in c)
        for x, y in combinations(outside, 2):
            updates[(x, y)] = r
        for x in outside:
            for y in ys:
                updates[(min(x, y), max(x, y))] = r
        for i, j in combinations(range(4), 2):
            updates[(min(ys[i], ys[j]), max(ys[i], ys[j]))] = h.d(i + 1, j + 1)
        for y in ys:
            for z in remainder:
                updates[(min(y, z), max(y, z))] = g.d(y, z) + 1
        if case == "D3":
            assert inner_large is not None and len(inner_large) >= 4
            k = len(inner_large)
            indices = [1, 1]
            verts = [inner_large[0][0], inner_large[1][0]]
            for j in range(2, k):
                step = g.d(verts[j - 2], verts[j - 1])
                nxt = indices[j - 1] + step if indices[j - 1] <= r else indices[j - 1] - step
                indices.append(nxt)
                verts.append(inner_large[j][nxt - 1])
            index_sequence = tuple(indices)
            chain = tuple(verts)
            for u, v in zip(verts, verts[1:]):
                updates[(min(u, v), max(u, v))] = m - 1
            updates[(min(verts[0], verts[-1]), max(verts[0], verts[-1]))] = r

    output = g.with_distances(updates)
    assert find_violating_triangle(output) is None
    assert not cr_membership(output).member
    trace = InjectionTrace(
        case=case,
        cocd=decomposition,
        selected=tuple(ys),
        index_sequence=index_sequence,
        chain=chain,
        output=output,
    )
    _check_trace(g, trace)
    return trace


def _check_trace(g: MetricColoring, trace: InjectionTrace) -> None:
    # planted gadget present on the selected vertices
    h = gadget_h(g.params.r)
    ys = trace.selected
    for i, j in combinations(range(4), 2):
        assert trace.output.d(ys[i], ys[j]) == h.d(i + 1, j + 1)
    if trace.index_sequence is not None:
        r = g.params.r
        seq = trace.index_sequence
        verts = trace.chain
        assert verts is not None
        assert all(1 <= idx <= 2 * r for idx in seq)
        for j in range(1, len(seq) - 1):
            assert abs(seq[j] - seq[j + 1]) == g.d(verts[j - 1], verts[j])


def preimage_analysis(
    r: int, n: int, node_budget: int = DEFAULT_NODE_BUDGET
) -> dict:
    """Apply the gadget-planting map to every structured coloring with a
    defined case and report how the outputs collide, plus the resulting
    counting consequences."""
    if r % 2 == 0:
        raise DomainError("preimage analysis applies to odd r only")
    m = m_of(r)
    buckets: dict[tuple[int, ...], list[str]] = {}
    by_case = {"D1": 0, "D2": 0, "D3": 0}
    unsupported = 0
    members = 0
    for graph in enumerate_metric(r, n, node_budget=node_budget, lo_color=m - 1):
        cert = cr_membership(graph)
        if not cert.member:
            continue
        members += 1
        try:
            trace = inject_f(graph)
        except UnsupportedInstanceError:
            unsupported += 1
            continue
        by_case[trace.case] += 1
        buckets.setdefault(trace.output.dist, []).append(trace.case)
    total_mapped = sum(by_case.values())
    sizes = [len(v) for v in buckets.values()]
    m_count = count_metric(r, n, node_budget=node_budget)
    # exact integer comparison of |C| <= (1 - r^(-66 r^2)) |M|
    power = r ** (66 * r * r)
    strict_bound = members * power <= (power - 1) * m_count
    return {
        "r": r,
        "n": n,
        "c_count": members,
        "m_count": m_count,
        "mapped": total_mapped,
        "unsupported": unsupported,
        "by_case": by_case,
        "distinct_outputs": len(buckets),
        "max_preimage": max(sizes) if sizes else 0,
        "mean_preimage": (sum(sizes) / len(sizes)) if sizes else None,
        "strict_bound_holds": strict_bound,
        "ratio_c_over_m": "%d/%d" % (members, m_count),
    }


@dataclass(frozen=True)
class ExtensionAxiom:
    """A pair of colorings on k and k+1 vertices, the larger extending the
    smaller; as a sentence: every induced copy of the base extends by one
    vertex to a copy of the extension."""

    base: MetricColoring
    extended: MetricColoring

    def __post_init__(self) -> None:
        k = self.base.params.n
        if k < 2:
            raise DomainError("extension axioms need a base on at least 2 vertices")
        if self.extended.params.n != k + 1:
            raise DomainError("extension must have exactly one more vertex")
        if self.extended.params.r != self.base.params.r:
            raise DomainError("base and extension disagree on r")
        for x, y in combinations(range(1, k + 1), 2):
            if self.base.d(x, y) != self.extended.d(x, y):
                raise DomainError("extension does not restrict to the base")

    @property
    def k(self) -> int:
        return self.base.params.n

    def to_json_dict(self) -> dict:
        return {
            "base": self.base.to_json_dict(),
            "extended": self.extended.to_json_dict(),
        }


def eval_extension_axiom(axiom: ExtensionAxiom, g: MetricColoring) -> bool:
    """True iff every ordered tuple of distinct vertices realizing the base
    pattern extends by some further vertex realizing the extension. Vacuously
    true when no tuple realizes the base (in particular when n < k)."""
    if g.params.r != axiom.base.params.r:
        raise DomainError("graph and axiom disagree on r")
    k = axiom.k
    n = g.params.n
    base, ext = axiom.base, axiom.extended
    vertices = range(1, n + 1)
    for tup in permutations(vertices, k):
        realized = True
        for i, j in combinations(range(k), 2):
            if g.d(tup[i], tup[j]) != base.d(i + 1, j + 1):
                realized = False
                break
        if not realized:
            continue
        found = False
        used = set(tup)
        for y in vertices:
            if y in used:
                continue
            if all(g.d(tup[i], y) == ext.d(i + 1, k + 1) for i in range(k)):
                found = True
                break
        if not found:
            return False
    return True


def _wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    phat = successes / trials
    denom = 1 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def empirical_mu(
    axiom: ExtensionAxiom,
    family: str,
    n_values: Sequence[int],
    samples: int,
    seed: int,
    min_acceptance: float = 1e-8,
) -> list[dict]:
    """Monte Carlo satisfaction curve of the axiom over the chosen family.

    family='cr' draws structured colorings for even r directly (i.i.d.
    colors uniform on [r/2, r], an exact uniform sampler for that class);
    family='metric' uses the rejection sampler. Each point is seeded
    independently from (seed, n) and is byte-reproducible.
    """
    r = axiom.base.params.r
    if family not in ("cr", "metric"):
        raise DomainError("family must be 'cr' or 'metric', got %r" % family)
    if family == "cr" and r % 2:
        raise DomainError("direct structured sampling requires even r")
    points = []
    for n in n_values:
        params = Params(r, n)
        point_seed = seed * 1_000_003 + n
        hits = 0
        if family == "cr":
            rng = random.Random(point_seed)
            low = r // 2
            n_pairs = pair_count(n)
            for _ in range(samples):
                dist = tuple(rng.randint(low, r) for _ in range(n_pairs))
                if eval_extension_axiom(axiom, MetricColoring(params, dist)):
                    hits += 1
        else:
            batch = sample_uniform(
                r, n, samples, point_seed, min_acceptance=min_acceptance
            )
            for graph in batch.samples:
                if eval_extension_axiom(axiom, graph):
                    hits += 1
        ci_low, ci_high = _wilson_interval(hits, samples)
        points.append(
            {
                "n": n,
                "estimate": hits / samples if samples else None,
                "ci_low": ci_low,
                "ci_high": ci_high,
                "samples": samples,
            }
        )
    return points


def _enumerate_small_metric(r: int, max_size: int) -> list[MetricColoring]:
    graphs = []
    for size in range(1, max_size + 1):
        graphs.extend(enumerate_metric(r, size))
    return graphs


def _shared_configurations(
    na: int, nb: int, min_k: int
) -> Iterator[tuple[tuple[int, int], ...]]:
    for k in range(min_k, min(na, nb) + 1):
        if k == 0:
            yield ()
            continue
        for a_side in combinations(range(1, na + 1), k):
            for b_side in permutations(range(1, nb + 1), k):
                yield tuple(zip(a_side, b_side))


def check_amalgamation_mr(r: int, max_size: int = 3) -> LemmaVerdict:
    """Exhaustively amalgamate every pair of metric colorings up to the given
    size over every nonempty agreeing shared correspondence and verify the
    output has no violating triangle."""
    graphs = _enumerate_small_metric(r, max_size)
    checked = 0
    for a in graphs:
        for b in graphs:
            for shared in _shared_configurations(a.params.n, b.params.n, min_k=1):
                try:
                    result = amalgamate_mr(a, b, shared)
                except DomainError:
                    continue  # factors disagree on the shared part
                checked += 1
                witness = find_violating_triangle(result)
                if witness is not None:
                    return LemmaVerdict(
                        lemma_name="amalgam-mr",
                        domain_description="metric factors up to %d vertices, r=%d"
                        % (max_size, r),
                        checked=checked,
                        counterexample={
                            "a": a.to_json_dict(),
                            "b": b.to_json_dict(),
                            "shared": [list(p) for p in shared],
                            "triangle": list(witness),
                        },
                    )
    return LemmaVerdict(
        lemma_name="amalgam-mr",
        domain_description="metric factors up to %d vertices, r=%d" % (max_size, r),
        checked=checked,
    )


def check_amalgamation_cr(r: int, max_size: int = 3) -> LemmaVerdict:
    """Exhaustively amalgamate structured colorings (even r) over every
    agreeing shared correspondence, the empty one included, and verify the
    output stays in the structured class and is metric."""
    if r % 2:
        raise DomainError("this check applies to even r only")
    from itertools import product as iproduct

    graphs: list[MetricColoring] = []
    for size in range(1, max_size + 1):
        params = Params(r, size)
        for dist in iproduct(range(r // 2, r + 1), repeat=pair_count(size)):
            graphs.append(MetricColoring(params, tuple(dist)))
    checked = 0
    for a in graphs:
        for b in graphs:
            for shared in _shared_configurations(a.params.n, b.params.n, min_k=0):
                try:
                    result = amalgamate_cr(a, b, shared)
                except DomainError:
                    continue
                checked += 1
                in_class = all(value >= r // 2 for value in result.dist)
                if not in_class or find_violating_triangle(result) is not None:
                    return LemmaVerdict(
                        lemma_name="amalgam-cr",
                        domain_description="structured factors up to %d vertices, r=%d"
                        % (max_size, r),
                        checked=checked,
                        counterexample={
                            "a": a.to_json_dict(),
                            "b": b.to_json_dict(),
                            "shared": [list(p) for p in shared],
                        },
                    )
    return LemmaVerdict(
        lemma_name="amalgam-cr",
        domain_description="structured factors up to %d vertices, r=%d" % (max_size, r),
        checked=checked,
    )
