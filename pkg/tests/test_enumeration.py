import itertools
from fractions import Fraction

import pytest

from metricgraphs.core import (
    find_violating_triangle,
    is_metric_triangle,
    m_of,
    pair_order,
)
from metricgraphs.enumeration import (
    CountReport,
    count_cr,
    count_metric,
    count_report,
    enumerate_metric,
    matching_family,
    matching_family_count,
    matchings,
    sample_uniform,
    structure_stats,
)
from metricgraphs.errors import CapacityError, DomainError
from metricgraphs.structure import cr_membership

# frozen against the one-line product filter below (dev run, two methods)
METRIC_COUNTS = {
    (3, 2): 3,
    (3, 3): 24,
    (4, 3): 52,
    (5, 3): 95,
    (3, 4): 482,
    (4, 4): 2030,
    (3, 5): 23352,
}
CR_ODD_COUNTS = {(3, 3): 24, (3, 4): 470, (3, 5): 21432}


def brute_count_metric(r, n):
    """Definitional oracle: filter all r^(n(n-1)/2) colorings."""
    order = pair_order(n)
    index = {p: i for i, p in enumerate(order)}
    triangles = [
        (index[(x, y)], index[(x, z)], index[(y, z)])
        for x, y, z in itertools.combinations(range(1, n + 1), 3)
    ]
    count = 0
    for dist in itertools.product(range(1, r + 1), repeat=len(order)):
        if all(is_metric_triangle(dist[i], dist[j], dist[k]) for i, j, k in triangles):
            count += 1
    return count


def graphsum_count_cr_odd(r, n):
    """Independent count of the odd-r structured class: a member is a choice
    of a link-edge graph together with colors in [m, r-1] on within-component
    non-edges and [m, r] on cross-component pairs."""
    m = m_of(r)
    order = pair_order(n)
    total = 0
    for bits in range(1 << len(order)):
        parent = list(range(n + 1))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for i, (x, y) in enumerate(order):
            if bits >> i & 1:
                rx, ry = find(x), find(y)
                if rx != ry:
                    parent[rx] = ry
        within = sum(
            1
            for i, (x, y) in enumerate(order)
            if not bits >> i & 1 and find(x) == find(y)
        )
        cross = len(order) - bin(bits).count("1") - within
        total += (r - m) ** within * m**cross
    return total


def test_count_metric_examples():
    assert count_metric(3, 3) == 24
    assert count_metric(4, 3) == 52
    assert count_metric(3, 2) == 3
    assert count_metric(3, 1) == 1


def test_count_matches_brute_force():
    for (r, n), expected in METRIC_COUNTS.items():
        if (r, n) == (3, 5):
            continue  # covered in the exhaustive sweep below
        assert brute_count_metric(r, n) == expected
        assert count_metric(r, n) == expected
    assert count_metric(3, 5) == METRIC_COUNTS[(3, 5)]


def test_count_matches_brute_force_all_small_cells():
    # every cell with at most about 10^6 raw colorings
    for r, n in ((3, 5), (4, 4), (5, 4), (6, 3), (7, 3), (8, 3)):
        assert count_metric(r, n) == brute_count_metric(r, n)


def test_enumerate_stream():
    stream = list(enumerate_metric(3, 3))
    assert len(stream) == count_metric(3, 3)
    assert stream[0].dist == (1, 1, 1)
    assert all(g.dist != (1, 1, 3) for g in stream)
    vectors = [g.dist for g in stream]
    assert vectors == sorted(vectors)
    for g in stream:
        assert find_violating_triangle(g) is None


def test_enumerate_budget():
    with pytest.raises(CapacityError):
        list(enumerate_metric(3, 5, node_budget=100))


def test_count_cr_even_closed_form():
    assert count_cr(4, 3) == 27
    assert count_cr(4, 4) == 729
    assert count_cr(4, 5) == 3**10
    assert count_cr(6, 3) == 4**3


def test_count_cr_odd_matches_graph_sum():
    for n in (3, 4, 5):
        expected = CR_ODD_COUNTS[(3, n)]
        assert graphsum_count_cr_odd(3, n) == expected
        assert count_cr(3, n) == expected
    assert count_cr(5, 3) == graphsum_count_cr_odd(5, 3)


def test_count_cr_odd_matches_membership_filter():
    members = sum(1 for g in enumerate_metric(3, 4) if cr_membership(g).member)
    assert members == count_cr(3, 4) == 470


def test_lower_bound_chain_small():
    for (r, n) in ((3, 3), (3, 4), (4, 3), (4, 4), (5, 3)):
        report = count_report(r, n, with_timing=False)
        assert report.m_count >= report.c_count >= report.lower_bound
        assert report.lower_bound == m_of(r) ** len(pair_order(n))


def test_count_report_serialization():
    report = count_report(4, 3, with_timing=False)
    payload = report.to_json_dict()
    assert payload["m_count"] == 52
    assert payload["c_count"] == 27
    assert payload["ratio_c_over_m"] == "27/52"
    assert payload["elapsed_ms"] is None
    assert CountReport.csv_header() == "r,n,m_count,c_count,ratio,elapsed_ms"
    assert report.to_csv_row().startswith("4,3,52,27,0.519230769231,")


def test_parallel_count_matches_serial():
    assert count_metric(3, 4, threads=2) == count_metric(3, 4)
    assert count_metric(4, 4, threads=3) == count_metric(4, 4)


def test_sample_uniform_no_constraints_at_n2():
    batch = sample_uniform(3, 2, 100, seed=9)
    assert len(batch.samples) == 100
    assert batch.attempts == 100


def test_sample_uniform_deterministic():
    a = sample_uniform(3, 3, 250, seed=42)
    b = sample_uniform(3, 3, 250, seed=42)
    assert a.to_json_dict() == b.to_json_dict()
    c = sample_uniform(3, 3, 250, seed=43)
    assert c.to_json_dict() != a.to_json_dict()


def test_sample_uniform_samples_are_metric():
    batch = sample_uniform(3, 4, 200, seed=1)
    for g in batch.samples:
        assert find_violating_triangle(g) is None
    assert batch.attempts >= 200


def test_sample_uniform_acceptance_floor():
    with pytest.raises(CapacityError):
        sample_uniform(3, 12, 1, seed=0, min_acceptance=1e-3)


def test_sample_fraction_matches_exact_ratio():
    # the fraction of samples with every color >= 2 at r=4, n=5 estimates
    # |structured| / |metric|; 3 standard errors of slack
    batch = sample_uniform(4, 5, 1000, seed=7)
    hits = sum(1 for g in batch.samples if all(v >= 2 for v in g.dist))
    p = count_cr(4, 5) / count_metric(4, 5)
    se = (p * (1 - p) / 1000) ** 0.5
    assert abs(hits / 1000 - p) <= 3 * se


def test_matchings_enumeration():
    assert sorted(map(len, matchings(2))) == [0, 1]
    assert sum(1 for _ in matchings(4)) == 10
    assert sum(1 for _ in matchings(5)) == 26


def test_matching_family_sizes():
    family = list(matching_family(3, 4, [(1, 2), (3, 4)]))
    assert len(family) == 16
    for g in family:
        assert g.d(1, 2) == 1 and g.d(3, 4) == 1
        assert find_violating_triangle(g) is None

    count, total = matching_family_count(3, 2)
    assert count == 2
    assert total == 2 + 1  # empty matching: 2^1; the single pair: 2^0


def test_matching_families_disjoint_and_inside_metric():
    seen = set()
    total_count, total = matching_family_count(3, 4)
    assert total_count == 10
    generated = 0
    for matching in matchings(4):
        family = list(matching_family(3, 4, matching))
        assert len(family) == 2 ** (6 - len(matching))
        for g in family:
            assert find_violating_triangle(g) is None
            assert g.dist not in seen
            seen.add(g.dist)
        generated += len(family)
    assert generated == total == 304
    assert total <= count_metric(3, 4)


def test_matching_family_rejects_even_r():
    with pytest.raises(DomainError):
        matching_family_count(4, 4)
    with pytest.raises(DomainError):
        list(matching_family(4, 4, []))
    with pytest.raises(DomainError):
        list(matching_family(3, 4, [(1, 2), (2, 3)]))


def test_structure_stats_exact():
    report = structure_stats(4, 3, mode="exact", epsilon=Fraction(1, 3))
    assert report["m_count"] == 52
    assert report["c_count"] == 27
    assert report["fraction_cr"] == "27/52"
    assert sum(report["histogram"].values()) == 52 * 3

    report = structure_stats(3, 3, mode="exact", epsilon=Fraction(1, 3))
    assert report["fraction_cr"] == "1"
    assert report["mean_nearest_distance"] == "0"
    assert report["excess_log"] > 0


def test_structure_stats_sampled():
    report = structure_stats(3, 3, mode="sampled", epsilon=Fraction(1, 3), samples=500, seed=3)
    assert report["samples"] == 500
    assert 0 <= report["fraction_cr"] <= 1
    with pytest.raises(DomainError):
        structure_stats(3, 3, mode="bogus")
