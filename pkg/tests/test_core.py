import itertools
import json

import pytest

from metricgraphs.core import (
    ColorSetGraph,
    EditSet,
    MetricColoring,
    Params,
    constant_coloring,
    delta,
    find_violating_triangle,
    is_delta_close,
    is_metric_set,
    is_metric_triangle,
    is_violating_triple,
    m_of,
    pair_index,
    pair_order,
)
from metricgraphs.errors import DomainError

from fractions import Fraction


def test_m_of_values():
    assert m_of(3) == 2
    assert m_of(4) == 3
    assert m_of(5) == 3
    assert m_of(6) == 4
    assert m_of(7) == 4


def test_m_of_rejects_small_r():
    with pytest.raises(DomainError):
        m_of(2)


def test_violating_triple_examples():
    assert is_violating_triple(1, 1, 3)
    assert not is_violating_triple(2, 2, 4)  # boundary is non-strict
    assert not is_violating_triple(3, 1, 2)


def test_metric_triangle_examples():
    assert is_metric_triangle(1, 2, 3)
    assert not is_metric_triangle(1, 1, 3)
    assert is_metric_triangle(2, 2, 2)


def test_triangle_predicates_agree_exhaustively():
    # a triple is violating in some rotation iff the triangle test fails;
    # both predicates are permutation-invariant
    for i, j, k in itertools.product(range(1, 9), repeat=3):
        metric = is_metric_triangle(i, j, k)
        rotations = [(i, j, k), (j, k, i), (k, i, j)]
        assert any(is_violating_triple(*rot) for rot in rotations) == (not metric)
        for perm in itertools.permutations((i, j, k)):
            assert is_metric_triangle(*perm) == metric
            assert is_violating_triple(*perm) == (not metric)


def test_pair_order_and_index():
    order = pair_order(4)
    assert order == [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
    for i, (x, y) in enumerate(order):
        assert pair_index(4, x, y) == i
        assert pair_index(4, y, x) == i
    with pytest.raises(DomainError):
        pair_index(4, 2, 2)


def test_coloring_validation():
    with pytest.raises(DomainError):
        MetricColoring(Params(3, 3), (1, 1))
    with pytest.raises(DomainError):
        MetricColoring(Params(3, 3), (1, 1, 4))
    with pytest.raises(DomainError):
        MetricColoring(Params(3, 3), (0, 1, 1))
    with pytest.raises(DomainError):
        Params(3, 0)


def test_find_violating_triangle_examples():
    assert find_violating_triangle(MetricColoring(Params(3, 3), (1, 1, 3))) == (1, 2, 3)
    assert find_violating_triangle(MetricColoring(Params(4, 3), (2, 2, 4))) is None
    assert find_violating_triangle(constant_coloring(3, 4, 2)) is None


def test_find_violating_triangle_is_lexicographically_first():
    # two violations, {1,2,4} and {2,3,4}; the first in vertex order wins
    g = MetricColoring(Params(3, 4), (1, 2, 1, 1, 3, 1))
    assert is_metric_triangle(g.d(1, 2), g.d(1, 3), g.d(2, 3))
    assert not is_metric_triangle(g.d(1, 2), g.d(1, 4), g.d(2, 4))
    assert not is_metric_triangle(g.d(2, 3), g.d(2, 4), g.d(3, 4))
    assert find_violating_triangle(g) == (1, 2, 4)


def _brute_is_metric_set(r, colors):
    values = list(colors)
    for a in values:
        for b in values:
            for c in values:
                if not is_metric_triangle(a, b, c):
                    return False
    return True


def test_is_metric_set_examples():
    assert is_metric_set(4, {2, 3, 4})
    assert not is_metric_set(3, {1, 3})
    assert is_metric_set(3, {2})
    with pytest.raises(DomainError):
        is_metric_set(3, set())
    with pytest.raises(DomainError):
        is_metric_set(3, {0, 1})


def test_is_metric_set_matches_brute_force():
    for r in (3, 4, 5):
        for bits in range(1, 1 << r):
            colors = {c for c in range(1, r + 1) if bits >> (c - 1) & 1}
            assert is_metric_set(r, colors) == _brute_is_metric_set(r, colors)


def test_largest_metric_set_has_size_m():
    for r in range(3, 11):
        m = m_of(r)
        best = 0
        for bits in range(1, 1 << r):
            colors = {c for c in range(1, r + 1) if bits >> (c - 1) & 1}
            if is_metric_set(r, colors):
                best = max(best, len(colors))
        assert best == m
        # the canonical witnesses
        if r % 2 == 0:
            assert is_metric_set(r, set(range(r // 2, r + 1)))
        else:
            assert is_metric_set(r, set(range((r - 1) // 2, r)))
            assert is_metric_set(r, set(range((r + 1) // 2, r + 1)))


def test_delta_examples():
    g = MetricColoring(Params(3, 3), (2, 2, 2))
    assert len(delta(g, g)) == 0
    h = MetricColoring(Params(3, 3), (2, 2, 3))
    assert list(delta(g, h)) == [(2, 3)]
    a = MetricColoring(Params(3, 3), (1, 2, 3))
    b = MetricColoring(Params(3, 3), (3, 2, 1))
    assert list(delta(a, b)) == [(1, 2), (2, 3)]
    with pytest.raises(DomainError):
        delta(g, constant_coloring(3, 4, 2))


def test_delta_is_a_pseudometric_on_colorings():
    import random

    rng = random.Random(5)
    params = Params(3, 4)
    colorings = [
        MetricColoring(params, tuple(rng.randint(1, 3) for _ in range(6)))
        for _ in range(30)
    ]
    for g, h, k in itertools.product(colorings[:10], repeat=3):
        assert len(delta(g, h)) == len(delta(h, g))
        assert len(delta(g, h)) <= len(delta(g, k)) + len(delta(k, h))


def test_is_delta_close():
    g = MetricColoring(Params(3, 3), (2, 2, 2))
    h = MetricColoring(Params(3, 3), (2, 2, 3))
    assert is_delta_close(g, g, 0)
    assert is_delta_close(g, h, Fraction(1, 9))
    b = MetricColoring(Params(3, 3), (3, 2, 3))
    assert not is_delta_close(g, b, Fraction(1, 9))
    with pytest.raises(DomainError):
        is_delta_close(g, h, -1)


def test_coloring_json_round_trip():
    g = MetricColoring(Params(4, 3), (2, 3, 4))
    payload = g.to_json_dict()
    assert payload == {"r": 4, "n": 3, "d": [2, 3, 4]}
    assert MetricColoring.from_json(g.to_json()) == g


def test_color_set_graph_round_trip():
    g = ColorSetGraph.from_color_lists(3, 3, [[1, 2], [], [2, 3]])
    payload = g.to_json_dict()
    assert payload == {"r": 3, "n": 3, "c": [[1, 2], [], [2, 3]]}
    assert ColorSetGraph.from_json(g.to_json()) == g
    assert g.color_set(1, 2) == (1, 2)
    assert g.color_set(1, 3) == ()


def test_color_set_graph_validation():
    with pytest.raises(DomainError):
        ColorSetGraph.from_color_lists(3, 3, [[1, 4], [], []])
    with pytest.raises(DomainError):
        ColorSetGraph.from_color_lists(40, 2, [[1]])  # masks are word-sized


def test_edit_set_normalizes():
    edits = EditSet.of([(3, 1), (1, 2)])
    assert edits.pairs == ((1, 2), (1, 3))
    assert (1, 3) in edits
    assert json.loads(json.dumps(edits.to_json_dict())) == {"pairs": [[1, 2], [1, 3]]}
