import itertools

import pytest

from metricgraphs.core import (
    ColorSetGraph,
    is_violating_triple,
    m_of,
    mask_colors,
    pair_order,
)
from metricgraphs.errors import CapacityError, DomainError
from metricgraphs.structure import set_partitions
from metricgraphs.weights import (
    check_importantcor,
    check_size_lemma,
    check_triangle_classification,
    check_weight_bound,
    classify_triple_shape,
    enumerate_metric_rgraphs,
    masks_triangle_ok,
    sets_admit_violating_triple,
    weight_profile,
)

# frozen by the definitional brute force below (first run pinned)
METRIC_RGRAPH_COUNTS = {(3, 2): 8, (3, 3): 360, (4, 3): 1624, (3, 4): 86976}


def _mask(colors):
    m = 0
    for c in colors:
        m |= 1 << (c - 1)
    return m


def _brute_graph_is_metric(r, t, masks):
    order = {p: i for i, p in enumerate(pair_order(t))}
    for x, y, z in itertools.combinations(range(1, t + 1), 3):
        for a in mask_colors(masks[order[(x, y)]]):
            for b in mask_colors(masks[order[(x, z)]]):
                for c in mask_colors(masks[order[(y, z)]]):
                    if is_violating_triple(a, b, c):
                        return False
    return True


def test_weight_profile_examples():
    g = ColorSetGraph.from_color_lists(3, 3, [[1, 2], [1, 2], [1, 2]])
    profile = weight_profile(g)
    assert profile.weight == 8
    assert profile.a_count == 0 and profile.b_count == 0

    simple = ColorSetGraph.from_color_lists(3, 3, [[1], [2], [3]])
    assert weight_profile(simple).weight == 1

    g = ColorSetGraph.from_color_lists(3, 3, [[1, 2, 3], [2], [2]])
    profile = weight_profile(g)
    assert profile.weight == 3
    assert profile.a_count == 1
    assert profile.b_count == 2
    assert profile.f_values == (3, 1, 1)


def test_empty_sets_count_as_one():
    g = ColorSetGraph.from_color_lists(3, 3, [[], [], [1, 2]])
    profile = weight_profile(g)
    assert profile.weight == 2
    assert profile.f_values == (1, 1, 2)
    assert profile.b_count == 2  # empty pairs fall below m(3) = 2


def test_masks_triangle_ok_matches_brute_force():
    import random

    rng = random.Random(11)
    for _ in range(5000):
        r = rng.randint(3, 6)
        masks = tuple(rng.randrange(1 << r) for _ in range(3))
        brute = _brute_graph_is_metric(r, 3, masks)
        assert masks_triangle_ok(*masks) == brute
        assert sets_admit_violating_triple(*masks) == (not brute)


def test_enumerate_metric_rgraphs_counts():
    for (r, t), expected in METRIC_RGRAPH_COUNTS.items():
        if (r, t) == (3, 4):
            continue  # covered separately, slower
        graphs = list(enumerate_metric_rgraphs(r, t))
        assert len(graphs) == expected


def test_enumerate_metric_rgraphs_equals_definitional_filter():
    # the stream is exactly the brute-force filter over all assignments
    count = 0
    for masks in itertools.product(range(8), repeat=3):
        if _brute_graph_is_metric(3, 3, masks):
            count += 1
    assert count == METRIC_RGRAPH_COUNTS[(3, 3)]
    streamed = [g.masks for g in enumerate_metric_rgraphs(3, 3)]
    assert len(streamed) == count
    assert len(set(streamed)) == count
    for masks in streamed:
        assert _brute_graph_is_metric(3, 3, masks)


def test_enumerate_metric_rgraphs_t4_count():
    assert sum(1 for _ in enumerate_metric_rgraphs(3, 4)) == METRIC_RGRAPH_COUNTS[(3, 4)]


def test_enumerate_metric_rgraphs_budget():
    with pytest.raises(CapacityError):
        next(enumerate_metric_rgraphs(5, 4))  # 5 * 6 = 30 bits > 24
    with pytest.raises(DomainError):
        next(enumerate_metric_rgraphs(3, 1))


def test_weight_bound_holds():
    for r, t in ((3, 3), (4, 3)):
        verdict = check_weight_bound(r, t)
        assert verdict.holds
        assert verdict.checked == METRIC_RGRAPH_COUNTS[(r, t)]


def test_size_lemma_holds_small():
    for r in (3, 4, 5):
        verdict = check_size_lemma(r)
        assert verdict.holds
        assert verdict.checked > 0


def test_size_lemma_base_instance():
    # the only instances at r=3 have A = B = [3] and |C| >= 2, and each
    # contains a violating triple through 1 or 3
    a = b = _mask([1, 2, 3])
    for c_colors in ([1, 2], [2, 3], [1, 3], [1, 2, 3]):
        assert sets_admit_violating_triple(a, b, _mask(c_colors))


def test_triangle_classification_holds_small():
    for r in (3, 4, 5):
        assert check_triangle_classification(r).holds


def test_triangle_classification_unique_survivor_even():
    # r = 4: the only violating-free triple of size-3 sets is three copies
    # of {2, 3, 4}
    r, m = 4, 3
    size_m = [mask for mask in range(1 << r) if bin(mask).count("1") == m]
    survivors = [
        (a, b, c)
        for a in size_m
        for b in size_m
        for c in size_m
        if not sets_admit_violating_triple(a, b, c)
    ]
    assert survivors == [(_mask([2, 3, 4]),) * 3]


def test_triangle_classification_odd_branch():
    # r = 3: {2,3}, {2,3}, {1,2} is violating-free and matches the
    # two-high-one-wide shape
    a = b = _mask([2, 3])
    c = _mask([1, 2])
    assert not sets_admit_violating_triple(a, b, c)
    assert classify_triple_shape(3, a, b, c) == "odd-high"
    assert classify_triple_shape(3, _mask([1, 2]), _mask([1, 2]), _mask([1, 2])) == "odd-low"


def test_classification_applies_to_metric_rgraph_triangles():
    # every metric color-set triangle whose three multiplicities equal m(r)
    # matches one of the classified shapes
    r = 3
    m = m_of(r)
    for graph in enumerate_metric_rgraphs(r, 3):
        masks = graph.masks
        if all(mask.bit_count() == m for mask in masks):
            assert classify_triple_shape(r, *masks) is not None


def test_importantcor_holds_and_example():
    for r in (3, 4):
        assert check_importantcor(r).holds
    # legs {1,2,3}, {1,2,3} force the third set inside {2}
    legs = _mask([1, 2, 3])
    for third in range(1, 8):
        if masks_triangle_ok(legs, legs, third):
            assert third == _mask([2])
    # product at the boundary: 3 * 1 = m(3)^2 - 1
    assert 3 * 1 == m_of(3) ** 2 - 1


def test_m_squared_inequality():
    for r in range(3, 65):
        assert m_of(r) ** 2 - 1 >= r


def _structured_rgraph(r, t, parts=None):
    """The color-set graph whose pairs carry the maximal metric ranges."""
    m = m_of(r)
    order = pair_order(t)
    if r % 2 == 0:
        colors = [list(range(m - 1, r + 1))] * len(order)
        return ColorSetGraph.from_color_lists(r, t, colors)
    label = {v: i for i, part in enumerate(parts) for v in part}
    colors = []
    for x, y in order:
        if label[x] == label[y]:
            colors.append(list(range(m - 1, r)))
        else:
            colors.append(list(range(m, r + 1)))
    return ColorSetGraph.from_color_lists(r, t, colors)


def test_structured_rgraphs_have_uniform_weight():
    for r, t in ((4, 3), (4, 4), (6, 3)):
        profile = weight_profile(_structured_rgraph(r, t))
        m = m_of(r)
        assert set(profile.f_values) == {m}
        assert profile.weight == m ** len(pair_order(t))
    for parts in set_partitions(3):
        profile = weight_profile(_structured_rgraph(3, 3, parts))
        assert set(profile.f_values) == {2}
        assert profile.weight == 8


def test_check_caps():
    with pytest.raises(CapacityError):
        check_size_lemma(9)
    with pytest.raises(CapacityError):
        check_triangle_classification(9)
    with pytest.raises(CapacityError):
        check_importantcor(7)
