"""Weave validation, builders, triangulations, moves, mutation graphs."""
import random

import pytest

from braidweave.braid import PatternMismatch, make_word, parse_braid
from braidweave.weave import (
    InvalidLabels,
    Weave,
    WeaveEvent,
    apply_move,
    canonicalize,
    export_dot,
    fan_triangulation,
    find_doubled_letter,
    mutate,
    mutation_graph,
    parse_weave,
    random_triangulation,
    swap_adjacent_events,
    triangulation_for,
    validate,
    weave_from_opening_order,
    weave_from_triangulation,
)
from braidweave.weave import _tree_shape


def test_validate_examples():
    w = Weave(2, make_word(2, [1, 1]), (WeaveEvent("three", 0),))
    assert validate(w) == [(1, 1), (1,)]
    assert w.is_demazure()
    w2 = Weave(3, make_word(3, [1, 2, 1]), (WeaveEvent("six", 0),))
    assert validate(w2) == [(1, 2, 1), (2, 1, 2)]
    with pytest.raises(PatternMismatch):
        validate(Weave(2, make_word(2, [1, 1]), (WeaveEvent("three", 1),)))


def test_weave_file_round_trip():
    w = Weave(
        3,
        make_word(3, [1, 1, 2, 2]),
        (WeaveEvent("cup", 0), WeaveEvent("three", 0)),
    )
    assert validate(w) == [(1, 1, 2, 2), (2, 2), (2,)]
    again = parse_weave(w.render())
    assert again.top.letters == w.top.letters and again.events == w.events


def test_opening_order_left_comb():
    beta = parse_braid("B2: 1 1 1")
    w = weave_from_opening_order(beta, (1, 2, 3))
    assert _tree_shape(w) == (
        "node",
        ("node", ("node", ("leaf", 0), ("leaf", 1)), ("leaf", 2)),
        ("leaf", 3),
    )


def test_opening_order_3strand_slices():
    beta = parse_braid("B3: 1 2 1 2")
    w = weave_from_opening_order(beta, (2, 1, 3, 4))
    slices = validate(w)
    assert slices[0] == (1, 2, 1, 2, 1, 2, 1)
    assert slices[-1] == (1, 2, 1)
    assert (1, 1, 2, 1, 2, 1) in slices  # opening the second crossing first
    assert w.counts()["three"] == 4
    assert w.opened_crossings == (2, 1, 3, 4)


def test_empty_word_constant_weave():
    beta = parse_braid("", 3)
    w = weave_from_opening_order(beta, ())
    assert w.events == () and w.bottom_letters() == (1, 2, 1)


def test_demazure_invariance_checked():
    # a cup breaks the Demazure flag but still validates as simplifying
    w = Weave(2, make_word(2, [1, 1]), (WeaveEvent("cup", 0),))
    assert validate(w) == [(1, 1), ()]
    assert w.is_simplifying() and not w.is_demazure()
    # caps insert a doubled letter and drop the simplifying flag
    wc = Weave(2, make_word(2, [1]), (WeaveEvent("cap", 0, 1),))
    assert validate(wc) == [(1,), (1, 1, 1)]
    assert not wc.is_simplifying()


def test_trivalent_count_accounting():
    rng = random.Random(0)
    for _ in range(10):
        n = rng.choice([2, 3])
        l = rng.randrange(1, 5)
        beta = make_word(n, [rng.randrange(1, n) for _ in range(l)])
        order = list(range(1, l + 1))
        rng.shuffle(order)
        w = weave_from_opening_order(beta, order)
        assert w.counts()["three"] == l
        slices = w.slices()
        assert len(slices[0]) - len(slices[-1]) == l


def test_find_doubled_letter():
    assert find_doubled_letter((1, 2, 1), 3) is None  # reduced
    path, word, p = find_doubled_letter((1, 2, 1, 2), 3)
    assert word[p] == word[p + 1]


def test_fan_triangulation_right_comb():
    beta = parse_braid("B2: 1 1 1")
    tri = fan_triangulation(beta)
    assert tri.total_defect() == 3
    w = weave_from_triangulation(tri, beta)
    assert _tree_shape(w) == (
        "node",
        ("leaf", 0),
        ("node", ("leaf", 1), ("node", ("leaf", 2), ("leaf", 3))),
    )


def test_random_triangulations_defect_and_weave():
    rng = random.Random(1)
    done = 0
    while done < 100:
        n = rng.choice([2, 3])
        l = rng.randrange(0, 6 if n == 2 else 5)
        beta = make_word(n, [1 if n == 2 else rng.randrange(1, 3) for _ in range(l)])
        tri = random_triangulation(beta, rng)
        assert tri.total_defect() == len(beta)
        w = weave_from_triangulation(tri, beta)
        assert w.is_demazure()
        assert w.counts()["three"] == len(beta)
        done += 1


def test_bad_triangle_labels():
    from braidweave.braid import compose, transposition
    from braidweave.weave import check_demazure_triangle

    s1, s2 = transposition(3, 1), transposition(3, 2)
    assert not check_demazure_triangle(3, s1, s2, s1)
    assert check_demazure_triangle(3, s1, s2, compose(s1, s2))
    beta = parse_braid("B2: 1 1")
    with pytest.raises(InvalidLabels):
        triangulation_for(beta, {(0, 2), (1, 3)})  # crossing diagonals


def test_apply_move_cancel_pair_and_flip():
    from braidweave.chart import propagate_down, rational_map

    top = parse_braid("B3: 1 2 1 2")
    w = Weave(3, top, (WeaveEvent("six", 1), WeaveEvent("three", 0)))
    w2 = apply_move(w, "insert_cancel", 0, pos=0, kind="six")
    assert len(w2.events) == 4
    assert rational_map(w2) == rational_map(w)
    w3 = apply_move(w2, "remove_cancel", 0)
    assert w3.events == w.events
    # path flip between the two standard event paths
    wa = Weave(3, top, (WeaveEvent("six", 0), WeaveEvent("three", 2), WeaveEvent("six", 0)))
    wb = apply_move(wa, "flip_1212", 0, pos=0)
    assert [e.render() for e in wb.events] == ["six 1", "three 0"]
    assert rational_map(wa) == rational_map(wb)
    assert apply_move(wb, "flip_1212", 0, pos=0).events == wa.events


def test_apply_move_zamolodchikov():
    from braidweave.chart import rational_map

    top = parse_braid("B4: 1 2 3 1 2 1")
    left = Weave(
        4,
        top,
        tuple(
            WeaveEvent(k, p)
            for k, p in [("four", 2), ("six", 0), ("six", 2), ("four", 1), ("four", 4), ("six", 2), ("six", 0)]
        ),
    )
    right = apply_move(left, "flip_zam", 0, pos=0)
    assert rational_map(left) == rational_map(right)
    assert apply_move(right, "flip_zam", 0, pos=0).events == left.events


def test_swap_adjacent_events():
    top = parse_braid("B2: 1 1 1 1")
    w = Weave(2, top, (WeaveEvent("three", 2), WeaveEvent("three", 0)))
    s = swap_adjacent_events(w, 0)
    assert [e.render() for e in s.events] == ["three 0", "three 1"]
    assert canonicalize(w).events == s.events


def test_mutate_involution_and_mismatch():
    beta = parse_braid("B2: 1 1 1")
    left = weave_from_opening_order(beta, (1, 2, 3))
    k1, k2 = [k for k, e in enumerate(left.events) if e.kind == "three"][:2]
    m = mutate(left, k1, k2)
    assert _tree_shape(m) != _tree_shape(left)
    back = mutate(m, k1, k2)
    assert canonicalize(back).events == canonicalize(left).events
    w = weave_from_opening_order(parse_braid("B2: 1 1 1 1"), (1, 3, 2, 4))
    threes = [k for k, e in enumerate(w.events) if e.kind == "three"]
    with pytest.raises(PatternMismatch):
        mutate(w, threes[0], threes[1])  # merges of (1,2) and (3,4) share no edge


def test_missing_crossing_one_vertex():
    from braidweave.weave import missing_crossing

    # the two standard paths below a braid-relation window drop one letter
    # each and, being equivalent, have the same missing crossing
    top = parse_braid("B3: 1 2 1 2")
    wa = Weave(3, top, (WeaveEvent("six", 0), WeaveEvent("three", 2), WeaveEvent("six", 0)))
    wb = Weave(3, top, (WeaveEvent("six", 1), WeaveEvent("three", 0)))
    assert missing_crossing(wa) == missing_crossing(wb) == 1
    with pytest.raises(PatternMismatch):
        missing_crossing(weave_from_opening_order(parse_braid("B2: 1 1"), (1, 2)))


def test_mutation_graph_pentagon():
    g = mutation_graph(parse_braid("B2: 1 1 1"))
    assert len(g.vertices) == 5 and len(g.edges) == 5
    assert g.proxy == "binary-tree shape"


def test_mutation_graph_catalan_14():
    g = mutation_graph(parse_braid("B2: 1 1 1 1"))
    assert len(g.vertices) == 14
    assert len(g.edges) == 21  # 1-skeleton of the 3-dimensional associahedron


def test_mutation_graph_budget():
    from braidweave.weave import BudgetExceeded

    with pytest.raises(BudgetExceeded):
        mutation_graph(make_word(2, [1] * 9))


def test_export_dot():
    w = Weave(2, make_word(2, [1, 1]), (WeaveEvent("three", 0),))
    dot = export_dot(w)
    assert dot.startswith("graph weave {") and 'label="three@0"' in dot
    g = mutation_graph(parse_braid("B2: 1 1 1"))
    gdot = export_dot(g)
    assert gdot.count(" -- ") == 5
    empty = Weave(2, make_word(2, [1]), ())
    assert export_dot(empty).startswith("graph weave {")
