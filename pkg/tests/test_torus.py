"""Torus actions: weights, homogeneity, free subtori, admissibility."""
import random

from braidweave.braid import (
    append_half_twist,
    identity_perm,
    longest_perm,
    make_word,
    parse_braid,
    transposition,
)
from braidweave.ring import MatrixExpr, RationalExpr, const, poly, var_id
from braidweave.torus import (
    action_weights,
    basis_difference,
    check_homogeneous,
    free_subtorus,
    is_admissible,
    poly_weight,
    zero_weight,
)
from braidweave.variety import variety_equations


def test_hopf_weights_alternate():
    w = parse_braid("B2: 1 1 1 1")
    wa = action_weights(w, "left")
    weights = [wa[v] for v in w.variables]
    assert weights == [(-1, 1), (1, -1), (-1, 1), (1, -1)]


def test_empty_word_weights():
    assert action_weights(parse_braid("", 3), "left") == {}


def test_two_letter_weights():
    w = parse_braid("B3: 1 2")
    wa = action_weights(w, "left")
    assert wa[w.variables[0]] == basis_difference(3, 2, 1)
    # second letter uses the permuted convention with w2 = s1
    assert wa[w.variables[1]] == basis_difference(3, 3, 1)


def test_check_homogeneous_examples():
    w = parse_braid("B2: 1 1 1 1")
    wa = action_weights(w, "left")
    z1, z2 = (RationalExpr.variable(v) for v in w.variables[:2])
    assert check_homogeneous(z1 * z2, wa, 2) == zero_weight(2)
    assert check_homogeneous(const(1) + z1 * z2, wa, 2) == zero_weight(2)
    assert check_homogeneous(z1 + z2, wa, 2) is None


def test_variety_equations_homogeneous():
    rng = random.Random(0)
    for _ in range(30):
        n = rng.randrange(2, 5)
        l = rng.randrange(1, 6)
        word = make_word(n, [rng.randrange(1, n) for _ in range(l)])
        wa = action_weights(word, "left")
        perm = longest_perm(n) if rng.random() < 0.5 else identity_perm(n)
        for eq in variety_equations(word, perm).equations:
            assert poly_weight(eq, wa, n) is not None


def test_free_subtorus():
    assert free_subtorus(parse_braid("B2: 1 1 1")) == []
    assert free_subtorus(parse_braid("B2: 1 1 1 1")) == [(1, 2)]
    assert free_subtorus(parse_braid("", 3)) == [(1, 2), (1, 3)]


def test_admissible_identity_and_unitriangular():
    for n in (2, 3):
        for w in (identity_perm(n), longest_perm(n)):
            assert is_admissible(MatrixExpr.identity(n), w, {})
    # Id + z0^-1 E_{i,i+1} is admissible when z0 has weight e_{w(i+1)} - e_{w(i)}
    n, i = 3, 1
    for w in (identity_perm(n), transposition(n, 2), longest_perm(n)):
        z0 = poly("z0")
        m = MatrixExpr.identity(n)
        m.rows[i - 1][i] = z0.inverse()
        m = MatrixExpr(m.rows)
        wa = {var_id("z0"): basis_difference(n, w[i] + 1, w[i - 1] + 1)}
        assert is_admissible(m, w, wa)
        # and inadmissible with the zero weight on z0
        wa0 = {var_id("z0"): zero_weight(n)}
        assert not is_admissible(m, w, wa0)


def test_hopf_origin_is_fixed_point():
    hopf = parse_braid("B2: 1 1 1 1")
    pres = variety_equations(hopf, identity_perm(2))
    origin = {v: 0 for v in hopf.variables}
    assert all(eq.eval_int(origin, 97) == 0 for eq in pres.equations)
    # scaling fixes the origin for every weight, so it is a torus fixed point
    wa = action_weights(hopf, "left")
    assert all(wa[v] != zero_weight(2) for v in hopf.variables)


def test_propagated_values_equivariant():
    from braidweave.chart import propagate_down
    from braidweave.weave import weave_from_opening_order

    cases = [("B3: 1 2 1", (3, 1, 2)), ("B3: 1 2 1 2", (1, 3, 2, 4)), ("B2: 1 1 1", (2, 3, 1))]
    for text, order in cases:
        beta = parse_braid(text)
        weave = weave_from_opening_order(beta, order)
        prop = propagate_down(weave)
        n = beta.n
        wa_top = action_weights(weave.top, "right")
        wa_bot = action_weights(prop.bottom, "right")
        for k, value in enumerate(prop.values):
            assert check_homogeneous(value, wa_top, n) == wa_bot[prop.bottom.variables[k]]
        for expr in prop.inverted:
            assert check_homogeneous(expr, wa_top, n) is not None


def test_chart_coordinates_homogeneous():
    from braidweave.chart import chart_parametrize
    from braidweave.weave import weave_from_opening_order

    cases = [("B3: 1 2 1", (3, 1, 2)), ("B2: 1 1 1", (2, 1, 3)), ("B3: 1 2 1 2", (2, 4, 1, 3))]
    for text, order in cases:
        beta = parse_braid(text)
        n = beta.n
        weave = weave_from_opening_order(beta, order)
        chart = chart_parametrize(weave)
        wa = action_weights(chart.top, "right")
        param_weights = {}
        for r, expr in zip(order, chart.inverted):
            wt = check_homogeneous(expr, wa, n)
            assert wt is not None
            param_weights[var_id(f"s{r}")] = wt
        for v in chart.top.variables:
            assert check_homogeneous(chart.subs[v], param_weights, n) == wa[v]
