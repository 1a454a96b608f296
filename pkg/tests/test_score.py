from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cftspan.score import ScoreParams, collection_score, compare, is_full, path_score

import score_props

colors = st.frozensets(st.integers(0, 5), max_size=4)
params = st.builds(ScoreParams, st.sampled_from([2, 3, 5, 8, 64]),
                   st.sampled_from([Fraction(1), Fraction(1, 2), Fraction(1, 4), Fraction(5, 9)]),
                   st.integers(1, 3))
PROPS = settings(max_examples=400, deadline=None)


def test_path_score_examples():
    p = ScoreParams(2, Fraction(1, 2), 3)
    a, b, c = 0, 1, 2
    assert path_score(p, {a, b}, ()) == Fraction(1, 72)
    assert path_score(p, {a, b}, {a}) == Fraction(1, 12)
    assert path_score(p, {a, b}, {a, c}) == 0


def test_compare_examples():
    assert not compare(Fraction(1, 2), ">", Fraction(1, 2))
    assert compare(Fraction(1, 72) + Fraction(71, 72), "=", 1)
    three = collection_score(ScoreParams(2, 1, 1), [{0}, {1}, {2}], ())
    assert compare(three, "==", Fraction(3, 2))
    assert compare(1, "<=", Fraction(3, 2)) and compare(2, "≥", 2)
    with pytest.raises(TypeError):
        compare(0.5, "<", 1)


def test_fullness_is_strict():
    assert not is_full(Fraction(1, 2))
    assert is_full(Fraction(1, 2) + Fraction(1, 10**30))


def test_params_validation():
    with pytest.raises(ValueError):
        ScoreParams(1, 1, 1)
    with pytest.raises(ValueError):
        ScoreParams(2, Fraction(3, 2), 1)
    with pytest.raises(ValueError):
        ScoreParams(2, 1, 0)


def test_huge_alpha_stays_exact():
    p = ScoreParams(16 ** 480, Fraction(1, 16 ** 4), 2)
    s = path_score(p, {0, 1, 2}, {0})
    assert s == Fraction(1, 16 ** 4 * (2 * 16 ** 480) ** 2)
    assert s > 0


@PROPS
@given(params, st.lists(colors, max_size=8), st.lists(colors, max_size=8), colors)
def test_union_linearity(p, A, B, J):
    assert collection_score(p, A + B, J) == collection_score(p, A, J) + collection_score(p, B, J)


@PROPS
@given(params, st.lists(colors, max_size=8), st.integers(0, 5), colors)
def test_concatenation(p, cs, c, J):
    score_props.check_concat(p, cs, c, J)


@PROPS
@given(params, st.lists(st.integers(0, 3), min_size=8, max_size=8),
       st.lists(st.lists(st.integers(2, 7), max_size=3), max_size=6), colors)
def test_concatenation_vertex_colors(p, vcolors, tails, J):
    walks = [[0] + t for t in tails]
    score_props.check_concat_vertex(p, vcolors, walks, 1, J)


@PROPS
@given(params, st.lists(colors, max_size=8), colors, colors)
def test_score_transition(p, cs, X, Y):
    score_props.check_transition(p, cs, X, Y)


@PROPS
@given(params, st.lists(colors, max_size=8))
def test_double_counting(p, cs):
    i = max((len(c) for c in cs), default=0)
    score_props.check_double_counting(p, cs, range(6), i)


@settings(max_examples=300, deadline=None)
@given(st.randoms(use_true_random=False))
def test_linkful_map_bound(rng):
    score_props.check_linkful(*score_props.draw_linkful(rng))
