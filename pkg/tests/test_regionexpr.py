import math

import pytest
from hypothesis import given, strategies as st

from modloc import causal1d as cz
from modloc.regionexpr import (
    BoostBy,
    Complement,
    Cone,
    Empty,
    Full,
    Join,
    Meet,
    Point,
    RegionSyntaxError,
    Translate,
    Wedge,
    eval_region,
    evaluate,
    parse_region,
    to_text,
)

W = Wedge()

GOLDEN = [
    ("c([0,1])", Cone(((0.0, 1.0),))),
    ("c([0, 1], [2.5, inf])", Cone(((0.0, 1.0), (2.5, math.inf)))),
    ("W", W),
    ("point(-1, .5)", Point(-1.0, 0.5)),
    ("full", Full()),
    ("empty", Empty()),
    ("W'", Complement(W)),
    ("W''", Complement(Complement(W))),
    ("W & full", Meet(W, Full())),
    ("W | empty", Join(W, Empty())),
    ("W + (1, 2e-1)", Translate(W, 1.0, 0.2)),
    ("W + (1,2) + (0,-3)", Translate(Translate(W, 1.0, 2.0), 0.0, -3.0)),
    ("boost(-0.5) W", BoostBy(-0.5, W)),
    ("boost(1) W + (1,2)", BoostBy(1.0, Translate(W, 1.0, 2.0))),
    ("(W | full)'", Complement(Join(W, Full()))),
    ("W & W' | full", Join(Meet(W, Complement(W)), Full())),
    ("W | W' & full", Join(W, Meet(Complement(W), Full()))),
    ("W & full & empty", Meet(Meet(W, Full()), Empty())),
    ("W'+(1,1)", Translate(Complement(W), 1.0, 1.0)),
    ("c([-inf, 0])", Cone(((-math.inf, 0.0),))),
]


@pytest.mark.parametrize("text,ast", GOLDEN)
def test_golden(text, ast):
    assert parse_region(text) == ast
    assert parse_region(to_text(ast)) == ast


@pytest.mark.parametrize("text,line,col,msg", [
    ("c([0,1]) &", 1, 10, "unexpected end of input"),
    ("foo", 1, 1, "unbound literal 'foo'"),
    ("W & zz'", 1, 5, "unbound literal 'zz'"),
    ("c([2,1])", 1, 3, "a > b"),
    ("", 1, 1, "empty expression"),
    ("(W", 1, 2, "expected ')'"),
    ("W @", 1, 3, "unexpected character '@'"),
    ("W &\n  @", 2, 3, "unexpected character"),
    ("W W", 1, 3, "unexpected 'W'"),
    ("point(1)", 1, 8, "expected ','"),
    ("boost(x) W", 1, 7, "expected a number"),
])
def test_syntax_errors(text, line, col, msg):
    with pytest.raises(RegionSyntaxError) as ei:
        parse_region(text)
    assert (ei.value.line, ei.value.col) == (line, col)
    assert msg in str(ei.value)
    assert str(ei.value).startswith(f"line {line}, column {col}:")


def test_evaluation_examples():
    D = cz.spatial_completion([(0.0, 1.0)])
    assert eval_region("c([0,1])'") == cz.causal_complement(D)
    assert eval_region("(c([0,1]) | c([2,3]))''") == eval_region("c([0,1]) | c([2,3])")
    assert eval_region("W & W'") == cz.CausalRegion.point(0, 0)
    assert eval_region("W'") == cz.CausalRegion.left_wedge()
    assert eval_region("boost(0.3) W") == eval_region("W")
    assert eval_region("c([0,1]) + (0, 2)") == cz.spatial_completion([(2.0, 3.0)])
    assert eval_region("full'").is_empty() and eval_region("empty'").is_full()
    assert eval_region("point(0,0) | point(0,2)").cells == cz.region_union(
        cz.CausalRegion.point(0, 0), cz.CausalRegion.point(0, 2)).cells


# -- round trip on random ASTs ----------------------------------------------------

nums = st.floats(-1e6, 1e6, allow_nan=False).map(lambda x: x + 0.0)
intervals = st.tuples(nums, nums).map(lambda t: tuple(sorted(t)))
leaves = st.one_of(
    st.just(W), st.just(Full()), st.just(Empty()),
    st.builds(Point, nums, nums),
    st.lists(intervals, min_size=1, max_size=3).map(lambda l: Cone(tuple(l))),
)
asts = st.recursive(leaves, lambda sub: st.one_of(
    st.builds(Complement, sub),
    st.builds(Meet, sub, sub),
    st.builds(Join, sub, sub),
    st.builds(Translate, sub, nums, nums),
    st.builds(BoostBy, st.floats(-3, 3).map(lambda x: x + 0.0), sub),
), max_leaves=8)


@given(asts)
def test_print_parse_round_trip(ast):
    assert parse_region(to_text(ast)) == ast


@given(st.text(alphabet="cWpointfulemybs()[],'&|+-.0123456789e \n", max_size=40))
def test_fuzz_never_crashes(text):
    try:
        parse_region(text)
    except RegionSyntaxError:
        pass


@given(st.text(max_size=30))
def test_fuzz_arbitrary_text(text):
    try:
        parse_region(text)
    except RegionSyntaxError:
        pass


def test_evaluate_rejects_foreign_objects():
    with pytest.raises(TypeError):
        evaluate("W")
    with pytest.raises(TypeError):
        to_text(42)
