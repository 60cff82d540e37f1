from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fpsdae.errors import ParseError, ValidationError
from fpsdae.expr import BinOp, Const, Problem, YVar, evaluate, parse, to_source


def test_prime_and_index_forms_agree():
    assert parse("y''[1]", 2, 2) == parse("y(2)[1]", 2, 2)
    assert parse("y'", 1) == YVar(1, 0)
    assert parse("3/4") == Const(Fraction(3, 4))


@pytest.mark.parametrize(
    "src, n, d, col",
    [
        ("y(3)", 2, 1, 1),
        ("x + y[2]", 1, 2, 5),
        ("x + y", 1, 2, 5),
        ("x + * y", 1, 1, 5),
        ("x ^ y", 1, 1, 5),
        ("foo(x)", 1, 1, 1),
        ("x $ 1", 1, 1, 3),
    ],
)
def test_parse_errors_carry_positions(src, n, d, col):
    with pytest.raises(ParseError) as info:
        parse(src, n, d)
    assert info.value.line == 1
    assert info.value.column == col


def test_line_numbers_on_multiline_input():
    with pytest.raises(ParseError) as info:
        parse("x +\n  y(5)", 1, 1)
    assert (info.value.line, info.value.column) == (2, 3)


def test_rational_mode_rejects_transcendentals_and_variable_division():
    with pytest.raises(ValidationError):
        Problem.from_strings(["exp(x) - y"], 0)
    with pytest.raises(ValidationError):
        Problem.from_strings(["1/y"], 0)
    assert Problem.from_strings(["y/2 - x"], 0).r == 1


leaves = st.one_of(
    st.fractions(min_value=-9, max_value=9, max_denominator=5).map(Const),
    st.just(parse("x")),
    st.builds(YVar, st.integers(0, 2), st.integers(0, 1)),
)


def _tree(children):
    return st.one_of(
        st.builds(BinOp, st.sampled_from("+-*"), children, children),
    )


exprs = st.recursive(leaves, _tree, max_leaves=12)


@given(exprs)
def test_print_parse_round_trip(e):
    assert parse(to_source(e), 2, 2) == e


@given(exprs, st.fractions(-3, 3, max_denominator=4), st.lists(st.fractions(-3, 3, max_denominator=4), min_size=6, max_size=6))
def test_round_trip_preserves_values(e, x, vals):
    ys = [[vals[2 * j], vals[2 * j + 1]] for j in range(3)]
    assert evaluate(parse(to_source(e), 2, 2), x, ys) == evaluate(e, x, ys)
