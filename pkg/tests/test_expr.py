from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from giskard.fbiharmonic import Bindings, evaluate, parse
from giskard.fbiharmonic.errors import (
    DomainError,
    ExpressionSyntaxError,
    UnboundIdentifierError,
    UnknownFunctionError,
)
from giskard.fbiharmonic.expr import (
    Constant,
    Parameter,
    Power,
    Variable,
    free_identifiers,
    is_constant,
    substitute,
)


def test_precedence_and_associativity():
    b = Bindings.at_point([2.0, 3.0])
    assert evaluate(parse("1+x1*z"), b) == pytest.approx(7.0)
    assert evaluate(parse("x1-z-1"), b) == pytest.approx(-2.0)
    assert evaluate(parse("z/x1/2"), b) == pytest.approx(0.75)
    assert evaluate(parse("-x1^2"), b) == pytest.approx(-4.0)
    assert evaluate(parse("2*-z"), b) == pytest.approx(-6.0)


def test_exponents_are_exact_rationals():
    e = parse("z^(3/13)")
    assert isinstance(e, Power)
    assert e.exponent == Fraction(3, 13)
    assert parse("z^(-1/2)").exponent == Fraction(-1, 2)
    assert parse("z^2").exponent == Fraction(2)


def test_integer_literals_are_exact():
    assert parse("3").value == Fraction(3)
    assert isinstance(parse("0.5").value, float)


def test_identifiers_split_into_variables_and_parameters():
    e = parse("c*(c1*z+c2)^2/c1 + x1")
    variables, parameters = free_identifiers(e)
    assert variables == {"z", "x1"}
    assert parameters == {"c", "c1", "c2"}
    assert isinstance(parse("x9"), Variable)
    assert isinstance(parse("R"), Parameter)


def test_parameters_bind_late():
    e = parse("R*cos(x1/R)")
    b = Bindings.at_point([0.0, 0.0], {"R": 2.0})
    assert evaluate(e, b) == pytest.approx(2.0)
    assert evaluate(e, b.with_parameters(R=3.0)) == pytest.approx(3.0)


def test_last_coordinate_is_also_named_by_its_index():
    b = Bindings.at_point([1.0, 2.0, 5.0])
    assert evaluate(parse("x3"), b) == evaluate(parse("z"), b)


def test_unbound_identifier():
    with pytest.raises(UnboundIdentifierError) as err:
        evaluate(parse("k*z"), Bindings.at_point([1.0]))
    assert err.value.name == "k"


@pytest.mark.parametrize(
    "text, position",
    [
        ("1+", 2),
        ("(x1+z", 5),
        ("x1 $ z", 3),
        ("z^(1/0)", 6),
        ("z^x1", 2),
        ("", 0),
        ("exp", 0),
    ],
)
def test_syntax_errors_point_at_the_offending_token(text, position):
    with pytest.raises(ExpressionSyntaxError) as err:
        parse(text)
    assert err.value.position == position
    assert err.value.text == text


def test_unknown_function():
    with pytest.raises(UnknownFunctionError):
        parse("tanh(z)")


def test_domain_error_names_the_innermost_subexpression():
    with pytest.raises(DomainError) as err:
        evaluate(parse("1+ln(x1-z)"), Bindings.at_point([1.0, 2.0]))
    assert err.value.expression == "ln((x1 - z))"
    assert err.value.value == pytest.approx(-1.0)


def test_non_integer_power_of_negative_base():
    with pytest.raises(DomainError):
        evaluate(parse("z^(1/3)"), Bindings.at_point([-1.0]))
    assert evaluate(parse("z^(-1)"), Bindings.at_point([-2.0])) == pytest.approx(-0.5)


def test_substitute_and_constants():
    e = substitute(parse("z^2+x1"), {"z": Constant(value=Fraction(3))})
    assert evaluate(e, Bindings.at_point([1.0, 0.0])) == pytest.approx(10.0)
    assert is_constant(parse("c*2"))
    assert not is_constant(e)


def test_trees_are_immutable():
    e = parse("x1+z")
    with pytest.raises(ValueError):
        e.op = "-"


leaves = st.sampled_from(["x1", "x2", "z", "c", "2", "0.5", "(3/7)"])


@st.composite
def expressions(draw, depth=3):
    if depth == 0 or draw(st.booleans()):
        return draw(leaves)
    kind = draw(st.sampled_from(["binary", "call", "power", "neg"]))
    child = draw(expressions(depth=depth - 1))
    match kind:
        case "binary":
            op = draw(st.sampled_from(["+", "-", "*"]))
            return f"({child}{op}{draw(expressions(depth=depth - 1))})"
        case "call":
            fn = draw(st.sampled_from(["sin", "cos", "atan"]))
            return f"{fn}({child})"
        case "power":
            return f"({child})^{draw(st.sampled_from(['2', '3', '(1/1)']))}"
        case "neg":
            return f"(-{child})"


@settings(max_examples=100, deadline=None)
@given(expressions())
def test_printing_is_a_fixed_point_of_parsing(text):
    b = Bindings.at_point([0.3, -0.7, 1.1], {"c": 1.7})
    e = parse(text)
    printed = str(e)
    assert str(parse(printed)) == printed
    assert evaluate(parse(printed), b) == pytest.approx(evaluate(e, b), rel=1e-12, abs=1e-12)
