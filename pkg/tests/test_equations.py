import numpy as np
import pytest

from giskard.fbiharmonic import (
    Bindings,
    ConformalSpace,
    ImmersionChart,
    evaluate,
    ode_residual,
    parse,
    pro1_residual,
)
from giskard.fbiharmonic.errors import DomainError, SingularPointError
from giskard.fbiharmonic.families import EquationId, ReducedEquation, ode_terms, ode_value

C = {"c1": 0.7, "c2": 1.3, "c3": 2.1, "c4": 0.4}


@pytest.mark.parametrize("z", [0.1, 0.5, 1.0, 3.0])
def test_inverse_linear_solves_the_second_order_equation(z):
    eq = ReducedEquation(id=EquationId.PQ01)
    assert abs(ode_residual(eq, parse("1/(c1*z+c2)"), [z], C)) < 1e-12


def test_other_factors_do_not_solve_the_second_order_equation():
    eq = ReducedEquation(id=EquationId.PQ01)
    assert abs(ode_residual(eq, parse("(c1*z+c2)^(-2)"), [1.0], C)) > 1e-3


def test_separable_products_solve_the_product_equation():
    rng = np.random.default_rng(3)
    eq = ReducedEquation(id=EquationId.PPC1)
    beta = parse("1/((c1*x1+c2)*(c3*z+c4))")
    for _ in range(100):
        constants = dict(zip(C, rng.uniform(0.2, 3.0, size=4)))
        point = rng.uniform(0.0, 2.0, size=3)
        assert abs(ode_residual(eq, beta, point, constants)) < 1e-12


def test_separable_factors_solve_their_own_equations():
    pair = (parse("1/(c1*x1+c2)"), parse("1/(c3*z+c4)"))
    terms = ode_terms(ReducedEquation(id=EquationId.POP1), pair, [0.3, 0.0, 0.8], C)
    assert len(terms) == 4
    assert abs(sum(terms)) < 1e-12 * max(1.0, sum(abs(t) for t in terms))
    second = ReducedEquation(id=EquationId.POP2, variable="x1")
    assert abs(ode_residual(second, pair[0], [0.3, 0.8], C)) < 1e-12


def test_product_equation_takes_a_pair():
    with pytest.raises(ValueError):
        ode_terms(ReducedEquation(id=EquationId.POP1), parse("z"), [0.1, 0.2, 0.3])
    with pytest.raises(ValueError):
        ode_terms(ReducedEquation(id=EquationId.PQ01), [parse("z"), parse("z")], [1.0])


BETAS = ["exp(z/2)+z^2", "(1+z)^(3/2)", "1/(1+z^2)", "2+sin(z)", "z^(5/7)*(3-z)"]


def test_hyperplane_equation_at_m2_is_proportional_to_the_second_order_equation():
    rng = np.random.default_rng(17)
    betas = [parse(text) for text in BETAS]
    second = ReducedEquation(id=EquationId.PQ01)
    for _ in range(200):
        beta = betas[rng.integers(len(betas))]
        z = float(rng.uniform(0.5, 2.5))
        k2 = float(rng.uniform(0.1, 1.0))
        eq = ReducedEquation(id=EquationId.PQ1, m=2, k2=k2)
        beta_z = evaluate(beta, Bindings.at_point([z], order=1)).derivative((1,))
        expected = -(1 + k2) * beta_z**2 * ode_value(second, beta, [z])
        assert ode_value(eq, beta, [z]) == pytest.approx(expected, rel=1e-10, abs=1e-12)


def test_inverse_power_solves_the_hyperplane_equation_for_any_slope():
    beta = parse("z^(-1)")
    for k2 in (0.2, 0.25, 0.5):
        eq = ReducedEquation(id=EquationId.PQ1, m=3, k2=k2)
        assert abs(ode_residual(eq, beta, [1.7])) < 1e-12


def test_critical_power_needs_the_matching_slope():
    beta = parse("z^(3/13)")
    matched = ReducedEquation.pq1(3, (1.0, 1.0, 1.0))
    assert matched.k2 == pytest.approx(0.25)
    assert abs(ode_residual(matched, beta, [1.0])) < 1e-12
    mismatched = ReducedEquation(id=EquationId.PQ1, m=3, k2=0.2)
    assert abs(ode_value(mismatched, beta, [1.0])) > 1e-3


def test_hyperplane_equation_needs_its_constant():
    with pytest.raises(ValueError):
        ReducedEquation(id=EquationId.PQ1, m=3)
    with pytest.raises(ValueError):
        ReducedEquation(id=EquationId.PPC1, m=3)


@pytest.mark.parametrize("m, t", [(2, "-1"), (3, "(3/13)"), (5, "(15/29)")])
def test_affine_powers_solve_the_product_equation(m, t):
    base = "+".join([f"x{i}" for i in range(1, m + 1)] + ["z", "1"])
    point = np.linspace(0.1, 0.6, m + 1)
    eq = ReducedEquation(id=EquationId.PC1, m=m)
    assert abs(ode_residual(eq, parse(f"({base})^{t}"), point)) < 1e-10


def test_product_equation_is_singular_where_the_vertical_derivative_vanishes():
    eq = ReducedEquation(id=EquationId.PC1, m=2)
    with pytest.raises(SingularPointError):
        ode_residual(eq, parse("1+x1^2+x2^2+z^2"), [0.3, 0.2, 0.0])


def test_factor_must_be_positive():
    with pytest.raises(DomainError):
        ode_residual(ReducedEquation(id=EquationId.PQ01), parse("z-2"), [1.0])


def test_hyperplane_condition_on_the_critical_family():
    space = ConformalSpace.from_text("z^(2/5)", 5, guards=["z"])
    chart = ImmersionChart.hyperplane((1.0, 1.0, 1.0, 1.0, 1.0))
    assert abs(pro1_residual(space, chart, [0.2, 0.1, 0.4, 0.3])) < 1e-8
    shifted = ConformalSpace.from_text("z^(9/20)", 5, guards=["z"])
    assert abs(pro1_residual(shifted, chart, [0.0, 0.0, 0.0, 0.0])) > 1e-3


def test_hyperplane_condition_needs_a_hyperplane():
    chart = ImmersionChart.from_text(["x1", "x2", "x1^2"])
    with pytest.raises(ValueError):
        pro1_residual(ConformalSpace.from_text("z", 3), chart, [0.1, 0.1])
