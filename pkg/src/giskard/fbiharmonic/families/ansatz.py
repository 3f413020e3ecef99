"""Exact reduction of the power ansatz to a quadratic in the exponent.

Substituting ``beta = S^t`` into a reduced equation turns every term into a
polynomial in ``t`` times one power of ``S``. The polynomial part, stripped
of the factors of ``t`` every term shares, is a quadratic whose roots are the
admissible exponents.
"""

from enum import StrEnum
from fractions import Fraction
from numbers import Rational

import logfire_api as logfire
import sympy as sp
from pydantic import BaseModel, ConfigDict

# base of the ansatz and its exponent; S is positive on every family's domain
S = sp.Symbol("S", positive=True)
t = sp.Symbol("t")


class AnsatzEquation(StrEnum):
    """``pq1``: ``beta = z^t`` in the hyperplane equation with ``k^2 = 1/(m+1)``.
    ``pc1``: ``beta = (sum x_i + z + C)^t`` in the product equation."""

    PQ1 = "pq1"
    PC1 = "pc1"


def _fraction(value: sp.Rational) -> Fraction:
    return Fraction(int(value.p), int(value.q))


def _rational(value: Fraction) -> sp.Rational:
    return sp.Rational(value.numerator, value.denominator)


def polynomial_text(expr: sp.Expr) -> str:
    """Compact form of a polynomial in ``t``: ``13t^2+10t-3``."""
    return sp.sstr(sp.expand(expr)).replace("**", "^").replace("*", "").replace(" ", "")


class AnsatzReduction(BaseModel):
    """Exact outcome of :func:`ansatz_reduce`.

    Attributes
    ----------
    derived : sympy.Poly
        The quadratic in ``t`` over ``QQ`` as it comes out of the substitution.
    quadratic : sympy.Poly
        ``derived / scale``, normalized to the leading coefficient ``m^2 + 4``.
    scale : Fraction
        ``derived = scale * quadratic``.
    roots : list[Fraction]
        Roots in ascending order.
    power : tuple[Fraction, Fraction]
        ``(q, r)`` for the common power ``S^(q t + r)`` of the summed terms.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    equation: AnsatzEquation
    m: Fraction
    derived: sp.Poly
    quadratic: sp.Poly
    scale: Fraction
    roots: list[Fraction]
    power: tuple[Fraction, Fraction]

    @property
    def coefficients(self) -> tuple[Fraction, Fraction, Fraction]:
        """``(a, b, c)`` of ``a t^2 + b t + c``."""
        a, b, c = (_fraction(k) for k in self.quadratic.all_coeffs())
        return a, b, c

    @property
    def power_text(self) -> str:
        q, r = self.power
        return polynomial_text(_rational(q) * t + _rational(r))

    def __str__(self) -> str:
        roots = ", ".join(f"t={root}" for root in self.roots)
        return f"{polynomial_text(self.quadratic.as_expr())}=0; {roots}"


def _check_m(m: Rational | int) -> Fraction:
    m = Fraction(m)
    if m < 2:
        raise ValueError(f"The ansatz needs m >= 2, got m={m}")
    return m


def _derivatives(order: int) -> list[sp.Expr]:
    # d/dS of every coordinate's base is 1, so every partial is a plain S-derivative
    beta = S**t
    return [beta] + [sp.diff(beta, S, k) for k in range(1, order + 1)]


def _pq1(m: sp.Rational) -> sp.Expr:
    k2 = 1 / (m + 1)
    b, b1, b2, b3 = _derivatives(3)
    return (
        m * (1 + k2) * b1**4
        + ((m**2 - 2 * m + 2) * (1 - k2) - 2 * m) / 2 * b * b1**2 * b2
        - (m - 2) * (1 - k2) / 2 * b**2 * b1 * b3
        - (m - 2) * (m - 4) * (1 - k2) / 4 * b**2 * b2**2
    )


def _pc1(m: sp.Rational) -> sp.Expr:
    b, b1, b2, b3 = _derivatives(3)
    # beta_i = beta_z = b1, beta_ii = beta_iz = beta_zz = b2, beta_iiz = b3
    return (
        2 * m * b * b2
        - (m**2 + 2 * m) * b1**2
        + m * (m - 2) / 2 * b**2 * b3 / b1
        - m * (m - 2) ** 2 / 2 * b * b2
        + m * (m - 2) * (m - 4) / 4 * b**2 * b2**2 / b1**2
    )


def _split_power(total: sp.Expr) -> tuple[sp.Expr, sp.Expr]:
    """Write ``total`` as ``coefficient(t) * S**power``.

    Raises
    ------
    ArithmeticError
        When the terms carry different powers of ``S``.
    """
    by_power: dict[sp.Expr, sp.Expr] = {}
    for term in sp.Add.make_args(sp.expand(total, power_exp=False)):
        coefficient, factor = term.as_independent(S, as_Add=False)
        factor = sp.powsimp(factor, force=True)
        power = sp.Integer(0) if factor == 1 else factor.as_base_exp()[1]
        by_power[power] = by_power.get(power, sp.Integer(0)) + coefficient
    powers = {p: c for p, c in by_power.items() if sp.cancel(c) != 0}
    if len(powers) != 1:
        raise ArithmeticError(f"Terms carry different powers of the base: {sorted(map(str, powers))}")
    ((power, coefficient),) = powers.items()
    return sp.cancel(coefficient), sp.expand(power)


@logfire.instrument("families.ansatz_reduce")
def ansatz_reduce(equation: AnsatzEquation | str, m: Rational | int) -> AnsatzReduction:
    """Substitute the power ansatz into a reduced equation, exactly.

    Parameters
    ----------
    equation : AnsatzEquation | str
        ``pq1`` or ``pc1``.
    m : Rational | int
        Hypersurface dimension; rational values are accepted.

    Returns
    -------
    AnsatzReduction
        The quadratic normalized to ``(m^2+4) t^2 + (2m+4) t + 2m - m^2`` and
        its rational roots ``-1`` and ``(m^2-2m)/(m^2+4)``.

    Raises
    ------
    ValueError
        If ``m < 2``.
    """
    equation = AnsatzEquation(equation)
    m = _check_m(m)
    m_q = _rational(m)
    match equation:
        case AnsatzEquation.PQ1:
            coefficient, power = _split_power(_pq1(m_q))
            # beta * beta'' and beta'^2 each carry a factor t
            derived = sp.Poly(coefficient, t, domain=sp.QQ).exquo(sp.Poly(t**2, t, domain=sp.QQ))
        case AnsatzEquation.PC1:
            coefficient, power = _split_power(_pc1(m_q))
            derived = sp.Poly(coefficient, t, domain=sp.QQ)
    if derived.degree() != 2:
        raise ArithmeticError(f"Expected a quadratic in t, got {derived.as_expr()}")

    scale = derived.LC() / (m_q**2 + 4)
    quadratic = sp.Poly(derived.as_expr() / scale, t, domain=sp.QQ)
    roots = sp.roots(quadratic, filter="Q")
    if sum(roots.values()) != 2:
        raise ArithmeticError(f"{quadratic.as_expr()} has irrational roots")
    return AnsatzReduction(
        equation=equation,
        m=m,
        derived=derived,
        quadratic=quadratic,
        scale=_fraction(scale),
        roots=sorted(_fraction(root) for root in roots),
        power=(_fraction(power.coeff(t, 1)), _fraction(power.coeff(t, 0))),
    )


def critical_exponent(m: Rational | int) -> Fraction:
    """``(m^2 - 2m) / (m^2 + 4)``, the nontrivial root of both reductions."""
    m = Fraction(m)
    return (m * m - 2 * m) / (m * m + 4)
