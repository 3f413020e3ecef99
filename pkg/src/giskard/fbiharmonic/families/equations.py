"""Reduced equations for the conformal factor of a conformally flat space.

The hyperplane and product constructions replace the f-biharmonic system by
a scalar equation for ``beta = sigma``. Each equation is evaluated here as
the list of its additive terms, computed from the jet of ``beta``.
"""

from enum import StrEnum
from fractions import Fraction
from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..errors import DomainError, SingularPointError
from ..expr import Bindings, Expr, ambient_variables, evaluate
from ..geometry import ChartKind, ConformalSpace, ImmersionChart
from ..jets import Jet, jet_elementary
from ..jets.elementary import ABS_THRESHOLD

JET_ORDER = 3


class EquationId(StrEnum):
    PQ1 = "PQ1"
    PQ01 = "pq01"
    PC1 = "pc1"
    PPC1 = "ppc1"
    POP1 = "pOP1"
    POP2 = "pOP2"


class ReducedEquation(BaseModel):
    """One reduced equation with its constants.

    Attributes
    ----------
    id : EquationId
        Which equation.
    m : int
        Hypersurface dimension.
    k2 : float | Fraction | None
        ``k_m^2 = 1 / (1 + sum a_i^2)`` of the hyperplane; required for ``PQ1``.
    variable : str
        Variable of the univariate factor for ``pOP1``/``pOP2``, and of ``beta``
        for ``PQ1``/``pq01``.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    id: EquationId
    m: int = Field(default=2, ge=2, le=9)
    k2: float | Fraction | None = None
    variable: str | None = None

    @model_validator(mode="after")
    def _check_constants(self) -> "ReducedEquation":
        if self.id is EquationId.PQ1 and self.k2 is None:
            raise ValueError("PQ1 needs k2 = 1 / (1 + sum a_i^2)")
        if self.id in (EquationId.PPC1, EquationId.POP1, EquationId.POP2) and self.m != 2:
            raise ValueError(f"{self.id} is a surface equation (m = 2), got m={self.m}")
        return self

    @property
    def argument(self) -> str:
        if self.variable is not None:
            return self.variable
        return "x1" if self.id in (EquationId.POP1, EquationId.POP2) else "z"

    @classmethod
    def pq1(cls, m: int, a: Sequence[float]) -> "ReducedEquation":
        """``PQ1`` for the hyperplane with slopes ``a_1..a_m``."""
        return cls(id=EquationId.PQ1, m=m, k2=1.0 / (1.0 + sum(v * v for v in a)))


def _variable_index(name: str, n: int) -> int:
    names = ambient_variables(n)
    if name in names:
        return names.index(name)
    if name == f"x{n}":
        return n - 1
    raise ValueError(f"Variable `{name}` is not a coordinate of R^{n}")


def _jet_at(e: Expr, point: Sequence[float], parameters: dict[str, float] | None) -> Jet:
    bindings = Bindings.at_point(point, parameters, order=JET_ORDER)
    value = evaluate(e, bindings)
    if isinstance(value, Jet):
        return value
    return Jet.constant(float(value), len(point), JET_ORDER)


class _Partials:
    """Derivatives of a jet addressed by coordinate indices."""

    def __init__(self, jet: Jet):
        self.jet = jet
        self.n = jet.n_vars

    def __call__(self, *indices: int) -> float:
        alpha = [0] * self.n
        for i in indices:
            alpha[i] += 1
        return self.jet.derivative(tuple(alpha))


def _pq1_terms(eq: ReducedEquation, b: _Partials, i: int) -> list[float]:
    m, k2 = eq.m, float(eq.k2)
    beta, d1, d2, d3 = b(), b(i), b(i, i), b(i, i, i)
    return [
        m * (1 + k2) * d1**4,
        ((m * m - 2 * m + 2) * (1 - k2) - 2 * m) / 2 * beta * d1 * d1 * d2,
        -(m - 2) * (1 - k2) / 2 * beta * beta * d1 * d3,
        -(m - 2) * (m - 4) * (1 - k2) / 4 * beta * beta * d2 * d2,
    ]


def _second_order_terms(b: _Partials, i: int) -> list[float]:
    return [b() * b(i, i), -2 * b(i) ** 2]


def _pc1_terms(eq: ReducedEquation, b: _Partials) -> list[float]:
    m = eq.m
    z = m
    beta, bz = b(), b(z)
    if abs(bz) < ABS_THRESHOLD:
        raise SingularPointError("beta_z vanishes", value=bz)
    terms = []
    for i in range(m):
        terms += [beta * b(i, i), -m * b(i) ** 2]
    terms += [m * beta * b(z, z), -2 * m * bz**2]
    for i in range(m):
        terms += [
            (m - 2) * beta * beta * b(i, i, z) / (2 * bz),
            -((m - 2) ** 2) * beta * b(i) * b(i, z) / (2 * bz),
        ]
    for i in range(m):
        terms.append((m - 2) * (m - 4) * beta * beta * b(i, z) ** 2 / (4 * bz * bz))
    return terms


def _ppc1_terms(b: _Partials) -> list[float]:
    beta = b()
    terms = []
    for i in range(2):
        terms += [beta * b(i, i), -2 * b(i) ** 2]
    return terms + [2 * beta * b(2, 2), -4 * b(2) ** 2]


def ode_terms(
    eq: ReducedEquation,
    beta: Expr | Sequence[Expr],
    point: Sequence[float],
    parameters: dict[str, float] | None = None,
) -> list[float]:
    """Additive terms of the equation's left-hand side at ``point``.

    Parameters
    ----------
    eq : ReducedEquation
        The equation.
    beta : Expr | Sequence[Expr]
        The conformal factor; for ``pOP1`` the pair ``(p, q)`` of the product
        ``beta = p(x_i) q(z)``.
    point : Sequence[float]
        Coordinates ``x1.., z``. Univariate equations accept the single
        value of their variable.
    parameters : dict[str, float], optional
        Bindings for the parameters of ``beta``.

    Raises
    ------
    DomainError
        When ``beta`` is not smooth at ``point`` or (``pc1``) ``beta_z`` vanishes.
    """
    point = [float(v) for v in point]
    n = len(point)
    if eq.id is EquationId.POP1:
        if isinstance(beta, (str, bytes)) or len(beta) != 2:
            raise ValueError("pOP1 takes the pair (p, q)")
        p = _Partials(_jet_at(beta[0], point, parameters))
        q = _Partials(_jet_at(beta[1], point, parameters))
        i, z = _variable_index(eq.argument, n), n - 1
        return [
            q() ** 2 * p() * p(i, i),
            -2 * q() ** 2 * p(i) ** 2,
            2 * p() ** 2 * q() * q(z, z),
            -4 * p() ** 2 * q(z) ** 2,
        ]
    if isinstance(beta, (list, tuple)):
        raise ValueError(f"{eq.id} takes a single expression for beta")

    b = _Partials(_jet_at(beta, point, parameters))
    if b() <= 0.0:
        raise DomainError("beta must be positive", value=b(), expression=str(beta))
    match eq.id:
        case EquationId.PQ1:
            return _pq1_terms(eq, b, _variable_index(eq.argument, n))
        case EquationId.PQ01 | EquationId.POP2:
            return _second_order_terms(b, _variable_index(eq.argument, n))
        case EquationId.PC1:
            if n != eq.m + 1:
                raise ValueError(f"pc1 with m={eq.m} needs {eq.m + 1} coordinates, got {n}")
            return _pc1_terms(eq, b)
        case EquationId.PPC1:
            if n != 3:
                raise ValueError(f"ppc1 needs 3 coordinates, got {n}")
            return _ppc1_terms(b)
    raise ValueError(f"Unknown equation {eq.id}")


def ode_value(
    eq: ReducedEquation,
    beta: Expr | Sequence[Expr],
    point: Sequence[float],
    parameters: dict[str, float] | None = None,
) -> float:
    """The left-hand side itself."""
    return float(sum(ode_terms(eq, beta, point, parameters)))


def ode_residual(
    eq: ReducedEquation,
    beta: Expr | Sequence[Expr],
    point: Sequence[float],
    parameters: dict[str, float] | None = None,
) -> float:
    """Left-hand side over the sum of its absolute terms, floored at 1."""
    terms = ode_terms(eq, beta, point, parameters)
    return float(sum(terms) / max(1.0, sum(abs(t) for t in terms)))


def pro1_residual(
    space: ConformalSpace,
    chart: ImmersionChart,
    x: Sequence[float],
) -> float:
    """Normalized defect of the hyperplane condition on ``beta = sigma``.

    Along a hyperplane with Euclidean unit normal ``xi0`` the mean curvature
    extends to the ambient as ``H = xi0(beta)``. The condition reads

    ``beta lap0 beta - m |grad beta|^2 + (m-1) beta Hess beta(xi0, xi0)
    = m H^2 - (m-2)/(2|H|) lap|H| - (m-2)(m-4)/(4 H^2) |grad|H||^2``

    where ``lap|H|`` and ``|grad|H||^2`` are the surface operators written with
    Euclidean derivatives of ``beta`` and ``|H|``.

    Raises
    ------
    DomainError
        When ``H`` vanishes at the point, or the point leaves the ambient domain.
    """
    if chart.kind is not ChartKind.HYPERPLANE:
        raise ValueError("The hyperplane condition needs a hyperplane chart")
    m, n = chart.m, chart.n
    a = np.array(chart.coefficients[:m])
    xi0 = np.append(-a, 1.0) / np.sqrt(1.0 + a @ a)

    p = chart.point(x)
    beta = space.sigma_jet(p, order=JET_ORDER)
    H = sum(float(xi0[k]) * beta.partial(k) for k in range(n))
    if abs(H.value) < ABS_THRESHOLD:
        raise DomainError("Mean curvature vanishes on the hyperplane", value=H.value)
    abs_H = jet_elementary(H, "abs")

    s, grad, hess = beta.value, beta.gradient(), beta.hessian()
    grad_abs, hess_abs = abs_H.gradient(), abs_H.hessian()
    xi0_abs = float(xi0 @ grad_abs)

    lhs = (
        s * np.trace(hess),
        -m * float(grad @ grad),
        (m - 1) * s * float(xi0 @ hess @ xi0),
    )
    surface_laplacian = (
        s * s * np.trace(hess_abs)
        + (m - 2) * s * (H.value * xi0_abs - float(grad @ grad_abs))
        - s * s * float(xi0 @ hess_abs @ xi0)
    )
    surface_gradient_square = s * s * (float(grad_abs @ grad_abs) - xi0_abs**2)
    rhs = (
        m * H.value**2,
        -(m - 2) / (2 * abs_H.value) * surface_laplacian,
        -(m - 2) * (m - 4) / (4 * H.value**2) * surface_gradient_square,
    )
    defect = sum(lhs) - sum(rhs)
    return float(defect / max(1.0, sum(abs(t) for t in lhs + rhs)))

