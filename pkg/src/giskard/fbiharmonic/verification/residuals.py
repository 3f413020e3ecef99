"""Residuals of the f-biharmonic and biharmonic hypersurface equations.

For a hypersurface with unit normal ``xi``, shape operator ``A`` and mean
curvature ``H``, with a positive weight ``f``:

``r1_f = lap(fH) - fH (|A|^2 - Ric(xi, xi))``
``r2_f = A grad(fH) + fH ((m/2) grad H - (Ric xi)^T)``

and the biharmonic residuals

``r1_bi = lap H - H (|A|^2 - Ric(xi, xi))``
``r2_bi = 2 A grad H + (m/2) grad H^2 - 2 H (Ric xi)^T``.

Each line is normalized by the sum of the absolute values (the induced
metric length for vectors) of its additive terms, floored at 1.
"""

from typing import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..errors import DomainError
from ..expr import Expr
from ..geometry import ConformalSpace, ImmersionChart, LocalSurface
from ..geometry.hypersurface import UMBILIC_TOLERANCE


class ResidualReport(BaseModel):
    """Residuals of both systems at one chart point."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    x: list[float]
    H: float
    normA2: float
    ric_nn: float
    f: float
    grad_f_norm: float
    r1_f: float
    r2_f: list[float]
    r2_f_norm: float
    r1_bi: float
    r2_bi: list[float]
    r2_bi_norm: float
    n1: float
    n2: float
    n1_bi: float
    n2_bi: float
    umbilic: bool

    @property
    def normalized_f(self) -> tuple[float, float]:
        return abs(self.r1_f) / self.n1, self.r2_f_norm / self.n2

    @property
    def normalized_bi(self) -> tuple[float, float]:
        return abs(self.r1_bi) / self.n1_bi, self.r2_bi_norm / self.n2_bi

    @property
    def error_f(self) -> float:
        """Largest normalized f-biharmonic residual."""
        return max(self.normalized_f)

    @property
    def error_bi(self) -> float:
        return max(self.normalized_bi)

    def worst_term(self) -> tuple[str, float]:
        """Name and normalized value of the larger f-biharmonic residual line."""
        first, second = self.normalized_f
        return ("r1_f", first) if first >= second else ("r2_f", second)


def _normalizer(*magnitudes: float) -> float:
    return max(1.0, float(sum(abs(v) for v in magnitudes)))


def residual_at(
    space: ConformalSpace,
    chart: ImmersionChart,
    f: Expr,
    x: Sequence[float],
    parameters: dict[str, float] | None = None,
    umbilic_tolerance: float = UMBILIC_TOLERANCE,
) -> ResidualReport:
    """Evaluate both residual systems at the chart point ``x``.

    Parameters
    ----------
    space : ConformalSpace
        The ambient space.
    chart : ImmersionChart
        The hypersurface.
    f : Expr
        Positive weight in chart variables; a ``z`` in it stands for the height.
    x : Sequence[float]
        Chart point.
    parameters : dict[str, float], optional
        Bindings for the parameters of ``f``.

    Raises
    ------
    DomainError
        When ``f(x) <= 0``, ``phi(x)`` leaves the ambient domain or the chart
        loses rank.
    """
    surface = LocalSurface(space, chart, x, umbilic_tolerance)
    m = chart.m
    weight = surface.weight_jet(f, parameters)
    if not weight.value > 0.0:
        raise DomainError("Weight must be positive", value=weight.value, expression=str(f))

    geometry = surface.geometry()
    A = geometry.shape_operator
    normA2 = geometry.normA2
    ric_nn, ric_tangent = surface.ricci_projections()
    H = surface.H
    fH = weight * H

    grad_H = surface.gradient(H)
    grad_fH = surface.gradient(fH)
    lap_H = surface.laplacian(H)
    lap_fH = surface.laplacian(fH)
    length = surface.norm

    # f-biharmonic lines
    f_terms = (lap_fH, -fH.value * normA2, fH.value * ric_nn)
    r1_f = sum(f_terms)
    v_terms = (A @ grad_fH, 0.5 * m * fH.value * grad_H, -fH.value * ric_tangent)
    r2_f = sum(v_terms)

    # biharmonic lines
    bi_terms = (lap_H, -H.value * normA2, H.value * ric_nn)
    r1_bi = sum(bi_terms)
    w_terms = (2.0 * A @ grad_H, m * H.value * grad_H, -2.0 * H.value * ric_tangent)
    r2_bi = sum(w_terms)

    return ResidualReport(
        x=[float(v) for v in surface.x],
        H=H.value,
        normA2=normA2,
        ric_nn=ric_nn,
        f=weight.value,
        grad_f_norm=length(surface.gradient(weight)),
        r1_f=float(r1_f),
        r2_f=[float(v) for v in r2_f],
        r2_f_norm=length(r2_f),
        r1_bi=float(r1_bi),
        r2_bi=[float(v) for v in r2_bi],
        r2_bi_norm=length(r2_bi),
        n1=_normalizer(*f_terms),
        n2=_normalizer(*(length(v) for v in v_terms)),
        n1_bi=_normalizer(*bi_terms),
        n2_bi=_normalizer(*(length(v) for v in w_terms)),
        umbilic=geometry.umbilic,
    )


def weighted_ode_defect(
    space: ConformalSpace,
    chart: ImmersionChart,
    f: Expr,
    x: Sequence[float],
    parameters: dict[str, float] | None = None,
) -> tuple[float, float]:
    """``lap f - |A|^2 f`` and ``r1_f / H`` on a surface with constant ``H``.

    On the cylinder of a flat space these agree, which reduces the first
    f-biharmonic equation to a linear equation for ``f``.
    """
    surface = LocalSurface(space, chart, x)
    weight = surface.weight_jet(f, parameters)
    report = residual_at(space, chart, f, x, parameters)
    if abs(report.H) < 1e-12:
        raise DomainError("Mean curvature vanishes", value=report.H)
    defect = surface.laplacian(weight) - report.normA2 * weight.value
    return float(defect), report.r1_f / report.H
