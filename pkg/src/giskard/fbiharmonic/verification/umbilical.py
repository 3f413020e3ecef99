"""Identities satisfied by umbilical f-biharmonic hypersurfaces.

At an umbilical point with ``H != 0`` of an f-biharmonic hypersurface:

* ``f |H|^((4-m)/2)`` is constant (for ``m != 4``);
* ``Ric(xi, xi) = m H^2 - |H|^((2-m)/2) lap(|H|^((m-2)/2))``;
* ``(m - 1) grad H = (Ric xi)^T`` (Codazzi);
* when ``Ric(xi, xi) <= 0``, ``lap(|H|^((m-2)/2)) >= m |H|^((m+2)/2)``.
"""

from fractions import Fraction
from typing import Sequence

from pydantic import BaseModel

from ..errors import DomainError, UmbilicityError
from ..expr import Expr
from ..geometry import ConformalSpace, ImmersionChart, LocalSurface
from ..geometry.hypersurface import UMBILIC_TOLERANCE
from ..jets import jet_elementary
from ..jets.elementary import ABS_THRESHOLD


class UmbilicalIdentities(BaseModel):
    """Normalized residuals of the umbilical identities at one point.

    ``f_form`` is ``None`` for ``m = 4`` and ``margin`` is ``None`` where
    ``Ric(xi, xi) > 0``.
    """

    x: list[float]
    H: float
    ric_nn: float
    f_form: float | None
    curvature_identity: float
    codazzi: float
    margin: float | None


def umbilical_theory_check(
    space: ConformalSpace,
    chart: ImmersionChart,
    f: Expr,
    x: Sequence[float],
    parameters: dict[str, float] | None = None,
    umbilic_tolerance: float = UMBILIC_TOLERANCE,
) -> UmbilicalIdentities:
    """Evaluate the umbilical identities at ``x``.

    Raises
    ------
    UmbilicityError
        When the point is not umbilic.
    DomainError
        When ``H`` vanishes, so that powers of ``|H|`` are undefined.
    """
    surface = LocalSurface(space, chart, x, umbilic_tolerance)
    geometry = surface.geometry()
    if not geometry.umbilic:
        raise UmbilicityError(
            f"Point {list(surface.x)} is not umbilic "
            f"(principal curvatures {geometry.principal_curvatures.tolist()})"
        )
    H = surface.H
    if abs(H.value) < ABS_THRESHOLD:
        raise DomainError("Mean curvature vanishes at an umbilical point", value=H.value)

    m = chart.m
    length = surface.norm
    abs_H = jet_elementary(H, "abs")
    ric_nn, ric_tangent = surface.ricci_projections()

    f_form = None
    if m != 4:
        weight = surface.weight_jet(f, parameters)
        power = jet_elementary(abs_H, "pow", Fraction(4 - m, 2))
        first = power.value * surface.gradient(weight)
        second = weight.value * surface.gradient(power)
        f_form = length(first + second) / max(1.0, length(first) + length(second))

    half = jet_elementary(abs_H, "pow", Fraction(m - 2, 2))
    lap_half = surface.laplacian(half)
    scale = abs(H.value) ** ((2 - m) / 2)
    terms = (ric_nn, -m * H.value**2, scale * lap_half)
    curvature_identity = abs(sum(terms)) / max(1.0, sum(abs(t) for t in terms))

    grad_H = surface.gradient(H)
    codazzi = length(ric_tangent - (m - 1) * grad_H) / max(
        1.0, length(ric_tangent) + (m - 1) * length(grad_H)
    )

    margin = None
    if ric_nn <= 0.0:
        margin = lap_half - m * abs(H.value) ** ((m + 2) / 2)

    return UmbilicalIdentities(
        x=[float(v) for v in surface.x],
        H=H.value,
        ric_nn=ric_nn,
        f_form=f_form,
        curvature_identity=curvature_identity,
        codazzi=codazzi,
        margin=margin,
    )
