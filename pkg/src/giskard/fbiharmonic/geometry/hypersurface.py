"""Extrinsic and intrinsic geometry of a hypersurface chart in a conformally flat space.

Every quantity is carried as a jet in the chart variables, so that the mean
curvature and the weight function can be differentiated twice more on the
surface without finite differences.
"""

from enum import StrEnum
from typing import Literal, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..errors import RankDeficiencyError
from ..expr import (
    Binary,
    Bindings,
    Constant,
    Expr,
    Variable,
    chart_variables,
    evaluate,
    parse,
    substitute,
)
from ..jets import Composition, Jet, jet_elementary
from .ambient import ConformalSpace, CurvatureData, curvature_at
from .linalg import (
    as_jets,
    jet_array,
    jet_dot,
    jet_inverse,
    jet_matmul,
    jet_scale,
    values,
)

# order of the chart jets of the immersion; second derivatives of phi then
# still carry two orders of chart derivatives
CHART_ORDER = 4
# order of every surface quantity (metric, shape operator, mean curvature)
SURFACE_ORDER = 2
# Gram determinant of the pushforwards below which d(phi) has lost rank
RANK_TOLERANCE = 1e-10
UMBILIC_TOLERANCE = 1e-9


class ChartKind(StrEnum):
    HYPERPLANE = "hyperplane"
    GENERAL = "general"


def _hyperplane_height(a: Sequence[float]) -> Expr:
    node: Expr = Constant(value=float(a[-1]))
    for i, ai in enumerate(a[:-1], start=1):
        if ai == 0.0:
            continue
        term = Binary(op="*", left=Constant(value=float(ai)), right=Variable(name=f"x{i}"))
        node = Binary(op="+", left=term, right=node)
    return node


class ImmersionChart(BaseModel):
    """A map ``phi: R^m -> R^(m+1)`` given by ``m + 1`` expressions in ``x1..xm``.

    Attributes
    ----------
    m : int
        Hypersurface dimension.
    components : tuple[Expr, ...]
        Ambient coordinates ``x1..xm, z`` as functions of the chart variables.
    kind : ChartKind
        ``hyperplane`` charts are ``(x1, ..., xm, sum a_i x_i + a_{m+1})``.
    coefficients : tuple[float, ...] | None
        ``a_1..a_{m+1}`` for hyperplane charts.
    orientation : {1, -1}
        Flips the unit normal fixed by ``det(d phi, xi0) > 0``.
    parameters : dict[str, float]
        Bindings of the parameters of the components.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    m: int = Field(ge=1, le=9)
    components: tuple[Expr, ...]
    kind: ChartKind = ChartKind.GENERAL
    coefficients: tuple[float, ...] | None = None
    orientation: Literal[1, -1] = 1
    parameters: dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_shape(self) -> "ImmersionChart":
        if len(self.components) != self.m + 1:
            raise ValueError(
                f"A chart of dimension {self.m} needs {self.m + 1} components, "
                f"got {len(self.components)}"
            )
        if self.kind is ChartKind.HYPERPLANE and (
            self.coefficients is None or len(self.coefficients) != self.m + 1
        ):
            raise ValueError("Hyperplane charts need coefficients a_1..a_{m+1}")
        return self

    @classmethod
    def hyperplane(
        cls, a: Sequence[float], orientation: Literal[1, -1] = 1
    ) -> "ImmersionChart":
        """The graph ``z = sum a_i x_i + a_{m+1}``."""
        a = tuple(float(v) for v in a)
        m = len(a) - 1
        components = tuple(Variable(name=name) for name in chart_variables(m))
        return cls(
            m=m,
            components=components + (_hyperplane_height(a),),
            kind=ChartKind.HYPERPLANE,
            coefficients=a,
            orientation=orientation,
        )

    @classmethod
    def from_text(
        cls,
        components: Sequence[str],
        parameters: dict[str, float] | None = None,
        orientation: Literal[1, -1] = 1,
    ) -> "ImmersionChart":
        return cls(
            m=len(components) - 1,
            components=tuple(parse(c) for c in components),
            orientation=orientation,
            parameters=dict(parameters or {}),
        )

    @property
    def n(self) -> int:
        return self.m + 1

    @property
    def variables(self) -> tuple[str, ...]:
        return chart_variables(self.m)

    @property
    def height(self) -> Expr:
        return self.components[-1]

    def restrict(self, e: Expr) -> Expr:
        """Substitute ``z`` (alias ``x{m+1}``) by the last component.

        Weights on the surface are written in chart variables; a ``z`` in them
        stands for the height of the point, as for hyperplane graphs.
        """
        return substitute(e, {"z": self.height, f"x{self.n}": self.height})

    def bindings(
        self,
        x: Sequence[float],
        parameters: dict[str, float] | None = None,
        order: int | None = None,
    ) -> Bindings:
        if len(x) != self.m:
            raise ValueError(f"Expected a chart point in R^{self.m}, got {len(x)}")
        return Bindings.at_point(
            x, {**self.parameters, **(parameters or {})}, order=order, names=self.variables
        )

    def point(self, x: Sequence[float]) -> np.ndarray:
        """The ambient point ``phi(x)``."""
        b = self.bindings(x)
        return np.array([float(evaluate(c, b)) for c in self.components])


class PointGeometry(BaseModel):
    """Extrinsic geometry of a chart at one point.

    Matrices use chart indices; ``shape_operator[i, j]`` is ``A^i_j`` and
    ``second_fundamental_form`` is ``g A``.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    x: np.ndarray
    p: np.ndarray
    metric: np.ndarray
    metric_inverse: np.ndarray
    xi: np.ndarray
    xi0: np.ndarray
    second_fundamental_form: np.ndarray
    shape_operator: np.ndarray
    H: float
    normA2: float
    principal_curvatures: np.ndarray
    umbilic: bool


class LocalSurface:
    """Jets of the induced metric, unit normal and shape operator at a chart point.

    With ``D_i = d_i phi``, ``G0 = <D_i, D_j>``, the Euclidean unit normal
    ``xi0`` and ``B0_ij = <d_i d_j phi, xi0>``, the induced metric is
    ``g = G0 / sigma^2``, the unit normal is ``xi = sigma xi0`` and the shape
    operator is ``A = sigma G0^-1 B0 + xi0(sigma) Id``.
    """

    def __init__(
        self,
        space: ConformalSpace,
        chart: ImmersionChart,
        x: Sequence[float],
        umbilic_tolerance: float = UMBILIC_TOLERANCE,
    ):
        if space.n != chart.n:
            raise ValueError(
                f"Chart of dimension {chart.m} does not fit an ambient of dimension {space.n}"
            )
        self.space = space
        self.chart = chart
        self.x = np.asarray(x, dtype=float)
        self.umbilic_tolerance = umbilic_tolerance
        m, n = chart.m, chart.n

        bindings = chart.bindings(self.x, order=CHART_ORDER)
        self.phi = as_jets([evaluate(c, bindings) for c in chart.components], m, CHART_ORDER)
        self.p = np.array([j.value for j in self.phi])
        space.check_point(self.p)

        self.D = jet_array([[self.phi[k].partial(i) for k in range(n)] for i in range(m)])
        self.G0 = jet_array(
            [[jet_dot(self.D[i], self.D[j]) for j in range(m)] for i in range(m)]
        )
        gram = np.linalg.det(values(self.G0))
        if not gram > RANK_TOLERANCE:
            raise RankDeficiencyError(
                "Pushforwards of the chart do not span a hyperplane", value=float(gram)
            )
        self.G0_inv = jet_inverse(self.G0)
        self.xi0 = self._unit_normal()

        composition = Composition(self.phi, order=SURFACE_ORDER)
        ambient_sigma = space.sigma_jet(self.p, order=SURFACE_ORDER + 1)
        self.sigma = composition(ambient_sigma)
        self.sigma_gradient = [composition(ambient_sigma.partial(k)) for k in range(n)]
        self.xi0_sigma = jet_dot(self.xi0, self.sigma_gradient)

        B0 = jet_array(
            [
                [
                    jet_dot([self.D[i, k].partial(j) for k in range(n)], self.xi0)
                    for j in range(m)
                ]
                for i in range(m)
            ]
        )
        A0 = jet_matmul(self.G0_inv, B0)
        self.A = jet_array(
            [
                [
                    self.sigma * A0[i, j] + (self.xi0_sigma if i == j else 0.0)
                    for j in range(m)
                ]
                for i in range(m)
            ]
        )
        self.H = jet_sum_diagonal(self.A) / m
        inv_sigma2 = (self.sigma * self.sigma).reciprocal()
        self.g = jet_scale(self.G0, inv_sigma2)
        self.g_inv = jet_scale(self.G0_inv, self.sigma * self.sigma)

        self._curvature: CurvatureData | None = None

    def _unit_normal(self) -> list[Jet]:
        m, n = self.chart.m, self.chart.n
        D = values(self.D)
        # the basis vector closest to the normal gives a well-conditioned projection
        null = np.linalg.svd(D)[2][-1]
        k_star = int(np.argmax(np.abs(null)))
        coupling = [self.D[j, k_star] for j in range(m)]
        weights = [
            jet_dot([self.G0_inv[i, j] for j in range(m)], coupling) for i in range(m)
        ]
        N = [
            (1.0 if k == k_star else 0.0) - jet_dot([self.D[i, k] for i in range(m)], weights)
            for k in range(n)
        ]
        norm = jet_elementary(jet_dot(N, N), "sqrt")
        frame = np.vstack([D, [j.value for j in N]])
        sign = self.chart.orientation * (1.0 if np.linalg.det(frame) > 0 else -1.0)
        return [sign * k / norm for k in N]

    @property
    def m(self) -> int:
        return self.chart.m

    @property
    def curvature(self) -> CurvatureData:
        if self._curvature is None:
            self._curvature = curvature_at(self.space, self.p)
        return self._curvature

    @property
    def xi(self) -> np.ndarray:
        return self.sigma.value * np.array([j.value for j in self.xi0])

    def metric_values(self) -> tuple[np.ndarray, np.ndarray]:
        return values(self.g), values(self.g_inv)

    def geometry(self) -> PointGeometry:
        g, g_inv = self.metric_values()
        A = values(self.A)
        II = g @ A
        II = 0.5 * (II + II.T)
        L = np.linalg.cholesky(g)
        L_inv = np.linalg.inv(L)
        principal = np.linalg.eigvalsh(L_inv @ II @ L_inv.T)
        H = self.H.value
        return PointGeometry(
            x=self.x,
            p=self.p,
            metric=g,
            metric_inverse=g_inv,
            xi=self.xi,
            xi0=np.array([j.value for j in self.xi0]),
            second_fundamental_form=II,
            shape_operator=A,
            H=H,
            normA2=float(np.trace(A @ A)),
            principal_curvatures=principal,
            umbilic=bool(
                np.max(np.abs(principal - H)) < self.umbilic_tolerance * (1.0 + abs(H))
            ),
        )

    def christoffel(self) -> np.ndarray:
        """``Gamma^k_ij`` of the induced metric."""
        m = self.m
        dg = np.empty((m, m, m))  # dg[l, i, j] = d_l g_ij
        for i in range(m):
            for j in range(m):
                grad = self.g[i, j].gradient()
                dg[:, i, j] = grad
        g_inv = values(self.g_inv)
        lowered = 0.5 * (
            np.einsum("ijl->lij", dg) + np.einsum("jil->lij", dg) - dg
        )  # lowered[l, i, j] = Gamma_lij
        return np.einsum("kl,lij->kij", g_inv, lowered)

    def weight_jet(self, u: Expr, parameters: dict[str, float] | None = None) -> Jet:
        """Jet of a scalar field written in chart variables (``z`` is the height)."""
        bindings = self.chart.bindings(self.x, parameters, order=SURFACE_ORDER + 1)
        value = evaluate(self.chart.restrict(u), bindings)
        return as_jets([value], self.m, SURFACE_ORDER + 1)[0]

    def gradient(self, u: Jet) -> np.ndarray:
        """``g^ij d_j u`` in the chart basis."""
        return values(self.g_inv) @ u.gradient()

    def laplacian(self, u: Jet) -> float:
        """``g^ij (d_i d_j u - Gamma^k_ij d_k u)``, the trace of the Hessian."""
        gamma = self.christoffel()
        hessian = u.hessian() - np.einsum("kij,k->ij", gamma, u.gradient())
        return float(np.einsum("ij,ij->", values(self.g_inv), hessian))

    def norm(self, v: np.ndarray) -> float:
        """Length of a tangent vector (chart components) in the induced metric."""
        g = values(self.g)
        return float(np.sqrt(max(v @ g @ v, 0.0)))

    def ricci_projections(self) -> tuple[float, np.ndarray]:
        ricci = self.curvature.ricci
        xi = self.xi
        D = values(self.D)
        ric_nn = float(xi @ ricci @ xi)
        ric_tangent = values(self.g_inv) @ (D @ ricci @ xi)
        return ric_nn, ric_tangent


def jet_sum_diagonal(a: np.ndarray) -> Jet:
    total = a[0, 0]
    for i in range(1, a.shape[0]):
        total = total + a[i, i]
    return total


def geometry_at(
    space: ConformalSpace,
    chart: ImmersionChart,
    x: Sequence[float],
    umbilic_tolerance: float = UMBILIC_TOLERANCE,
) -> PointGeometry:
    """Induced metric, unit normal, shape operator and mean curvature at ``x``.

    Raises
    ------
    RankDeficiencyError
        When ``d phi`` drops rank at ``x``.
    DomainError
        When ``phi(x)`` leaves the ambient domain.
    """
    return LocalSurface(space, chart, x, umbilic_tolerance).geometry()


def surface_scalar_calculus(
    space: ConformalSpace,
    chart: ImmersionChart,
    u: Expr,
    x: Sequence[float],
    parameters: dict[str, float] | None = None,
) -> tuple[np.ndarray, float]:
    """Gradient (chart components) and Laplacian of ``u`` in the induced metric."""
    surface = LocalSurface(space, chart, x)
    jet = surface.weight_jet(u, parameters)
    return surface.gradient(jet), surface.laplacian(jet)


def ricci_projections(
    space: ConformalSpace, chart: ImmersionChart, x: Sequence[float]
) -> tuple[float, np.ndarray]:
    """``Ric(xi, xi)`` and the chart components of ``(Ric xi)^T``."""
    return LocalSurface(space, chart, x).ricci_projections()


class AbsMeanCurvatureForms(BaseModel):
    """Laplacian and squared gradient of ``|H|`` computed on the chart and in the ambient."""

    laplacian_chart: float
    laplacian_ambient: float
    gradient_square_chart: float
    gradient_square_ambient: float


def r2_cross_check(
    space: ConformalSpace, chart: ImmersionChart, x: Sequence[float]
) -> AbsMeanCurvatureForms:
    """Compare surface calculus of ``|H|`` with its ambient expression on a hyperplane.

    On an umbilical hyperplane ``H = xi0(sigma)`` extends to the ambient with
    ``xi0`` constant, and

    ``lap_g |H| = sigma^2 lap0 |H| - (m-2) sigma <grad sigma, grad |H|>
    + (m-2) sigma H xi0(|H|) - sigma^2 xi0 xi0 (|H|)``,
    ``|grad_g |H||^2 = sigma^2 (|grad |H||^2 - xi0(|H|)^2)``.

    Raises
    ------
    DomainError
        When ``H`` vanishes at ``x``.
    """
    if chart.kind is not ChartKind.HYPERPLANE:
        raise ValueError("The ambient forms hold for hyperplane charts only")
    surface = LocalSurface(space, chart, x)
    m = chart.m
    abs_H = jet_elementary(surface.H, "abs")
    grad = surface.gradient(abs_H)

    xi0 = np.array([j.value for j in surface.xi0])
    sigma = space.sigma_jet(surface.p, order=3)
    H_ambient = sum(float(xi0[k]) * sigma.partial(k) for k in range(chart.n))
    abs_H_ambient = jet_elementary(H_ambient, "abs")
    s = sigma.value
    grad_abs = abs_H_ambient.gradient()
    hess_abs = abs_H_ambient.hessian()
    xi0_abs = float(xi0 @ grad_abs)
    laplacian_ambient = (
        s * s * np.trace(hess_abs)
        - (m - 2) * s * float(sigma.gradient() @ grad_abs)
        + (m - 2) * s * H_ambient.value * xi0_abs
        - s * s * float(xi0 @ hess_abs @ xi0)
    )
    return AbsMeanCurvatureForms(
        laplacian_chart=surface.laplacian(abs_H),
        laplacian_ambient=float(laplacian_ambient),
        gradient_square_chart=surface.norm(grad) ** 2,
        gradient_square_ambient=float(s * s * (grad_abs @ grad_abs - xi0_abs**2)),
    )
