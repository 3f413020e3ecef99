"""Curvature of a conformally flat space ``(R^n, h = sigma^-2 h0)``.

All tensors are coordinate components with respect to ``h``. The curvature
operator is ``R(X, Y) = [nabla_X, nabla_Y] - nabla_[X,Y]`` and the lowered
tensor is ``R(a, b, c, d) = h(R(d_a, d_b) d_d, d_c)``, so that the sectional
curvature of an orthonormal pair is ``R(X, Y, X, Y)``.
"""

from enum import StrEnum
from typing import Sequence

import logfire_api as logfire
import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..errors import DegeneratePlaneError, DomainError, UnboundIdentifierError
from ..expr import Bindings, Expr, ambient_variables, evaluate, free_identifiers, parse
from ..jets import Jet, jet_elementary
from ..sampling import ErrorPolicy, Sampler, map_samples, successful

# sigma below this value is treated as leaving the domain
SIGMA_FLOOR = 1e-8

# normalized Gram determinant below which two vectors span no plane
PLANE_TOLERANCE = 1e-12


class ConformalSpace(BaseModel):
    """The ambient ``R^n`` with metric ``h = sigma^-2 h0``.

    Attributes
    ----------
    n : int
        Ambient dimension ``m + 1``.
    sigma : Expr
        Conformal factor in the variables ``x1..x{n-1}, z``.
    domain_guard : tuple[Expr, ...]
        Expressions that must be positive at every accepted point.
    parameters : dict[str, float]
        Bindings of the parameters of ``sigma`` and of the guards.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = Field(ge=2, le=10)
    sigma: Expr
    domain_guard: tuple[Expr, ...] = ()
    parameters: dict[str, float] = Field(default_factory=dict)

    @classmethod
    def from_text(
        cls,
        sigma: str,
        n: int,
        guards: Sequence[str] = (),
        parameters: dict[str, float] | None = None,
    ) -> "ConformalSpace":
        """Parse ``sigma`` and the guards.

        Raises
        ------
        UnboundIdentifierError
            When an expression names a parameter missing from ``parameters``.
        """
        parameters = dict(parameters or {})
        expressions = [parse(sigma), *(parse(g) for g in guards)]
        for e in expressions:
            unbound = sorted(free_identifiers(e)[1] - set(parameters))
            if unbound:
                raise UnboundIdentifierError(unbound[0])
        return cls(
            n=n,
            sigma=expressions[0],
            domain_guard=tuple(expressions[1:]),
            parameters=parameters,
        )

    @property
    def m(self) -> int:
        return self.n - 1

    @property
    def variables(self) -> tuple[str, ...]:
        return ambient_variables(self.n)

    def bindings(self, p: Sequence[float], order: int | None = None) -> Bindings:
        if len(p) != self.n:
            raise ValueError(f"Expected a point in R^{self.n}, got {len(p)} coordinates")
        return Bindings.at_point(p, self.parameters, order=order)

    def check_point(self, p: Sequence[float]) -> None:
        """Reject points outside the guarded domain or where sigma is too small."""
        bindings = self.bindings(p)
        for guard in self.domain_guard:
            value = float(evaluate(guard, bindings))
            if not value > 0.0:
                raise DomainError(
                    "Domain guard is not positive", value=value, expression=str(guard)
                )
        value = float(evaluate(self.sigma, bindings))
        if not value >= SIGMA_FLOOR:
            raise DomainError(
                "Conformal factor below floor", value=value, expression=str(self.sigma)
            )

    def sigma_at(self, p: Sequence[float]) -> float:
        self.check_point(p)
        return float(evaluate(self.sigma, self.bindings(p)))

    def sigma_jet(self, p: Sequence[float], order: int = 3) -> Jet:
        """Jet of sigma at ``p`` in the ambient coordinates."""
        self.check_point(p)
        value = evaluate(self.sigma, self.bindings(p, order=order))
        if not isinstance(value, Jet):
            return Jet.constant(float(value), self.n, order)
        return value


class CurvatureData(BaseModel):
    """Christoffel symbols and curvature of ``h`` at one point.

    ``christoffel[k, i, j]`` is ``Gamma^k_ij``; ``riemann`` and ``ricci`` are
    lowered with ``h``.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    point: np.ndarray
    sigma: float
    sigma_gradient: np.ndarray
    sigma_hessian: np.ndarray
    christoffel: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray

    @property
    def n(self) -> int:
        return len(self.point)

    def metric(self) -> np.ndarray:
        return np.eye(self.n) / self.sigma**2

    def riemann_form(self, a, b, c, d) -> float:
        return float(np.einsum("abcd,a,b,c,d->", self.riemann, a, b, c, d))


def _conformal_christoffel(psi_grad: np.ndarray) -> np.ndarray:
    delta = np.eye(len(psi_grad))
    return (
        np.einsum("ki,j->kij", delta, psi_grad)
        + np.einsum("kj,i->kij", delta, psi_grad)
        - np.einsum("ij,k->kij", delta, psi_grad)
    )


def curvature_at(space: ConformalSpace, p: Sequence[float]) -> CurvatureData:
    """Christoffels, Riemann and Ricci tensors of ``h`` at ``p``.

    With ``psi = -ln sigma`` the metric is ``e^{2 psi} h0`` and
    ``Gamma^k_ij = delta^k_i psi_j + delta^k_j psi_i - delta_ij psi_k``.

    Raises
    ------
    DomainError
        When ``p`` violates the domain guard or sigma is not positive.
    """
    p = np.asarray(p, dtype=float)
    sigma = space.sigma_jet(p, order=2)
    psi = -jet_elementary(sigma, "ln")
    psi_grad, psi_hess = psi.gradient(), psi.hessian()

    delta = np.eye(space.n)
    gamma = _conformal_christoffel(psi_grad)
    # d_gamma[l, k, i, j] = d_l Gamma^k_ij
    d_gamma = (
        np.einsum("ki,jl->lkij", delta, psi_hess)
        + np.einsum("kj,il->lkij", delta, psi_hess)
        - np.einsum("ij,kl->lkij", delta, psi_hess)
    )
    # r_up[l, k, i, j]: component l of R(d_i, d_j) d_k
    r_up = (
        np.einsum("iljk->lkij", d_gamma)
        - np.einsum("jlik->lkij", d_gamma)
        + np.einsum("lip,pjk->lkij", gamma, gamma)
        - np.einsum("ljp,pik->lkij", gamma, gamma)
    )
    s = sigma.value
    riemann = np.einsum("cdab->abcd", r_up) / s**2
    ricci = s**2 * np.einsum("abad->bd", riemann)

    return CurvatureData(
        point=p,
        sigma=s,
        sigma_gradient=sigma.gradient(),
        sigma_hessian=sigma.hessian(),
        christoffel=gamma,
        riemann=riemann,
        ricci=ricci,
    )


def _orthonormal_pair(X, Y) -> tuple[np.ndarray, np.ndarray]:
    """Euclidean Gram-Schmidt; raises when ``X`` and ``Y`` are parallel."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    nx, ny = np.linalg.norm(X), np.linalg.norm(Y)
    if nx == 0.0 or ny == 0.0:
        raise DegeneratePlaneError("A zero vector spans no plane")
    X = X / nx
    Y = Y / ny
    Y = Y - np.dot(X, Y) * X
    gram = np.dot(Y, Y)
    if gram < PLANE_TOLERANCE:
        raise DegeneratePlaneError(f"Vectors are parallel (Gram determinant {gram:.3e})")
    return X, Y / np.sqrt(gram)


def sectional(
    space: ConformalSpace,
    p: Sequence[float],
    X: Sequence[float],
    Y: Sequence[float],
    curvature: CurvatureData | None = None,
) -> float:
    """Sectional curvature of the plane spanned by the coordinate vectors ``X, Y``.

    The vectors are orthonormalized with respect to ``h``; any spanning pair
    may be passed.
    """
    curvature = curvature or curvature_at(space, p)
    X, Y = _orthonormal_pair(X, Y)
    # Euclidean-orthonormal vectors are h-orthonormal after scaling by sigma
    X, Y = curvature.sigma * X, curvature.sigma * Y
    return curvature.riemann_form(X, Y, X, Y)


def sectional_closed_form(
    space: ConformalSpace,
    p: Sequence[float],
    X: Sequence[float],
    Y: Sequence[float],
) -> float:
    """Sectional curvature from sigma's Euclidean derivatives alone.

    ``X`` and ``Y`` are components in the orthonormal frame ``e_i = sigma d_i``;
    ``K = sigma (Hess sigma(X, X) + Hess sigma(Y, Y)) - |grad sigma|^2``.
    """
    X, Y = _orthonormal_pair(X, Y)
    sigma = space.sigma_jet(p, order=2)
    hess = sigma.hessian()
    grad = sigma.gradient()
    return float(sigma.value * (X @ hess @ X + Y @ hess @ Y) - grad @ grad)


def power_family_sectional(
    m: int,
    t: float,
    p: Sequence[float],
    X: Sequence[float],
    Y: Sequence[float],
    *,
    affine: bool = False,
    C: float = 1.0,
) -> float:
    """Sectional curvature of ``sigma = z^t`` or, with ``affine``, ``(sum x + z + C)^t``.

    ``X`` and ``Y`` are frame components as in :func:`sectional_closed_form`.
    """
    X, Y = _orthonormal_pair(X, Y)
    p = np.asarray(p, dtype=float)
    if len(p) != m + 1:
        raise ValueError(f"Expected a point in R^{m + 1}, got {len(p)} coordinates")
    if affine:
        base = float(np.sum(p) + C)
        slope = X.sum() ** 2 + Y.sum() ** 2
        gradient_square = (m + 1) * t * t
    else:
        base = float(p[-1])
        slope = X[-1] ** 2 + Y[-1] ** 2
        gradient_square = t * t
    if base <= 0.0:
        raise DomainError("Power family base is not positive", value=base)
    return (slope * t * (t - 1) - gradient_square) * base ** (2 * t - 2)


def ricci_normal_umbilical(
    space: ConformalSpace, xi0: Sequence[float], p: Sequence[float]
) -> float:
    """``Ric(xi, xi)`` for ``xi = sigma xi0`` from sigma's Euclidean derivatives.

    ``sigma lap(sigma) - m |grad sigma|^2 + (m - 1) sigma Hess sigma(xi0, xi0)``.
    """
    xi0 = np.asarray(xi0, dtype=float)
    if abs(np.linalg.norm(xi0) - 1.0) > 1e-9:
        raise ValueError("xi0 must be a Euclidean unit vector")
    sigma = space.sigma_jet(p, order=2)
    hess, grad, s = sigma.hessian(), sigma.gradient(), sigma.value
    m = space.m
    return float(
        s * np.trace(hess) - m * (grad @ grad) + (m - 1) * s * (xi0 @ hess @ xi0)
    )


class CurvatureClaim(StrEnum):
    NEGATIVE = "negative"
    POSITIVE = "positive"
    ZERO = "zero"
    NONPOSITIVE = "nonpositive"

    def holds(self, minimum: float, maximum: float, zero_tolerance: float) -> bool:
        match self:
            case CurvatureClaim.NEGATIVE:
                return maximum < 0.0
            case CurvatureClaim.POSITIVE:
                return minimum > 0.0
            case CurvatureClaim.ZERO:
                return max(abs(minimum), abs(maximum)) < zero_tolerance
            case CurvatureClaim.NONPOSITIVE:
                return maximum <= zero_tolerance


class CurvatureSample(BaseModel):
    point: list[float]
    X: list[float]
    Y: list[float]
    K: float


class CurvatureScan(BaseModel):
    """Sectional curvatures over random points and random planes."""

    expect: CurvatureClaim
    samples: list[CurvatureSample]
    min_K: float
    max_K: float
    holds: bool

    @property
    def witness(self) -> CurvatureSample:
        """The sample closest to violating the claim."""
        if self.expect is CurvatureClaim.POSITIVE:
            return min(self.samples, key=lambda s: s.K)
        if self.expect is CurvatureClaim.ZERO:
            return max(self.samples, key=lambda s: abs(s.K))
        return max(self.samples, key=lambda s: s.K)


def default_ambient_box(n: int) -> list[tuple[float, float]]:
    """``[-2, 2]^(n-1) x [0.5, 5]``: the upper half-space away from its boundary."""
    return [(-2.0, 2.0)] * (n - 1) + [(0.5, 5.0)]


@logfire.instrument("curvature.scan")
async def curvature_scan(
    space: ConformalSpace,
    sampler: Sampler,
    expect: CurvatureClaim | str,
    *,
    jobs: int = 1,
    zero_tolerance: float = 1e-10,
) -> CurvatureScan:
    """Sample points and random 2-planes and test a sign claim on all of them.

    Raises
    ------
    NoAdmissibleSampleError
        When no sample point lies in the guarded domain.
    """
    expect = CurvatureClaim(expect)
    if sampler.dim != space.n:
        raise ValueError(f"Sampler has dimension {sampler.dim}, expected {space.n}")

    def evaluate_sample(point: np.ndarray, rng: np.random.Generator) -> CurvatureSample:
        X = rng.standard_normal(space.n)
        Y = rng.standard_normal(space.n)
        K = sectional(space, point, X, Y)
        return CurvatureSample(point=point.tolist(), X=X.tolist(), Y=Y.tolist(), K=K)

    results = await map_samples(
        sampler, evaluate_sample, jobs=jobs, error_policy=ErrorPolicy.SKIP
    )
    samples = successful(results)
    values = [s.K for s in samples]
    minimum, maximum = min(values), max(values)
    return CurvatureScan(
        expect=expect,
        samples=samples,
        min_K=minimum,
        max_K=maximum,
        holds=expect.holds(minimum, maximum, zero_tolerance),
    )
