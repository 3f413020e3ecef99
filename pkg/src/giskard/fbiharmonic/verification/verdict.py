from enum import StrEnum
from typing import Sequence

import logfire_api as logfire
import numpy as np
from pydantic import BaseModel, Field

from ..config import Tolerances
from ..errors import Counterexample
from ..expr import Expr
from ..geometry import ConformalSpace, ImmersionChart
from ..sampling import ErrorPolicy, Sampler, map_samples, successful
from .residuals import ResidualReport, residual_at


class VerdictKind(StrEnum):
    TOTALLY_GEODESIC = "totally_geodesic"
    MINIMAL_NOT_GEODESIC = "minimal_not_geodesic"
    BIHARMONIC_PROPER = "biharmonic_proper"
    F_BIHARMONIC_PROPER = "f_biharmonic_proper"
    NOT_F_BIHARMONIC = "not_f_biharmonic"


class Evidence(BaseModel):
    """Aggregates over the sampled points behind a verdict."""

    samples: int
    f_biharmonic_points: int
    biharmonic_points: int
    umbilic_points: int
    falsified_points: int
    inconclusive_points: int
    max_norm_residual_f: float
    max_norm_residual_bi: float
    max_abs_H: float
    max_normA2: float
    max_grad_f: float


class Verdict(BaseModel):
    kind: VerdictKind
    evidence: Evidence
    counterexample: Counterexample | None = Field(default=None)

    @property
    def max_norm_residual(self) -> float:
        return self.evidence.max_norm_residual_f

    @property
    def inconclusive(self) -> bool:
        """Rejected although no point is beyond the falsification threshold."""
        return (
            self.kind is VerdictKind.NOT_F_BIHARMONIC
            and self.evidence.falsified_points == 0
            and self.evidence.inconclusive_points > 0
        )


def first_counterexample(
    reports: Sequence[ResidualReport], tolerances: Tolerances, indices: Sequence[int] | None = None
) -> Counterexample | None:
    """The first sample beyond the falsification threshold.

    Falls back to the first sample whose f-biharmonic residual does not vanish
    when no sample is clearly violating.
    """
    indexed = list(zip(indices if indices is not None else range(len(reports)), reports))
    clear = [(i, r) for i, r in indexed if r.error_f > tolerances.falsify]
    nonvanishing = [(i, r) for i, r in indexed if r.error_f >= tolerances.verify]
    candidates = clear or nonvanishing
    if not candidates:
        return None
    index, report = candidates[0]
    term, value = report.worst_term()
    return Counterexample(sample_index=index, x=report.x, term=term, value=value)


def verdict_from(
    reports: Sequence[ResidualReport],
    tolerances: Tolerances | None = None,
    indices: Sequence[int] | None = None,
) -> Verdict:
    """Classify a hypersurface from residual reports at its sample points.

    Every claim must hold at every point. The counterexample is the first
    point beyond ``falsify``, or the first point where the f-biharmonic
    residual does not vanish when none is.
    """
    if not reports:
        raise ValueError("A verdict needs at least one residual report")
    tol = tolerances or Tolerances()
    error_f = np.array([r.error_f for r in reports])
    error_bi = np.array([r.error_bi for r in reports])
    evidence = Evidence(
        samples=len(reports),
        f_biharmonic_points=int(np.sum(error_f < tol.verify)),
        biharmonic_points=int(np.sum(error_bi < tol.verify)),
        umbilic_points=sum(r.umbilic for r in reports),
        falsified_points=int(np.sum(error_f > tol.falsify)),
        inconclusive_points=int(np.sum((error_f >= tol.verify) & (error_f <= tol.falsify))),
        max_norm_residual_f=float(error_f.max()),
        max_norm_residual_bi=float(error_bi.max()),
        max_abs_H=max(abs(r.H) for r in reports),
        max_normA2=max(r.normA2 for r in reports),
        max_grad_f=max(r.grad_f_norm for r in reports),
    )

    if evidence.max_normA2 <= tol.verify:
        kind = VerdictKind.TOTALLY_GEODESIC
    elif evidence.max_abs_H <= tol.verify:
        kind = VerdictKind.MINIMAL_NOT_GEODESIC
    elif evidence.max_norm_residual_bi < tol.verify:
        kind = VerdictKind.BIHARMONIC_PROPER
    elif (
        evidence.max_norm_residual_f < tol.verify
        and evidence.max_grad_f > tol.constancy
    ):
        kind = VerdictKind.F_BIHARMONIC_PROPER
    else:
        kind = VerdictKind.NOT_F_BIHARMONIC

    counterexample = None
    if kind is VerdictKind.NOT_F_BIHARMONIC:
        counterexample = first_counterexample(reports, tol, indices)
    return Verdict(kind=kind, evidence=evidence, counterexample=counterexample)


async def sample_residuals(
    space: ConformalSpace,
    chart: ImmersionChart,
    f: Expr,
    sampler: Sampler,
    *,
    parameters: dict[str, float] | None = None,
    tolerances: Tolerances | None = None,
    jobs: int = 1,
    error_policy: ErrorPolicy = ErrorPolicy.RAISE,
) -> list[ResidualReport]:
    """Residual reports at the admissible sample points, in sample order.

    Points where the weight is not positive, the ambient guard fails or the
    chart loses rank are redrawn.
    """
    tol = tolerances or Tolerances()
    if sampler.dim != chart.m:
        raise ValueError(f"Sampler has dimension {sampler.dim}, expected {chart.m}")

    def evaluate_sample(point: np.ndarray, _rng: np.random.Generator) -> ResidualReport:
        return residual_at(space, chart, f, point, parameters, tol.umbilic)

    results = await map_samples(
        sampler, evaluate_sample, jobs=jobs, error_policy=error_policy
    )
    return successful(results)


@logfire.instrument("verification.classify")
async def classify(
    space: ConformalSpace,
    chart: ImmersionChart,
    f: Expr,
    sampler: Sampler,
    tolerances: Tolerances | None = None,
    *,
    parameters: dict[str, float] | None = None,
    jobs: int = 1,
    error_policy: ErrorPolicy = ErrorPolicy.RAISE,
) -> Verdict:
    """Sample the chart and classify the hypersurface.

    Returns
    -------
    Verdict
        The classification with its evidence.

    Raises
    ------
    NoAdmissibleSampleError
        When not a single sample point is admissible.
    VerificationError
        If a sample fails for a reason other than its domain and the error
        policy is RAISE (default).
    """
    reports = await sample_residuals(
        space,
        chart,
        f,
        sampler,
        parameters=parameters,
        tolerances=tolerances,
        jobs=jobs,
        error_policy=error_policy,
    )
    verdict = verdict_from(reports, tolerances)
    logfire.info(
        "classify.completed",
        verdict=verdict.kind.value,
        max_norm_residual_f=verdict.evidence.max_norm_residual_f,
        max_norm_residual_bi=verdict.evidence.max_norm_residual_bi,
    )
    return verdict
