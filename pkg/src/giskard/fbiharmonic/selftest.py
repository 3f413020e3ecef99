"""Built-in consistency suites run by ``fbh selftest``."""

from enum import StrEnum
from typing import Sequence

import logfire_api as logfire
import numpy as np

from .expr import Bindings, evaluate, parse
from .families import FamilyName, catalog
from .geometry import ConformalSpace, curvature_at, default_ambient_box, sectional
from .jets import fd_oracle, multi_indices, oracle_agrees, resolution
from .reports import SelftestReport, SuiteResult
from .sampling import Sampler

JET_CORPUS = (
    "exp(x1*z)",
    "exp(-z)*atan(x1*x2)",
    "ln(1+x1^2+z)",
    "ln(z)*x2",
    "sqrt(2+x1*x2+z^2)",
    "sqrt(z)*exp(x1/3)",
    "sin(x1)*cos(x2*z)",
    "sin(x1+x2+z)",
    "cos(x1*x2)/z",
    "atan(x1-z/2)",
    "atan(z)*atan(x2)",
    "abs(3+x1)*z",
    "abs(x2-4)*exp(z/2)",
    "z^(3/13)",
    "z^(2/5)*x1",
    "z^(-1)",
    "(1+x1^2+x2^2+z^2)^(-1/2)",
    "(1+x1^2+x2^2)^(3/2)",
    "(x1+x2+z+3)^(15/29)",
    "(x1+x2+z+9)^(-1)",
    "x1^3*z-x2/z",
    "x1*x2*z",
    "2*z^(-1)/(1+x1^2)",
    "(2+x1)/(3+x2+z)",
    "exp(sin(x1))*ln(2+cos(x2))",
    "sqrt(1+atan(x1*z)^2)",
    "(c1*z+c2)^(-1)",
    "c*(c1*z+c2)^2/c1",
    "x1^2+x2^2+z^2",
    "1-x1+0.5*x2*z",
    "(2+sin(z))^(7/3)",
)
JET_PARAMETERS = {"c": 1.5, "c1": 0.7, "c2": 1.2}
JET_BOX = [(-1.0, 1.0), (-1.0, 1.0), (0.5, 2.0)]
# relative tolerance per derivative order, floored at the oracle resolution
JET_TOLERANCE = {1: 1e-6, 2: 1e-6, 3: 1e-4}

SYMMETRY_SIGMAS = (
    "z^(3/13)",
    "(x1+x2+z+9)^(-1)",
    "exp(x1*z/4)+1",
    "(1+x1^2+x2^2+z^2)/2",
)
SYMMETRY_TOLERANCE = 1e-9

CONSTANT_CURVATURE = (("0", "1"), ("-1", "z"), ("1", "sphere"))
CURVATURE_TOLERANCE = 1e-8


class SuiteName(StrEnum):
    JET_ORACLE = "jet_oracle"
    TENSOR_SYMMETRY = "tensor_symmetry"
    CONSTANT_CURVATURE = "constant_curvature"
    FAMILY_CATALOG = "family_catalog"


class _Checks:
    """Counts checks and keeps the first failure."""

    def __init__(self, name: SuiteName):
        self.name = name
        self.count = 0
        self.failure: str | None = None

    def check(self, condition: bool, detail: str) -> None:
        self.count += 1
        if not condition and self.failure is None:
            self.failure = detail

    def result(self) -> SuiteResult:
        return SuiteResult(
            name=self.name.value,
            passed=self.failure is None,
            checks=self.count,
            detail=self.failure or "",
        )


def jet_oracle_suite(seed: int, samples: int) -> SuiteResult:
    checks = _Checks(SuiteName.JET_ORACLE)
    points = Sampler(count=samples, seed=seed, box=JET_BOX).points()
    alphas = [a for a in multi_indices(3, 3) if sum(a) > 0]
    for text in JET_CORPUS:
        e = parse(text)
        for point in points:
            jet = evaluate(e, Bindings.at_point(point, JET_PARAMETERS, order=3))
            for alpha in alphas:
                exact = jet.derivative(alpha)
                approx = fd_oracle(e, point, alpha, parameters=JET_PARAMETERS)
                checks.check(
                    oracle_agrees(
                        exact, approx, JET_TOLERANCE[sum(alpha)], resolution(alpha, point, jet.value)
                    ),
                    f"d^{alpha} of {text} at {point.tolist()}: jet {exact:.10g}, fd {approx:.10g}",
                )
    return checks.result()


def _symmetry_defects(riemann: np.ndarray, ricci: np.ndarray) -> dict[str, float]:
    return {
        "antisymmetry in the first pair": np.abs(riemann + riemann.transpose(1, 0, 2, 3)).max(),
        "antisymmetry in the second pair": np.abs(riemann + riemann.transpose(0, 1, 3, 2)).max(),
        "pair symmetry": np.abs(riemann - riemann.transpose(2, 3, 0, 1)).max(),
        "first Bianchi identity": np.abs(
            riemann
            + np.einsum("acdb->abcd", riemann)
            + np.einsum("adbc->abcd", riemann)
        ).max(),
        "Ricci symmetry": np.abs(ricci - ricci.T).max(),
    }


def tensor_symmetry_suite(seed: int, samples: int) -> SuiteResult:
    checks = _Checks(SuiteName.TENSOR_SYMMETRY)
    for n in (3, 4):
        box = default_ambient_box(n)
        for sigma in SYMMETRY_SIGMAS:
            text = sigma.replace("x1+x2+z", "+".join([f"x{i}" for i in range(1, n)] + ["z"]))
            space = ConformalSpace.from_text(text, n)
            for point in Sampler(count=samples, seed=seed, box=box).points():
                data = curvature_at(space, point)
                scale = max(1.0, float(np.abs(data.riemann).max()))
                for identity, defect in _symmetry_defects(data.riemann, data.ricci).items():
                    checks.check(
                        defect < SYMMETRY_TOLERANCE * scale,
                        f"{identity} fails for sigma={text} at {point.tolist()} ({defect:.3e})",
                    )
    return checks.result()


def _sphere_sigma(n: int) -> str:
    return "(1+" + "+".join(f"{v}^2" for v in [f"x{i}" for i in range(1, n)] + ["z"]) + ")/2"


def constant_curvature_suite(seed: int, samples: int) -> SuiteResult:
    checks = _Checks(SuiteName.CONSTANT_CURVATURE)
    for n in (3, 4, 5):
        sampler = Sampler(count=samples, seed=seed, box=default_ambient_box(n))
        for expected, sigma in CONSTANT_CURVATURE:
            text = _sphere_sigma(n) if sigma == "sphere" else sigma
            space = ConformalSpace.from_text(text, n)
            for index, point in enumerate(sampler.points()):
                rng = sampler.rng(index)
                X, Y = rng.standard_normal(n), rng.standard_normal(n)
                K = sectional(space, point, X, Y)
                checks.check(
                    abs(K - float(expected)) < CURVATURE_TOLERANCE,
                    f"K={K:.12g} for sigma={text} at {point.tolist()}, expected {expected}",
                )
    return checks.result()


async def family_catalog_suite(seed: int, samples: int, jobs: int = 1) -> SuiteResult:
    checks = _Checks(SuiteName.FAMILY_CATALOG)
    for name in FamilyName:
        spec = catalog(name)
        verdict = await spec.verify(spec.sampler(samples, seed), jobs=jobs)
        detail = f"{name}: {verdict.kind.value}, expected {spec.expected.value}"
        if verdict.counterexample is not None:
            detail += f" ({verdict.counterexample})"
        checks.check(verdict.kind == spec.expected, detail)
    return checks.result()


@logfire.instrument("selftest.run")
async def run_selftest(
    seed: int = 0,
    samples: int = 20,
    jobs: int = 1,
    suites: Sequence[SuiteName | str] | None = None,
) -> SelftestReport:
    """Run the requested suites (all by default) in a fixed order."""
    selected = [SuiteName(s) for s in suites] if suites else list(SuiteName)
    report = SelftestReport(seed=seed)
    for name in SuiteName:
        if name not in selected:
            continue
        match name:
            case SuiteName.JET_ORACLE:
                result = jet_oracle_suite(seed, samples)
            case SuiteName.TENSOR_SYMMETRY:
                result = tensor_symmetry_suite(seed, samples)
            case SuiteName.CONSTANT_CURVATURE:
                result = constant_curvature_suite(seed, samples)
            case SuiteName.FAMILY_CATALOG:
                result = await family_catalog_suite(seed, samples, jobs)
        logfire.info("selftest.suite", name=result.name, passed=result.passed, checks=result.checks)
        report.suites.append(result)
    return report
