"""Command-line entry point ``fbh``.

Exit codes: 0 when the claim holds, 1 when it is violated, 2 on usage errors.
"""

import argparse
import asyncio
import sys
from typing import Sequence

import logfire_api as logfire
from pydantic import BaseModel, ConfigDict, ValidationError

from .config import OutputFormat, RunConfig, Tolerances, default_seed
from .errors import (
    ConstraintError,
    ExpressionSyntaxError,
    NoAdmissibleSampleError,
    UnboundIdentifierError,
    VerificationError,
)
from .expr import Binary, Expr, parse
from .families import AnsatzEquation, ansatz_reduce, catalog, family_names
from .geometry import (
    ConformalSpace,
    CurvatureClaim,
    ImmersionChart,
    curvature_scan,
    default_ambient_box,
)
from .reports import (
    AnsatzReport,
    CurvatureReport,
    SelftestReport,
    VerifyReport,
    format_report,
)
from .sampling import ErrorPolicy, Sampler
from .selftest import run_selftest
from .verification import VerdictKind, sample_residuals, verdict_from

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_USAGE = 2

# chart box for custom hypersurfaces
DEFAULT_CHART_BOX = (-2.0, 2.0)

USAGE_ERRORS = (
    ExpressionSyntaxError,
    UnboundIdentifierError,
    ConstraintError,
    ValidationError,
    ValueError,
)


class UsageError(ValueError):
    """The command line does not describe a runnable check."""


class CommandResult(BaseModel):
    exit_code: int
    report: VerifyReport | CurvatureReport | AnsatzReport | SelftestReport


class _Target(BaseModel):
    """What ``verify`` checks: a space, a chart, a weight and its sampling."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    space: ConformalSpace
    chart: ImmersionChart
    f: Expr
    parameters: dict[str, float]
    sampler: Sampler
    tolerances: Tolerances
    expected: VerdictKind | None


def parse_hyperplane(text: str) -> tuple[float, ...]:
    """``"a1,...,am;a_{m+1}"`` to the coefficient tuple."""
    try:
        slopes, height = text.split(";")
        values = [float(v) for v in slopes.split(",") if v.strip()] + [float(height)]
    except ValueError as err:
        raise UsageError(f"Hyperplane must read 'a1,...,am;a_(m+1)', got {text!r}") from err
    return tuple(values)


def parse_parameters(items: Sequence[str]) -> dict[str, float]:
    parameters = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"Parameter must read name=value, got {item!r}")
        parameters[name.strip()] = float(value)
    return parameters


def _box(cfg: RunConfig, dim: int, default: list[tuple[float, float]]) -> list[tuple[float, float]]:
    return [cfg.box] * dim if cfg.box is not None else default


def _verify_target(cfg: RunConfig) -> _Target:
    if cfg.family is not None:
        spec = catalog(
            cfg.family,
            cfg.m,
            cfg.parameters,
            exponent_shift=cfg.exponent_shift,
            f_factor=cfg.f_factor,
        )
        return _Target(
            space=spec.space,
            chart=spec.chart,
            f=spec.f,
            parameters=spec.parameters,
            sampler=Sampler(count=cfg.samples, seed=cfg.seed, box=_box(cfg, spec.m, spec.box)),
            tolerances=spec.tolerances(cfg.tolerances),
            expected=spec.expected,
        )

    if cfg.sigma is None or (cfg.hyperplane is None) == (cfg.immersion is None):
        raise UsageError("verify needs --family, or --sigma with one of --hyperplane/--immersion")
    if cfg.hyperplane is not None:
        chart = ImmersionChart.hyperplane(parse_hyperplane(cfg.hyperplane), cfg.orientation)
    else:
        chart = ImmersionChart.from_text(
            cfg.immersion.split("|"), cfg.parameters, cfg.orientation
        )
    if cfg.m is not None and cfg.m != chart.m:
        raise UsageError(f"--m {cfg.m} does not match a chart of dimension {chart.m}")
    f = parse(cfg.f or "1")
    if cfg.f_factor is not None:
        f = Binary(op="*", left=f, right=parse(cfg.f_factor))
    space = ConformalSpace.from_text(cfg.sigma, chart.n, cfg.guards, cfg.parameters)
    return _Target(
        space=space,
        chart=chart,
        f=f,
        parameters=cfg.parameters,
        sampler=Sampler(
            count=cfg.samples,
            seed=cfg.seed,
            box=_box(cfg, chart.m, [DEFAULT_CHART_BOX] * chart.m),
        ),
        tolerances=cfg.tolerances,
        expected=None,
    )


@logfire.instrument("cli.verify")
async def cmd_verify(cfg: RunConfig) -> CommandResult:
    """Classify a family member or a custom hypersurface.

    Passes when the verdict is the family's expected one or, for custom input,
    when it is not ``not_f_biharmonic``.
    """
    target = _verify_target(cfg)
    reports = await sample_residuals(
        target.space,
        target.chart,
        target.f,
        target.sampler,
        parameters=target.parameters,
        tolerances=target.tolerances,
        jobs=cfg.jobs,
        error_policy=ErrorPolicy.RAISE,
    )
    verdict = verdict_from(reports, target.tolerances)
    if target.expected is not None:
        passed = verdict.kind == target.expected
    else:
        passed = verdict.kind != VerdictKind.NOT_F_BIHARMONIC
    logfire.info("cli.verify.completed", verdict=verdict.kind.value, passed=passed)
    report = VerifyReport.build(
        cfg,
        reports,
        verdict,
        target.expected.value if target.expected else None,
        passed,
    )
    return CommandResult(exit_code=EXIT_OK if passed else EXIT_VIOLATED, report=report)


@logfire.instrument("cli.curvature")
async def cmd_curvature(cfg: RunConfig) -> CommandResult:
    """Test a sign claim on sectional curvatures at random points and planes."""
    if cfg.family is not None:
        space = catalog(cfg.family, cfg.m, cfg.parameters).space
    elif cfg.sigma is not None:
        n = cfg.n or (cfg.m + 1 if cfg.m is not None else None)
        if n is None:
            raise UsageError("curvature needs --n (or --m) with --sigma")
        space = ConformalSpace.from_text(cfg.sigma, n, cfg.guards, cfg.parameters)
    else:
        raise UsageError("curvature needs --sigma or --family")
    claim = CurvatureClaim(cfg.expect or CurvatureClaim.NEGATIVE)
    sampler = Sampler(
        count=cfg.samples,
        seed=cfg.seed,
        box=_box(cfg, space.n, default_ambient_box(space.n)),
    )
    scan = await curvature_scan(
        space,
        sampler,
        claim,
        jobs=cfg.jobs,
        zero_tolerance=cfg.tolerances.zero_curvature,
    )
    report = CurvatureReport.build(cfg, scan)
    return CommandResult(exit_code=EXIT_OK if scan.holds else EXIT_VIOLATED, report=report)


@logfire.instrument("cli.ansatz")
async def cmd_ansatz(cfg: RunConfig) -> CommandResult:
    """Exact exponent quadratic of the power ansatz."""
    if cfg.m is None:
        raise UsageError("ansatz needs --m")
    reduction = ansatz_reduce(AnsatzEquation(cfg.equation or AnsatzEquation.PQ1), cfg.m)
    report = AnsatzReport(
        equation=reduction.equation.value,
        m=str(reduction.m),
        quadratic=[str(c) for c in reduction.coefficients],
        roots=[str(r) for r in reduction.roots],
        power=reduction.power_text,
        scale=str(reduction.scale),
        text=str(reduction),
    )
    return CommandResult(exit_code=EXIT_OK, report=report)


@logfire.instrument("cli.selftest")
async def cmd_selftest(cfg: RunConfig) -> CommandResult:
    """Run every built-in suite; passes when all of them do."""
    report = await run_selftest(seed=cfg.seed, samples=cfg.samples, jobs=cfg.jobs)
    return CommandResult(exit_code=EXIT_OK if report.passed else EXIT_VIOLATED, report=report)


COMMANDS = {
    "verify": cmd_verify,
    "curvature": cmd_curvature,
    "ansatz": cmd_ansatz,
    "selftest": cmd_selftest,
}


def _parse_box(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(","))
    except ValueError as err:
        raise argparse.ArgumentTypeError(f"box must read 'lo,hi', got {text!r}") from err
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"empty box [{lo}, {hi}]")
    return lo, hi


def _add_common(parser: argparse.ArgumentParser, samples: int) -> None:
    parser.add_argument("--samples", type=int, default=samples, help="Number of sample points.")
    parser.add_argument("--seed", type=int, default=None, help="64-bit seed (default: $FBH_SEED or 0).")
    parser.add_argument("--jobs", type=int, default=1, help="Samples evaluated concurrently.")
    parser.add_argument("--box", type=_parse_box, default=None, help="Sampling interval 'lo,hi' for every coordinate.")
    parser.add_argument(
        "--format",
        dest="output_format",
        choices=[f.value for f in OutputFormat],
        default=OutputFormat.TEXT.value,
    )
    parser.add_argument("--output", default=None, help="Write the report here instead of stdout.")
    parser.add_argument(
        "--tol-verify", type=float, default=None, help="Vanishing threshold (default: the family's own, or 1e-8)."
    )
    parser.add_argument("--tol-falsify", type=float, default=None, help="Violation threshold (default 1e-3).")


def _add_space(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--family", choices=family_names(), default=None)
    parser.add_argument("--m", type=int, default=None, help="Hypersurface dimension.")
    parser.add_argument("--sigma", default=None, help="Conformal factor in x1.., z.")
    parser.add_argument("--guard", dest="guards", action="append", default=[], help="Expression that must stay positive.")
    parser.add_argument("--param", dest="parameters", action="append", default=[], help="Parameter binding name=value.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fbh",
        description="Verify f-biharmonic hypersurfaces of conformally flat spaces.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", help="Classify a hypersurface from sampled residuals.")
    _add_space(verify)
    verify.add_argument("--hyperplane", default=None, help="'a1,...,am;a_(m+1)'")
    verify.add_argument("--immersion", default=None, help="'expr1|expr2|...|expr_(m+1)'")
    verify.add_argument("--orientation", type=int, choices=[1, -1], default=1)
    verify.add_argument("--f", default=None, help="Positive weight in x1..xm (z is the height).")
    verify.add_argument("--f-factor", default=None, help="Expression multiplying f.")
    verify.add_argument("--exponent-shift", type=float, default=0.0, help="Shift of a family's exponent.")
    _add_common(verify, samples=100)

    curvature = commands.add_parser("curvature", help="Check the sign of sectional curvatures.")
    _add_space(curvature)
    curvature.add_argument("--n", type=int, default=None, help="Ambient dimension.")
    curvature.add_argument("--expect", choices=[c.value for c in CurvatureClaim], default="negative")
    _add_common(curvature, samples=100)

    ansatz = commands.add_parser("ansatz", help="Exact exponent quadratic of the power ansatz.")
    ansatz.add_argument("--equation", choices=[e.value for e in AnsatzEquation], default="pq1")
    ansatz.add_argument("--m", type=int, required=True)
    ansatz.add_argument("--format", dest="output_format", choices=[f.value for f in OutputFormat], default="text")
    ansatz.add_argument("--output", default=None)

    selftest = commands.add_parser("selftest", help="Run the built-in consistency suites.")
    _add_common(selftest, samples=20)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = {k: v for k, v in vars(args).items() if v is not None}
    tolerances = {}
    if "tol_verify" in values:
        tolerances["verify"] = values.pop("tol_verify")
    if "tol_falsify" in values:
        tolerances["falsify"] = values.pop("tol_falsify")
    if tolerances:
        values["tolerances"] = Tolerances(**tolerances)
    values["parameters"] = parse_parameters(values.get("parameters", []))
    values["guards"] = tuple(values.get("guards", ()))
    values.setdefault("seed", default_seed())
    return RunConfig(**values)


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output is None:
        sys.stdout.write(text)
    else:
        cfg.output.write_text(text)


def run(cfg: RunConfig) -> int:
    """Execute one command and write its report."""
    try:
        result = asyncio.run(COMMANDS[cfg.command](cfg))
    except (VerificationError, NoAdmissibleSampleError) as err:
        logfire.error("cli.failed", command=cfg.command, error=str(err))
        print(f"{cfg.command}: {err}", file=sys.stderr)
        return EXIT_VIOLATED
    except USAGE_ERRORS as err:
        print(f"{cfg.command}: {err}", file=sys.stderr)
        return EXIT_USAGE

    _emit(cfg, format_report(result.report, cfg.output_format))
    counterexample = getattr(getattr(result.report, "summary", None), "counterexample", None)
    if result.exit_code == EXIT_VIOLATED and counterexample is not None:
        print(f"{cfg.command}: first failure at {counterexample}", file=sys.stderr)
    return result.exit_code


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_USAGE if err.code else EXIT_OK
    try:
        cfg = config_from_args(args)
    except USAGE_ERRORS as err:
        print(f"{args.command}: {err}", file=sys.stderr)
        return EXIT_USAGE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
