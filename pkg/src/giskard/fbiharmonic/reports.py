"""Machine-readable and text reports for the command-line runs.

JSON keys are fixed by the models below and floats are written in their
shortest round-trip form, so an identical run gives byte-identical output.
Settings that do not change the result (worker count, output destination)
are left out of the echoed configuration.
"""

import csv
import io
from typing import Any, ClassVar, Sequence

from pydantic import BaseModel, Field

from .config import OutputFormat, RunConfig
from .errors import Counterexample
from .geometry import CurvatureScan
from .templates import render_report
from .verification import ResidualReport, Verdict

_UNECHOED = {"jobs", "output", "output_format"}


def echo_config(config: RunConfig) -> dict[str, Any]:
    return config.model_dump(mode="json", exclude=_UNECHOED)


class PointRow(BaseModel):
    x: list[float]
    H: float
    normA2: float
    ric_nn: float
    r1_f: float
    r2_f_norm: float
    r1_bi: float
    r2_bi_norm: float
    n1: float
    n2: float
    f: float

    @classmethod
    def from_residuals(cls, report: ResidualReport) -> "PointRow":
        return cls(**report.model_dump(include=set(cls.model_fields)))


class VerifySummary(BaseModel):
    verdict: str
    expected: str | None = None
    passed: bool
    max_norm_residual: float
    max_norm_residual_bi: float
    samples: int
    falsified_points: int
    inconclusive_points: int
    inconclusive: bool
    counterexample: Counterexample | None = None


class _Report(BaseModel):
    template: ClassVar[str]

    def csv_rows(self) -> list[dict[str, Any]]:
        raise NotImplementedError


class VerifyReport(_Report):
    template: ClassVar[str] = "verify.txt.j2"

    config: dict[str, Any]
    points: list[PointRow]
    summary: VerifySummary

    @classmethod
    def build(
        cls,
        config: RunConfig,
        reports: Sequence[ResidualReport],
        verdict: Verdict,
        expected: str | None,
        passed: bool,
    ) -> "VerifyReport":
        return cls(
            config=echo_config(config),
            points=[PointRow.from_residuals(r) for r in reports],
            summary=VerifySummary(
                verdict=verdict.kind.value,
                expected=expected,
                passed=passed,
                max_norm_residual=verdict.evidence.max_norm_residual_f,
                max_norm_residual_bi=verdict.evidence.max_norm_residual_bi,
                samples=verdict.evidence.samples,
                falsified_points=verdict.evidence.falsified_points,
                inconclusive_points=verdict.evidence.inconclusive_points,
                inconclusive=verdict.inconclusive,
                counterexample=verdict.counterexample,
            ),
        )

    def csv_rows(self) -> list[dict[str, Any]]:
        rows = []
        for point in self.points:
            row = {f"x{i}": v for i, v in enumerate(point.x, start=1)}
            row.update(point.model_dump(exclude={"x"}))
            rows.append(row)
        return rows


class CurvatureSummary(BaseModel):
    expect: str
    holds: bool
    min_K: float
    max_K: float
    samples: int
    witness: dict[str, Any]


class CurvatureReport(_Report):
    template: ClassVar[str] = "curvature.txt.j2"

    config: dict[str, Any]
    samples: list[dict[str, Any]]
    summary: CurvatureSummary

    @classmethod
    def build(cls, config: RunConfig, scan: CurvatureScan) -> "CurvatureReport":
        return cls(
            config=echo_config(config),
            samples=[s.model_dump() for s in scan.samples],
            summary=CurvatureSummary(
                expect=scan.expect.value,
                holds=scan.holds,
                min_K=scan.min_K,
                max_K=scan.max_K,
                samples=len(scan.samples),
                witness=scan.witness.model_dump(),
            ),
        )

    def csv_rows(self) -> list[dict[str, Any]]:
        rows = []
        for sample in self.samples:
            row = {f"p{i}": v for i, v in enumerate(sample["point"], start=1)}
            row["K"] = sample["K"]
            rows.append(row)
        return rows


class AnsatzReport(_Report):
    template: ClassVar[str] = "ansatz.txt.j2"

    equation: str
    m: str
    quadratic: list[str]
    roots: list[str]
    power: str
    scale: str
    text: str

    def csv_rows(self) -> list[dict[str, Any]]:
        a, b, c = self.quadratic
        return [
            {
                "equation": self.equation,
                "m": self.m,
                "a": a,
                "b": b,
                "c": c,
                "roots": " ".join(self.roots),
                "power": self.power,
                "scale": self.scale,
            }
        ]


class SuiteResult(BaseModel):
    name: str
    passed: bool
    checks: int
    detail: str = ""


class SelftestReport(_Report):
    template: ClassVar[str] = "selftest.txt.j2"

    seed: int
    suites: list[SuiteResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)

    def csv_rows(self) -> list[dict[str, Any]]:
        return [s.model_dump() for s in self.suites]


def to_csv(rows: list[dict[str, Any]]) -> str:
    buffer = io.StringIO()
    if rows:
        writer = csv.DictWriter(buffer, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    return buffer.getvalue()


def format_report(report: _Report, output_format: OutputFormat | str) -> str:
    match OutputFormat(output_format):
        case OutputFormat.JSON:
            return report.model_dump_json(indent=2, exclude_none=True) + "\n"
        case OutputFormat.CSV:
            return to_csv(report.csv_rows())
        case OutputFormat.TEXT:
            return render_report(report.template, report=report)
