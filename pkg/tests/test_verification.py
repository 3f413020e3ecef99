import pytest

from giskard.fbiharmonic import (
    ConformalSpace,
    ImmersionChart,
    Sampler,
    Tolerances,
    VerdictKind,
    catalog,
    classify,
    parse,
    residual_at,
    umbilical_theory_check,
)
from giskard.fbiharmonic.errors import DomainError, UmbilicityError
from giskard.fbiharmonic.verification import ResidualReport, verdict_from, weighted_ode_defect


def _cylinder(R: float) -> ImmersionChart:
    return ImmersionChart.from_text(
        ["R*cos(x1/R)", "R*sin(x1/R)", "x2"], parameters={"R": R}, orientation=-1
    )


@pytest.mark.parametrize("R", [0.5, 1.0, 2.0])
def test_cylinder_is_f_biharmonic_but_not_biharmonic(R):
    space = ConformalSpace.from_text("1", 3)
    f = parse("(exp(x2/R)+exp(-x2/R))/2")
    for x in ([0.0, 0.0], [0.4, -0.8], [-1.0, 1.0]):
        report = residual_at(space, _cylinder(R), f, x, {"R": R})
        assert report.error_f < 1e-10
        assert report.H == pytest.approx(1 / (2 * R), abs=1e-10)
        assert abs(report.r1_bi) == pytest.approx(report.H / R**2, abs=1e-10)
        assert report.error_bi > 1e-3


def test_weight_must_be_positive():
    space = ConformalSpace.from_text("1", 3)
    with pytest.raises(DomainError):
        residual_at(space, _cylinder(1.0), parse("x2"), [0.0, -0.5], {"R": 1.0})


def test_residual_lines_are_normalized_by_their_terms():
    space = ConformalSpace.from_text("z", 3)
    report = residual_at(space, ImmersionChart.hyperplane((0.0, 0.0, 1.0)), parse("1"), [0.1, 0.2])
    # totally geodesic in the flat sense, but H = 1 in hyperbolic space
    assert report.H == pytest.approx(1.0)
    assert report.n1 >= 1.0
    assert report.n2 >= 1.0
    assert report.error_f == pytest.approx(max(abs(report.r1_f) / report.n1, report.r2_f_norm / report.n2))


@pytest.mark.parametrize("weight", ["1", "1+x2^2", "(exp(x2/R)+exp(-x2/R))/2"])
def test_cylinder_reduces_to_a_linear_equation_for_f(weight):
    R = 1.5
    defect, reduced = weighted_ode_defect(
        ConformalSpace.from_text("1", 3), _cylinder(R), parse(weight), [0.2, 0.6], {"R": R}
    )
    assert defect == pytest.approx(reduced, rel=1e-10, abs=1e-12)


def _report(**overrides) -> ResidualReport:
    values = dict(
        x=[0.0, 0.0],
        H=0.5,
        normA2=0.5,
        ric_nn=0.0,
        f=1.0,
        grad_f_norm=1.0,
        r1_f=0.0,
        r2_f=[0.0, 0.0],
        r2_f_norm=0.0,
        r1_bi=1.0,
        r2_bi=[0.0, 0.0],
        r2_bi_norm=0.0,
        n1=2.0,
        n2=1.0,
        n1_bi=2.0,
        n2_bi=1.0,
        umbilic=False,
    )
    values.update(overrides)
    return ResidualReport(**values)


@pytest.mark.parametrize(
    "overrides, kind",
    [
        (dict(H=0.0, normA2=0.0), VerdictKind.TOTALLY_GEODESIC),
        (dict(H=0.0, normA2=0.3), VerdictKind.MINIMAL_NOT_GEODESIC),
        (dict(r1_bi=0.0), VerdictKind.BIHARMONIC_PROPER),
        (dict(), VerdictKind.F_BIHARMONIC_PROPER),
        (dict(grad_f_norm=0.0), VerdictKind.NOT_F_BIHARMONIC),
        (dict(r1_f=0.01), VerdictKind.NOT_F_BIHARMONIC),
    ],
)
def test_verdict_ladder(overrides, kind):
    verdict = verdict_from([_report(**overrides), _report(x=[1.0, 1.0], **overrides)])
    assert verdict.kind == kind


def test_verdict_keeps_the_first_counterexample():
    reports = [_report(), _report(x=[1.0, 2.0], r1_f=0.5), _report(r2_f_norm=0.9)]
    verdict = verdict_from(reports)
    assert verdict.kind == VerdictKind.NOT_F_BIHARMONIC
    assert verdict.counterexample.sample_index == 1
    assert verdict.counterexample.x == [1.0, 2.0]
    assert verdict.counterexample.term == "r1_f"
    assert verdict.counterexample.value == pytest.approx(0.25)
    assert verdict.evidence.f_biharmonic_points == 1


def test_verdict_counts_evidence():
    verdict = verdict_from([_report(), _report(umbilic=True)], Tolerances(verify=1e-6))
    assert verdict.evidence.samples == 2
    assert verdict.evidence.umbilic_points == 1
    assert verdict.evidence.max_norm_residual_bi == pytest.approx(0.5)
    assert verdict.counterexample is None


def test_verdict_needs_reports():
    with pytest.raises(ValueError):
        verdict_from([])


UMBILICAL_FAMILIES = [
    ("tr1", None),
    ("tr4", None),
    ("pqe1_i", 3),
    ("pqe1_i", 5),
    ("pqe1_ii", 3),
    ("pqe1_ii", 5),
    ("pc2_i", 3),
    ("pc2_ii", 5),
    ("tr6_sphere_slice", None),
]


@pytest.mark.parametrize("name, m", UMBILICAL_FAMILIES)
def test_umbilical_identities_on_family_points(name, m):
    spec = catalog(name, m)
    for x in spec.sampler(count=10, seed=4).points():
        check = umbilical_theory_check(spec.space, spec.chart, spec.f, x, spec.parameters)
        bound = max(spec.tolerance, 1e-8)
        assert check.f_form is not None and check.f_form < bound
        assert check.curvature_identity < bound
        assert check.codazzi < bound
        if check.ric_nn <= 0.0:
            assert check.margin >= -1e-10


def test_m4_has_no_f_form():
    spec = catalog("m4_biharmonic")
    x = spec.sampler(count=1).points()[0]
    check = umbilical_theory_check(spec.space, spec.chart, spec.f, x, spec.parameters)
    assert check.f_form is None
    assert check.codazzi < 1e-8


def test_umbilical_identities_need_an_umbilic_point():
    space = ConformalSpace.from_text("1", 3)
    with pytest.raises(UmbilicityError):
        umbilical_theory_check(space, _cylinder(1.0), parse("1"), [0.0, 0.0], {"R": 1.0})


def test_umbilical_identities_need_nonzero_mean_curvature():
    space = ConformalSpace.from_text("1", 3)
    with pytest.raises(DomainError):
        umbilical_theory_check(space, ImmersionChart.hyperplane((1.0, 0.0, 0.0)), parse("1"), [0.0, 0.0])


@pytest.mark.parametrize("weight", ["1", "1+x1^2", "exp(x2)"])
async def test_umbilical_slices_of_hyperbolic_space_are_never_f_biharmonic(weight):
    space = ConformalSpace.from_text("z", 3, guards=["z"])
    chart = ImmersionChart.hyperplane((0.5, -1.0, 2.0))
    sampler = Sampler.cube(2, -1.0, 1.0, count=30, seed=8)
    verdict = await classify(space, chart, parse(weight), sampler)
    assert verdict.kind == VerdictKind.NOT_F_BIHARMONIC
    assert verdict.evidence.umbilic_points == verdict.evidence.samples


async def test_flat_hyperplanes_are_totally_geodesic_for_any_weight():
    space = ConformalSpace.from_text("1", 3)
    chart = ImmersionChart.hyperplane((0.5, -1.0, 2.0))
    verdict = await classify(space, chart, parse("2+sin(x1)"), Sampler.cube(2, -1.0, 1.0, count=10))
    assert verdict.kind == VerdictKind.TOTALLY_GEODESIC


def test_residuals_below_the_falsify_threshold_are_inconclusive():
    reports = [_report(r1_f=1e-4), _report(x=[1.0, 2.0], r1_f=1e-4)]

    verdict = verdict_from(reports)
    assert verdict.kind == VerdictKind.NOT_F_BIHARMONIC
    assert verdict.inconclusive
    assert verdict.evidence.falsified_points == 0
    assert verdict.evidence.inconclusive_points == 2
    assert verdict.counterexample.sample_index == 0

    verdict = verdict_from(reports, Tolerances(falsify=1e-5))
    assert not verdict.inconclusive
    assert verdict.evidence.falsified_points == 2
    assert verdict.evidence.inconclusive_points == 0


def test_counterexample_prefers_a_clear_violation():
    reports = [_report(r1_f=1e-4), _report(x=[1.0, 2.0], r1_f=0.5)]
    assert verdict_from(reports).counterexample.sample_index == 1
    assert verdict_from(reports, Tolerances(falsify=1.0)).counterexample.sample_index == 0


def test_constant_weight_is_rejected_without_being_inconclusive():
    verdict = verdict_from([_report(grad_f_norm=0.0), _report(x=[1.0, 1.0], grad_f_norm=0.0)])
    assert verdict.kind == VerdictKind.NOT_F_BIHARMONIC
    assert not verdict.inconclusive
    assert verdict.counterexample is None


def test_falsify_threshold_cannot_be_below_verify():
    with pytest.raises(ValueError):
        Tolerances(verify=1e-2)
    assert Tolerances(verify=1e-2, falsify=1e-2).falsify == 1e-2
