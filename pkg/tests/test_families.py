from fractions import Fraction

import pytest

from giskard.fbiharmonic import FamilyName, Tolerances, VerdictKind, catalog, pro1_residual
from giskard.fbiharmonic.errors import ConstraintError
from giskard.fbiharmonic.families import family_names
from giskard.fbiharmonic.geometry import ChartKind

F_BIHARMONIC_MEMBERS = [
    ("tr1", None, {}),
    ("tr4", None, {}),
    ("tr4", None, {"i": 2, "c1": 2.0}),
    ("pqe1_i", 3, {}),
    ("pqe1_i", 5, {}),
    ("pqe1_ii", 3, {}),
    ("pqe1_ii", 5, {}),
    ("pqe1_ii", 6, {}),
    ("pqe1_ii", 8, {}),
    ("pc2_i", 3, {}),
    ("pc2_i", 5, {}),
    ("pc2_ii", 3, {}),
    ("pc2_ii", 5, {}),
    ("pc2_ii", 8, {}),
    ("tr6_sphere_slice", None, {"k": 6}),
    ("tr6_sphere_slice", None, {"k": 10}),
]


@pytest.mark.parametrize("name, m, parameters", F_BIHARMONIC_MEMBERS)
async def test_families_are_proper_f_biharmonic(name, m, parameters):
    spec = catalog(name, m, parameters)
    verdict = await spec.verify(spec.sampler(count=100, seed=1), jobs=4)
    assert verdict.kind == VerdictKind.F_BIHARMONIC_PROPER
    assert verdict.evidence.max_norm_residual_f < spec.tolerance
    assert verdict.evidence.max_norm_residual_bi > 1e-3
    assert verdict.evidence.max_grad_f > 1e-8
    assert verdict.counterexample is None


async def test_critical_exponent_at_m4_is_biharmonic():
    spec = catalog("m4_biharmonic")
    verdict = await spec.verify(spec.sampler(count=100, seed=1))
    assert verdict.kind == VerdictKind.BIHARMONIC_PROPER
    assert verdict.evidence.max_norm_residual_f < 1e-8
    assert verdict.evidence.max_norm_residual_bi < 1e-8
    assert verdict.evidence.max_abs_H > 0.0


@pytest.mark.parametrize("R", [0.5, 1.0, 2.0])
async def test_cylinder_family(R):
    spec = catalog("cylinder_cs", parameters={"R": R})
    verdict = await spec.verify(spec.sampler(count=100, seed=2))
    assert verdict.kind == VerdictKind.F_BIHARMONIC_PROPER
    assert verdict.evidence.max_norm_residual_f < 1e-10


@pytest.mark.parametrize(
    "a3, kind",
    [
        (0.0, VerdictKind.TOTALLY_GEODESIC),
        (1.0, VerdictKind.BIHARMONIC_PROPER),
        (0.5, VerdictKind.NOT_F_BIHARMONIC),
    ],
)
async def test_sphere_slices(a3, kind):
    spec = catalog("sphere_slice_biharmonic", parameters={"a3": a3})
    assert spec.expected == kind
    verdict = await spec.verify(spec.sampler(count=50, seed=3))
    assert verdict.kind == kind


@pytest.mark.parametrize("m", [2, 3, 5])
async def test_flat_plane(m):
    spec = catalog("flat_plane", m, {"a1": 0.5, f"a{m + 1}": 2.0})
    verdict = await spec.verify(spec.sampler(count=20))
    assert verdict.kind == VerdictKind.TOTALLY_GEODESIC


PERTURBED = [
    ("tr1", None),
    ("tr4", None),
    ("pqe1_i", 3),
    ("pqe1_ii", 5),
    ("pc2_i", 3),
    ("pc2_ii", 5),
    ("m4_biharmonic", None),
]


@pytest.mark.parametrize("name, m", PERTURBED)
async def test_shifted_exponent_is_detected(name, m):
    spec = catalog(name, m, exponent_shift=0.05)
    verdict = await spec.verify(spec.sampler(count=100, seed=1))
    assert verdict.kind == VerdictKind.NOT_F_BIHARMONIC
    assert verdict.evidence.max_norm_residual_f > 1e-3
    assert verdict.counterexample is not None


@pytest.mark.parametrize(
    "name, m", PERTURBED[:-1] + [("tr6_sphere_slice", None), ("cylinder_cs", None)]
)
async def test_perturbed_weight_is_detected(name, m):
    spec = catalog(name, m, f_factor="1+0.1*x1")
    verdict = await spec.verify(spec.sampler(count=100, seed=1))
    assert verdict.kind == VerdictKind.NOT_F_BIHARMONIC
    assert verdict.evidence.max_norm_residual_f > 1e-3


def test_exponent_shift_is_exact():
    assert catalog("pqe1_i", 3, exponent_shift=0.05).exponent == Fraction(-19, 20)
    assert catalog("pqe1_ii", 3, exponent_shift=Fraction(1, 13)).exponent == Fraction(4, 13)


def test_families_without_an_exponent_refuse_a_shift():
    with pytest.raises(ConstraintError):
        catalog("cylinder_cs", exponent_shift=0.05)


@pytest.mark.parametrize(
    "name, m, parameters, parameter",
    [
        ("pqe1_i", 4, {}, "m"),
        ("pqe1_ii", 2, {}, "m"),
        ("pc2_ii", 2, {}, "m"),
        ("pqe1_i", 3, {"a1": 2.0}, "a1"),
        ("tr1", None, {"c": -1.0}, "c"),
        ("tr4", None, {"i": 3}, "i"),
        ("tr6_sphere_slice", None, {"k": 5}, "k"),
        ("cylinder_cs", None, {"R": 0.0}, "R"),
        ("pc2_i", 3, {"C": -1.0}, "C"),
        ("tr1", 3, {}, "m"),
        ("m4_biharmonic", 5, {}, "m"),
        ("flat_plane", 2, {"b": 1.0}, "b"),
    ],
)
def test_constraint_violations(name, m, parameters, parameter):
    with pytest.raises(ConstraintError) as err:
        catalog(name, m, parameters)
    assert err.value.parameter == parameter
    assert err.value.family == name


def test_unknown_family():
    with pytest.raises(ValueError):
        catalog("torus")


def test_catalog_lists_every_family():
    assert set(family_names()) == {name.value for name in FamilyName}
    for name in FamilyName:
        assert catalog(name).name == name


def test_dimension_defaults():
    assert catalog("tr1").m == 2
    assert catalog("m4_biharmonic").m == 4
    assert catalog("pqe1_ii").m == 3


def test_hyperplane_constant():
    spec = catalog("pqe1_ii", 3, {"a1": 1.0, "a2": -1.0, "a3": 1.0, "a4": 0.5})
    assert spec.chart.kind == ChartKind.HYPERPLANE
    assert spec.k2 == pytest.approx(0.25)
    assert catalog("cylinder_cs").k2 is None


@pytest.mark.parametrize(
    "name, m",
    [("tr1", None), ("pqe1_i", 3), ("pqe1_ii", 5), ("pc2_i", 3), ("pc2_ii", 5), ("tr6_sphere_slice", None)],
)
@pytest.mark.parametrize("exponent_shift", [0, 0.05])
async def test_hyperplane_condition_agrees_with_the_residuals(name, m, exponent_shift):
    if exponent_shift and name == "tr6_sphere_slice":
        pytest.skip("tr6_sphere_slice has no exponent")
    spec = catalog(name, m, exponent_shift=exponent_shift)
    tolerance = spec.tolerance
    sampler = spec.sampler(count=100, seed=6)
    verdict = await spec.verify(sampler)
    vanishing = verdict.evidence.max_norm_residual_f < tolerance
    assert vanishing or verdict.evidence.max_norm_residual_f > 1e-3
    defects = [abs(pro1_residual(spec.space, spec.chart, x)) for x in sampler.points()]
    if vanishing:
        assert max(defects) < tolerance
    else:
        assert max(defects) > 1e-3


def test_family_tolerance_yields_to_an_explicit_one():
    spec = catalog("tr6_sphere_slice")
    assert spec.tolerances().verify == 1e-6
    assert spec.tolerances(Tolerances(falsify=0.5)).verify == 1e-6
    assert spec.tolerances(Tolerances(falsify=0.5)).falsify == 0.5
    assert spec.tolerances(Tolerances(verify=1e-30)).verify == 1e-30


async def test_explicit_tolerance_changes_the_verdict():
    spec = catalog("pqe1_ii", 5)
    sampler = spec.sampler(count=10, seed=2)
    assert (await spec.verify(sampler)).kind == VerdictKind.F_BIHARMONIC_PROPER
    strict = await spec.verify(sampler, tolerances=Tolerances(verify=1e-30))
    assert strict.kind == VerdictKind.NOT_F_BIHARMONIC
