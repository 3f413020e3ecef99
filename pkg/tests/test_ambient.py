import numpy as np
import pytest

from giskard.fbiharmonic import ConformalSpace, CurvatureClaim, Sampler, curvature_at, curvature_scan, sectional
from giskard.fbiharmonic.errors import (
    DegeneratePlaneError,
    DomainError,
    NoAdmissibleSampleError,
    UnboundIdentifierError,
)
from giskard.fbiharmonic.families import critical_exponent
from giskard.fbiharmonic.geometry import (
    default_ambient_box,
    power_family_sectional,
    ricci_normal_umbilical,
    sectional_closed_form,
)


def _sphere(n: int) -> str:
    names = [f"x{i}" for i in range(1, n)] + ["z"]
    return "(1+" + "+".join(f"{v}^2" for v in names) + ")/2"


@pytest.mark.parametrize("n", [3, 4, 5])
@pytest.mark.parametrize("expected, sigma", [(0.0, "1"), (-1.0, "z"), (1.0, None)])
def test_space_forms_have_constant_curvature(n, expected, sigma):
    space = ConformalSpace.from_text(sigma or _sphere(n), n)
    sampler = Sampler(count=200, seed=11, box=default_ambient_box(n))
    for index, point in enumerate(sampler.points()):
        rng = sampler.rng(index)
        K = sectional(space, point, rng.standard_normal(n), rng.standard_normal(n))
        assert K == pytest.approx(expected, abs=1e-8)


@pytest.mark.parametrize("m", [3, 5, 6, 8])
@pytest.mark.parametrize("affine", [False, True])
async def test_critical_power_families_are_negatively_curved(m, affine):
    t = critical_exponent(m)
    base = "+".join([f"x{i}" for i in range(1, m + 1)] + ["z", "1"]) if affine else "z"
    space = ConformalSpace.from_text(
        f"({base})^({t.numerator}/{t.denominator})", m + 1, guards=[base]
    )
    box = [(0.0, 1.0)] * m + [(0.5, 5.0)]
    scan = await curvature_scan(space, Sampler(count=1000, seed=5, box=box), "negative")
    assert scan.holds
    assert scan.max_K < 0.0
    assert len(scan.samples) == 1000


@pytest.mark.parametrize("affine", [False, True])
def test_sectional_curvature_matches_closed_forms(affine):
    m, t = 3, critical_exponent(3)
    base = "x1+x2+x3+z+1" if affine else "z"
    space = ConformalSpace.from_text(f"({base})^(3/13)", m + 1)
    sampler = Sampler(count=50, seed=2, box=[(0.0, 1.0)] * m + [(0.5, 3.0)])
    for index, point in enumerate(sampler.points()):
        rng = sampler.rng(index)
        X, Y = rng.standard_normal(m + 1), rng.standard_normal(m + 1)
        # frame and coordinate components span the same plane
        full = sectional(space, point, X, Y)
        frame = sectional_closed_form(space, point, X, Y)
        family = power_family_sectional(m, float(t), point, X, Y, affine=affine)
        assert full == pytest.approx(frame, rel=1e-9, abs=1e-12)
        assert full == pytest.approx(family, rel=1e-9, abs=1e-12)


def test_inverse_power_has_indefinite_sign():
    space = ConformalSpace.from_text("z^(-1)", 4)
    p = [0.0, 0.0, 0.0, 1.0]
    tangential = sectional(space, p, [1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0])
    vertical = sectional(space, p, [1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0])
    assert tangential == pytest.approx(-1.0)
    assert vertical == pytest.approx(1.0)


async def test_scan_reports_a_witness_against_the_claim():
    space = ConformalSpace.from_text("z^(-1)", 4)
    scan = await curvature_scan(space, Sampler.cube(4, 0.5, 2.0, count=200), CurvatureClaim.NEGATIVE)
    assert not scan.holds
    assert scan.witness.K == scan.max_K > 0.0


async def test_flat_space_scan_is_zero():
    space = ConformalSpace.from_text("1", 3)
    scan = await curvature_scan(space, Sampler(count=50, box=default_ambient_box(3)), "zero")
    assert scan.holds
    assert max(abs(scan.min_K), abs(scan.max_K)) < 1e-10


def test_riemann_symmetries():
    space = ConformalSpace.from_text("exp(x1*z/4)+1+x2^2", 3)
    data = curvature_at(space, [0.3, -0.4, 1.2])
    R = data.riemann
    assert np.allclose(R, -R.transpose(1, 0, 2, 3), atol=1e-12)
    assert np.allclose(R, -R.transpose(0, 1, 3, 2), atol=1e-12)
    assert np.allclose(R, R.transpose(2, 3, 0, 1), atol=1e-12)
    bianchi = R + np.einsum("acdb->abcd", R) + np.einsum("adbc->abcd", R)
    assert np.abs(bianchi).max() < 1e-12
    assert np.allclose(data.ricci, data.ricci.T, atol=1e-12)


def test_hyperbolic_ricci_is_minus_m_times_metric():
    space = ConformalSpace.from_text("z", 4)
    data = curvature_at(space, [0.1, 0.2, 0.3, 2.0])
    assert np.allclose(data.ricci, -3 * data.metric(), atol=1e-12)


def test_ricci_of_the_normal_matches_the_full_tensor():
    space = ConformalSpace.from_text("(x1+x2+z+1)^(-1)", 3)
    p = [0.2, 0.4, 1.5]
    xi0 = np.array([-1.0, -1.0, 1.0]) / np.sqrt(3.0)
    data = curvature_at(space, p)
    xi = data.sigma * xi0
    assert ricci_normal_umbilical(space, xi0, p) == pytest.approx(xi @ data.ricci @ xi, rel=1e-10)


def test_parallel_vectors_span_no_plane():
    space = ConformalSpace.from_text("z", 3)
    with pytest.raises(DegeneratePlaneError):
        sectional(space, [0.0, 0.0, 1.0], [1.0, 2.0, 0.0], [2.0, 4.0, 0.0])


def test_guards_and_sigma_floor_reject_points():
    space = ConformalSpace.from_text("z^(3/13)", 3, guards=["z"])
    with pytest.raises(DomainError):
        space.check_point([0.0, 0.0, -1.0])
    flat = ConformalSpace.from_text("z", 3)
    with pytest.raises(DomainError):
        flat.check_point([0.0, 0.0, 0.0])


async def test_scan_without_admissible_points():
    space = ConformalSpace.from_text("z", 3, guards=["-z"])
    sampler = Sampler(count=3, box=default_ambient_box(3), max_attempts=2)
    with pytest.raises(NoAdmissibleSampleError):
        await curvature_scan(space, sampler, "negative")


def test_parameters_must_be_bound_up_front():
    with pytest.raises(UnboundIdentifierError):
        ConformalSpace.from_text("c*z", 3)
    with pytest.raises(UnboundIdentifierError):
        ConformalSpace.from_text("z", 3, guards=["z-k"], parameters={"c": 1.0})
    assert ConformalSpace.from_text("c*z", 3, parameters={"c": 2.0}).sigma_at([0.0, 0.0, 1.0]) == 2.0
