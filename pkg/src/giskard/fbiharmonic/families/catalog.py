"""Explicit f-biharmonic hypersurfaces of conformally flat spaces.

Every family bundles the conformal factor, the immersion, the weight ``f`` and
the verdict the verifier must reach on it. Weights are written in chart
variables; a ``z`` in a weight stands for the height of the hyperplane.
"""

import math
from enum import StrEnum
from fractions import Fraction
from typing import Callable, Sequence

from pydantic import BaseModel, ConfigDict, Field

from ..config import Tolerances
from ..errors import ConstraintError
from ..expr import Binary, Constant, Expr, parse
from ..geometry import ConformalSpace, ImmersionChart
from ..sampling import ErrorPolicy, Sampler
from ..verification import Verdict, VerdictKind, classify
from .ansatz import critical_exponent

# relative tolerance of the sum-of-squares constraints on hyperplane slopes
SLOPE_TOLERANCE = 1e-9


class FamilyName(StrEnum):
    TR1 = "tr1"
    TR4 = "tr4"
    PQE1_I = "pqe1_i"
    PQE1_II = "pqe1_ii"
    PC2_I = "pc2_i"
    PC2_II = "pc2_ii"
    TR6_SPHERE_SLICE = "tr6_sphere_slice"
    CYLINDER_CS = "cylinder_cs"
    FLAT_PLANE = "flat_plane"
    SPHERE_SLICE_BIHARMONIC = "sphere_slice_biharmonic"
    M4_BIHARMONIC = "m4_biharmonic"


class FamilySpec(BaseModel):
    """A fully bound family member.

    Attributes
    ----------
    name : FamilyName
        Family.
    m : int
        Hypersurface dimension.
    space : ConformalSpace
        Ambient space, with its domain guards.
    chart : ImmersionChart
        The hypersurface.
    f : Expr
        Positive weight in chart variables.
    parameters : dict[str, float]
        Bindings for the parameters of ``f``, ``sigma`` and the chart.
    box : list[tuple[float, float]]
        Default sampling box in chart variables.
    expected : VerdictKind
        What the verifier must report.
    tolerance : float
        Normalized residual below which a residual counts as vanishing.
    exponent : Fraction | None
        Power of the conformal factor's base, for power families.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: FamilyName
    m: int
    space: ConformalSpace
    chart: ImmersionChart
    f: Expr
    parameters: dict[str, float] = Field(default_factory=dict)
    box: list[tuple[float, float]]
    expected: VerdictKind
    tolerance: float = 1e-8
    exponent: Fraction | None = None

    @property
    def sigma(self) -> Expr:
        return self.space.sigma

    @property
    def k2(self) -> float | None:
        """``1 / (1 + sum a_i^2)`` for hyperplane charts."""
        if self.chart.coefficients is None:
            return None
        slopes = self.chart.coefficients[:-1]
        return 1.0 / (1.0 + sum(a * a for a in slopes))

    def sampler(
        self,
        count: int = 100,
        seed: int = 0,
        box: Sequence[tuple[float, float]] | None = None,
    ) -> Sampler:
        return Sampler(count=count, seed=seed, box=list(box or self.box))

    def tolerances(self, base: Tolerances | None = None) -> Tolerances:
        """``base`` with the family's vanishing threshold, unless ``base`` sets its own."""
        base = base or Tolerances()
        if "verify" in base.model_fields_set:
            return base
        return Tolerances.model_validate(base.model_dump() | {"verify": self.tolerance})

    async def verify(
        self,
        sampler: Sampler | None = None,
        *,
        tolerances: Tolerances | None = None,
        jobs: int = 1,
        error_policy: ErrorPolicy = ErrorPolicy.RAISE,
    ) -> Verdict:
        """Classify the family member with its own tolerance."""
        return await classify(
            self.space,
            self.chart,
            self.f,
            sampler or self.sampler(),
            self.tolerances(tolerances),
            parameters=self.parameters,
            jobs=jobs,
            error_policy=error_policy,
        )


class _Parameters:
    """Family parameters: defaults overridden by the caller, checked on access."""

    def __init__(self, family: FamilyName, defaults: dict[str, float], given: dict[str, float]):
        unknown = set(given) - set(defaults)
        if unknown:
            raise ConstraintError(
                f"Unknown parameters for {family}: {sorted(unknown)}",
                family=family,
                parameter=sorted(unknown)[0],
            )
        self.family = family
        self.values = {**defaults, **{k: float(v) for k, v in given.items()}}

    def __getitem__(self, name: str) -> float:
        return self.values[name]

    def positive(self, *names: str) -> None:
        for name in names:
            if not self.values[name] > 0.0:
                raise ConstraintError(
                    f"{self.family} needs {name} > 0, got {self.values[name]}",
                    family=self.family,
                    parameter=name,
                )

    def slopes(self, m: int) -> tuple[float, ...]:
        return tuple(self.values[f"a{i}"] for i in range(1, m + 2))

    def subset(self, *names: str) -> dict[str, float]:
        return {name: self.values[name] for name in names}


def _slope_defaults(m: int, slope: float = 1.0, height: float = 1.0) -> dict[str, float]:
    defaults = {f"a{i}": slope for i in range(1, m + 1)}
    defaults[f"a{m + 1}"] = height
    return defaults


def _check_sum_of_squares(family: FamilyName, a: Sequence[float], m: int) -> None:
    total = sum(v * v for v in a[:m])
    if abs(total - m) > SLOPE_TOLERANCE * m:
        raise ConstraintError(
            f"{family} needs a1^2 + ... + a{m}^2 = {m}, got {total}",
            family=family,
            parameter="a1",
        )


def _rational(value: Fraction) -> str:
    return f"({value.numerator}/{value.denominator})"


def _power(base: str, exponent: Fraction) -> str:
    return f"({base})^{_rational(exponent)}"


def _scaled(coefficient: float, e: Expr) -> Expr:
    return Binary(op="*", left=Constant(value=float(coefficient)), right=e)


def _affine_base(m: int) -> str:
    return "+".join([f"x{i}" for i in range(1, m + 1)] + ["z", "C"])


class _Member(BaseModel):
    """What a family builder produces before perturbation."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    sigma: str
    guards: tuple[str, ...]
    chart: ImmersionChart
    f: Expr
    parameters: dict[str, float]
    box: list[tuple[float, float]]
    expected: VerdictKind
    tolerance: float = 1e-8
    exponent: Fraction | None = None


Builder = Callable[[int, dict[str, float], Fraction], _Member]


def _no_shift(family: FamilyName, shift: Fraction) -> None:
    if shift:
        raise ConstraintError(
            f"{family} has no exponent to shift", family=family, parameter="exponent_shift"
        )


def _tr1(m: int, given: dict[str, float], shift: Fraction) -> _Member:
    p = _Parameters(FamilyName.TR1, {"c": 1, "c1": 1, "c2": 1, **_slope_defaults(2)}, given)
    p.positive("c", "c1", "c2", "a1", "a2", "a3")
    a = p.slopes(2)
    exponent = Fraction(-1) + shift
    f = parse("c*(c1*z+c2)^2/c1")
    return _Member(
        sigma=_power("c1*z+c2", exponent),
        guards=("c1*z+c2",),
        chart=ImmersionChart.hyperplane(a),
        f=_scaled(math.sqrt(1 + a[0] ** 2 + a[1] ** 2), f),
        parameters=p.subset("c", "c1", "c2"),
        box=[(0.0, 1.0)] * 2,
        expected=VerdictKind.F_BIHARMONIC_PROPER,
        exponent=exponent,
    )


def _tr4(m: int, given: dict[str, float], shift: Fraction) -> _Member:
    defaults = {"c": 1, "c1": 1, "c2": 1, "c3": 1, "c4": 1, "a3": 1, "i": 1}
    p = _Parameters(FamilyName.TR4, defaults, given)
    p.positive("c", "c1", "c2", "c3", "c4", "a3")
    if p["i"] not in (1.0, 2.0):
        raise ConstraintError("tr4 needs i in {1, 2}", family=FamilyName.TR4, parameter="i")
    xi = f"x{int(p['i'])}"
    exponent = Fraction(-1) + shift
    return _Member(
        sigma=f"1/(c1*{xi}+c2)*{_power('c3*z+c4', exponent)}",
        guards=(f"c1*{xi}+c2", "c3*z+c4"),
        chart=ImmersionChart.hyperplane((0.0, 0.0, p["a3"])),
        f=parse(f"c*(c3*a3+c4)^2*(c1*{xi}+c2)/c3"),
        parameters=p.subset("c", "c1", "c2", "c3", "c4", "a3"),
        box=[(0.0, 1.0)] * 2,
        expected=VerdictKind.F_BIHARMONIC_PROPER,
        exponent=exponent,
    )


def _z_power_hyperplane(family: FamilyName, m: int, given: dict[str, float]) -> tuple[_Parameters, tuple[float, ...]]:
    p = _Parameters(family, {"c": 1, **_slope_defaults(m)}, given)
    p.positive("c")
    a = p.slopes(m)
    _check_sum_of_squares(family, a, m)
    return p, a


def _pqe1_i(m: int, given: dict[str, float], shift: Fraction) -> _Member:
    if m == 4:
        raise ConstraintError("pqe1_i needs m != 4", family=FamilyName.PQE1_I, parameter="m")
    p, a = _z_power_hyperplane(FamilyName.PQE1_I, m, given)
    exponent = Fraction(-1) + shift
    return _Member(
        sigma=_power("z", exponent),
        guards=("z",),
        chart=ImmersionChart.hyperplane(a),
        f=_scaled((m + 1) ** ((4 - m) / 4), parse(f"c*{_power('z', Fraction(4 - m))}")),
        parameters=p.subset("c"),
        box=[(0.0, 1.0)] * m,
        expected=VerdictKind.F_BIHARMONIC_PROPER,
        exponent=exponent,
    )


def _pqe1_ii(m: int, given: dict[str, float], shift: Fraction) -> _Member:
    if m < 3 or m == 4:
        raise ConstraintError(
            f"pqe1_ii needs m >= 3 and m != 4, got m={m}",
            family=FamilyName.PQE1_II,
            parameter="m",
        )
    p, a = _z_power_hyperplane(FamilyName.PQE1_II, m, given)
    t = critical_exponent(m)
    coefficient = ((m * m - 2 * m) ** 2 / ((m + 1) * (m * m + 4) ** 2)) ** ((m - 4) / 4)
    weight_power = Fraction((4 - m) * (m + 2), m * m + 4)
    return _Member(
        sigma=_power("z", t + shift),
        guards=("z",),
        chart=ImmersionChart.hyperplane(a),
        f=_scaled(coefficient, parse(f"c*{_power('z', weight_power)}")),
        parameters=p.subset("c"),
        box=[(0.0, 1.0)] * m,
        expected=VerdictKind.F_BIHARMONIC_PROPER,
        exponent=t + shift,
    )


def _m4_biharmonic(m: int, given: dict[str, float], shift: Fraction) -> _Member:
    if m != 4:
        raise ConstraintError("m4_biharmonic needs m = 4", family=FamilyName.M4_BIHARMONIC, parameter="m")
    p, a = _z_power_hyperplane(FamilyName.M4_BIHARMONIC, 4, given)
    exponent = critical_exponent(4) + shift
    return _Member(
        sigma=_power("z", exponent),
        guards=("z",),
        chart=ImmersionChart.hyperplane(a),
        f=parse("c"),
        parameters=p.subset("c"),
        box=[(0.0, 1.0)] * 4,
        expected=VerdictKind.BIHARMONIC_PROPER,
        exponent=exponent,
    )


def _affine_hyperplane(family: FamilyName, m: int, given: dict[str, float]) -> _Parameters:
    if m < 2 or m == 4:
        raise ConstraintError(f"{family} needs m >= 2 and m != 4, got m={m}", family=family, parameter="m")
    p = _Parameters(family, {"c": 1, "C": 1, f"a{m + 1}": 1}, given)
    p.positive("c", f"a{m + 1}")
    if p["C"] < 0.0:
        raise ConstraintError(f"{family} needs C >= 0", family=family, parameter="C")
    return p


def _pc2_i(m: int, given: dict[str, float], shift: Fraction) -> _Member:
    p = _affine_hyperplane(FamilyName.PC2_I, m, given)
    base = _affine_base(m)
    exponent = Fraction(-1) + shift
    return _Member(
        sigma=_power(base, exponent),
        guards=(base,),
        chart=ImmersionChart.hyperplane((0.0,) * m + (p[f"a{m + 1}"],)),
        f=parse(f"c*{_power(base, Fraction(4 - m))}"),
        parameters=p.subset("c", "C"),
        box=[(0.0, 1.0)] * m,
        expected=VerdictKind.F_BIHARMONIC_PROPER,
        exponent=exponent,
    )


def _pc2_ii(m: int, given: dict[str, float], shift: Fraction) -> _Member:
    if m < 3:
        raise ConstraintError(f"pc2_ii needs m >= 3, got m={m}", family=FamilyName.PC2_II, parameter="m")
    p = _affine_hyperplane(FamilyName.PC2_II, m, given)
    base = _affine_base(m)
    t = critical_exponent(m)
    weight_power = Fraction((4 - m) * (m + 2), m * m + 4)
    return _Member(
        sigma=_power(base, t + shift),
        guards=(base,),
        chart=ImmersionChart.hyperplane((0.0,) * m + (p[f"a{m + 1}"],)),
        f=_scaled(float(t) ** ((m - 4) / 2), parse(f"c*{_power(base, weight_power)}")),
        parameters=p.subset("c", "C"),
        box=[(0.0, 1.0)] * m,
        expected=VerdictKind.F_BIHARMONIC_PROPER,
        exponent=t + shift,
    )


def _tr6_denominator() -> str:
    r = "((1+x1^2+x2^2)^(1/2))"
    return f"-2*{r}*z-2*({r}^2+z^2)*atan(z/{r})+k*{r}^3*({r}^2+z^2)"


def _tr6(m: int, given: dict[str, float], shift: Fraction) -> _Member:
    _no_shift(FamilyName.TR6_SPHERE_SLICE, shift)
    p = _Parameters(FamilyName.TR6_SPHERE_SLICE, {"k": 6}, given)
    if p["k"] < 6.0:
        raise ConstraintError(
            f"tr6_sphere_slice needs k >= 6, got {p['k']}",
            family=FamilyName.TR6_SPHERE_SLICE,
            parameter="k",
        )
    denominator = _tr6_denominator()
    beta = f"2*(1+x1^2+x2^2)^(3/2)/({denominator})"
    return _Member(
        sigma=f"{beta}*(1+x1^2+x2^2+z^2)/2",
        guards=(denominator,),
        chart=ImmersionChart.hyperplane((0.0, 0.0, 0.0)),
        f=parse("k^2*(1+x1^2+x2^2)^2/4"),
        parameters=p.subset("k"),
        box=[(-1.0, 1.0)] * 2,
        expected=VerdictKind.F_BIHARMONIC_PROPER,
        tolerance=1e-6,
    )


def _cylinder(m: int, given: dict[str, float], shift: Fraction) -> _Member:
    _no_shift(FamilyName.CYLINDER_CS, shift)
    p = _Parameters(FamilyName.CYLINDER_CS, {"R": 1}, given)
    p.positive("R")
    chart = ImmersionChart.from_text(
        ["R*cos(x1/R)", "R*sin(x1/R)", "x2"], parameters=p.subset("R"), orientation=-1
    )
    return _Member(
        sigma="1",
        guards=(),
        chart=chart,
        f=parse("(exp(x2/R)+exp(-x2/R))/2"),
        parameters=p.subset("R"),
        box=[(-1.0, 1.0)] * 2,
        expected=VerdictKind.F_BIHARMONIC_PROPER,
        tolerance=1e-10,
    )


def _flat_plane(m: int, given: dict[str, float], shift: Fraction) -> _Member:
    _no_shift(FamilyName.FLAT_PLANE, shift)
    p = _Parameters(FamilyName.FLAT_PLANE, _slope_defaults(m, 0.0, 0.0), given)
    return _Member(
        sigma="1",
        guards=(),
        chart=ImmersionChart.hyperplane(p.slopes(m)),
        f=parse("1"),
        parameters={},
        box=[(-1.0, 1.0)] * m,
        expected=VerdictKind.TOTALLY_GEODESIC,
    )


def _sphere_slice(m: int, given: dict[str, float], shift: Fraction) -> _Member:
    _no_shift(FamilyName.SPHERE_SLICE_BIHARMONIC, shift)
    p = _Parameters(FamilyName.SPHERE_SLICE_BIHARMONIC, {"a3": 1}, given)
    height = p["a3"]
    if height == 0.0:
        expected = VerdictKind.TOTALLY_GEODESIC
    elif abs(height) == 1.0:
        expected = VerdictKind.BIHARMONIC_PROPER
    else:
        expected = VerdictKind.NOT_F_BIHARMONIC
    return _Member(
        sigma="(1+x1^2+x2^2+z^2)/2",
        guards=(),
        chart=ImmersionChart.hyperplane((0.0, 0.0, height)),
        f=parse("1"),
        parameters={},
        box=[(-1.0, 1.0)] * 2,
        expected=expected,
    )


_BUILDERS: dict[FamilyName, tuple[Builder, int | None]] = {
    FamilyName.TR1: (_tr1, 2),
    FamilyName.TR4: (_tr4, 2),
    FamilyName.PQE1_I: (_pqe1_i, None),
    FamilyName.PQE1_II: (_pqe1_ii, None),
    FamilyName.PC2_I: (_pc2_i, None),
    FamilyName.PC2_II: (_pc2_ii, None),
    FamilyName.TR6_SPHERE_SLICE: (_tr6, 2),
    FamilyName.CYLINDER_CS: (_cylinder, 2),
    FamilyName.FLAT_PLANE: (_flat_plane, None),
    FamilyName.SPHERE_SLICE_BIHARMONIC: (_sphere_slice, 2),
    FamilyName.M4_BIHARMONIC: (_m4_biharmonic, 4),
}

DEFAULT_M = 3


def family_names() -> list[str]:
    return [name.value for name in FamilyName]


def catalog(
    name: FamilyName | str,
    m: int | None = None,
    parameters: dict[str, float] | None = None,
    *,
    exponent_shift: float | Fraction = 0,
    f_factor: str | None = None,
) -> FamilySpec:
    """Build a family member.

    Parameters
    ----------
    name : FamilyName | str
        Family name.
    m : int, optional
        Hypersurface dimension; families defined for one dimension only use it
        by default, the others default to 3.
    parameters : dict[str, float], optional
        Overrides of the family's constants (``c``, ``c1``.., ``C``, ``k``,
        ``R``, slopes ``a1..a{m+1}``).
    exponent_shift : float | Fraction
        Added to the power of the conformal factor; ``f`` keeps its
        unperturbed form.
    f_factor : str, optional
        Expression multiplying ``f``.

    Raises
    ------
    ConstraintError
        When ``m`` or a parameter is not admissible for the family.
    ValueError
        When ``name`` is not a family.
    """
    name = FamilyName(name)
    builder, fixed_m = _BUILDERS[name]
    if m is None:
        m = fixed_m or DEFAULT_M
    if fixed_m is not None and m != fixed_m:
        raise ConstraintError(f"{name} needs m = {fixed_m}, got m={m}", family=name, parameter="m")
    if not 1 <= m <= 9:
        raise ConstraintError(f"m must be in [1, 9], got m={m}", family=name, parameter="m")

    shift = Fraction(str(exponent_shift)) if isinstance(exponent_shift, float) else Fraction(exponent_shift)
    member = builder(m, dict(parameters or {}), shift)

    f = member.f
    if f_factor is not None:
        f = Binary(op="*", left=f, right=parse(f_factor))
    chart = member.chart
    space = ConformalSpace.from_text(
        member.sigma, n=m + 1, guards=member.guards, parameters=member.parameters
    )
    return FamilySpec(
        name=name,
        m=m,
        space=space,
        chart=chart,
        f=f,
        parameters=member.parameters,
        box=member.box,
        expected=member.expected,
        tolerance=member.tolerance,
        exponent=member.exponent,
    )

