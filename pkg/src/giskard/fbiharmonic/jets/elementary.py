"""Elementary functions over reals and jets with explicit domain checks."""

import math
from enum import StrEnum
from fractions import Fraction
from numbers import Real

from ..errors import DomainError, SingularPointError
from .jet import SINGULAR_THRESHOLD, Jet

# |value| below which abs is treated as non-differentiable
ABS_THRESHOLD = 1e-12


class Elementary(StrEnum):
    EXP = "exp"
    LN = "ln"
    SQRT = "sqrt"
    SIN = "sin"
    COS = "cos"
    ATAN = "atan"
    ABS = "abs"
    POW = "pow"


FUNCTION_NAMES = frozenset(e.value for e in Elementary if e is not Elementary.POW)


def _is_integer(r: Real) -> bool:
    return float(r).is_integer()


def _binomial_series(x0: float, r: Fraction | float, order: int) -> list[float]:
    coeffs = []
    binom = Fraction(1) if isinstance(r, Fraction) else 1.0
    for k in range(order + 1):
        coeffs.append(float(binom) * x0 ** (float(r) - k))
        binom = binom * (r - k) / (k + 1)
    return coeffs


def taylor_coefficients(
    fn: Elementary, x0: float, order: int, r: Fraction | float | None = None
) -> list[float]:
    """Coefficients ``f^(k)(x0) / k!`` for ``k = 0..order``."""
    match fn:
        case Elementary.EXP:
            e = math.exp(x0)
            return [e / math.factorial(k) for k in range(order + 1)]
        case Elementary.LN:
            return [math.log(x0)] + [
                (-1.0) ** (k + 1) / (k * x0**k) for k in range(1, order + 1)
            ]
        case Elementary.SQRT:
            return _binomial_series(x0, Fraction(1, 2), order)
        case Elementary.POW:
            return _binomial_series(x0, r, order)
        case Elementary.SIN | Elementary.COS:
            s, c = math.sin(x0), math.cos(x0)
            cycle = [s, c, -s, -c] if fn is Elementary.SIN else [c, -s, -c, s]
            return [cycle[k % 4] / math.factorial(k) for k in range(order + 1)]
        case Elementary.ATAN:
            q = 1.0 + x0 * x0
            derivs = [
                math.atan(x0),
                1.0 / q,
                -2.0 * x0 / q**2,
                (6.0 * x0 * x0 - 2.0) / q**3,
                24.0 * x0 * (1.0 - x0 * x0) / q**4,
            ]
            return [derivs[k] / math.factorial(k) for k in range(order + 1)]
    raise ValueError(f"No Taylor series for {fn}")


def _check_domain(fn: Elementary, x0: float, r: Fraction | float | None) -> None:
    match fn:
        case Elementary.LN | Elementary.SQRT if x0 <= 0.0:
            raise DomainError(f"{fn} of non-positive value", value=x0)
        case Elementary.ABS if abs(x0) < ABS_THRESHOLD:
            raise DomainError("abs at a vanishing value", value=x0)
        case Elementary.POW if not _is_integer(r) and x0 <= 0.0:
            raise DomainError(f"non-integer power {r} of non-positive value", value=x0)
        case Elementary.POW if _is_integer(r) and r < 0 and abs(x0) < SINGULAR_THRESHOLD:
            raise SingularPointError(f"negative power {r} of zero", value=x0)


def jet_elementary(
    a: Jet, fn: Elementary | str, r: Fraction | float | None = None
) -> Jet:
    """Truncated composition ``fn(a)``; ``r`` is the exponent of ``pow``."""
    fn = Elementary(fn)
    if fn is Elementary.POW and r is None:
        raise ValueError("pow requires an exponent")
    x0 = a.value
    _check_domain(fn, x0, r)
    if fn is Elementary.ABS:
        return a if x0 > 0 else -a
    if fn is Elementary.POW and _is_integer(r):
        return a.integer_power(int(r))
    return a.series(taylor_coefficients(fn, x0, a.order, r))


def real_elementary(
    x: float, fn: Elementary | str, r: Fraction | float | None = None
) -> float:
    fn = Elementary(fn)
    x = float(x)
    _check_domain(fn, x, r)
    match fn:
        case Elementary.EXP:
            return math.exp(x)
        case Elementary.LN:
            return math.log(x)
        case Elementary.SQRT:
            return math.sqrt(x)
        case Elementary.SIN:
            return math.sin(x)
        case Elementary.COS:
            return math.cos(x)
        case Elementary.ATAN:
            return math.atan(x)
        case Elementary.ABS:
            return abs(x)
        case Elementary.POW:
            if _is_integer(r):
                return x ** int(r)
            return x ** float(r)


def apply_elementary(x, fn: Elementary | str, r: Fraction | float | None = None):
    """Dispatch on the scalar kind: jets compose, reals evaluate."""
    if isinstance(x, Jet):
        return jet_elementary(x, fn, r)
    return real_elementary(x, fn, r)
