"""Central finite differences, used as an independent check on jet derivatives.

Each differentiation in a variable uses a central stencil with truncation
error ``O(step**2)``; mixed partials take the tensor product of the stencils.
"""

import itertools
from typing import Sequence

import numpy as np

from ..expr.nodes import Expr, ambient_variables
from .basis import MultiIndex

# multiple of the stencil rounding error that still counts as noise
ROUNDING_SAFETY = 30.0

# (offset in units of step, weight) per derivative order
_STENCILS: dict[int, tuple[tuple[int, float], ...]] = {
    0: ((0, 1.0),),
    1: ((1, 0.5), (-1, -0.5)),
    2: ((1, 1.0), (0, -2.0), (-1, 1.0)),
    3: ((2, 0.5), (1, -1.0), (-1, 1.0), (-2, -0.5)),
}


def default_step(alpha: MultiIndex, x: float) -> float:
    """``10^(|alpha| - 6) * max(1, |x|)``: larger steps for higher derivatives."""
    return 10.0 ** (sum(alpha) - 6) * max(1.0, abs(x))


def fd_oracle(
    e: Expr,
    point: Sequence[float],
    alpha: MultiIndex,
    step: float | None = None,
    variables: Sequence[str] | None = None,
    parameters: dict[str, float] | None = None,
) -> float:
    """Finite-difference estimate of ``d^alpha e`` at ``point``.

    Parameters
    ----------
    e : Expr
        Expression to differentiate.
    point : Sequence[float]
        Expansion point.
    alpha : MultiIndex
        Derivative multi-index, ``|alpha| <= 3``.
    step : float, optional
        Absolute step used for every variable. Defaults to :func:`default_step`.
    variables : Sequence[str], optional
        Names bound to the coordinates of ``point``; defaults to ``x1..x{n-1}, z``.
    parameters : dict[str, float], optional
        Parameter bindings.

    Raises
    ------
    DomainError
        When a stencil point leaves the domain of ``e``.
    """
    from ..expr.evaluate import Bindings, evaluate

    alpha = tuple(alpha)
    if len(alpha) != len(point):
        raise ValueError(f"Multi-index {alpha} does not match a point of size {len(point)}")
    if sum(alpha) > 3 or min(alpha, default=0) < 0:
        raise ValueError(f"fd_oracle supports 0 <= |alpha| <= 3, got {alpha}")
    names = tuple(variables) if variables is not None else ambient_variables(len(point))
    x0 = np.asarray(point, dtype=float)
    steps = np.array(
        [step if step is not None else default_step(alpha, x) for x in x0]
    )

    total = 0.0
    for stencil in itertools.product(*(_STENCILS[a] for a in alpha)):
        shifted = x0 + np.array([offset for offset, _ in stencil]) * steps
        weight = float(np.prod([w for _, w in stencil]))
        bindings = Bindings.at_point(shifted, parameters, names=names)
        total += weight * float(evaluate(e, bindings))
    return total / float(np.prod(steps ** np.array(alpha)))


def resolution(
    alpha: MultiIndex,
    point: Sequence[float],
    value: float,
    step: float | None = None,
) -> float:
    """Smallest difference :func:`fd_oracle` can resolve for ``d^alpha`` at ``point``.

    Rounding in the stencil values, ``eps * max(1, |value|)`` each, is amplified by
    the stencil weights and divided by ``step^|alpha|``; ``value`` is the
    expression's value at ``point``. Reported with a safety factor of
    ``ROUNDING_SAFETY``.
    """
    alpha = tuple(alpha)
    steps = [step if step is not None else default_step(alpha, x) for x in point]
    weight = float(np.prod([sum(abs(w) for _, w in _STENCILS[a]) for a in alpha]))
    scale = float(np.prod([h**a for h, a in zip(steps, alpha)]))
    return ROUNDING_SAFETY * float(np.finfo(float).eps) * max(1.0, abs(value)) * weight / scale


def oracle_agrees(exact: float, approx: float, tolerance: float, floor: float) -> bool:
    """``|exact - approx| <= tolerance * |exact|``, or within the absolute ``floor``."""
    return abs(exact - approx) <= max(tolerance * abs(exact), floor)
