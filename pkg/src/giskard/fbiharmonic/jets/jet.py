from enum import StrEnum
from numbers import Real
from typing import Sequence

import numpy as np

from ..errors import SingularPointError
from .basis import MAX_ORDER, JetBasis, MultiIndex, jet_basis

SINGULAR_THRESHOLD = 1e-300


class JetOp(StrEnum):
    """Binary operations closed on jets."""

    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    DIV = "div"


class Jet:
    """Truncated multivariate Taylor expansion of a scalar at a point.

    The coefficient stored for the multi-index ``alpha`` is
    ``d^alpha f / alpha!`` at the expansion point, laid out densely in the
    graded-lexicographic order of :class:`JetBasis`. Jets are immutable: every
    operation returns a new jet.

    Jets of different orders may be mixed; the result is truncated to the
    lower order. Mixing numbers of variables is an error.
    """

    __slots__ = ("basis", "coeffs")

    # make numpy scalars defer to the reflected jet operators
    __array_ufunc__ = None

    def __init__(self, basis: JetBasis, coeffs: np.ndarray):
        if coeffs.shape != (len(basis),):
            raise ValueError(
                f"Expected {len(basis)} coefficients for {basis}, got {coeffs.shape}"
            )
        coeffs.setflags(write=False)
        self.basis = basis
        self.coeffs = coeffs

    @classmethod
    def constant(cls, value: float, n_vars: int, order: int = 3) -> "Jet":
        basis = jet_basis(n_vars, order)
        coeffs = np.zeros(len(basis))
        coeffs[0] = value
        return cls(basis, coeffs)

    @classmethod
    def from_coefficients(
        cls, coefficients: dict[MultiIndex, float], n_vars: int, order: int = 3
    ) -> "Jet":
        """Build a jet from a sparse mapping; omitted entries read as 0."""
        basis = jet_basis(n_vars, order)
        coeffs = np.zeros(len(basis))
        for alpha, value in coefficients.items():
            coeffs[basis.position[tuple(alpha)]] = value
        return cls(basis, coeffs)

    @property
    def n_vars(self) -> int:
        return self.basis.n_vars

    @property
    def order(self) -> int:
        return self.basis.order

    @property
    def value(self) -> float:
        return float(self.coeffs[0])

    def coefficient(self, alpha: MultiIndex) -> float:
        """Taylor coefficient ``d^alpha f / alpha!``; 0 beyond the truncation order."""
        position = self.basis.position.get(tuple(alpha))
        if position is None:
            if len(alpha) != self.n_vars:
                raise ValueError(f"Multi-index {alpha} has wrong length")
            return 0.0
        return float(self.coeffs[position])

    def derivative(self, alpha: MultiIndex) -> float:
        """Partial derivative ``d^alpha f`` at the expansion point."""
        position = self.basis.position.get(tuple(alpha))
        if position is None:
            return self.coefficient(alpha)
        return float(self.coeffs[position] * self.basis.factorials[position])

    def to_dict(self) -> dict[MultiIndex, float]:
        """Sparse view: non-zero coefficients keyed by multi-index."""
        return {
            alpha: float(c)
            for alpha, c in zip(self.basis.indices, self.coeffs)
            if c != 0.0
        }

    def gradient(self) -> np.ndarray:
        if self.order < 1:
            raise ValueError("A jet of order 0 carries no first derivatives")
        return np.array(self.coeffs[1 : self.n_vars + 1])

    def hessian(self) -> np.ndarray:
        if self.order < 2:
            raise ValueError("A jet of order < 2 carries no second derivatives")
        n = self.n_vars
        out = np.empty((n, n))
        for i in range(n):
            for j in range(i, n):
                alpha = [0] * n
                alpha[i] += 1
                alpha[j] += 1
                out[i, j] = out[j, i] = self.derivative(tuple(alpha))
        return out

    def partial(self, var_index: int) -> "Jet":
        """Jet of the partial derivative in ``var_index``, one order lower."""
        if not 0 <= var_index < self.n_vars:
            raise IndexError(f"var_index {var_index} out of range")
        if self.order == 0:
            raise ValueError("Cannot differentiate a jet of order 0")
        src, dst, factor = self.basis.partial_table(var_index)
        lower = jet_basis(self.n_vars, self.order - 1)
        coeffs = np.zeros(len(lower))
        coeffs[dst] = self.coeffs[src] * factor
        return Jet(lower, coeffs)

    def truncate(self, order: int) -> "Jet":
        if order == self.order:
            return self
        if order > self.order:
            raise ValueError(f"Cannot raise jet order from {self.order} to {order}")
        lower = jet_basis(self.n_vars, order)
        return Jet(lower, np.array(self.coeffs[: len(lower)]))

    def _aligned(self, other: "Jet") -> tuple[np.ndarray, np.ndarray, JetBasis]:
        if other.n_vars != self.n_vars:
            raise ValueError(
                f"Jets in {self.n_vars} and {other.n_vars} variables cannot be combined"
            )
        if other.order == self.order:
            return self.coeffs, other.coeffs, self.basis
        order = min(self.order, other.order)
        basis = jet_basis(self.n_vars, order)
        size = len(basis)
        return self.coeffs[:size], other.coeffs[:size], basis

    def _shifted(self, constant: float) -> "Jet":
        coeffs = np.array(self.coeffs)
        coeffs[0] += constant
        return Jet(self.basis, coeffs)

    def __add__(self, other):
        if isinstance(other, Jet):
            a, b, basis = self._aligned(other)
            return Jet(basis, a + b)
        if isinstance(other, Real):
            return self._shifted(float(other))
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> "Jet":
        return Jet(self.basis, -self.coeffs)

    def __pos__(self) -> "Jet":
        return self

    def __sub__(self, other):
        if isinstance(other, Jet):
            a, b, basis = self._aligned(other)
            return Jet(basis, a - b)
        if isinstance(other, Real):
            return self._shifted(-float(other))
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, Real):
            return (-self)._shifted(float(other))
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Jet):
            a, b, basis = self._aligned(other)
            table = basis.products
            coeffs = np.bincount(
                table.target,
                weights=a[table.left] * b[table.right],
                minlength=len(basis),
            )
            return Jet(basis, coeffs)
        if isinstance(other, Real):
            return Jet(self.basis, self.coeffs * float(other))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        if isinstance(other, Real):
            if abs(other) < SINGULAR_THRESHOLD:
                raise SingularPointError("Division by zero constant", value=other)
            return Jet(self.basis, self.coeffs / float(other))
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, Real):
            return self.reciprocal() * float(other)
        return NotImplemented

    def __pow__(self, exponent):
        if isinstance(exponent, int) or (
            isinstance(exponent, Real) and float(exponent).is_integer()
        ):
            return self.integer_power(int(exponent))
        return NotImplemented

    def integer_power(self, exponent: int) -> "Jet":
        if exponent < 0:
            return self.integer_power(-exponent).reciprocal()
        result = Jet.constant(1.0, self.n_vars, self.order)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def series(self, taylor: Sequence[float]) -> "Jet":
        """Compose with a univariate series ``sum_k taylor[k] * (self - value)^k``."""
        delta = self._shifted(-self.value)
        terms = list(taylor[: self.order + 1])
        result = Jet.constant(terms[-1], self.n_vars, self.order)
        for c in reversed(terms[:-1]):
            result = (result * delta)._shifted(c)
        return result

    def reciprocal(self) -> "Jet":
        a0 = self.value
        if abs(a0) < SINGULAR_THRESHOLD:
            raise SingularPointError("Division by a vanishing jet", value=a0)
        return self.series([(-1.0) ** k / a0 ** (k + 1) for k in range(self.order + 1)])

    def __repr__(self) -> str:
        return f"Jet(n_vars={self.n_vars}, order={self.order}, value={self.value!r})"


def seed(point: Sequence[float], var_index: int, order: int = 3) -> Jet:
    """Jet of the coordinate function ``x_{var_index}`` at ``point``."""
    n_vars = len(point)
    if not 0 <= var_index < n_vars:
        raise IndexError(f"var_index {var_index} out of range for {n_vars} variables")
    if not 1 <= order <= MAX_ORDER:
        raise ValueError(f"Jet order must be in [1, {MAX_ORDER}], got {order}")
    basis = jet_basis(n_vars, order)
    coeffs = np.zeros(len(basis))
    coeffs[0] = point[var_index]
    coeffs[1 + var_index] = 1.0
    return Jet(basis, coeffs)


def seeds(point: Sequence[float], order: int = 3) -> list[Jet]:
    return [seed(point, k, order) for k in range(len(point))]


def jet_combine(a: Jet, b: Jet, op: JetOp | str) -> Jet:
    match JetOp(op):
        case JetOp.ADD:
            return a + b
        case JetOp.SUB:
            return a - b
        case JetOp.MUL:
            return a * b
        case JetOp.DIV:
            return a / b


class Composition:
    """Pushes jets in ``len(inner)`` outer variables through the jets ``inner``.

    ``inner[k]`` is the jet (in the inner variables) of the k-th outer
    coordinate; monomials of the displacements are cached so that several
    outer jets at the same expansion point reuse them.
    """

    def __init__(self, inner: Sequence[Jet], order: int | None = None):
        if not inner:
            raise ValueError("Composition needs at least one inner jet")
        order = min(j.order for j in inner) if order is None else order
        self.order = order
        self.n_vars = inner[0].n_vars
        self._deltas = [j.truncate(order)._shifted(-j.value) for j in inner]
        self._monomials: dict[MultiIndex, Jet] = {}

    def _monomial(self, alpha: MultiIndex) -> Jet:
        if alpha not in self._monomials:
            k = next(i for i, a in enumerate(alpha) if a)
            lower = list(alpha)
            lower[k] -= 1
            lower = tuple(lower)
            if any(lower):
                self._monomials[alpha] = self._monomial(lower) * self._deltas[k]
            else:
                self._monomials[alpha] = self._deltas[k]
        return self._monomials[alpha]

    def __call__(self, outer: Jet) -> Jet:
        if outer.n_vars != len(self._deltas):
            raise ValueError(
                f"Outer jet has {outer.n_vars} variables, expected {len(self._deltas)}"
            )
        order = min(self.order, outer.order)
        basis = jet_basis(self.n_vars, order)
        coeffs = np.zeros(len(basis))
        coeffs[0] = outer.value
        for alpha, c in zip(outer.basis.indices[1:], outer.coeffs[1:]):
            if c == 0.0 or sum(alpha) > order:
                continue
            coeffs += c * self._monomial(alpha).coeffs[: len(basis)]
        return Jet(basis, coeffs)


def compose(outer: Jet, inner: Sequence[Jet]) -> Jet:
    """Truncated composition ``outer(inner_1, ..., inner_n)``."""
    return Composition(inner)(outer)
