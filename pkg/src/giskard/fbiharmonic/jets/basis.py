"""Graded-lexicographic multi-index bases shared by all jets of one shape."""

from functools import lru_cache
from math import comb, factorial, prod

import numpy as np

MultiIndex = tuple[int, ...]

MAX_ORDER = 4


def _compositions(degree: int, n_vars: int):
    if n_vars == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in _compositions(degree - first, n_vars - 1):
            yield (first,) + rest


def multi_indices(n_vars: int, order: int) -> list[MultiIndex]:
    """All multi-indices of total degree at most ``order``, graded then lexicographic.

    The basis of a lower order is always a prefix of the basis of a higher one.
    """
    return [
        alpha
        for degree in range(order + 1)
        for alpha in _compositions(degree, n_vars)
    ]


class ProductTable:
    """Index triples ``(left, right, target)`` of a truncated polynomial product."""

    __slots__ = ("left", "right", "target")

    def __init__(self, left: np.ndarray, right: np.ndarray, target: np.ndarray):
        self.left = left
        self.right = right
        self.target = target


class JetBasis:
    """Dense coefficient layout for jets in ``n_vars`` variables up to ``order``."""

    def __init__(self, n_vars: int, order: int):
        if n_vars < 1:
            raise ValueError(f"n_vars must be positive, got {n_vars}")
        if not 0 <= order <= MAX_ORDER:
            raise ValueError(f"Jet order must be in [0, {MAX_ORDER}], got {order}")

        self.n_vars = n_vars
        self.order = order
        self.indices = multi_indices(n_vars, order)
        self.position = {alpha: i for i, alpha in enumerate(self.indices)}
        self.degrees = np.array([sum(alpha) for alpha in self.indices])
        self.factorials = np.array(
            [prod(factorial(a) for a in alpha) for alpha in self.indices],
            dtype=float,
        )
        # number of entries of degree <= d, for every d
        self.prefix = [comb(n_vars + d, d) for d in range(order + 1)]

        assert len(self.indices) == comb(n_vars + order, order)

        self._products: ProductTable | None = None
        self._partials: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}

    def __len__(self) -> int:
        return len(self.indices)

    def __repr__(self) -> str:
        return f"JetBasis(n_vars={self.n_vars}, order={self.order})"

    def unit(self, var_index: int) -> MultiIndex:
        return tuple(1 if k == var_index else 0 for k in range(self.n_vars))

    @property
    def products(self) -> ProductTable:
        if self._products is None:
            left, right, target = [], [], []
            for i, alpha in enumerate(self.indices):
                budget = self.order - int(self.degrees[i])
                for j in range(self.prefix[budget]):
                    beta = self.indices[j]
                    left.append(i)
                    right.append(j)
                    target.append(
                        self.position[tuple(a + b for a, b in zip(alpha, beta))]
                    )
            self._products = ProductTable(
                np.array(left, dtype=np.intp),
                np.array(right, dtype=np.intp),
                np.array(target, dtype=np.intp),
            )
        return self._products

    def partial_table(self, var_index: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Source slots, target slots (in the order-1 basis) and integer factors."""
        if var_index not in self._partials:
            lower = jet_basis(self.n_vars, self.order - 1)
            src, dst, factor = [], [], []
            for i, alpha in enumerate(self.indices):
                if alpha[var_index] == 0:
                    continue
                reduced = list(alpha)
                reduced[var_index] -= 1
                src.append(i)
                dst.append(lower.position[tuple(reduced)])
                factor.append(alpha[var_index])
            self._partials[var_index] = (
                np.array(src, dtype=np.intp),
                np.array(dst, dtype=np.intp),
                np.array(factor, dtype=float),
            )
        return self._partials[var_index]


@lru_cache(maxsize=None)
def jet_basis(n_vars: int, order: int) -> JetBasis:
    return JetBasis(n_vars, order)
