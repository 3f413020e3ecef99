"""Small dense linear algebra over jets, stored as numpy object arrays."""

from typing import Sequence

import numpy as np

from ..errors import SingularPointError
from ..jets import Jet


def as_jets(values: Sequence, n_vars: int, order: int) -> list[Jet]:
    """Promote plain numbers to constant jets."""
    return [
        v if isinstance(v, Jet) else Jet.constant(float(v), n_vars, order)
        for v in values
    ]


def jet_array(rows) -> np.ndarray:
    """Object array of jets from nested sequences."""
    rows = list(rows)
    out = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, row in enumerate(rows):
        for j, entry in enumerate(row):
            out[i, j] = entry
    return out


def values(a: np.ndarray) -> np.ndarray:
    """Expansion-point values of an array of jets."""
    return np.vectorize(lambda j: j.value, otypes=[float])(a)


def jet_sum(jets) -> Jet:
    jets = iter(jets)
    total = next(jets)
    for j in jets:
        total = total + j
    return total


def jet_dot(u: Sequence[Jet], v: Sequence[Jet]) -> Jet:
    return jet_sum(a * b for a, b in zip(u, v))


def jet_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    rows, inner = a.shape
    cols = b.shape[1]
    out = np.empty((rows, cols), dtype=object)
    for i in range(rows):
        for j in range(cols):
            out[i, j] = jet_sum(a[i, k] * b[k, j] for k in range(inner))
    return out


def jet_inverse(a: np.ndarray) -> np.ndarray:
    """Gauss-Jordan inverse with partial pivoting on the values.

    Raises
    ------
    SingularPointError
        When the value matrix is singular.
    """
    size = a.shape[0]
    if a.shape != (size, size):
        raise ValueError(f"Expected a square matrix, got shape {a.shape}")
    sample = a[0, 0]
    work = a.copy()
    inverse = np.empty((size, size), dtype=object)
    for i in range(size):
        for j in range(size):
            inverse[i, j] = Jet.constant(
                1.0 if i == j else 0.0, sample.n_vars, sample.order
            )

    scale = max(1.0, float(np.max(np.abs(values(a)))))
    for col in range(size):
        pivot = max(range(col, size), key=lambda r: abs(work[r, col].value))
        if abs(work[pivot, col].value) < 1e-14 * scale:
            raise SingularPointError("Singular jet matrix", value=work[pivot, col].value)
        if pivot != col:
            work[[col, pivot]] = work[[pivot, col]]
            inverse[[col, pivot]] = inverse[[pivot, col]]
        factor = work[col, col].reciprocal()
        for j in range(size):
            work[col, j] = work[col, j] * factor
            inverse[col, j] = inverse[col, j] * factor
        for r in range(size):
            if r == col:
                continue
            coeff = work[r, col]
            for j in range(size):
                work[r, j] = work[r, j] - coeff * work[col, j]
                inverse[r, j] = inverse[r, j] - coeff * inverse[col, j]
    return inverse


def jet_scale(a: np.ndarray, factor: Jet | float) -> np.ndarray:
    """Multiply every entry of a jet array by a jet or a number."""
    out = np.empty(a.shape, dtype=object)
    for index in np.ndindex(a.shape):
        out[index] = a[index] * factor
    return out
