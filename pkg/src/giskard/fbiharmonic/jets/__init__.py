from .basis import MAX_ORDER, JetBasis, MultiIndex, jet_basis, multi_indices
from .elementary import (
    FUNCTION_NAMES,
    Elementary,
    apply_elementary,
    jet_elementary,
    real_elementary,
)
from .jet import Composition, Jet, JetOp, compose, jet_combine, seed, seeds
from .oracle import fd_oracle, oracle_agrees, resolution

__all__ = [
    "MAX_ORDER",
    "FUNCTION_NAMES",
    "Composition",
    "Elementary",
    "Jet",
    "JetBasis",
    "JetOp",
    "MultiIndex",
    "apply_elementary",
    "compose",
    "fd_oracle",
    "jet_basis",
    "jet_combine",
    "jet_elementary",
    "multi_indices",
    "oracle_agrees",
    "real_elementary",
    "resolution",
    "seed",
    "seeds",
]
