"""Exact iteration of X -> aX - bX on eventually periodic sets of integers."""

from ._linstab import (
    EPSet,
    OpSequence,
    ResidueSet,
    LinstabError,
    ParseSyntaxError,
    ParseSemanticError,
    PreconditionError,
    ResourceLimitError,
    parse_set,
    parse_ops,
    parse_residue_set,
    apply,
    apply_composition,
    minkowski_sum,
    dilate,
    negate,
    translate,
    union,
    upper_density,
    dplus,
    iterate,
    verify_thm61,
    decompose,
    run,
)

__all__ = [name for name in dir() if not name.startswith("_")]
