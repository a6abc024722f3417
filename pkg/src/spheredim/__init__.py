"""Toolkit for VC-type dimensions, realizable-distribution complexes,
simplicial-sphere witnesses, extremal-class analysis, disambiguations,
and sign-rank certificates of finite concept classes."""

from spheredim.concepts import (
    CapExceededError,
    ClassFormatError,
    ConceptClass,
    DimensionVariant,
    PartialHypothesis,
    dimension,
    family_class,
    parse_class,
    product_class,
)

__all__ = [
    "CapExceededError",
    "ClassFormatError",
    "ConceptClass",
    "DimensionVariant",
    "PartialHypothesis",
    "dimension",
    "family_class",
    "parse_class",
    "product_class",
]
