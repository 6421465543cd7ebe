"""Assemblies over finite sets.

Modules: ``pca`` (applicative structures and filters), ``lam`` (lambda
terms and their compilation), ``base`` (finite sets and subsets), ``asm``
(assemblies and tracked maps), ``sub`` (realizer data), ``logic``
(formulas and realizability), ``reconstruct`` (the axiom checks) and
``cli``.
"""

from .asm import Asm, Assembly, Morphism
from .base import FinMap, FinObject
from .pca import NUM, SK, TRIVIAL
from .report import Report

__all__ = ["Asm", "Assembly", "Morphism", "FinMap", "FinObject", "NUM", "SK", "TRIVIAL", "Report"]
__version__ = "0.1.0"
