"""Odd contact Lie superalgebras over prime fields and their reduced modules."""

from .arith import PrimeField
from .contact import ContactShape, build, build_m, build_sm
from .lsa import LSA, GradingAut

__version__ = "0.1.0"

__all__ = ["PrimeField", "ContactShape", "build", "build_m", "build_sm", "LSA",
           "GradingAut", "__version__"]
