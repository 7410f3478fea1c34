"""Exact computations with type-1 and type-2 points of the Berkovich line."""

from .bline import BPoint, eta
from .valuation import FieldConfig, Monomial, Radius

__all__ = ["BPoint", "eta", "FieldConfig", "Monomial", "Radius"]
__version__ = "0.1.0"
