"""Numerical verification of special-element identities in K3 of number fields."""

from k3reg.mpnum import PrecisionContext

__all__ = ["PrecisionContext"]
__version__ = "0.1.0"
