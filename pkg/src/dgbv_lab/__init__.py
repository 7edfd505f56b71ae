"""dGBV Lab: exact dGBV algebras, Maurer-Cartan solutions and formal Frobenius manifolds."""

__all__ = ["__version__"]
__version__ = "0.1.0"
