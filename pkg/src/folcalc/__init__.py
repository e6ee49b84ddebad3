"""folcalc: exact foliated exterior calculus on tori with a numeric
Moser-flow pipeline for prolonging first-order coisotropic deformations."""

__version__ = "0.1.0"
