"""Weak del Pezzo surfaces as blow-ups of P^2: negative curves, ADE types,
vector fields and automorphism schemes in any characteristic."""

__version__ = "0.1.0"
