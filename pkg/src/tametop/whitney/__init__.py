"""Numerical checks of Whitney (a), (b) and Verdier (w) on parametric manifolds."""
