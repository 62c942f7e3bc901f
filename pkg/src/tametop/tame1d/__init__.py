"""Exact set calculus on definable subsets of the line."""
