"""Executable tame topology: ordinals, tame subsets of the line, stratified complexes and
Whitney conditions."""

__version__ = "0.1.0"
