"""Pillay rank on finite abstract stratified complexes."""
