"""Command line interface and acceptance runner."""
