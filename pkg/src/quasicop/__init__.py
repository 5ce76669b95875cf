"""Workbench for coarse pursuit games on infinite vertex-transitive graphs."""

__version__ = "0.1.0"
