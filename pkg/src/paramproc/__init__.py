"""Workbench for first-order pi and higher-order processes with parameterization."""

__version__ = "0.1.0"
