"""dynlab: a workbench for dynamic descriptive complexity."""

__version__ = "0.1.0"
