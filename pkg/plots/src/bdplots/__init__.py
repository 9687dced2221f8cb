"""Rendering of heavybd CSV outputs into publication-style figures.

This package never recomputes statistics: it draws exactly what the
simulation CSVs contain.
"""

__version__ = "0.1.0"

from .figures import EXPECTED_HEADERS, FigureSpec, RenderResult, render

__all__ = ["FigureSpec", "RenderResult", "render", "EXPECTED_HEADERS", "__version__"]
