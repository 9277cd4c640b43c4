"""Exact cohomology and metric computations for nilmanifolds with invariant complex structures."""

from __future__ import annotations

__version__ = "0.1.0"
