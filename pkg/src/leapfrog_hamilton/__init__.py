"""Hamilton cycles in leapfrog fullerenes from stable-tree decompositions."""

from __future__ import annotations

__version__ = "0.1.0"

__all__ = ["__version__"]
