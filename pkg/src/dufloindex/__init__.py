"""Exact verification harness for an index formula of transversally elliptic operators,
relating the distributional index, the Duflo isomorphism and Chern-Weil theory."""
from __future__ import annotations

__version__ = "0.1.0"
