"""Odd Khovanov homology over the integers, cobordism maps and the 2-knot invariant n."""

__version__ = "0.1.0"
