"""Fire containment experiments on lazily generated infinite graphs."""

__version__ = "0.1.0"
