"""Classification engine for surfaces carrying self-maps of every degree."""

__version__ = "0.1.0"
