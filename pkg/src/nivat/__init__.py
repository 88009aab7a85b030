"""Low-complexity two-dimensional configurations: patterns, balanced sets,
annihilators and periodicity checks on finite windows."""

__version__ = "0.1.0"
