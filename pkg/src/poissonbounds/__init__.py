"""Information-theoretic Poisson approximation: exact laws, divergences,
scaled Fisher information and checkable bounds."""

__version__ = "0.1.0"
