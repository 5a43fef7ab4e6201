"""Quantum circuits for discretized copulas, with a small statevector simulator."""

__version__ = "0.1.0"
