"""Workbench for learning optical joint-detection receivers.

Modules
-------
codes       classical codebooks (random/linear/polar) and BPSK encoding
optics      Gaussian-state simulator with threshold photodetection
decoder     circuit parametrization, conditional tables, ML decisions
training    supervised decoder learning (probability and sampling modes)
benchmarks  closed-form and Gram-matrix reference quantities
analysis    mode profiles and aggregate result tables
cli         command-line pipeline (codes / train / bench / report)
"""

from .errors import ConfigError, NumericalError

__all__ = ["ConfigError", "NumericalError"]
__version__ = "0.1.0"
