"""Lorentz norms, kernel truncation and maximizers of convolution operators."""

__version__ = "1.0.0"
