"""Agnostic learning of functions of halfspaces by L1 polynomial regression,
moment-matching LPs and the distances used to analyse them."""

__version__ = "0.1.0"
