"""p-local loop space decompositions of compact symmetric spaces."""

__version__ = "0.1.0"
