"""Computability workbench: Gödel numbering, formal systems, Turing machines, cellular automata and diagonalization."""

__version__ = "0.1.0"
