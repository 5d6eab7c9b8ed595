"""Finite-model workbench for relational lattices, multimodal frames and
generalized ultrametric spaces."""

__version__ = "0.1.0"
