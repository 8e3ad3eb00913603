"""Affine representations of Lie algebras, Chevalley-Eilenberg cohomology and
polynomial modules, with exact desk-scale computations on R^m."""

__version__ = "0.1.0"
