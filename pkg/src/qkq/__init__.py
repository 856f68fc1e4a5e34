"""Numerical toolkit for quaternion Kaehler quotients of quaternionic
hyperboloids: circle-orbit classification, moment map zero sets, quotient
slices, curvature verification, and the hyperbolic-plane eigenfunction
correspondence for the resulting self-dual Einstein metrics."""

__version__ = "0.1.0"
