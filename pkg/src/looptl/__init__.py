"""Exact diagram calculus for the Temperley-Lieb category, annular
closures, loop-gas lattice Hamiltonians with exact ground spaces, and
the random-cluster statistical layer, all at the special loop weights
d = 2 cos(pi / (ell + 2))."""

__version__ = "0.1.0"
