"""Exact-arithmetic toolkit for isospectrality of arithmetic orbifold pairs.

The package decides, from checked-in arithmetic data, which kinds of
isospectrality can be certified for a pair of arithmetic hyperbolic
orbifolds attached to a quaternion algebra: representation equivalence,
isospectrality on i-forms for all i, on functions, harmonic-form
isospectrality, and rationality of regulator quotients.  The decisions
reduce to integer-lattice problems on groups of Hecke characters, and the
regulator side is backed by an exact implementation of regulator constants
for finite groups and for modules graded by finite abelian groups.
"""

__version__ = "0.1.0"
