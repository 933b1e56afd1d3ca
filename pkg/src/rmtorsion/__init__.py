"""Exact and certified computations for torsion levels of Hilbert modular varieties.

Modules:
    numberfield  totally real fields, fractional ideals, units, lattice minima
    congruence   Hilbert modular groups, congruence subgroups, enumeration
    cusps        cusps, unipotent stabilizers, canonical depth bounds
    toroidal     cusp resolution fans, Lelong numbers, nef coefficients
    hyperbolic   distances, horoballs, Hessians, curve volumes
    thresholds   effective level-norm thresholds
    verify       property suites behind ``rmtorsion verify``
"""
from .errors import (BoxTooLarge, EqualCusps, NotARing, NotFullDimensional, NotInAmbientGroup,
                     NotPrime, NotSemisimple, NotTotallyReal, RMTorsionError, UnsupportedDegree,
                     ZeroIdeal)
from .numberfield import (FieldElement, FractionalIdeal, TotallyRealField, elem_norm, embed,
                          ideal, ideal_intersect, ideal_inverse, ideal_min, ideal_norm,
                          ideal_product, ideal_sum, make_field, real_quadratic_field)

__version__ = "0.1.0"
