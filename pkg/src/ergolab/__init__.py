"""ergolab: exact invariant-measure algebra and entropy on compact-group toys.

Carriers: finite groups, one- and two-sided group shift spaces over finite
alphabet groups, and the circle under x -> kx mod 1. Measures are exact
rational objects; entropies are computed in nats with floating point only at
the logarithm boundary.
"""

from .groups import (
    AffineMap,
    DenseMeasure,
    FiniteGroup,
    GroupHom,
    automorphisms,
    convolve,
    cyclic,
    dihedral,
    direct_product,
    ergodic_components,
    explicit_group,
    haar,
    identity_hom,
    independence_check,
    is_invariant,
    make_group,
    make_hom,
    measure,
    mix,
    point_mass,
    pushforward,
    symmetric,
)

__all__ = [
    "AffineMap",
    "DenseMeasure",
    "FiniteGroup",
    "GroupHom",
    "automorphisms",
    "convolve",
    "cyclic",
    "dihedral",
    "direct_product",
    "ergodic_components",
    "explicit_group",
    "haar",
    "identity_hom",
    "independence_check",
    "is_invariant",
    "make_group",
    "make_hom",
    "measure",
    "mix",
    "point_mass",
    "pushforward",
    "symmetric",
]

__version__ = "0.1.0"
