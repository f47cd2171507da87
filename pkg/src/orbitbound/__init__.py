"""Deciding periodicity of integral points under finite sets of polynomial maps."""

from .bounds import EffectiveBound, PrimePair, bound_C, choose_primes
from .configaut import (ConfigScheme, aut_group, gamma_membership, injectivity_check,
                        lagrange_cycle, level2_data, torsion_order_check, weight_matrix)
from .jetspace import JetElement, JetPoint, JetRingCtx, jet_apply, jet_mul, lift_point, ring_size
from .orbits import (AffineSystem, NotPeriodic, Periodic, Reason, Undecided, decide,
                     decide_periodic, orbit_closure, permutation_check)
from .polyring import Polynomial, jacobian_mod, parse_poly

__version__ = "0.1.0"

__all__ = [
    "AffineSystem", "ConfigScheme", "EffectiveBound", "JetElement", "JetPoint", "JetRingCtx",
    "NotPeriodic", "Periodic", "Polynomial", "PrimePair", "Reason", "Undecided",
    "aut_group", "bound_C", "choose_primes", "decide", "decide_periodic", "gamma_membership",
    "injectivity_check", "jacobian_mod", "jet_apply", "jet_mul", "lagrange_cycle",
    "level2_data", "lift_point", "orbit_closure", "parse_poly", "permutation_check",
    "ring_size", "torsion_order_check", "weight_matrix",
]
