"""opmc: exact operadic Maurer-Cartan theory over arbitrary rings.

Twisting, generalized shuffle products, exponential maps, Maurer-Cartan
simplicial sets and constructive Kan horn filling for algebras over
Koszul duals of unital Hopf cooperads, at configurable arity/degree/weight
truncation, with exact arithmetic over Z, Z/m and Q.
"""

from .rings import ring_make, IntegerRing, ModularRing, RationalRing

__version__ = "0.1.0"

__all__ = ["ring_make", "IntegerRing", "ModularRing", "RationalRing", "__version__"]
