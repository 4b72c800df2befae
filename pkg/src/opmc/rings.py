"""Exact coefficient rings: Z, Z/m (m >= 2) and Q.

Scalars are plain Python values (int for Z and Z/m, Fraction for Q),
normalized by the ring object.  All arithmetic is exact; nothing here
ever divides implicitly.
"""

from fractions import Fraction
from math import gcd

from .errors import InvalidRingError, NonUnitError


class Ring:
    """Handle exposing 0, 1 and exact arithmetic for one coefficient ring."""

    contains_rationals = False
    finite = False

    def normalize(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self.normalize(0)

    @property
    def one(self):
        return self.normalize(1)

    def add(self, a, b):
        return self.normalize(a + b)

    def sub(self, a, b):
        return self.normalize(a - b)

    def neg(self, a):
        return self.normalize(-a)

    def mul(self, a, b):
        return self.normalize(a * b)

    def is_zero(self, a):
        return self.normalize(a) == self.zero

    def eq(self, a, b):
        return self.normalize(a) == self.normalize(b)

    def is_unit(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def elements(self):
        """All ring elements; only available for finite rings."""
        raise NotImplementedError(f"{self} is not finite")

    def spec(self):
        raise NotImplementedError


class IntegerRing(Ring):
    def normalize(self, x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise NonUnitError(f"{x} is not an integer")
            return int(x)
        return int(x)

    def is_unit(self, a):
        return a in (1, -1)

    def inv(self, a):
        if not self.is_unit(a):
            raise NonUnitError(f"{a} is not a unit in Z")
        return a

    def spec(self):
        return {"kind": "integers"}

    def __repr__(self):
        return "Z"


class ModularRing(Ring):
    finite = True

    def __init__(self, modulus):
        if not isinstance(modulus, int) or modulus < 2:
            raise InvalidRingError(f"modulus must be an integer >= 2, got {modulus!r}")
        self.modulus = modulus

    def normalize(self, x):
        return int(x) % self.modulus

    def is_unit(self, a):
        return gcd(self.normalize(a), self.modulus) == 1

    def inv(self, a):
        a = self.normalize(a)
        if not self.is_unit(a):
            raise NonUnitError(f"{a} is not a unit in Z/{self.modulus}")
        return pow(a, -1, self.modulus)

    def elements(self):
        return list(range(self.modulus))

    def spec(self):
        return {"kind": "integers-mod-m", "modulus": self.modulus}

    def __repr__(self):
        return f"Z/{self.modulus}"


class RationalRing(Ring):
    contains_rationals = True

    def normalize(self, x):
        return Fraction(x)

    def is_unit(self, a):
        return Fraction(a) != 0

    def inv(self, a):
        if not self.is_unit(a):
            raise NonUnitError("0 is not a unit in Q")
        return 1 / Fraction(a)

    def spec(self):
        return {"kind": "rationals"}

    def __repr__(self):
        return "Q"


def ring_make(spec):
    """Build a ring handle from a spec dict {"kind": ..., "modulus"?: m}."""
    kind = spec.get("kind")
    if kind == "integers":
        return IntegerRing()
    if kind == "integers-mod-m":
        if "modulus" not in spec:
            raise InvalidRingError("integers-mod-m requires a modulus")
        return ModularRing(spec["modulus"])
    if kind == "rationals":
        return RationalRing()
    raise InvalidRingError(f"unknown ring kind {kind!r}")


def scalar_from_json(ring, value):
    """Parse an exact scalar from JSON (int, or "p/q" string over Q)."""
    if isinstance(value, str):
        return ring.normalize(Fraction(value))
    return ring.normalize(value)


def scalar_to_json(value):
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return int(value)
        return f"{value.numerator}/{value.denominator}"
    return int(value)
