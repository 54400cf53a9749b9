"""Exact scalar arithmetic over the rationals and prime fields GF(p).

Scalars are plain Python values: ``fractions.Fraction`` for the rationals
(the Fraction type keeps them canonical: positive denominator, reduced)
and ``int`` residues in ``[0, p)`` for GF(p).  Scalars do not know their
field; a field object supplies the operations, and containers (matrices,
maps, tensors) carry the field and police mixing.

Text encodings used by all file formats:

* field:   ``"rational"`` or ``"gf:<p>"``
* scalar:  rationals as ``"a/b"`` or ``"a"`` (optional sign, canonical
  form), prime-field elements as decimal residue strings
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from .errors import DivisionByZero, InfiniteField, InvalidField

MAX_PRIME = 2**31


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    for d in range(3, isqrt(p) + 1, 2):
        if p % d == 0:
            return False
    return True


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended Euclid: returns (g, s, t) with s*a + t*b = g = gcd(a, b)."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return a, s0, t0


class Rationals:
    """The field of rational numbers; scalars are ``Fraction`` values."""

    kind = "rational"
    characteristic = 0

    zero = Fraction(0)
    one = Fraction(1)

    def from_int(self, k: int) -> Fraction:
        return Fraction(k)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of 0 in the rationals")
        return 1 / Fraction(a)

    def div(self, a, b):
        if b == 0:
            raise DivisionByZero("division by 0 in the rationals")
        return Fraction(a) / b

    def elements(self):
        raise InfiniteField("the rationals cannot be enumerated")

    def random_scalar(self, rng) -> Fraction:
        # Small numerators/denominators keep downstream elimination cheap
        # while exercising non-integer values.
        return Fraction(rng.randint(-9, 9), rng.randint(1, 9))

    def parse(self, text: str) -> Fraction:
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidField(f"bad rational scalar {text!r}") from exc

    def format(self, a) -> str:
        return str(Fraction(a))

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("rational")

    def __repr__(self):
        return "Rationals()"

    def __str__(self):
        return "rational"


class PrimeField:
    """GF(p) for a prime p <= 2^31; scalars are ``int`` residues in [0, p).

    Primality is checked eagerly by trial division so downstream code may
    assume the field axioms.  Inversion uses extended Euclid.
    """

    kind = "prime"

    def __init__(self, p: int):
        if not isinstance(p, int) or not _is_prime(p):
            raise InvalidField(f"modulus {p!r} is not prime")
        if p > MAX_PRIME:
            raise InvalidField(f"modulus {p} exceeds {MAX_PRIME}")
        self.p = p
        self.characteristic = p
        self.zero = 0
        self.one = 1 % p

    def from_int(self, k: int) -> int:
        return k % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise DivisionByZero(f"inverse of 0 in GF({self.p})")
        _, s, _ = _xgcd(a, self.p)
        return s % self.p

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def elements(self) -> range:
        """All p residues, ascending."""
        return range(self.p)

    def random_scalar(self, rng) -> int:
        return rng.randrange(self.p)

    def parse(self, text: str) -> int:
        try:
            return int(text.strip()) % self.p
        except ValueError as exc:
            raise InvalidField(f"bad GF({self.p}) scalar {text!r}") from exc

    def format(self, a) -> str:
        return str(a % self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("prime", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __str__(self):
        return f"gf:{self.p}"


Field = Rationals | PrimeField

RATIONALS = Rationals()


def field_from_string(text: str) -> Field:
    """Parse a field description: ``"rational"`` or ``"gf:<p>"``."""
    text = text.strip().lower()
    if text == "rational":
        return RATIONALS
    if text.startswith("gf:"):
        try:
            p = int(text[3:])
        except ValueError as exc:
            raise InvalidField(f"bad field spec {text!r}") from exc
        return PrimeField(p)
    raise InvalidField(f"bad field spec {text!r} (want 'rational' or 'gf:<p>')")
