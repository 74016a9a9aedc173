"""Model fields of characteristic != 2 with decidable square classes.

Three models are provided, each with exact element arithmetic and a
canonical representative for every square class:

* ``qc`` -- rationals standing in for a quadratically closed field; every
  nonzero element is a square, so the only square class is 1.
* ``rc`` -- rationals standing in for a real closed field; squareness is
  the sign test and the square classes are represented by +1 and -1.
* ``fq:<q>`` -- the prime field with q elements, q an odd prime; squareness
  is the Euler criterion and the square classes are represented by 1 and
  the smallest quadratic non-residue.

Elements are plain ``Fraction`` values (qc, rc) or plain ``int`` residues
in ``[0, q)`` (fq).  All arithmetic goes through the model so that callers
never need to branch on the representation.
"""

from fractions import Fraction
from functools import lru_cache

from .errors import DomainError, FormatError


class FieldModel:
    """Base interface; concrete models fill in representation details."""

    kind = ""

    @property
    def spec(self):
        """Canonical spec string, as accepted by :func:`field_model`."""
        raise NotImplementedError

    # -- arithmetic ------------------------------------------------------
    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    @property
    def zero(self):
        raise NotImplementedError

    @property
    def one(self):
        raise NotImplementedError

    def from_int(self, n):
        raise NotImplementedError

    @property
    def half(self):
        """1/2, which exists because the characteristic is not 2."""
        return self.inv(self.from_int(2))

    def is_zero(self, a):
        return a == self.zero

    # -- square classes --------------------------------------------------
    def is_square(self, a):
        """Whether the nonzero element a is a square."""
        raise NotImplementedError

    def square_class(self, a):
        """Canonical representative of the square class of nonzero a."""
        raise NotImplementedError

    # -- serialization ---------------------------------------------------
    def parse(self, text):
        raise NotImplementedError

    def to_str(self, a):
        raise NotImplementedError

    def sort_key(self, a):
        """Total order on elements, used only for canonical output order."""
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, FieldModel) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)

    def __repr__(self):
        return "field_model(%r)" % self.spec


def _parse_fraction(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError("bad rational %r: %s" % (text, exc)) from None


def _fraction_str(a):
    return str(a)  # Fraction prints "p" or "p/q" in lowest terms


class QuadraticallyClosed(FieldModel):
    kind = "qc"

    @property
    def spec(self):
        return "qc"

    def inv(self, a):
        if a == 0:
            raise DomainError("division by zero")
        return 1 / a

    zero = Fraction(0)
    one = Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def is_square(self, a):
        if a == 0:
            raise DomainError("zero has no square class")
        return True

    def square_class(self, a):
        if a == 0:
            raise DomainError("zero has no square class")
        return Fraction(1)

    def parse(self, text):
        return _parse_fraction(text)

    def to_str(self, a):
        return _fraction_str(a)

    def sort_key(self, a):
        return a


class RealClosed(FieldModel):
    kind = "rc"

    @property
    def spec(self):
        return "rc"

    def inv(self, a):
        if a == 0:
            raise DomainError("division by zero")
        return 1 / a

    zero = Fraction(0)
    one = Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def is_square(self, a):
        if a == 0:
            raise DomainError("zero has no square class")
        return a > 0

    def square_class(self, a):
        if a == 0:
            raise DomainError("zero has no square class")
        return Fraction(1) if a > 0 else Fraction(-1)

    def parse(self, text):
        return _parse_fraction(text)

    def to_str(self, a):
        return _fraction_str(a)

    def sort_key(self, a):
        return a


class FinitePrime(FieldModel):
    kind = "fq"

    def __init__(self, q):
        if q < 3 or q % 2 == 0 or not _is_prime(q):
            raise DomainError("fq modulus must be an odd prime, got %r" % (q,))
        self.q = q

    @property
    def spec(self):
        return "fq:%d" % self.q

    def add(self, a, b):
        return (a + b) % self.q

    def sub(self, a, b):
        return (a - b) % self.q

    def mul(self, a, b):
        return (a * b) % self.q

    def neg(self, a):
        return (-a) % self.q

    def inv(self, a):
        if a % self.q == 0:
            raise DomainError("division by zero")
        return pow(a, -1, self.q)

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def from_int(self, n):
        return n % self.q

    def is_square(self, a):
        a %= self.q
        if a == 0:
            raise DomainError("zero has no square class")
        return pow(a, (self.q - 1) // 2, self.q) == 1

    @property
    def non_residue(self):
        """Smallest quadratic non-residue, the canonical non-square rep."""
        for a in range(2, self.q):
            if not self.is_square(a):
                return a
        raise AssertionError("odd prime field has a non-residue")

    def square_class(self, a):
        return 1 if self.is_square(a) else self.non_residue

    def parse(self, text):
        # Accept "p/q" for symmetry with the rational models.
        if "/" in text:
            num, _, den = text.partition("/")
            try:
                n, d = int(num), int(den)
            except ValueError:
                raise FormatError("bad residue %r" % (text,)) from None
            return self.div(self.from_int(n), self.from_int(d))
        try:
            return int(text) % self.q
        except ValueError:
            raise FormatError("bad residue %r" % (text,)) from None

    def to_str(self, a):
        return str(a % self.q)

    def sort_key(self, a):
        return a % self.q


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@lru_cache(maxsize=None)
def field_model(spec):
    """Build (and cache) the field model named by a spec string."""
    if spec == "qc":
        return QuadraticallyClosed()
    if spec == "rc":
        return RealClosed()
    if spec.startswith("fq:"):
        try:
            q = int(spec[3:])
        except ValueError:
            raise FormatError("bad field spec %r" % (spec,)) from None
        return FinitePrime(q)
    raise FormatError("unknown field spec %r (expected qc, rc, or fq:<q>)" % (spec,))


class SquareClass:
    """A square class of a model field, held by canonical representative.

    The class group has exponent 2, so each class is its own inverse.
    """

    __slots__ = ("field", "rep")

    def __init__(self, field, a):
        self.field = field
        self.rep = field.square_class(a)

    @property
    def is_trivial(self):
        return self.rep == self.field.one

    def __mul__(self, other):
        if self.field != other.field:
            raise DomainError("square classes over different fields")
        return SquareClass(self.field, self.field.mul(self.rep, other.rep))

    def __eq__(self, other):
        return (
            isinstance(other, SquareClass)
            and self.field == other.field
            and self.rep == other.rep
        )

    def __hash__(self):
        return hash((self.field, self.rep))

    def __repr__(self):
        return "SquareClass(%s, %s)" % (self.field.spec, self.field.to_str(self.rep))
