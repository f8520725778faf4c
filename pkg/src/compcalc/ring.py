"""Exact coefficient arithmetic and formal linear combinations.

Three coefficient rings are supported: the rationals (arbitrary-precision,
always in lowest terms with positive denominator), the integers, and the
integers mod a prime p (canonical residues in [0, p)).  Every sign that
appears in the composition calculus is a unit of one of these rings, and no
floating point is used anywhere.
"""

from __future__ import annotations

from gmpy2 import mpq

from .errors import DegreeError, FormatError, RingMismatchError


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class Ring:
    """A coefficient ring context.

    Scalars are plain Python values (``mpq`` for the rationals, ``int`` for
    the integers and for mod-p residues); the ring object supplies
    construction, formatting, parsing and the arithmetic that is not native
    to the value type.
    """

    kind = "abstract"
    char = 0

    zero = 0
    one = 1
    minus_one = -1

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a) -> bool:
        return not a

    def from_int(self, n: int):
        raise NotImplementedError

    def from_fraction(self, num: int, den: int):
        """Map the exact fraction num/den into the ring, if it lives there."""
        raise NotImplementedError

    def fmt(self, a) -> str:
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def random(self, rng):
        """Draw a small random scalar (deterministic in the rng state)."""
        raise NotImplementedError

    def random_nonzero(self, rng):
        while True:
            a = self.random(rng)
            if not self.is_zero(a):
                return a

    @property
    def token(self) -> str:
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Ring) and self.token == other.token

    def __hash__(self):
        return hash(self.token)

    def __repr__(self):
        return f"Ring({self.token})"


class Rationals(Ring):
    """The field of rational numbers with exact arithmetic."""

    kind = "rationals"

    zero = mpq(0)
    one = mpq(1)
    minus_one = mpq(-1)

    def from_int(self, n: int):
        return mpq(n)

    def from_fraction(self, num: int, den: int):
        if den == 0:
            raise FormatError("zero denominator")
        return mpq(num, den)

    def fmt(self, a) -> str:
        return str(a)

    def parse(self, text: str):
        try:
            return mpq(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad rational scalar {text!r}") from exc

    def random(self, rng):
        return mpq(rng.randint(-9, 9), rng.randint(1, 4))

    @property
    def token(self) -> str:
        return "q"


class Integers(Ring):
    """The ring of arbitrary-precision integers."""

    kind = "integers"

    def from_int(self, n: int):
        return int(n)

    def from_fraction(self, num: int, den: int):
        if den == 0:
            raise FormatError("zero denominator")
        q, r = divmod(num, den)
        if r:
            raise FormatError(f"{num}/{den} is not an integer")
        return q

    def fmt(self, a) -> str:
        return str(a)

    def parse(self, text: str):
        try:
            return int(text.strip())
        except ValueError as exc:
            raise FormatError(f"bad integer scalar {text!r}") from exc

    def random(self, rng):
        return rng.randint(-9, 9)

    @property
    def token(self) -> str:
        return "z"


class IntegersMod(Ring):
    """The field Z/p for a prime p; residues stored canonically in [0, p)."""

    kind = "mod"

    def __init__(self, p: int):
        if not is_prime(p):
            raise FormatError(f"modulus {p} is not prime")
        self.p = p
        self.char = p
        self.minus_one = (p - 1) % p
        self.one = 1 % p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.p}")
        return pow(a, self.p - 2, self.p)

    def from_int(self, n: int):
        return n % self.p

    def from_fraction(self, num: int, den: int):
        if den % self.p == 0:
            raise FormatError(f"denominator {den} not invertible mod {self.p}")
        return (num * self.inv(den)) % self.p

    def fmt(self, a) -> str:
        return f"{a % self.p} mod {self.p}"

    def parse(self, text: str):
        parts = text.strip().split()
        try:
            if len(parts) == 3 and parts[1] == "mod":
                if int(parts[2]) != self.p:
                    raise FormatError(f"scalar {text!r} has wrong modulus, expected {self.p}")
                return int(parts[0]) % self.p
            if len(parts) == 1:
                return int(parts[0]) % self.p
        except ValueError as exc:
            raise FormatError(f"bad mod-{self.p} scalar {text!r}") from exc
        raise FormatError(f"bad mod-{self.p} scalar {text!r}")

    def random(self, rng):
        return rng.randrange(self.p)

    @property
    def token(self) -> str:
        return f"zmod:{self.p}"


QQ = Rationals()
ZZ = Integers()


def ring_from_token(token: str) -> Ring:
    """Resolve a ring token: ``q``, ``z``, or ``zmod:<p>``."""
    token = token.strip().lower()
    if token == "q":
        return QQ
    if token == "z":
        return ZZ
    if token.startswith("zmod:"):
        try:
            p = int(token[5:])
        except ValueError as exc:
            raise FormatError(f"bad ring token {token!r}") from exc
        return IntegersMod(p)
    raise FormatError(f"unknown ring token {token!r}")


def check_same_ring(a: Ring, b: Ring) -> None:
    if a != b:
        raise RingMismatchError(f"mixed rings: {a.token} vs {b.token}")


def sign_pow(ring: Ring, k: int):
    """(-1)^k as a unit of the ring; k may be any integer."""
    return ring.minus_one if k % 2 else ring.one


def koszul_sign(ring: Ring, a: int, b: int):
    """(-1)^(a*b) as a ring unit; a and b are (possibly negative) degrees."""
    return ring.minus_one if (a * b) % 2 else ring.one


class LinComb:
    """A formal linear combination over hashable, orderable basis keys.

    All keys carry the ambient degree; zero coefficients are never stored.
    Instances are treated as immutable: every operation builds a new one.
    """

    __slots__ = ("ring", "degree", "terms")

    def __init__(self, ring: Ring, degree: int, terms=None, _normalized=False):
        if degree < 0:
            raise DegreeError(f"linear combination of negative degree {degree}")
        self.ring = ring
        self.degree = degree
        if terms is None:
            self.terms = {}
        elif _normalized:
            self.terms = terms
        else:
            self.terms = {k: v for k, v in dict(terms).items() if not ring.is_zero(v)}

    @classmethod
    def single(cls, ring: Ring, degree: int, key, coeff) -> "LinComb":
        return cls(ring, degree, {key: coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "LinComb") -> "LinComb":
        self._check_compatible(other)
        merged = dict(self.terms)
        add, is_zero = self.ring.add, self.ring.is_zero
        for k, v in other.terms.items():
            s = add(merged.get(k, self.ring.zero), v)
            if is_zero(s):
                merged.pop(k, None)
            else:
                merged[k] = s
        return LinComb(self.ring, self.degree, merged, _normalized=True)

    def __sub__(self, other: "LinComb") -> "LinComb":
        return self + (-other)

    def __neg__(self) -> "LinComb":
        neg = self.ring.neg
        return LinComb(
            self.ring, self.degree, {k: neg(v) for k, v in self.terms.items()}, _normalized=True
        )

    def scale(self, c) -> "LinComb":
        if self.ring.is_zero(c):
            return LinComb(self.ring, self.degree)
        mul = self.ring.mul
        return LinComb(self.ring, self.degree, {k: mul(c, v) for k, v in self.terms.items()})

    def __eq__(self, other):
        return (
            isinstance(other, LinComb)
            and self.ring == other.ring
            and self.degree == other.degree
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ring, self.degree, frozenset(self.terms.items())))

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def _check_compatible(self, other: "LinComb") -> None:
        check_same_ring(self.ring, other.ring)
        if self.degree != other.degree:
            raise DegreeError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __repr__(self):
        if not self.terms:
            return f"LinComb(0; degree={self.degree})"
        body = " + ".join(f"{self.ring.fmt(v)}*{k}" for k, v in self.sorted_items())
        return f"LinComb({body}; degree={self.degree})"
