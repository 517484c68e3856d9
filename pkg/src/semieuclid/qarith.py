"""Exact arithmetic in imaginary quadratic fields and definite quaternion algebras.

An algebra (a, b) over Q has basis 1, i, j, ij with i^2 = a, j^2 = b and
ij = -ji.  An imaginary quadratic field Q(sqrt(a)), a < 0, reuses the same
element type with the j and ij coordinates pinned to zero.

Elements are stored as a common denominator and a tuple of integer
numerators, which keeps the hot paths (products, norms, inverses) in plain
integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence, Union

from sympy import factorint

Rational = Union[int, Fraction, str]

INF = math.inf


class DescriptorMismatch(ValueError):
    """Operands belong to different algebras."""


class ZeroDivisor(ZeroDivisionError):
    """Inverse of zero requested."""


def as_fraction(value: Rational) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact rationals")
    return Fraction(value)


@lru_cache(maxsize=4096)
def _factor(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(factorint(n).items()))


def factor(n: int) -> dict[int, int]:
    """Prime factorization of a nonzero integer (sign dropped)."""
    n = abs(int(n))
    if n == 0:
        raise ValueError("cannot factor 0")
    return dict(_factor(n))


def squarefree_part(q: Rational) -> int:
    """The squarefree integer s with q = s * (rational square), sign kept."""
    q = as_fraction(q)
    if q == 0:
        raise ValueError("zero has no squarefree part")
    n = q.numerator * q.denominator
    s = -1 if n < 0 else 1
    for p, e in factor(n).items():
        if e % 2:
            s *= p
    return s


def legendre(u: int, p: int) -> int:
    r = pow(u % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def hilbert_symbol(a: Rational, b: Rational, p) -> int:
    """Local Hilbert symbol (a, b)_p for nonzero rationals; p a prime or INF."""
    a, b = as_fraction(a), as_fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero entries")
    if p in (INF, "inf", "infinity"):
        return -1 if (a < 0 and b < 0) else 1
    p = int(p)
    # clear denominators: a*den^2 has the same square class
    a_int = a.numerator * a.denominator
    b_int = b.numerator * b.denominator

    def split(n: int) -> tuple[int, int]:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        return e, n

    alpha, u = split(a_int)
    beta, v = split(b_int)
    if p == 2:
        def eps(x: int) -> int:
            return ((x - 1) // 2) % 2

        def omega(x: int) -> int:
            return ((x * x - 1) // 8) % 2

        e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if e % 2 else 1
    s = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    if beta % 2:
        s *= legendre(u, p)
    if alpha % 2:
        s *= legendre(v, p)
    return s


def ramified_primes(a: Rational, b: Rational) -> list[int]:
    """Finite primes where (a, b) is a division algebra."""
    a, b = as_fraction(a), as_fraction(b)
    primes = {2}
    for q in (a, b):
        for n in (q.numerator, q.denominator):
            if abs(n) > 1:
                primes.update(factor(n))
    return sorted(p for p in primes if hilbert_symbol(a, b, p) == -1)


def algebra_discriminant(a: Rational, b: Rational) -> int:
    """Product of the finite ramified primes of the quaternion algebra (a, b)."""
    return math.prod(ramified_primes(a, b))


def field_discriminant(a: Rational) -> int:
    """Discriminant of Q(sqrt(a)) for a non-square rational a."""
    s = squarefree_part(a)
    return s if s % 4 == 1 else 4 * s


@dataclass(frozen=True)
class Algebra:
    """Q(sqrt(a)) when b is None, otherwise the quaternion algebra (a, b)."""

    a: Fraction
    b: Fraction | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", as_fraction(self.a))
        if self.b is not None:
            object.__setattr__(self, "b", as_fraction(self.b))
        if self.a == 0 or self.b == 0:
            raise ValueError("structure constants must be nonzero")

    @classmethod
    def quadratic(cls, d: int) -> "Algebra":
        """Q(sqrt(-d))."""
        return cls(Fraction(-d))

    @classmethod
    def quaternion(cls, a: Rational, b: Rational) -> "Algebra":
        return cls(as_fraction(a), as_fraction(b))

    @property
    def kind(self) -> str:
        return "quadratic" if self.b is None else "quaternion"

    @property
    def is_quaternion(self) -> bool:
        return self.b is not None

    @property
    def rank(self) -> int:
        return 2 if self.b is None else 4

    @property
    def definite(self) -> bool:
        if self.b is None:
            return self.a < 0
        return self.a < 0 and self.b < 0

    @cached_property
    def discriminant(self) -> int:
        """disc(H) for quaternion algebras, |disc K| for quadratic fields."""
        if self.b is None:
            return abs(field_discriminant(self.a))
        return algebra_discriminant(self.a, self.b)

    @cached_property
    def norm_weights(self) -> tuple[Fraction, ...]:
        """Diagonal of the norm form in coordinates (x, y[, z, t])."""
        if self.b is None:
            return (Fraction(1), -self.a)
        return (Fraction(1), -self.a, -self.b, self.a * self.b)

    @cached_property
    def _ints(self) -> tuple[int, int, int, int]:
        b = self.b if self.b is not None else Fraction(1)
        return (self.a.numerator, self.a.denominator, b.numerator, b.denominator)

    def element(self, *coords: Rational) -> "Quat":
        return Quat(self, *coords)

    @cached_property
    def one(self) -> "Quat":
        return Quat(self, 1)

    @cached_property
    def zero(self) -> "Quat":
        return Quat(self)

    @property
    def i(self) -> "Quat":
        return Quat(self, 0, 1)

    @property
    def j(self) -> "Quat":
        self._need_quaternion()
        return Quat(self, 0, 0, 1)

    @property
    def k(self) -> "Quat":
        self._need_quaternion()
        return Quat(self, 0, 0, 0, 1)

    def basis(self) -> list["Quat"]:
        return [Quat(self, *(1 if r == c else 0 for c in range(self.rank))) for r in range(self.rank)]

    def _need_quaternion(self) -> None:
        if self.b is None:
            raise DescriptorMismatch("quadratic field has no j coordinate")

    def __str__(self) -> str:
        if self.b is None:
            return f"Q(sqrt({self.a}))"
        return f"({self.a},{self.b})"


class Quat:
    """Element x + y i + z j + t ij with rational coordinates."""

    __slots__ = ("alg", "num", "den")

    def __init__(self, alg: Algebra, *coords: Rational) -> None:
        if len(coords) > 4:
            raise ValueError("at most four coordinates")
        fr = [as_fraction(c) for c in coords] + [Fraction(0)] * (4 - len(coords))
        if alg.b is None and (fr[2] or fr[3]):
            raise DescriptorMismatch("quadratic elements have no j, ij part")
        den = math.lcm(*(f.denominator for f in fr))
        self.alg = alg
        self.num = tuple(f.numerator * (den // f.denominator) for f in fr)
        self.den = den

    @classmethod
    def _make(cls, alg: Algebra, num: Sequence[int], den: int) -> "Quat":
        g = math.gcd(den, *num)
        if den < 0:
            g = -g
        q = object.__new__(cls)
        q.alg = alg
        if g == 1:
            q.num = tuple(num)
            q.den = den
        else:
            q.num = tuple(n // g for n in num)
            q.den = den // g
        return q

    @classmethod
    def from_vector(cls, alg: Algebra, vec: Iterable[Rational]) -> "Quat":
        return cls(alg, *vec)

    # coordinates
    @property
    def coords(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(n, self.den) for n in self.num)

    @property
    def x(self) -> Fraction:
        return Fraction(self.num[0], self.den)

    @property
    def y(self) -> Fraction:
        return Fraction(self.num[1], self.den)

    @property
    def z(self) -> Fraction:
        return Fraction(self.num[2], self.den)

    @property
    def t(self) -> Fraction:
        return Fraction(self.num[3], self.den)

    def vector(self) -> tuple[Fraction, ...]:
        """Coordinates in the algebra's own dimension (2 or 4)."""
        return self.coords[: self.alg.rank]

    # arithmetic
    def _check(self, other: "Quat") -> None:
        if self.alg != other.alg:
            raise DescriptorMismatch(f"{self.alg} vs {other.alg}")

    def _lift(self, other) -> "Quat":
        if isinstance(other, Quat):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Quat(self.alg, other)
        return NotImplemented

    def __add__(self, other) -> "Quat":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        d1, d2 = self.den, other.den
        if d1 == d2:
            return Quat._make(self.alg, [p + q for p, q in zip(self.num, other.num)], d1)
        return Quat._make(self.alg, [p * d2 + q * d1 for p, q in zip(self.num, other.num)], d1 * d2)

    __radd__ = __add__

    def __neg__(self) -> "Quat":
        return Quat._make(self.alg, [-n for n in self.num], self.den)

    def __sub__(self, other) -> "Quat":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Quat":
        return (-self) + other

    def __mul__(self, other) -> "Quat":
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return Quat._make(self.alg, [n * other.numerator for n in self.num], self.den * other.denominator)
        if not isinstance(other, Quat):
            return NotImplemented
        self._check(other)
        an, ad, bn, bd = self.alg._ints
        x1, y1, z1, t1 = self.num
        x2, y2, z2, t2 = other.num
        L = ad * bd
        if L == 1:
            x = x1 * x2 + an * y1 * y2 + bn * z1 * z2 - an * bn * t1 * t2
            y = x1 * y2 + y1 * x2 - bn * (z1 * t2 - t1 * z2)
            z = x1 * z2 + z1 * x2 + an * (y1 * t2 - t1 * y2)
            t = x1 * t2 + t1 * x2 + y1 * z2 - z1 * y2
        else:
            x = L * x1 * x2 + an * bd * y1 * y2 + bn * ad * z1 * z2 - an * bn * t1 * t2
            y = L * (x1 * y2 + y1 * x2) - bn * ad * (z1 * t2 - t1 * z2)
            z = L * (x1 * z2 + z1 * x2) + an * bd * (y1 * t2 - t1 * y2)
            t = L * (x1 * t2 + t1 * x2 + y1 * z2 - z1 * y2)
        return Quat._make(self.alg, (x, y, z, t), self.den * other.den * L)

    def __rmul__(self, other) -> "Quat":
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __truediv__(self, other) -> "Quat":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisor("division by zero")
            return self * (1 / Fraction(other))
        return self * other.inverse()

    def __pow__(self, e: int) -> "Quat":
        if e < 0:
            return self.inverse() ** (-e)
        r = self.alg.one
        base = self
        while e:
            if e & 1:
                r = r * base
            base = base * base
            e >>= 1
        return r

    def conj(self) -> "Quat":
        x, y, z, t = self.num
        return Quat._make(self.alg, (x, -y, -z, -t), self.den)

    def dagger(self) -> "Quat":
        x, y, z, t = self.num
        return Quat._make(self.alg, (x, y, z, -t), self.den)

    def _norm_num(self) -> tuple[int, int]:
        an, ad, bn, bd = self.alg._ints
        x, y, z, t = self.num
        L = ad * bd
        n = L * x * x - an * bd * y * y - bn * ad * z * z + an * bn * t * t
        return n, L * self.den * self.den

    def norm(self) -> Fraction:
        n, d = self._norm_num()
        return Fraction(n, d)

    def trace(self) -> Fraction:
        return Fraction(2 * self.num[0], self.den)

    def inverse(self) -> "Quat":
        n, d = self._norm_num()
        if n == 0:
            raise ZeroDivisor("zero has no inverse")
        # conj / nrm, with nrm = n / d
        x, y, z, t = self.num
        return Quat._make(self.alg, (x * d, -y * d, -z * d, -t * d), self.den * n)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_integral(self) -> bool:
        """Reduced norm and trace are integers."""
        n, d = self._norm_num()
        return n % d == 0 and (2 * self.num[0]) % self.den == 0

    def is_pure(self) -> bool:
        return self.num[0] == 0

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Quat(self.alg, other)
        if not isinstance(other, Quat):
            return NotImplemented
        return self.alg == other.alg and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.alg, self.num, self.den))

    def __repr__(self) -> str:
        return f"Quat({self.alg}, {format_quat(self)})"

    def __str__(self) -> str:
        return format_quat(self)


def format_quat(q: Quat) -> str:
    """Human form such as (1+i+j+ij)/2."""
    names = ["", "i", "j", "ij"]
    parts = []
    for n, name in zip(q.num, names):
        if n == 0:
            continue
        mag = abs(n)
        term = name if (mag == 1 and name) else f"{mag}{name}"
        parts.append(("-" if n < 0 else "+", term))
    if not parts:
        return "0"
    s = "".join(sign + term for sign, term in parts)
    if s.startswith("+"):
        s = s[1:]
    if q.den == 1:
        return s
    if len(parts) == 1 and parts[0][0] == "+":
        return f"{s}/{q.den}"
    return f"({s})/{q.den}"


def commutator(u: Quat, v: Quat) -> Quat:
    return u * v - v * u


@dataclass(frozen=True)
class Involution:
    """Standard involution or the orthogonal involution fixing 1, i, j."""

    kind: str
    algebra: Algebra = field(compare=True)

    KINDS = ("standard", "orthogonal-ij")

    def __post_init__(self) -> None:
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown involution kind {self.kind!r}")
        if self.kind == "orthogonal-ij":
            self.algebra._need_quaternion()

    @classmethod
    def orthogonal(cls, algebra: Algebra) -> "Involution":
        return cls("orthogonal-ij", algebra)

    @property
    def xi(self) -> Quat:
        """Generator of the (-1)-eigenspace."""
        return self.algebra.k

    @property
    def norm_xi(self) -> Fraction:
        return self.algebra.a * self.algebra.b

    @property
    def disc(self) -> int:
        """Discriminant of the involution, the square class of -nrm(xi)."""
        return -squarefree_part(self.norm_xi)

    def __call__(self, u: Quat) -> Quat:
        return apply_involution(self, u)


def apply_involution(inv: Involution, u: Quat) -> Quat:
    if u.alg != inv.algebra:
        raise DescriptorMismatch("element and involution live in different algebras")
    if inv.kind == "standard":
        return u.conj()
    return u.dagger()


def conjugate_standard(u: Quat) -> Quat:
    return u.conj()


def reduced_norm(u: Quat) -> Fraction:
    return u.norm()


def reduced_trace(u: Quat) -> Fraction:
    return u.trace()


def multiply(u: Quat, v: Quat) -> Quat:
    return u * v


def inverse(u: Quat) -> Quat:
    return u.inverse()


def parse_quat(alg: Algebra, text: str) -> Quat:
    """Parse a coordinate string "x y z t" (rationals separated by spaces)."""
    parts = text.replace(",", " ").split()
    return Quat(alg, *parts)
