"""Exact coefficient fields: rationals, prime fields and cyclotomic fields.

Each field is a small context object.  Elements are plain values where that
is cheap (``int``/``Fraction`` for the rationals, canonical ``int`` residues
for F_p) and :class:`CyclotomicElement` instances for Q(zeta_n).  Polynomial
code never touches elements directly; it goes through the context methods.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

WORD_LIMIT = 1 << 63


class FieldError(ValueError):
    """Invalid field construction or an operation the context cannot do."""


# ---------------------------------------------------------------------------
# integer helpers
# ---------------------------------------------------------------------------

def is_prime(p: int) -> bool:
    """Deterministic Miller-Rabin, valid for every p < 3.3e24."""
    if p < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def _poly_divmod_int(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # coefficient lists low -> high, den monic
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    dd = len(den) - 1
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]
        if c:
            q[k - dd] = c
            for t in range(len(den)):
                num[k - dd + t] -= c * den[t]
    rem = num[:dd] if dd else []
    return q, rem


@lru_cache(maxsize=None)
def _cyclotomic(n: int) -> tuple[int, ...]:
    num = [-1] + [0] * (n - 1) + [1]  # t^n - 1
    for d in divisors(n)[:-1]:
        num, rem = _poly_divmod_int(num, list(_cyclotomic(d)))
        if any(rem):
            raise ArithmeticError(f"inexact division by Phi_{d}")
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return tuple(num)


def cyclotomic_polynomial(n: int) -> list[int]:
    """Coefficients of Phi_n, lowest degree first (``[-1, 1]`` is t - 1)."""
    if n < 1:
        raise FieldError("cyclotomic polynomial needs n >= 1")
    return list(_cyclotomic(n))


def _as_rational(x) -> Fraction | int:
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        return _as_rational(Fraction(x))
    raise FieldError(f"cannot interpret {x!r} as a rational number")


def format_rational(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# contexts
# ---------------------------------------------------------------------------

class Field:
    """Shared interface.  Subclasses implement the arithmetic primitives."""

    kind: str = ""
    characteristic: int = 0

    zero: object
    one: object

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        out = self.one
        while e:
            if e & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            e >>= 1
        return out

    def is_one(self, a) -> bool:
        return a == self.one

    def spec(self) -> str:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.spec()}>"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and self.spec() == other.spec()

    def __hash__(self) -> int:
        return hash(self.spec())


class RationalField(Field):
    """Q with ``int``/``Fraction`` elements; integers stay integers."""

    kind = "rational"
    zero = 0
    one = 1

    def __call__(self, x):
        return _as_rational(x)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in Q")
        if a == 1 or a == -1:
            return a
        return _as_rational(Fraction(1) / a)

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in Q")
        return _as_rational(Fraction(a) / b)

    def is_zero(self, a) -> bool:
        return a == 0

    def to_str(self, a) -> str:
        return format_rational(a)

    def from_str(self, s: str):
        return _as_rational(Fraction(s.strip()))

    def to_json(self, a):
        return format_rational(a)

    def from_json(self, obj):
        return _as_rational(Fraction(str(obj)))

    def spec(self) -> str:
        return "rational"


class PrimeField(Field):
    """F_p for a word-sized prime p; elements are residues in [0, p)."""

    kind = "prime"
    zero = 0
    one = 1

    def __init__(self, p: int):
        if not isinstance(p, int) or p >= WORD_LIMIT:
            raise FieldError(f"prime modulus must be an int below 2^63, got {p!r}")
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self._roots: dict[int, int] = {}

    def __call__(self, x):
        if isinstance(x, Fraction):
            return x.numerator * self.inv(x.denominator % self.p) % self.p
        if isinstance(x, str):
            return self(Fraction(x))
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return -a % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in F_{self.p}")
        return pow(a, -1, self.p)

    def is_zero(self, a) -> bool:
        return a == 0

    def to_str(self, a) -> str:
        return str(a)

    def from_str(self, s: str):
        return self(s.strip())

    def to_json(self, a):
        return a

    def from_json(self, obj):
        return self(obj)

    def supports_roots_of_unity(self, n: int) -> bool:
        return (self.p - 1) % n == 0

    def primitive_root_of_unity(self, n: int) -> int:
        """Smallest positive residue of multiplicative order exactly n."""
        if n in self._roots:
            return self._roots[n]
        if not self.supports_roots_of_unity(n):
            raise FieldError(f"F_{self.p} has no primitive {n}-th root of unity (p mod n != 1)")
        prime_factors = [q for q in divisors(n) if q > 1 and is_prime(q)]
        for z in range(1, self.p):
            if pow(z, n, self.p) != 1:
                continue
            if all(pow(z, n // q, self.p) != 1 for q in prime_factors):
                self._roots[n] = z
                return z
        raise FieldError("no root found")  # unreachable for valid p

    def spec(self) -> str:
        return f"prime:{self.p}"


class CyclotomicElement:
    """Element of Q(zeta_n) as a polynomial in zeta of degree < phi(n)."""

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs, field: "CyclotomicField"):
        self.coeffs = tuple(coeffs)
        self.field = field

    def _wrap(self, other):
        if isinstance(other, CyclotomicElement):
            return other
        return self.field(other)

    def __add__(self, other):
        other = self._wrap(other)
        return CyclotomicElement([a + b for a, b in zip(self.coeffs, other.coeffs)], self.field)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicElement([-a for a in self.coeffs], self.field)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        return self.field.mul(self, self._wrap(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self.field.div(self, self._wrap(other))

    def __pow__(self, e: int):
        return self.field.pow(self, e)

    def __eq__(self, other):
        if isinstance(other, CyclotomicElement):
            return self.coeffs == other.coeffs and self.field.n == other.field.n
        if isinstance(other, (int, Fraction)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return NotImplemented

    def __hash__(self):
        if not any(self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.field.n, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        return f"CyclotomicElement({self.field.to_str(self)}, n={self.field.n})"


class CyclotomicField(Field):
    """Q(zeta_n) = Q[t]/(Phi_n); zeta is the class of t."""

    kind = "cyclotomic"

    def __init__(self, n: int):
        if not isinstance(n, int) or n < 1:
            raise FieldError(f"cyclotomic order must be a positive int, got {n!r}")
        self.n = n
        self.phi = cyclotomic_polynomial(n)
        self.degree = len(self.phi) - 1
        self.zero = CyclotomicElement([0] * self.degree, self)
        self.one = CyclotomicElement([1] + [0] * (self.degree - 1), self)
        # t^k mod Phi_n for k < 2*degree - 1, used by mul
        self._powers = []
        for k in range(2 * self.degree - 1):
            self._powers.append(self._reduce_list([0] * k + [1]))

    def _reduce_list(self, c: list) -> tuple:
        c = list(c)
        d = self.degree
        for k in range(len(c) - 1, d - 1, -1):
            a = c[k]
            if a:
                for t in range(d + 1):
                    c[k - d + t] -= a * self.phi[t]
        c = c[:d] + [0] * max(0, d - len(c))
        return tuple(_as_rational(x) for x in c)

    def __call__(self, x):
        if isinstance(x, CyclotomicElement):
            if x.field.n != self.n:
                raise FieldError("element of a different cyclotomic field")
            return x
        if isinstance(x, (list, tuple)):
            if len(x) > self.degree:
                return CyclotomicElement(self._reduce_list([_as_rational(v) for v in x]), self)
            return CyclotomicElement([_as_rational(v) for v in x] + [0] * (self.degree - len(x)), self)
        return CyclotomicElement([_as_rational(x)] + [0] * (self.degree - 1), self)

    def add(self, a, b):
        return CyclotomicElement([x + y for x, y in zip(a.coeffs, b.coeffs)], self)

    def neg(self, a):
        return CyclotomicElement([-x for x in a.coeffs], self)

    def sub(self, a, b):
        return CyclotomicElement([x - y for x, y in zip(a.coeffs, b.coeffs)], self)

    def mul(self, a, b):
        d = self.degree
        ac, bc = a.coeffs, b.coeffs
        if d == 1:
            return CyclotomicElement((ac[0] * bc[0],), self)
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(ac):
            if x:
                for j, y in enumerate(bc):
                    if y:
                        prod[i + j] += x * y
        out = list(prod[:d])
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                red = self._powers[k]
                for t in range(d):
                    out[t] += c * red[t]
        return CyclotomicElement([_as_rational(v) for v in out], self)

    def inv(self, a):
        if not any(a.coeffs):
            raise ZeroDivisionError(f"inverse of zero in Q(zeta_{self.n})")
        # extended Euclid in Q[t]: s*a + u*Phi = 1
        r0 = [Fraction(c) for c in self.phi]
        r1 = [Fraction(c) for c in a.coeffs]
        s0: list[Fraction] = [Fraction(0)]
        s1: list[Fraction] = [Fraction(1)]
        _trim(r1)
        while len(r1) > 1 or r1[0] != 0:
            q, r = _fdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _fsub(s0, _fmul(q, s1))
        # r0 is a nonzero constant since Phi_n is irreducible
        c = r0[0]
        return self([x / c for x in s0])

    def is_zero(self, a) -> bool:
        return not any(a.coeffs)

    def root_of_unity(self, a: int) -> CyclotomicElement:
        a %= self.n
        if a < len(self._powers):
            return CyclotomicElement(self._powers[a], self)
        return self([0] * a + [1])

    def to_str(self, a) -> str:
        if not any(a.coeffs[1:]):
            return format_rational(a.coeffs[0])
        return "(" + ",".join(format_rational(c) for c in a.coeffs) + ")"

    def from_str(self, s: str):
        s = s.strip()
        if s.startswith("("):
            return self([Fraction(t) for t in s[1:-1].split(",")])
        return self(Fraction(s))

    def to_json(self, a):
        return [format_rational(c) for c in a.coeffs]

    def from_json(self, obj):
        if isinstance(obj, list):
            return self([Fraction(str(c)) for c in obj])
        return self(Fraction(str(obj)))

    def spec(self) -> str:
        return f"cyclotomic:{self.n}"


def _trim(c: list) -> list:
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def _fmul(a: list, b: list) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def _fsub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    a = a + [Fraction(0)] * (n - len(a))
    b = b + [Fraction(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def _fdivmod(num: list, den: list) -> tuple[list, list]:
    num = list(num)
    _trim(num)
    dd = len(den) - 1
    if len(num) - 1 < dd:
        return [Fraction(0)], num
    q = [Fraction(0)] * (len(num) - dd)
    lead = den[-1]
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k] / lead
        q[k - dd] = c
        if c:
            for t in range(dd + 1):
                num[k - dd + t] -= c * den[t]
    rem = _trim(num[:dd] if dd else [Fraction(0)])
    return _trim(q), rem


QQ = RationalField()


def root_of_unity(ctx: Field, n: int, a: int):
    """zeta^a for the fixed primitive n-th root of unity of ``ctx``."""
    if isinstance(ctx, CyclotomicField):
        if ctx.n != n:
            raise FieldError(f"context is Q(zeta_{ctx.n}), asked for order {n}")
        return ctx.root_of_unity(a)
    if isinstance(ctx, PrimeField):
        z = ctx.primitive_root_of_unity(n)
        return pow(z, a % n, ctx.p)
    if isinstance(ctx, RationalField) and n in (1, 2):
        return 1 if n == 1 or a % 2 == 0 else -1
    raise FieldError(f"{ctx.spec()} has no primitive {n}-th root of unity")


def supports_roots(ctx: Field, n: int) -> bool:
    if isinstance(ctx, CyclotomicField):
        return ctx.n == n
    if isinstance(ctx, PrimeField):
        return ctx.supports_roots_of_unity(n)
    return n in (1, 2)


def parse_field(spec: str, n: int | None = None) -> Field:
    """Build a context from ``rational``, ``prime:P`` or ``cyclotomic[:N]``.

    ``n`` fills in the order for a bare ``cyclotomic``.
    """
    spec = spec.strip().lower()
    if spec in ("rational", "q", "qq"):
        return QQ
    if spec.startswith("prime:"):
        return PrimeField(int(spec.split(":", 1)[1]))
    if spec.startswith("cyclotomic"):
        _, _, order = spec.partition(":")
        if order:
            return CyclotomicField(int(order))
        if n is None:
            raise FieldError("cyclotomic field needs an order")
        return CyclotomicField(n)
    raise FieldError(f"unknown field spec {spec!r}")


def primes_congruent_one(n: int, count: int, start: int = 2) -> list[int]:
    """The first ``count`` primes p >= start with p = 1 (mod n)."""
    out = []
    p = max(start, 2)
    while len(out) < count:
        if (p - 1) % n == 0 and is_prime(p):
            out.append(p)
        p += 1
    return out
