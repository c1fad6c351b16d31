"""Sparse multivariate polynomials over an exact field context.

A polynomial is a dict mapping exponent tuples to nonzero coefficients.  The
ring carries the variable count, the coefficient field and a monomial order;
the order only matters for display, leading terms and Groebner work.
"""

from __future__ import annotations

import json
from operator import add as _add
from typing import Iterable, Sequence

from .fields import QQ, CyclotomicField, Field, PrimeField

EXP_CAP = 2**31 - 1


class RingMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# monomial orders
# ---------------------------------------------------------------------------

def _grevlex_key(e):
    return (sum(e),) + tuple(-x for x in reversed(e))


class MonomialOrder:
    """lex, grevlex or a two-block elimination order.

    ``block`` is the number of leading variables to eliminate; each block is
    compared by grevlex.  ``perm`` lists variable indices from most to least
    significant (default: natural order).
    """

    KINDS = ("lex", "grevlex", "block")

    def __init__(self, kind: str = "grevlex", block: int | None = None,
                 perm: Sequence[int] | None = None):
        if kind not in self.KINDS:
            raise ValueError(f"unknown monomial order {kind!r}")
        if kind == "block" and (block is None or block < 1):
            raise ValueError("block order needs block >= 1")
        self.kind = kind
        self.block = block
        self.perm = tuple(perm) if perm is not None else None
        self.key = self._make_key()

    def _make_key(self):
        perm = self.perm
        kind = self.kind
        if kind == "lex":
            if perm is None:
                return lambda e: e
            return lambda e: tuple(e[i] for i in perm)
        if kind == "grevlex":
            if perm is None:
                return _grevlex_key
            return lambda e: _grevlex_key(tuple(e[i] for i in perm))
        k = self.block

        def key(e):
            if perm is not None:
                e = tuple(e[i] for i in perm)
            return _grevlex_key(e[:k]) + _grevlex_key(e[k:])
        return key

    def __reduce__(self):
        return (MonomialOrder, (self.kind, self.block, self.perm))

    def __eq__(self, other):
        return (isinstance(other, MonomialOrder)
                and (self.kind, self.block, self.perm) == (other.kind, other.block, other.perm))

    def __hash__(self):
        return hash((self.kind, self.block, self.perm))

    def __repr__(self):
        extra = f", block={self.block}" if self.block else ""
        return f"MonomialOrder({self.kind!r}{extra})"


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def elimination_order(k: int) -> MonomialOrder:
    """Order eliminating the first ``k`` variables."""
    return MonomialOrder("block", block=k)


# ---------------------------------------------------------------------------
# rings and polynomials
# ---------------------------------------------------------------------------

class PolyRing:
    def __init__(self, nvars: int, field: Field = QQ, order: MonomialOrder = GREVLEX,
                 names: Sequence[str] | None = None):
        if nvars < 1:
            raise ValueError("a ring needs at least one variable")
        self.nvars = nvars
        self.field = field
        self.order = order
        self.names = tuple(names) if names is not None else tuple(f"x{i}" for i in range(nvars))
        if len(self.names) != nvars:
            raise ValueError("names must match nvars")
        self._zero_exp = (0,) * nvars

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and self.nvars == other.nvars
                and self.field == other.field and self.order == other.order
                and self.names == other.names)

    def __hash__(self):
        return hash((self.nvars, self.field, self.order, self.names))

    def __repr__(self):
        return f"PolyRing({self.nvars}, {self.field.spec()}, {self.order!r})"

    def with_order(self, order: MonomialOrder) -> "PolyRing":
        return PolyRing(self.nvars, self.field, order, self.names)

    def with_field(self, field: Field) -> "PolyRing":
        return PolyRing(self.nvars, field, self.order, self.names)

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return Poly(self, {self._zero_exp: self.field.one})

    def const(self, c) -> "Poly":
        c = self.field(c)
        if self.field.is_zero(c):
            return self.zero()
        return Poly(self, {self._zero_exp: c})

    def gen(self, i: int) -> "Poly":
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range")
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): self.field.one})

    def gens(self) -> list["Poly"]:
        return [self.gen(i) for i in range(self.nvars)]

    def monomial(self, exps: Sequence[int], coeff=1) -> "Poly":
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise ValueError(f"exponent vector has length {len(exps)}, ring has {self.nvars} variables")
        if any(x < 0 or x > EXP_CAP for x in exps):
            raise OverflowError("exponent outside [0, 2^31-1]")
        c = self.field(coeff)
        if self.field.is_zero(c):
            return self.zero()
        return Poly(self, {exps: c})

    def from_terms(self, terms: dict) -> "Poly":
        f = self.field
        return Poly(self, {tuple(e): f(c) for e, c in terms.items() if not f.is_zero(f(c))})

    def __call__(self, obj) -> "Poly":
        if isinstance(obj, Poly):
            if obj.ring == self:
                return obj
            if obj.ring.nvars != self.nvars:
                raise RingMismatch("variable count differs")
            return self.from_terms(obj.terms)
        if isinstance(obj, str):
            return from_text(obj, self)
        return self.const(obj)


class Poly:
    """Immutable sparse polynomial; ``terms`` must not be mutated."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    # -- basic queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def sorted_terms(self, order: MonomialOrder | None = None) -> list[tuple[tuple, object]]:
        key = (order or self.ring.order).key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_monomial(self, order: MonomialOrder | None = None) -> tuple:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        key = (order or self.ring.order).key
        return max(self.terms, key=key)

    def leading_coefficient(self, order: MonomialOrder | None = None):
        return self.terms[self.leading_monomial(order)]

    def coefficient(self, exps: Sequence[int]):
        return coefficient_of(self, exps)

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingMismatch(f"{self.ring!r} vs {other.ring!r}")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        return add(self, self._coerce(other))

    __radd__ = __add__

    def __neg__(self):
        f = self.ring.field
        return Poly(self.ring, {e: f.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return add(self, -self._coerce(other))

    def __rsub__(self, other):
        return add(self._coerce(other), -self)

    def __mul__(self, other):
        if isinstance(other, Poly):
            return multiply(self, other)
        return scale(other, self)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        out = self.ring.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring.nvars == other.ring.nvars and self.terms == other.terms
        if not self.terms:
            return other == 0
        return self.terms == self.ring.const(other).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"Poly({to_text(self)!r})"

    def __str__(self):
        return to_text(self)


def _check_ring(p: Poly, q: Poly):
    if p.ring is not q.ring and p.ring != q.ring:
        raise RingMismatch(f"{p.ring!r} vs {q.ring!r}")


def add(p: Poly, q: Poly) -> Poly:
    _check_ring(p, q)
    f = p.ring.field
    if len(p.terms) < len(q.terms):
        p, q = q, p
    out = dict(p.terms)
    for e, c in q.terms.items():
        if e in out:
            s = f.add(out[e], c)
            if f.is_zero(s):
                del out[e]
            else:
                out[e] = s
        else:
            out[e] = c
    return Poly(p.ring, out)


def scale(c, p: Poly) -> Poly:
    f = p.ring.field
    c = f(c)
    if f.is_zero(c):
        return p.ring.zero()
    return Poly(p.ring, {e: f.mul(c, a) for e, a in p.terms.items()})


def _mul_terms(a: dict, b: dict, field: Field, trunc=None) -> dict:
    out: dict = {}
    mul, addf, is_zero = field.mul, field.add, field.is_zero
    if trunc is None:
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(map(_add, ea, eb))
                c = mul(ca, cb)
                if e in out:
                    out[e] = addf(out[e], c)
                else:
                    out[e] = c
    else:
        tvars, cap = trunc
        da = {ea: sum(ea[i] for i in tvars) for ea in a}
        db = {eb: sum(eb[i] for i in tvars) for eb in b}
        for ea, ca in a.items():
            room = cap - da[ea]
            if room < 0:
                continue
            for eb, cb in b.items():
                if db[eb] > room:
                    continue
                e = tuple(map(_add, ea, eb))
                c = mul(ca, cb)
                if e in out:
                    out[e] = addf(out[e], c)
                else:
                    out[e] = c
    return {e: c for e, c in out.items() if not is_zero(c)}


def multiply(p: Poly, q: Poly) -> Poly:
    _check_ring(p, q)
    if not p.terms or not q.terms:
        return p.ring.zero()
    if p.degree() + q.degree() > EXP_CAP:
        raise OverflowError("exponent overflow in polynomial product")
    return Poly(p.ring, _mul_terms(p.terms, q.terms, p.ring.field))


def multiply_monomial(p: Poly, exps: tuple, c=None) -> Poly:
    f = p.ring.field
    if c is None:
        return Poly(p.ring, {tuple(map(_add, e, exps)): a for e, a in p.terms.items()})
    return Poly(p.ring, {tuple(map(_add, e, exps)): f.mul(c, a) for e, a in p.terms.items()})


def product(polys: Iterable[Poly], ring: PolyRing) -> Poly:
    out = ring.one()
    for p in polys:
        out = out * p
    return out


def substitute_var(p: Poly, i: int, r) -> Poly:
    """Replace x_i by ``r`` (a polynomial of the same ring or a constant)."""
    ring = p.ring
    if not 0 <= i < ring.nvars:
        raise IndexError(f"variable index {i} out of range")
    r = p._coerce(r)
    groups: dict[int, dict] = {}
    for e, c in p.terms.items():
        k = e[i]
        rest = e[:i] + (0,) + e[i + 1:]
        groups.setdefault(k, {})[rest] = c
    out = ring.zero()
    powers = {0: ring.one()}
    for k in sorted(groups):
        if k not in powers:
            powers[k] = r ** k
        out = out + Poly(ring, groups[k]) * powers[k]
    return out


def partial_derivative(p: Poly, i: int) -> Poly:
    ring = p.ring
    if not 0 <= i < ring.nvars:
        raise IndexError(f"variable index {i} out of range")
    f = ring.field
    out = {}
    for e, c in p.terms.items():
        k = e[i]
        if k == 0:
            continue
        c2 = f.mul(f(k), c)
        if not f.is_zero(c2):
            out[e[:i] + (k - 1,) + e[i + 1:]] = c2
    return Poly(ring, out)


def coefficient_of(p: Poly, exps: Sequence[int]):
    exps = tuple(exps)
    if len(exps) != p.ring.nvars:
        raise ValueError("exponent vector length does not match the ring")
    return p.terms.get(exps, p.ring.field.zero)


def linear_substitution(p: Poly, images: Sequence[Poly], target: PolyRing | None = None,
                        truncate: tuple[Iterable[int], int] | None = None) -> Poly:
    """Simultaneous substitution x_i -> images[i].

    ``truncate=(vars, d)`` drops every term whose degree in ``vars`` exceeds
    ``d``; this is exact for the low-degree part because the images have
    degree <= 1.
    """
    if len(images) != p.ring.nvars:
        raise ValueError(f"need {p.ring.nvars} images, got {len(images)}")
    target = target or (images[0].ring if images else p.ring)
    field = target.field
    images = [target(im) for im in images]
    if any(im.degree() > 1 for im in images):
        raise ValueError("images must have degree <= 1")
    trunc = None
    if truncate is not None:
        tvars, cap = truncate
        trunc = (tuple(tvars), cap)
    one = {target._zero_exp: field.one}
    cache: list[list[dict]] = [[one] for _ in images]

    def power(i, k):
        lst = cache[i]
        while len(lst) <= k:
            lst.append(_mul_terms(lst[-1], images[i].terms, field, trunc))
        return lst[k]

    convert = p.ring.field != field
    acc: dict = {}
    for e, c in p.terms.items():
        cur = {target._zero_exp: field(c) if convert else c}
        for i, k in enumerate(e):
            if k:
                cur = _mul_terms(cur, power(i, k), field, trunc)
                if not cur:
                    break
        for m, a in cur.items():
            if m in acc:
                acc[m] = field.add(acc[m], a)
            else:
                acc[m] = a
    return Poly(target, {m: a for m, a in acc.items() if not field.is_zero(a)})


def min_degree_in(p: Poly, vars: Iterable[int]) -> int:
    if not p.terms:
        raise ValueError("min_degree_in is undefined on the zero polynomial")
    vs = tuple(vars)
    return min(sum(e[i] for i in vs) for e in p.terms)


def embed(p: Poly, target: PolyRing, var_map: Sequence[int]) -> Poly:
    """Rename variables: x_i of ``p`` becomes x_{var_map[i]} in ``target``."""
    out = {}
    n = target.nvars
    for e, c in p.terms.items():
        new = [0] * n
        for i, k in enumerate(e):
            if k:
                new[var_map[i]] += k
        out[tuple(new)] = c
    return Poly(target, out)


# ---------------------------------------------------------------------------
# text / JSON / CAS formats
# ---------------------------------------------------------------------------

def _monomial_text(e, names) -> str:
    parts = []
    for name, k in zip(names, e):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def to_text(p: Poly) -> str:
    """Signed sum ``c*x0^2*x1 - x2 + 3/2``, terms in descending ring order."""
    if not p.terms:
        return "0"
    f = p.ring.field
    pieces = []
    for e, c in p.sorted_terms():
        mono = _monomial_text(e, p.ring.names)
        cs = f.to_str(c)
        neg = cs.startswith("-")
        if neg:
            cs = cs[1:]
        if mono:
            body = mono if cs == "1" else f"{cs}*{mono}"
        else:
            body = cs
        if not pieces:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append(("- " if neg else "+ ") + body)
    return " ".join(pieces)


def _split_terms(s: str) -> list[tuple[int, str]]:
    out = []
    depth = 0
    sign = 1
    cur = []
    i = 0
    s = s.strip()
    while i < len(s):
        ch = s[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "+-":
            # a sign directly after '/', '^' or '(' belongs to the token
            prev = "".join(cur).rstrip()
            if prev and prev[-1] not in "*^/(,":
                out.append((sign, prev))
                cur = []
                sign = 1 if ch == "+" else -1
                i += 1
                continue
            if not prev:
                sign *= 1 if ch == "+" else -1
                i += 1
                continue
        cur.append(ch)
        i += 1
    tail = "".join(cur).strip()
    if tail:
        out.append((sign, tail))
    return out


def from_text(s: str, ring: PolyRing) -> Poly:
    f = ring.field
    index = {name: i for i, name in enumerate(ring.names)}
    acc: dict = {}
    for sign, term in _split_terms(s):
        coeff = f.one
        exps = [0] * ring.nvars
        for factor in _split_factors(term):
            factor = factor.strip()
            name, _, power = factor.partition("^")
            name = name.strip()
            if name in index:
                exps[index[name]] += int(power) if power else 1
            else:
                val = f.from_str(factor)
                coeff = f.mul(coeff, val)
        if sign < 0:
            coeff = f.neg(coeff)
        e = tuple(exps)
        acc[e] = f.add(acc[e], coeff) if e in acc else coeff
    return Poly(ring, {e: c for e, c in acc.items() if not f.is_zero(c)})


def _split_factors(term: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in term:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "*" and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def to_json_obj(p: Poly) -> dict:
    f = p.ring.field
    return {
        "vars": list(p.ring.names),
        "field": f.spec(),
        "terms": [{"c": f.to_json(c), "e": list(e)} for e, c in p.sorted_terms()],
    }


def to_json(p: Poly) -> str:
    return json.dumps(to_json_obj(p), separators=(",", ":"))


def from_json_obj(obj: dict, ring: PolyRing | None = None) -> Poly:
    if ring is None:
        from .fields import parse_field
        ring = PolyRing(len(obj["vars"]), parse_field(obj.get("field", "rational")),
                        names=obj["vars"])
    f = ring.field
    terms = {}
    for t in obj["terms"]:
        e = tuple(int(x) for x in t["e"])
        if len(e) != ring.nvars:
            raise ValueError("exponent vector length does not match vars")
        terms[e] = f.from_json(t["c"])
    return Poly(ring, {e: c for e, c in terms.items() if not f.is_zero(c)})


def from_json(s: str, ring: PolyRing | None = None) -> Poly:
    return from_json_obj(json.loads(s), ring)


def _z_power(k: int) -> str:
    return "" if k == 0 else ("z" if k == 1 else f"z^{k}")


def _z_poly_text(coeffs) -> str:
    parts = []
    for k, a in enumerate(coeffs):
        if not a:
            continue
        zk = _z_power(k)
        if zk and a in (1, -1):
            parts.append(("-" if a == -1 else "+") + zk)
        else:
            c = format_c(a)
            parts.append(("" if c.startswith("-") else "+") + c + ("*" + zk if zk else ""))
    return "".join(parts).lstrip("+") or "0"


def _cas_coeff_text(p: Poly) -> str:
    # cyclotomic coefficients become polynomials in the parameter z
    f = p.ring.field
    if not isinstance(f, CyclotomicField):
        return to_text(p).replace(" ", "")
    pieces = []
    for e, c in p.sorted_terms():
        mono = _monomial_text(e, p.ring.names)
        nz = [a for a in c.coeffs if a]
        if len(nz) == 1 and c.coeffs[0] in (1, -1) and mono:
            coeff = "-" if c.coeffs[0] == -1 else ""
            pieces.append(coeff + mono)
        else:
            pieces.append(f"({_z_poly_text(c.coeffs)})" + (f"*{mono}" if mono else ""))
    return "+".join(pieces).replace("+-", "-") if pieces else "0"


def format_c(a) -> str:
    from .fields import format_rational
    return format_rational(a)


def to_cas(polys: Sequence[Poly], fmt: str, name: str = "I", header: bool = True) -> str:
    """Generator list as a Singular or Macaulay2 input script.

    ``header=False`` omits the ring declaration so several ideals can share one.
    """
    if not polys:
        raise ValueError("nothing to export")
    ring = polys[0].ring
    f = ring.field
    names = ",".join(ring.names)
    body = ",\n  ".join(_cas_coeff_text(p) for p in polys)
    if fmt == "singular":
        if isinstance(f, PrimeField):
            head = f"ring r = {f.p},({names}),dp;"
        elif isinstance(f, CyclotomicField):
            phi = _z_poly_text(f.phi)
            head = f"ring r = (0,z),({names}),dp;\nminpoly = {phi};"
        else:
            head = f"ring r = 0,({names}),dp;"
        return (f"{head}\n" if header else "") + f"ideal {name} = \n  {body};\n"
    if fmt == "macaulay2":
        if isinstance(f, PrimeField):
            coeffs = f"ZZ/{f.p}"
        elif isinstance(f, CyclotomicField):
            phi = _z_poly_text(f.phi)
            coeffs = f"toField(QQ[z]/({phi}))"
        else:
            coeffs = "QQ"
        return (f"R = {coeffs}[{names}];\n" if header else "") + f"{name} = ideal(\n  {body});\n"
    raise ValueError(f"unknown CAS format {fmt!r}")
