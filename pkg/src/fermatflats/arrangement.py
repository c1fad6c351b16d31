"""Fermat arrangements: hyperplanes x_i = zeta^a x_j, their codimension-2
flats of multiplicity >= 3, and the generators g_A of the ideal of the union
of those flats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Sequence

from .brackets import expand, pair
from .fields import QQ, CyclotomicField, Field, root_of_unity, supports_roots
from .linalg import rank, rref
from .poly import Poly, PolyRing, linear_substitution, multiply_monomial, to_text


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class FermatConfig:
    N: int
    n: int

    def check(self, theorem: bool = True) -> "FermatConfig":
        """Validate; ``theorem`` enforces N >= 2, n >= 3."""
        if theorem and (self.N < 2 or self.n < 3):
            raise ConfigError(f"need N >= 2 and n >= 3, got N={self.N}, n={self.n}")
        if self.N < 1 or self.n < 1:
            raise ConfigError(f"need N >= 1 and n >= 1, got N={self.N}, n={self.n}")
        return self

    @property
    def M(self) -> int:
        return self.N // 2

    @property
    def even(self) -> bool:
        return self.N % 2 == 0

    def ring(self, field: Field = QQ) -> PolyRing:
        return PolyRing(self.N + 1, field)


def _ring_for(cfg: FermatConfig, ring: PolyRing | None) -> PolyRing:
    if ring is None:
        return cfg.ring()
    if ring.nvars != cfg.N + 1:
        raise ConfigError(f"ring has {ring.nvars} variables, configuration needs {cfg.N + 1}")
    return ring


def fermat_polynomial(cfg: FermatConfig, ring: PolyRing | None = None) -> Poly:
    """F_{N,n} = prod_{i<j} (x_i^n - x_j^n)."""
    cfg.check(theorem=False)
    ring = _ring_for(cfg, ring)
    return expand(range(cfg.N + 1), ring, cfg.n)


# ---------------------------------------------------------------------------
# flats
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Flat:
    """``coord``: {x_i = x_j = 0}; ``triple``: {x_i = z^a x_j, x_j = z^b x_k}."""

    kind: str
    i: int
    j: int
    k: int = -1
    a: int = 0
    b: int = 0

    @classmethod
    def coordinate(cls, i: int, j: int) -> "Flat":
        i, j = sorted((i, j))
        if i == j:
            raise ValueError("coordinate flat needs two distinct indices")
        return cls("coord", i, j)

    @classmethod
    def triple(cls, i: int, j: int, k: int, a: int, b: int, n: int) -> "Flat":
        if not i < j < k:
            raise ValueError("triple flat needs i < j < k")
        return cls("triple", i, j, k, a % n, b % n)

    @property
    def key(self) -> tuple:
        return (self.kind, self.i, self.j, self.k, self.a, self.b)

    def to_json(self) -> dict:
        if self.kind == "coord":
            return {"kind": "coord", "i": self.i, "j": self.j}
        return {"kind": "triple", "i": self.i, "j": self.j, "k": self.k, "a": self.a, "b": self.b}

    @classmethod
    def from_json(cls, obj: dict, n: int) -> "Flat":
        if obj["kind"] == "coord":
            return cls.coordinate(obj["i"], obj["j"])
        if obj["kind"] == "triple":
            return cls.triple(obj["i"], obj["j"], obj["k"], obj["a"], obj["b"], n)
        raise ValueError(f"unknown flat kind {obj['kind']!r}")

    def __str__(self):
        if self.kind == "coord":
            return f"coord({self.i},{self.j})"
        return f"triple({self.i},{self.j},{self.k};{self.a},{self.b})"


def enumerate_flats(cfg: FermatConfig) -> list[Flat]:
    """All codimension-2 flats lying on at least 3 hyperplanes, canonical order."""
    cfg.check()
    N, n = cfg.N, cfg.n
    flats = [Flat.coordinate(i, j) for i, j in combinations(range(N + 1), 2)]
    for i, j, k in combinations(range(N + 1), 3):
        for a in range(n):
            for b in range(n):
                flats.append(Flat.triple(i, j, k, a, b, n))
    return flats


def flat_count(cfg: FermatConfig) -> int:
    return comb(cfg.N + 1, 2) + cfg.n ** 2 * comb(cfg.N + 1, 3)


def _zeta_ring(ring: PolyRing, n: int) -> None:
    if not supports_roots(ring.field, n):
        raise ConfigError(f"field {ring.field.spec()} has no primitive {n}-th root of unity")


def flat_linear_forms(flat: Flat, ring: PolyRing, n: int) -> tuple[Poly, Poly]:
    x = ring.gen
    if flat.kind == "coord":
        return x(flat.i), x(flat.j)
    _zeta_ring(ring, n)
    za = root_of_unity(ring.field, n, flat.a)
    zb = root_of_unity(ring.field, n, flat.b)
    return x(flat.i) - x(flat.j) * za, x(flat.j) - x(flat.k) * zb


def flat_parametrization(flat: Flat, ring: PolyRing, n: int) -> list[Poly]:
    """Images of x_0..x_N restricting a polynomial to the flat."""
    images = ring.gens()
    if flat.kind == "coord":
        images[flat.i] = ring.zero()
        images[flat.j] = ring.zero()
        return images
    _zeta_ring(ring, n)
    za = root_of_unity(ring.field, n, flat.a)
    zb = root_of_unity(ring.field, n, flat.b)
    xk = ring.gen(flat.k)
    images[flat.j] = xk * zb
    images[flat.i] = xk * ring.field.mul(za, zb)
    return images


def vanishes_on(p: Poly, flat: Flat, n: int) -> bool:
    return linear_substitution(p, flat_parametrization(flat, p.ring, n)).is_zero()


@dataclass(frozen=True)
class Hyperplane:
    i: int
    j: int
    a: int

    def form(self, ring: PolyRing, n: int) -> Poly:
        return ring.gen(self.i) - ring.gen(self.j) * root_of_unity(ring.field, n, self.a)


def hyperplanes(cfg: FermatConfig) -> list[Hyperplane]:
    return [Hyperplane(i, j, a) for i, j in combinations(range(cfg.N + 1), 2) for a in range(cfg.n)]


def _coeff_vector(form: Poly) -> list:
    f = form.ring.field
    vec = [f.zero] * form.ring.nvars
    for e, c in form.terms.items():
        vec[e.index(1)] = c
    return vec


def hyperplanes_through(flat: Flat, cfg: FermatConfig, field: Field | None = None) -> int:
    """Count arrangement hyperplanes containing ``flat`` by a rank test."""
    field = field or CyclotomicField(cfg.n)
    ring = cfg.ring(field)
    u, v = flat_linear_forms(flat, ring, cfg.n)
    base = [_coeff_vector(u), _coeff_vector(v)]
    return sum(1 for h in hyperplanes(cfg)
               if rank(base + [_coeff_vector(h.form(ring, cfg.n))], field) == 2)


def _span_key(rows: list[list], field: Field) -> tuple:
    red, _ = rref(rows, field)
    return tuple(tuple(field.to_str(x) for x in r) for r in red)


def flat_span_key(flat: Flat, cfg: FermatConfig, field: Field) -> tuple:
    ring = cfg.ring(field)
    u, v = flat_linear_forms(flat, ring, cfg.n)
    return _span_key([_coeff_vector(u), _coeff_vector(v)], field)


def brute_force_flats(cfg: FermatConfig, field: Field | None = None) -> dict[tuple, int]:
    """Intersect every pair of hyperplanes; map flat key -> hyperplane count.

    Independent of :func:`enumerate_flats`: flats are identified by the RREF
    of their two defining forms.  A hyperplane contains a flat iff the flat
    is its intersection with some other hyperplane, so the count is the
    number of distinct hyperplanes among the pairs producing the key.
    """
    field = field or CyclotomicField(cfg.n)
    ring = cfg.ring(field)
    vecs = [_coeff_vector(h.form(ring, cfg.n)) for h in hyperplanes(cfg)]
    members: dict[tuple, set] = {}
    for p, q in combinations(range(len(vecs)), 2):
        members.setdefault(_span_key([vecs[p], vecs[q]], field), set()).update((p, q))
    return {key: len(hs) for key, hs in members.items()}


def census(cfg: FermatConfig, field: Field | None = None) -> dict:
    """Compare the two-family enumeration against the brute-force oracle."""
    field = field or CyclotomicField(cfg.n)
    oracle = brute_force_flats(cfg, field)
    heavy = {k for k, c in oracle.items() if c >= 3}
    flats = enumerate_flats(cfg)
    keys = {flat_span_key(f, cfg, field) for f in flats}
    return {
        "N": cfg.N,
        "n": cfg.n,
        "enumerated": len(flats),
        "formula": flat_count(cfg),
        "oracle": len(heavy),
        "classification_matches": keys == heavy and len(keys) == len(flats),
        "multiplicities": sorted({oracle[k] for k in heavy}),
    }


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorSpec:
    A: tuple[int, ...]
    B: tuple[int, ...] = field(default=())

    @classmethod
    def from_subset(cls, A: Sequence[int], variables: Sequence[int]) -> "GeneratorSpec":
        A = tuple(sorted(A))
        return cls(A, tuple(v for v in sorted(variables) if v not in A))


def subset_size(N: int) -> int:
    return N // 2 if N % 2 == 0 else N // 2 + 1


def generator_specs(N: int, variables: Sequence[int] | None = None) -> list[GeneratorSpec]:
    """Admissible subsets A in lexicographic order."""
    variables = tuple(variables) if variables is not None else tuple(range(N + 1))
    if len(variables) != N + 1:
        raise ConfigError("need N+1 variables")
    return [GeneratorSpec.from_subset(A, variables)
            for A in combinations(sorted(variables), subset_size(N))]


def generator_from_spec(spec: GeneratorSpec, ring: PolyRing, n: int) -> Poly:
    """g_A = (prod_{i in A} x_i) * [A] * [B], brackets over sorted indices."""
    e = [0] * ring.nvars
    for i in spec.A:
        e[i] = 1
    body = expand(spec.A, ring, n) * expand(spec.B, ring, n)
    return multiply_monomial(body, tuple(e))


def generator(spec: GeneratorSpec, cfg: FermatConfig, ring: PolyRing | None = None) -> Poly:
    ring = _ring_for(cfg, ring)
    if len(spec.A) != subset_size(cfg.N):
        raise ConfigError(f"|A| must be {subset_size(cfg.N)} for N={cfg.N}, got {len(spec.A)}")
    if not spec.B:
        spec = GeneratorSpec.from_subset(spec.A, range(cfg.N + 1))
    if sorted(spec.A + spec.B) != list(range(cfg.N + 1)):
        raise ConfigError("A and B must partition {0..N}")
    return generator_from_spec(spec, ring, cfg.n)


def generator_degree(cfg: FermatConfig) -> int:
    M = cfg.M
    if cfg.even:
        return M + cfg.n * M * M
    return (M + 1) + cfg.n * M * (M + 1)


def ideal_generators(cfg: FermatConfig, ring: PolyRing | None = None) -> list[Poly]:
    cfg.check(theorem=False)
    ring = _ring_for(cfg, ring)
    return [generator_from_spec(s, ring, cfg.n) for s in generator_specs(cfg.N)]


def cone_ideal_generators(cfg: FermatConfig, i: int, ring: PolyRing | None = None) -> list[Poly]:
    """Generators of the cone over the arrangement in {x_i = 0}, in the full ring."""
    if cfg.N < 3:
        raise ConfigError("cone decomposition is stated for N >= 3")
    if not 0 <= i <= cfg.N:
        raise ConfigError(f"vertex index {i} out of range")
    ring = _ring_for(cfg, ring)
    variables = [v for v in range(cfg.N + 1) if v != i]
    return [generator_from_spec(s, ring, cfg.n) for s in generator_specs(cfg.N - 1, variables)]


def hyperplane_product(cfg: FermatConfig, field: Field | None = None) -> Poly:
    """prod over all hyperplanes of x_i - zeta^a x_j."""
    field = field or CyclotomicField(cfg.n)
    ring = cfg.ring(field)
    out = ring.one()
    for h in hyperplanes(cfg):
        out = out * h.form(ring, cfg.n)
    return out


# ---------------------------------------------------------------------------
# identities from the generator proof
# ---------------------------------------------------------------------------

def _mono(ring: PolyRing, idx: Sequence[int], power: int = 1) -> Poly:
    e = [0] * ring.nvars
    for i in idx:
        e[i] += power
    return ring.monomial(e)


def _prod(ring: PolyRing, polys) -> Poly:
    out = ring.one()
    for p in polys:
        out = out * p
    return out


def _check(name: str, instance: str, lhs: Poly, rhs: Poly) -> dict:
    diff = lhs - rhs
    return {"identity": name, "instance": instance, "passed": diff.is_zero(),
            "difference": None if diff.is_zero() else to_text(diff)}


def _divisibility(name: str, instance: str, g: Poly, cofactor: Poly, h: Poly) -> dict:
    prod = cofactor * h
    for sign in (1, -1):
        if (g - prod * sign).is_zero():
            out = _check(name, instance, g, prod * sign)
            out["sign"] = sign
            return out
    out = _check(name, instance, g, prod)
    out["sign"] = None
    return out


def verify_prop32_identities(cfg: FermatConfig) -> dict:
    """Check the identities showing g_A lies in every cone ideal.

    Even N = 2M, A = {0..M-1}: divisibility g_A = +-prod_j [x_j x_i] h_A for
    M <= i <= 2M, and the signed sum over the generators h_{A_j} of the cone
    at x_0, with the two intermediate rewrites.  Odd N = 2M+1, A = {0..M}:
    divisibility by g_{A minus i} for i <= M and the signed sum for the cone at
    x_{2M+1}, with its rewrite.
    """
    if cfg.N < 3:
        raise ConfigError("identities are stated for N >= 3")
    ring = cfg.ring()
    n, M, N = cfg.n, cfg.M, cfg.N
    x = ring.gen
    br = lambda idx: expand(list(idx), ring, n)  # noqa: E731
    checks = []
    if cfg.even:
        A = list(range(M))
        g = generator_from_spec(GeneratorSpec.from_subset(A, range(N + 1)), ring, n)
        for i in range(M, N + 1):
            rest = [t for t in range(M, N + 1) if t != i]
            h = _mono(ring, A) * br(A) * br(rest)
            cof = _prod(ring, (pair(ring, j, i, n) for j in rest))
            checks.append(_divisibility("divisibility", f"i={i}", g, cof, h))
        # cone at x_0
        head = _prod(ring, (pair(ring, 0, t, n) for t in range(1, M)))
        rhs = ring.zero()
        e1 = ring.zero()
        e2 = ring.zero()
        for j in range(M + 1):
            Aj = list(range(1, M)) + [M + j]
            rest = [t for t in range(M, N + 1) if t != M + j]
            h_j = _mono(ring, Aj) * br(Aj) * br(rest)
            sign = -1 if (j + M - 1) % 2 else 1
            rhs = rhs + x(0) * x(M + j) ** (n - 1) * head * h_j * sign
            e1 = e1 + (x(M + j) ** n * head * br(range(1, M))
                       * _prod(ring, (pair(ring, t, M + j, n) for t in range(1, M)))
                       * br(rest) * sign)
            e2 = e2 + (x(M + j) ** n
                       * _prod(ring, (pair(ring, M + j, t, n) for t in range(1, M)))
                       * br(rest) * (-1 if j % 2 else 1))
        e1 = _mono(ring, A) * e1
        e2 = _mono(ring, A) * br(A) * e2
        checks.append(_check("signed-sum", "i=0", g, rhs))
        checks.append(_check("rewrite-expansion", "i=0", rhs, e1))
        checks.append(_check("rewrite-useful-rule", "i=0", e1, e2))
    else:
        A = list(range(M + 1))
        B = list(range(M + 1, N + 1))
        g = generator_from_spec(GeneratorSpec(tuple(A), tuple(B)), ring, n)
        for i in A:
            Ai = [t for t in A if t != i]
            g_i = _mono(ring, Ai) * br(Ai) * br(B)
            cof = x(i) * _prod(ring, (pair(ring, j, i, n) for j in Ai))
            checks.append(_divisibility("divisibility", f"i={i}", g, cof, g_i))
        last = N
        tail = _prod(ring, (pair(ring, t, last, n) for t in range(M + 1, last)))
        rhs = ring.zero()
        o1 = ring.zero()
        for j in A:
            Aj = [t for t in A if t != j]
            g_j = _mono(ring, Aj) * br(Aj) * br([j] + list(range(M + 1, last)))
            sign = -1 if j % 2 else 1
            rhs = rhs + x(j) * tail * g_j * sign
            o1 = o1 + (br(Aj) * _prod(ring, (pair(ring, j, t, n) for t in range(M + 1, last)))
                       * sign)
        o1 = _mono(ring, A) * o1 * br(range(M + 1, last)) * tail
        checks.append(_check("signed-sum", f"i={last}", g, rhs))
        checks.append(_check("rewrite-expansion", f"i={last}", rhs, o1))
    return {
        "N": N,
        "n": n,
        "parity": "even" if cfg.even else "odd",
        "A": A,
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }
