"""Ideals over exact fields: Buchberger Groebner bases, normal forms, powers,
intersections, equality and degree-wise membership by linear algebra.
"""

from __future__ import annotations

import heapq
import os
from dataclasses import dataclass, field as dc_field
from itertools import combinations_with_replacement
from math import comb
from operator import add as _add, le as _le, sub as _sub
from typing import Sequence

from .linalg import SparseEchelon
from .poly import (GREVLEX, MonomialOrder, Poly, PolyRing, elimination_order, embed,
                   multiply_monomial)


class BudgetExceeded(RuntimeError):
    """A configured resource limit was hit; the question stays undecided."""


@dataclass
class Budget:
    max_pairs: int = 200_000
    max_cells: int = 50_000_000
    max_rational_cells: int = 5_000_000

    @classmethod
    def from_env(cls, **overrides) -> "Budget":
        b = cls()
        for name, var in (("max_pairs", "FERMATFLATS_MAX_PAIRS"),
                          ("max_cells", "FERMATFLATS_MAX_CELLS"),
                          ("max_rational_cells", "FERMATFLATS_MAX_RATIONAL_CELLS")):
            if var in os.environ:
                setattr(b, name, int(os.environ[var]))
        for k, v in overrides.items():
            if v is not None:
                setattr(b, k, v)
        return b


@dataclass
class Ideal:
    ring: PolyRing
    generators: list[Poly]

    def __post_init__(self):
        gens = []
        for g in self.generators:
            g = self.ring(g)
            if g.is_zero():
                raise ValueError("ideal generators must be nonzero")
            gens.append(g)
        self.generators = gens

    def __len__(self):
        return len(self.generators)

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.generators)


# ---------------------------------------------------------------------------
# reduction kernel (terms are dicts, basis elements are monic)
# ---------------------------------------------------------------------------

class _Kernel:
    def __init__(self, ring: PolyRing, order: MonomialOrder):
        self.ring = ring
        self.field = ring.field
        self.key = order.key
        self._nk: dict = {}

    def negkey(self, m):
        nk = self._nk.get(m)
        if nk is None:
            nk = tuple(-x for x in self.key(m))
            self._nk[m] = nk
        return nk

    def lead(self, terms: dict):
        return max(terms, key=self.key)

    def monic(self, terms: dict) -> tuple[tuple, dict]:
        f = self.field
        lm = self.lead(terms)
        lc = terms[lm]
        if f.is_one(lc):
            return lm, terms
        inv = f.inv(lc)
        return lm, {m: f.mul(inv, c) for m, c in terms.items()}

    def reduce(self, terms: dict, basis: Sequence[tuple[tuple, dict]], full: bool = True) -> dict:
        """Remainder of ``terms`` on division by monic ``basis`` [(lm, terms)]."""
        f = self.field
        sub, mul, is_zero = f.sub, f.mul, f.is_zero
        work = dict(terms)
        heap = [(self.negkey(m), m) for m in work]
        heapq.heapify(heap)
        rem: dict = {}
        while heap:
            _, m = heapq.heappop(heap)
            c = work.pop(m, None)
            if c is None:
                continue
            for lm, g in basis:
                if all(map(_le, lm, m)):
                    q = tuple(map(_sub, m, lm))
                    for mg, cg in g.items():
                        if mg == lm:
                            continue
                        mm = tuple(map(_add, mg, q))
                        if mm in work:
                            s = sub(work[mm], mul(c, cg))
                            if is_zero(s):
                                del work[mm]
                            else:
                                work[mm] = s
                        else:
                            work[mm] = f.neg(mul(c, cg))
                            heapq.heappush(heap, (self.negkey(mm), mm))
                    break
            else:
                rem[m] = c
                if not full:
                    rem.update(work)
                    return rem
        return rem


def _lcm(a, b):
    return tuple(map(max, a, b))


def _divides(a, b) -> bool:
    return all(map(_le, a, b))


def _disjoint(a, b) -> bool:
    return not any(x and y for x, y in zip(a, b))


@dataclass
class GroebnerBasis:
    ring: PolyRing
    order: MonomialOrder
    basis: list[Poly]
    truncated_at: int | None = None
    stats: dict = dc_field(default_factory=dict)

    def __len__(self):
        return len(self.basis)

    def leading_monomials(self) -> list[tuple]:
        return [g.leading_monomial(self.order) for g in self.basis]

    def _kernel_basis(self):
        return [(g.leading_monomial(self.order), g.terms) for g in self.basis]

    def reduce(self, f: Poly) -> Poly:
        return normal_form(f, self)

    def contains(self, f: Poly) -> bool:
        return normal_form(f, self).is_zero()


def buchberger(ideal: Ideal | Sequence[Poly], order: MonomialOrder | None = None,
               max_pairs: int | None = None, degree_bound: int | None = None) -> GroebnerBasis:
    """Reduced Groebner basis by Buchberger's algorithm.

    Pairs are taken by the normal strategy (smallest lcm first) and pruned
    with the Gebauer-Moeller criteria.  ``degree_bound`` (homogeneous input
    only) skips pairs whose lcm has larger degree, giving a basis that is
    valid for homogeneous elements up to that degree.
    """
    if not isinstance(ideal, Ideal):
        gens = list(ideal)
        if not gens:
            raise ValueError("empty generator list")
        ideal = Ideal(gens[0].ring, gens)
    ring = ideal.ring
    order = order or ring.order
    if degree_bound is not None and not ideal.is_homogeneous():
        raise ValueError("degree truncation needs homogeneous generators")
    kern = _Kernel(ring, order)
    key = order.key
    polys: list[dict] = []
    lms: list[tuple] = []
    G: list[int] = []
    B: set = set()
    heap: list = []
    stats = {"pairs": 0, "reductions_to_zero": 0, "skipped_by_degree": 0}

    def push(i, j):
        i, j = min(i, j), max(i, j)
        B.add((i, j))
        heapq.heappush(heap, (key(_lcm(lms[i], lms[j])), i, j))

    def update(h: int):
        nonlocal G
        lh = lms[h]
        C = list(G)
        D: list[int] = []
        while C:
            g1 = C.pop(0)
            l1 = _lcm(lh, lms[g1])
            if _disjoint(lh, lms[g1]) or (
                    not any(_divides(_lcm(lh, lms[g2]), l1) for g2 in C)
                    and not any(_divides(_lcm(lh, lms[g2]), l1) for g2 in D)):
                D.append(g1)
        E = [g for g in D if not _disjoint(lh, lms[g])]
        for (a, b) in list(B):
            lab = _lcm(lms[a], lms[b])
            if (_divides(lh, lab) and _lcm(lms[a], lh) != lab and _lcm(lh, lms[b]) != lab):
                B.discard((a, b))
        for g in E:
            push(g, h)
        G = [g for g in G if not _divides(lh, lms[g])] + [h]

    def add(terms: dict):
        lm, terms = kern.monic(terms)
        polys.append(terms)
        lms.append(lm)
        update(len(polys) - 1)

    for g in ideal.generators:
        r = kern.reduce(g.terms, [(lms[i], polys[i]) for i in G])
        if r:
            add(r)

    while heap:
        _, i, j = heapq.heappop(heap)
        if (i, j) not in B:
            continue
        B.discard((i, j))
        lcm = _lcm(lms[i], lms[j])
        if degree_bound is not None and sum(lcm) > degree_bound:
            stats["skipped_by_degree"] += 1
            continue
        stats["pairs"] += 1
        if max_pairs is not None and stats["pairs"] > max_pairs:
            raise BudgetExceeded(f"Buchberger exceeded {max_pairs} S-pairs")
        s = _spoly(kern, polys[i], lms[i], polys[j], lms[j], lcm)
        r = kern.reduce(s, [(lms[g], polys[g]) for g in G]) if s else s
        if r:
            add(r)
        else:
            stats["reductions_to_zero"] += 1

    # inter-reduce the minimal basis
    basis = [(lms[g], polys[g]) for g in G]
    reduced = []
    for idx, (lm, terms) in enumerate(basis):
        others = [b for k, b in enumerate(basis) if k != idx]
        reduced.append((lm, kern.reduce(terms, others)))
    reduced.sort(key=lambda t: key(t[0]))
    stats["basis_size"] = len(reduced)
    return GroebnerBasis(ring, order, [Poly(ring, t) for _, t in reduced],
                         truncated_at=degree_bound, stats=stats)


def _spoly(kern: _Kernel, f: dict, lf, g: dict, lg, lcm) -> dict:
    fld = kern.field
    qf = tuple(map(_sub, lcm, lf))
    qg = tuple(map(_sub, lcm, lg))
    out = {}
    for m, c in f.items():
        if m != lf:
            out[tuple(map(_add, m, qf))] = c
    for m, c in g.items():
        if m == lg:
            continue
        mm = tuple(map(_add, m, qg))
        if mm in out:
            s = fld.sub(out[mm], c)
            if fld.is_zero(s):
                del out[mm]
            else:
                out[mm] = s
        else:
            out[mm] = fld.neg(c)
    return out


def normal_form(f: Poly, gb: GroebnerBasis) -> Poly:
    """Fully reduced remainder of ``f`` modulo the basis."""
    if f.ring != gb.ring:
        raise ValueError("ring mismatch between polynomial and Groebner basis")
    if gb.truncated_at is not None and f.terms:
        if not f.is_homogeneous() or f.degree() > gb.truncated_at:
            raise ValueError(f"basis truncated at degree {gb.truncated_at} cannot reduce this input")
    kern = _Kernel(gb.ring, gb.order)
    return Poly(gb.ring, kern.reduce(f.terms, gb._kernel_basis()))


# ---------------------------------------------------------------------------
# ideal operations
# ---------------------------------------------------------------------------

def ideal_power(ideal: Ideal, r: int) -> Ideal:
    """Generators: all r-fold products of generators, duplicates collapsed."""
    if r < 1:
        raise ValueError("power must be >= 1")
    seen = set()
    out = []
    for combo in combinations_with_replacement(range(len(ideal.generators)), r):
        p = ideal.ring.one()
        for i in combo:
            p = p * ideal.generators[i]
        h = frozenset(p.terms.items())
        if h not in seen:
            seen.add(h)
            out.append(p)
    return Ideal(ideal.ring, out)


def ideal_intersection(I: Ideal, J: Ideal, max_pairs: int | None = None,
                       verify: bool = False) -> Ideal:
    """I cap J by eliminating t from t*I + (1-t)*J."""
    if I.ring != J.ring:
        raise ValueError("ring mismatch")
    ring = I.ring
    big = PolyRing(ring.nvars + 1, ring.field, elimination_order(1),
                   names=("_t",) + ring.names)
    shift = list(range(1, ring.nvars + 1))
    t = big.gen(0)
    gens = [t * embed(f, big, shift) for f in I.generators]
    gens += [embed(g, big, shift) - t * embed(g, big, shift) for g in J.generators]
    gb = buchberger(Ideal(big, gens), big.order, max_pairs=max_pairs)
    out = []
    for g in gb.basis:
        if all(e[0] == 0 for e in g.terms):
            out.append(Poly(ring, {e[1:]: c for e, c in g.terms.items()}))
    if not out:
        raise ArithmeticError("empty intersection basis")
    result = Ideal(ring, out)
    if verify:
        for side in (I, J):
            gb_side = buchberger(side, GREVLEX, max_pairs=max_pairs)
            if not all(gb_side.contains(g) for g in out):
                raise ArithmeticError("intersection is not contained in an input ideal")
    return result


def ideal_equality(I: Ideal, J: Ideal, order: MonomialOrder | None = None,
                   max_pairs: int | None = None) -> bool:
    if I.ring != J.ring:
        raise ValueError("ring mismatch")
    order = order or GREVLEX
    gi = buchberger(I, order, max_pairs=max_pairs)
    if not all(gi.contains(g) for g in J.generators):
        return False
    gj = buchberger(J, order, max_pairs=max_pairs)
    return all(gj.contains(g) for g in I.generators)


def groebner_membership(f: Poly, gens: Sequence[Poly], order: MonomialOrder | None = None,
                        max_pairs: int | None = None) -> bool:
    """f in (gens) by normal form; truncates the basis at deg f when homogeneous."""
    ideal = Ideal(f.ring, list(gens))
    bound = f.degree() if (f.is_homogeneous() and ideal.is_homogeneous() and f.terms) else None
    gb = buchberger(ideal, order or GREVLEX, max_pairs=max_pairs, degree_bound=bound)
    return normal_form(f, gb).is_zero()


# ---------------------------------------------------------------------------
# graded membership
# ---------------------------------------------------------------------------

def monomials_of_degree(nvars: int, d: int) -> list[tuple[int, ...]]:
    """All exponent vectors of total degree d, lex-descending."""
    if nvars == 1:
        return [(d,)]
    out = []
    for a in range(d, -1, -1):
        for rest in monomials_of_degree(nvars - 1, d - a):
            out.append((a,) + rest)
    return out


@dataclass
class GradedMembershipCertificate:
    degree: int
    rows: int
    columns: int
    rank: int
    field: str
    present: bool
    combination: list[tuple[int, tuple, object]] | None = None

    @property
    def verdict(self) -> str:
        return "PRESENT" if self.present else "ABSENT"

    def reconstruct(self, gens: Sequence[Poly]) -> Poly:
        if not self.present:
            raise ValueError("an ABSENT certificate has no combination")
        ring = gens[0].ring
        out = ring.zero()
        for gi, mono, c in self.combination:
            out = out + multiply_monomial(gens[gi], mono, ring.field(c))
        return out

    def to_json(self, field=None) -> dict:
        obj = {"degree": self.degree, "rows": self.rows, "columns": self.columns,
               "rank": self.rank, "field": self.field, "verdict": self.verdict}
        if self.present:
            conv = field.to_json if field is not None else str
            obj["combination"] = [{"generator": gi, "monomial": list(m), "coefficient": conv(c)}
                                  for gi, m, c in self.combination]
        return obj


def graded_membership(f: Poly, gens: Sequence[Poly], ring: PolyRing | None = None,
                      max_cells: int | None = None, certificate: bool = True
                      ) -> GradedMembershipCertificate:
    """Decide f in (gens) inside the degree-deg(f) piece by exact linear algebra.

    Columns are m*g for every generator g and monomial m of degree
    deg f - deg g.  For homogeneous input this decides membership outright.
    """
    ring = ring or f.ring
    if not f.is_homogeneous() or not all(g.is_homogeneous() for g in gens):
        raise ValueError("graded membership needs homogeneous input")
    if any(g.is_zero() for g in gens):
        raise ValueError("zero generator")
    d = f.degree() if f.terms else 0
    nv = ring.nvars
    rows = comb(d + nv - 1, nv - 1)
    cols = [(gi, m) for gi, g in enumerate(gens) if g.degree() <= d
            for m in monomials_of_degree(nv, d - g.degree())]
    if max_cells is not None and rows * len(cols) > max_cells:
        raise BudgetExceeded(f"graded system {rows}x{len(cols)} exceeds {max_cells} cells")
    fld = ring.field
    if f.is_zero():
        return GradedMembershipCertificate(d, rows, len(cols), 0, fld.spec(), True, [])
    ech = SparseEchelon(fld, ring.order.key, track=certificate)
    for gi, m in cols:
        ech.insert(multiply_monomial(gens[gi], m).terms, (gi, m))
    if certificate:
        sol = ech.solve(f.terms)
        present = sol is not None
        combo = None
        if present:
            combo = sorted(((gi, m, c) for (gi, m), c in sol.items()
                            if not fld.is_zero(c)), key=lambda t: (t[0], t[1]))
    else:
        present = ech.contains(f.terms)
        combo = None
    return GradedMembershipCertificate(d, rows, len(cols), len(ech), fld.spec(), present, combo)
