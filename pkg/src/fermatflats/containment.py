"""Symbolic versus ordinary powers of the Fermat flat ideals.

Membership in the m-th symbolic power of the (radical) ideal of a union of
linear flats is decided by the order of vanishing along every flat.  Non-
membership in an ordinary power is decided degree-wise by exact linear
algebra, with Groebner normal forms as an optional cross-check.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations_with_replacement
from operator import le as _le

from .arrangement import (ConfigError, FermatConfig, Flat, GeneratorSpec, cone_ideal_generators,
                          enumerate_flats, fermat_polynomial, flat_linear_forms,
                          generator_from_spec, generator_specs, ideal_generators)
from .fields import (QQ, CyclotomicField, Field, PrimeField, format_rational,
                     primes_congruent_one, root_of_unity)
from .ideals import (Budget, BudgetExceeded, Ideal, graded_membership, groebner_membership,
                     ideal_equality, ideal_intersection, ideal_power)
from .poly import Poly, PolyRing, coefficient_of, linear_substitution, min_degree_in, substitute_var

MAX_HEIGHT = 2  # every associated prime is the ideal of a codimension-2 flat


@dataclass(frozen=True)
class ContainmentQuery:
    cfg: FermatConfig
    m: int
    r: int
    h: int = MAX_HEIGHT

    def __post_init__(self):
        if self.m < 1 or self.r < 1:
            raise ValueError("m and r must be >= 1")


def els_hh_bound(query: ContainmentQuery) -> bool:
    """True when m >= h*r, where containment is guaranteed."""
    return query.m >= query.h * query.r


# ---------------------------------------------------------------------------
# order of vanishing
# ---------------------------------------------------------------------------

def _coordinate_images(flat: Flat, ring: PolyRing, n: int, completion: str) -> tuple[list[Poly], tuple[int, int]]:
    """Images of x_0..x_N in coordinates where (u, v) are the flat's forms.

    ``triangular``: u, v sit in slots i, j and x_i = u + z^a (v + z^b x_k),
    x_j = v + z^b x_k.  ``alternate``: u, v sit in slots i, k and
    x_i = u + z^a x_j, x_k = z^-b (x_j - v).
    """
    images = ring.gens()
    if flat.kind == "coord":
        return images, (flat.i, flat.j)
    f = ring.field
    za = root_of_unity(f, n, flat.a)
    zb = root_of_unity(f, n, flat.b)
    x = ring.gen
    if completion == "triangular":
        xj = x(flat.j) + x(flat.k) * zb
        images[flat.j] = xj
        images[flat.i] = x(flat.i) + xj * za
        return images, (flat.i, flat.j)
    if completion == "alternate":
        images[flat.i] = x(flat.i) + x(flat.j) * za
        images[flat.k] = (x(flat.j) - x(flat.k)) * root_of_unity(f, n, -flat.b)
        return images, (flat.i, flat.k)
    raise ValueError(f"unknown completion {completion!r}")


def vanishing_order(f: Poly, flat: Flat, n: int, field: Field | None = None,
                    completion: str = "triangular", start: int = 4) -> float | int:
    """Minimal total (u, v)-degree of ``f`` after the change of coordinates.

    The expansion is truncated at a (u, v)-degree cap that doubles until a
    surviving term appears, so only the low-order part is ever built.
    Returns ``float('inf')`` for f = 0.
    """
    if f.is_zero():
        return float("inf")
    field = field or (f.ring.field if isinstance(f.ring.field, (CyclotomicField, PrimeField))
                      else CyclotomicField(n))
    ring = PolyRing(f.ring.nvars, field)
    images, uv = _coordinate_images(flat, ring, n, completion)
    if flat.kind == "coord":
        return min_degree_in(f, uv)
    total = f.degree()
    cap = max(start, 1)
    while True:
        low = linear_substitution(f, images, ring, truncate=(uv, cap))
        if low:
            return min_degree_in(low, uv)
        if cap >= total:
            # substitution is invertible, so a nonzero f cannot vanish identically
            raise ArithmeticError("nonzero polynomial vanished after a change of coordinates")
        cap = min(2 * cap, total)


@dataclass
class SymbolicMembership:
    m: int
    member: bool
    orders: list[tuple[Flat, float | int]]
    field: str

    def table(self) -> list[dict]:
        return [{"flat": fl.to_json(), "order": o} for fl, o in self.orders]


def _order_job(args):
    terms, nvars, flat, n, fspec, start = args
    from .fields import parse_field
    field = parse_field(fspec)
    ring = PolyRing(nvars, field)
    return vanishing_order(Poly(ring, terms), flat, n, field, start=start)


def symbolic_membership(f: Poly, cfg: FermatConfig, m: int, field: Field | None = None,
                        jobs: int = 1) -> SymbolicMembership:
    """f in I^(m) iff f vanishes to order >= m along every flat."""
    if not f.is_homogeneous():
        raise ValueError("symbolic membership expects a homogeneous polynomial")
    field = field or CyclotomicField(cfg.n)
    flats = enumerate_flats(cfg)
    ring = PolyRing(f.ring.nvars, field)
    fz = ring(f) if f.ring.field != field else f
    start = max(m + 1, 2)
    if jobs > 1:
        work = [(fz.terms, ring.nvars, fl, cfg.n, field.spec(), start) for fl in flats]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            orders = list(pool.map(_order_job, work, chunksize=8))
    else:
        orders = [vanishing_order(fz, fl, cfg.n, field, start=start) for fl in flats]
    pairs = list(zip(flats, orders))
    return SymbolicMembership(m, all(o >= m for o in orders), pairs, field.spec())


# ---------------------------------------------------------------------------
# the non-containment certificate
# ---------------------------------------------------------------------------

def _ordinary_part(F: Poly, cfg: FermatConfig, r: int, field: Field, max_cells: int) -> dict:
    ring = cfg.ring(field)
    gens = ideal_generators(cfg, ring)
    power = ideal_power(Ideal(ring, gens), r)
    cert = graded_membership(ring(F), power.generators, ring, max_cells=max_cells,
                             certificate=False)
    return {"field": field.spec(), "verdict": cert.verdict, "rows": cert.rows,
            "columns": cert.columns, "rank": cert.rank}


def check_noncontainment(cfg: FermatConfig, m: int = 3, r: int = 2, field: str = "rational",
                         budget: Budget | None = None, groebner_check: bool = False,
                         jobs: int = 1, timings: bool = True) -> dict:
    """Certify F_{N,n} in I^(m) and F_{N,n} not in I^r.

    ``field`` is ``rational`` (proof grade, falling back to two primes when
    the rational system is over budget) or ``prime:p[,q...]`` (evidence).
    """
    cfg.check()
    budget = budget or Budget.from_env()
    query = ContainmentQuery(cfg, m, r)
    report: dict = {"config": {"N": cfg.N, "n": cfg.n}, "m": m, "r": r, "h": query.h}
    clock: dict = {}
    if els_hh_bound(query):
        report.update(symbolic=None, ordinary=None, overall="CONTAINMENT_GUARANTEED",
                      note="m >= h*r: containment holds, nothing to compute")
        return report

    t0 = time.perf_counter()
    F = fermat_polynomial(cfg)
    sym = symbolic_membership(F, cfg, m, jobs=jobs)
    clock["symbolic"] = time.perf_counter() - t0
    report["symbolic"] = {
        "m": m,
        "field": sym.field,
        "method": "order of vanishing along each flat",
        "per_flat_orders": sym.table(),
        "verdict": "MEMBER" if sym.member else "NOT_MEMBER",
    }

    t0 = time.perf_counter()
    ordinary: dict = {"r": r, "method": "graded-linear"}
    spec = field.strip().lower()
    primes: list[int] = []
    if spec in ("rational", "q", "qq"):
        try:
            part = _ordinary_part(F, cfg, r, QQ, budget.max_rational_cells)
            ordinary.update(part)
            ordinary["status"] = "proved"
        except BudgetExceeded as exc:
            ordinary["rational_skipped"] = str(exc)
            primes = primes_congruent_one(cfg.n, 2, start=32003)
    elif spec.startswith("prime:"):
        primes = [int(p) for p in spec.split(":", 1)[1].split(",") if p]
        if not primes:
            raise ValueError("prime field spec needs at least one prime")
    else:
        raise ValueError(f"unsupported field for the ordinary-power test: {field!r}")
    if primes:
        per_prime = []
        undecided = False
        for p in primes:
            try:
                per_prime.append(_ordinary_part(F, cfg, r, PrimeField(p), budget.max_cells))
            except BudgetExceeded as exc:
                per_prime.append({"field": f"prime:{p}", "verdict": "UNDECIDED", "reason": str(exc)})
                undecided = True
        ordinary["field"] = ",".join(f"prime:{p}" for p in primes)
        ordinary["per_prime"] = per_prime
        verdicts = {pp["verdict"] for pp in per_prime}
        if undecided:
            ordinary["verdict"] = "UNDECIDED"
        elif verdicts == {"ABSENT"}:
            ordinary["verdict"] = "ABSENT"
        else:
            ordinary["verdict"] = "INCONCLUSIVE"
        ordinary["status"] = "evidence (p = " + ", ".join(map(str, primes)) + ")"
    clock["ordinary"] = time.perf_counter() - t0

    if groebner_check and ordinary.get("verdict") in ("ABSENT", "PRESENT"):
        t0 = time.perf_counter()
        gfield = QQ if ordinary.get("status") == "proved" else PrimeField(primes[0])
        ring = cfg.ring(gfield)
        gens = ideal_power(Ideal(ring, ideal_generators(cfg, ring)), r).generators
        try:
            inside = groebner_membership(ring(F), gens, max_pairs=budget.max_pairs)
            ordinary["cross_check"] = {
                "method": "groebner", "field": gfield.spec(),
                "normal_form_zero": inside,
                "agrees": inside == (ordinary["verdict"] == "PRESENT"),
            }
        except BudgetExceeded as exc:
            ordinary["cross_check"] = {"method": "groebner", "field": gfield.spec(),
                                       "verdict": "UNDECIDED", "reason": str(exc)}
        clock["groebner"] = time.perf_counter() - t0
    report["ordinary"] = ordinary

    if not sym.member:
        overall = "NO_WITNESS"
    elif ordinary["verdict"] == "UNDECIDED":
        overall = "UNDECIDED"
    elif ordinary["verdict"] == "ABSENT":
        overall = "CONFIRMED" if ordinary["status"] == "proved" else "EVIDENCE"
    elif ordinary["verdict"] == "PRESENT":
        overall = "NO_WITNESS"
    else:
        overall = "INCONCLUSIVE"
    if ordinary.get("cross_check", {}).get("agrees") is False:
        overall = "MISMATCH"
    report["overall"] = overall
    if timings:
        report["timings"] = {k: round(v, 4) for k, v in clock.items()}
    return report


# ---------------------------------------------------------------------------
# structure checks
# ---------------------------------------------------------------------------

def default_prime(n: int) -> int:
    return primes_congruent_one(n, 1, start=5)[0]


def cone_intersection_report(cfg: FermatConfig, field: Field | None = None,
                             max_pairs: int | None = None) -> dict:
    """Intersect the N+1 cone ideals and compare with the generator ideal."""
    if cfg.N < 3:
        raise ConfigError("cone decomposition is stated for N >= 3")
    field = field or PrimeField(default_prime(cfg.n))
    ring = cfg.ring(field)
    t0 = time.perf_counter()
    acc = None
    sizes = []
    for i in range(cfg.N + 1):
        cone = Ideal(ring, cone_ideal_generators(cfg, i, ring))
        sizes.append(len(cone))
        acc = cone if acc is None else ideal_intersection(acc, cone, max_pairs=max_pairs)
    target = Ideal(ring, ideal_generators(cfg, ring))
    equal = ideal_equality(acc, target, max_pairs=max_pairs)
    return {"N": cfg.N, "n": cfg.n, "field": field.spec(), "cone_generators": sizes,
            "intersection_basis": len(acc), "equal": equal,
            "seconds": round(time.perf_counter() - t0, 4)}


def verify_cone_intersection(cfg: FermatConfig, field: Field | None = None,
                             max_pairs: int | None = None) -> bool:
    return cone_intersection_report(cfg, field, max_pairs)["equal"]


def flat_ideal_intersection(cfg: FermatConfig, field: Field, max_pairs: int | None = None) -> Ideal:
    """Ideal of the union of all flats, by iterated intersection."""
    ring = cfg.ring(field)
    acc = None
    for fl in enumerate_flats(cfg):
        J = Ideal(ring, list(flat_linear_forms(fl, ring, cfg.n)))
        acc = J if acc is None else ideal_intersection(acc, J, max_pairs=max_pairs)
    return acc


def verify_generators_complete(cfg: FermatConfig, field: Field | None = None,
                               max_pairs: int | None = None) -> bool:
    """The g_A generate the full ideal of the union of flats."""
    field = field or CyclotomicField(cfg.n)
    ring = cfg.ring(field)
    union = flat_ideal_intersection(cfg, field, max_pairs)
    return ideal_equality(union, Ideal(ring, ideal_generators(cfg, ring)), max_pairs=max_pairs)


# ---------------------------------------------------------------------------
# coefficient bookkeeping of the non-containment argument
# ---------------------------------------------------------------------------

@dataclass
class TraceStep:
    reduced_variable: int
    monomial: list[int]
    coefficient: object
    expected_coefficient: int
    generator_A: list[int]
    p_monomial: list[int]
    square_coefficient: object
    h_coefficient: object
    expected_h: int
    uniqueness: dict | None = None

    @property
    def passed(self) -> bool:
        ok = self.coefficient == self.expected_coefficient and self.h_coefficient == self.expected_h
        if self.uniqueness is not None:
            ok = ok and self.uniqueness["unique"]
        return ok


@dataclass
class ProofTrace:
    N: int
    n: int
    parity: str
    steps: list[TraceStep]
    literal_m_prime: dict | None = None
    notes: list[str] = dc_field(default_factory=list)

    @property
    def contradiction(self) -> bool:
        a, b = self.steps
        return a.h_coefficient != b.h_coefficient

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.steps) and self.contradiction

    def to_json(self) -> dict:
        out = asdict(self)
        for s, raw in zip(out["steps"], self.steps):
            s["coefficient"] = format_rational(raw.coefficient)
            s["square_coefficient"] = format_rational(raw.square_coefficient)
            s["h_coefficient"] = format_rational(raw.h_coefficient)
            s["passed"] = raw.passed
        out["contradiction"] = self.contradiction
        out["passed"] = self.passed
        return out


def _staircase(N: int, order: list[int], n: int) -> list[int]:
    # order[0] gets the largest exponent len(order)*n, order[-1] gets n
    e = [0] * (N + 1)
    L = len(order)
    for pos, var in enumerate(order):
        e[var] = (L - pos) * n
    return e


def uniqueness_scan(reduced: list[Poly], target: tuple) -> dict:
    """All (pair, monomial) with a monomial of g*g' dividing ``target``."""
    hits = []
    nz = [(i, g) for i, g in enumerate(reduced) if g]
    for (a, ga), (b, gb) in combinations_with_replacement(nz, 2):
        acc: dict = {}
        for ea, ca in ga.terms.items():
            if not all(map(_le, ea, target)):
                continue
            for eb, cb in gb.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                if all(map(_le, e, target)):
                    acc[e] = acc.get(e, 0) + ca * cb
        for e, c in acc.items():
            if c != 0:
                hits.append({"pair": [a, b], "monomial": list(e), "coefficient": format_rational(c)})
    return {"contributions": hits, "unique": len(hits) == 1}


def _as_q(c):
    return c if isinstance(c, int) else Fraction(c)


def proof_trace(cfg: FermatConfig, scan: bool | None = None) -> ProofTrace:
    """Recompute every coefficient the non-containment argument relies on.

    Even N = 2M: reduce mod x_0 and mod x_{2M-1}; odd N = 2M+1: reduce mod
    x_0 and mod x_{2M}.  For each reduction record the coefficient of the
    staircase monomial in the reduced F, the coefficient of (monomial / p)
    in the square of the reduced distinguished generator, and the implied
    coefficient of p in h_{g,g}.  ``scan`` enumerates all generator pairs
    to confirm that only g*g can produce the monomial (default: N <= 3).
    """
    cfg.check()
    N, n, M = cfg.N, cfg.n, cfg.M
    if scan is None:
        scan = N <= 3
    ring = cfg.ring()
    F = fermat_polynomial(cfg, ring)
    specs = generator_specs(N)
    gens = [generator_from_spec(s, ring, n) for s in specs]
    if cfg.even:
        A = list(range(2, 2 * M + 1, 2))
        plan = [
            (0, _staircase(N, list(range(1, 2 * M + 1)), n), 1),
            (2 * M - 1, _staircase(N, list(range(1, 2 * M - 1)) + [0, 2 * M], n), -1),
        ]
    else:
        A = list(range(1, 2 * M + 2, 2))
        plan = [
            (0, _staircase(N, list(range(1, 2 * M + 2)), n), -1),
            (2 * M, _staircase(N, list(range(1, 2 * M)) + [0, 2 * M + 1], n), 1),
        ]
    spec = GeneratorSpec.from_subset(A, range(N + 1))
    g = generator_from_spec(spec, ring, n)
    gi = specs.index(spec)
    p = [0] * (N + 1)
    for a in A:
        p[a] = n - 2
    steps = []
    for var, mono, expected in plan:
        f_red = substitute_var(F, var, 0)
        g_red = substitute_var(g, var, 0)
        c_f = _as_q(coefficient_of(f_red, mono))
        quotient = [x - y for x, y in zip(mono, p)]
        c_sq = _as_q(coefficient_of(g_red * g_red, quotient)) if min(quotient) >= 0 else 0
        h = Fraction(c_f, 1) / c_sq if c_sq else None
        if h is not None and h.denominator == 1:
            h = h.numerator
        uniq = None
        if scan:
            reduced = [substitute_var(q, var, 0) for q in gens]
            uniq = uniqueness_scan(reduced, tuple(mono))
            uniq["expected"] = {"pair": [gi, gi], "monomial": quotient}
            hits = uniq["contributions"]
            uniq["unique"] = (len(hits) == 1 and hits[0]["pair"] == [gi, gi]
                              and hits[0]["monomial"] == quotient)
        steps.append(TraceStep(var, mono, c_f, expected, A, p, c_sq, h, expected, uniq))
    literal = None
    notes = []
    if cfg.even:
        # literal pattern x_1^{2Nn} ... x_0^{2n} x_{2N}^n: x_{2N} lies outside the ring
        lit = list(plan[1][1])
        if M >= 2:
            lit[1] = 2 * N * n
        variant_coeff = _as_q(coefficient_of(substitute_var(F, 2 * M - 1, 0), lit)) if M >= 2 else None
        literal = {
            "x1_exponent": 2 * N * n,
            "last_variable": 2 * N,
            "representable": False,
            "variant_with_last_variable_x2M": lit if M >= 2 else None,
            "variant_coefficient": None if variant_coeff is None else format_rational(variant_coeff),
        }
        notes.append("second monomial uses exponent 2Mn on x_1 and final variable x_{2M}; "
                     "the literal exponents 2Nn / x_{2N} do not give a monomial of degree deg F")
    return ProofTrace(N, n, "even" if cfg.even else "odd", steps, literal, notes)
