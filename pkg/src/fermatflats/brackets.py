"""Bracket symbols [x_{i_1} ... x_{i_k}] = prod_{p<q} (x_{i_p}^n - x_{i_q}^n).

Brackets stay symbolic until :func:`expand` is called.  The ``verify_*``
functions check the four bracket identities by expanding both sides and
testing that the difference is the zero polynomial.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .fields import QQ
from .poly import Poly, PolyRing, substitute_var


class DuplicateIndex(ValueError):
    pass


@dataclass(frozen=True)
class Bracket:
    indices: tuple[int, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(self.indices))
        if self.n < 1:
            raise ValueError("bracket degree n must be >= 1")

    @classmethod
    def parse(cls, text: str, n: int) -> "Bracket":
        """Read the literal syntax ``"[0 1 2]"``."""
        body = text.strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise ValueError(f"bracket literal must look like '[0 1 2]', got {text!r}")
        return cls(tuple(int(t) for t in body[1:-1].replace(",", " ").split()), n)

    def has_repeat(self) -> bool:
        return len(set(self.indices)) != len(self.indices)

    def normalize(self) -> tuple["Bracket", int]:
        idx, sign = normalize(self.indices)
        return Bracket(idx, self.n), sign

    def degree(self) -> int:
        k = len(self.indices) - 1
        return self.n * k * (k + 1) // 2

    def __str__(self):
        return "[" + " ".join(map(str, self.indices)) + "]"


def normalize(indices: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Sorted indices and the sign of the sorting permutation."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        raise DuplicateIndex(f"repeated index in bracket {idx}")
    sign = 1
    # insertion sort; each swap is one transposition
    for a in range(1, len(idx)):
        b = a
        while b > 0 and idx[b - 1] > idx[b]:
            idx[b - 1], idx[b] = idx[b], idx[b - 1]
            sign = -sign
            b -= 1
    return tuple(idx), sign


def pair(ring: PolyRing, i: int, j: int, n: int) -> Poly:
    """The two-element bracket x_i^n - x_j^n."""
    return ring.gen(i) ** n - ring.gen(j) ** n


def expand(b: Bracket | Sequence[int], ring: PolyRing, n: int | None = None,
           strict: bool = True) -> Poly:
    """Expand a bracket to a polynomial.

    A repeated index raises :class:`DuplicateIndex` unless ``strict`` is off,
    in which case the bracket is 0 (it contains a factor x_i^n - x_i^n).
    """
    if not isinstance(b, Bracket):
        if n is None:
            raise ValueError("n is required when expanding a bare index list")
        b = Bracket(tuple(b), n)
    idx = b.indices
    if len(set(idx)) != len(idx):
        if strict:
            raise DuplicateIndex(f"repeated index in bracket {b}")
        return ring.zero()
    for i in idx:
        if not 0 <= i < ring.nvars:
            raise IndexError(f"bracket index {i} outside ring with {ring.nvars} variables")
    pw = {i: ring.gen(i) ** b.n for i in idx}
    out = ring.one()
    for q in range(1, len(idx)):
        for p in range(q):
            out = out * (pw[idx[p]] - pw[idx[q]])
    return out


def _ring(nvars: int, ring: PolyRing | None) -> PolyRing:
    if ring is None:
        return PolyRing(nvars, QQ)
    if ring.nvars < nvars:
        raise ValueError(f"ring needs at least {nvars} variables")
    return ring


def verify_expansion_rule(k: int, n: int, ring: PolyRing | None = None,
                          indices: Sequence[int] | None = None) -> bool:
    """[i_0 .. i_k] == [i_0 .. i_{k-1}] * prod_j (x_{i_j}^n - x_{i_k}^n)."""
    if k < 1:
        raise ValueError("expansion rule needs k >= 1")
    idx = tuple(indices) if indices is not None else tuple(range(k + 1))
    ring = _ring(max(idx) + 1, ring)
    lhs = expand(idx, ring, n)
    rhs = expand(idx[:-1], ring, n)
    for j in idx[:-1]:
        rhs = rhs * pair(ring, j, idx[-1], n)
    return (lhs - rhs).is_zero()


def laplace_rhs(k: int, n: int, ring: PolyRing) -> Poly:
    out = ring.zero()
    for j in range(k + 1):
        rest = [t for t in range(k + 1) if t != j]
        term = expand(rest, ring, n)
        for t in rest:
            term = term * ring.gen(t) ** n
        out = out + term if (j + k) % 2 == 0 else out - term
    return out


def verify_laplace(k: int, n: int, ring: PolyRing | None = None) -> bool:
    """[x_0 .. x_k] == sum_j (-1)^(j+k) x_0^n..^x_j^n..x_k^n [x_0 .. ^x_j .. x_k]."""
    if k < 1:
        raise ValueError("Laplace rule needs k >= 1")
    ring = _ring(k + 1, ring)
    return (expand(range(k + 1), ring, n) - laplace_rhs(k, n, ring)).is_zero()


def substitution_rhs(indices: Sequence[int], u: int, n: int, ring: PolyRing) -> Poly:
    out = ring.zero()
    for j in range(len(indices)):
        idx = list(indices)
        idx[j] = u
        out = out + expand(idx, ring, n, strict=False)
    return out


def verify_substitution(k: int, n: int, u: int | None = None, ring: PolyRing | None = None) -> bool:
    """[i_0 .. i_k] == sum_j [i_0 .. u .. i_k] with u in slot j.

    ``u`` defaults to the fresh index k+1.  When u is one of 0..k the
    brackets with a repeated entry count as 0.
    """
    if k < 1:
        raise ValueError("substitution rule needs k >= 1")
    if u is None:
        u = k + 1
    ring = _ring(max(k, u) + 1, ring)
    idx = list(range(k + 1))
    return (expand(idx, ring, n) - substitution_rhs(idx, u, n, ring)).is_zero()


def substitution_report(k: int, n: int) -> dict:
    """Both readings of the substitution rule: fresh u and u colliding with each index."""
    return {
        "fresh": verify_substitution(k, n),
        "collision": {u: verify_substitution(k, n, u) for u in range(k + 1)},
    }


def useful_rule_sides(k: int, n: int, ring: PolyRing) -> tuple[Poly, Poly]:
    # x_0..x_k are variables 0..k, y_1..y_k are variables k+1..2k
    lhs = expand(range(k + 1), ring, n)
    rhs = ring.zero()
    for j in range(k + 1):
        term = expand([t for t in range(k + 1) if t != j], ring, n)
        for t in range(1, k + 1):
            term = term * pair(ring, j, k + t, n)
        rhs = rhs + term if j % 2 == 0 else rhs - term
    return lhs, rhs


def verify_useful_rule(k: int, n: int, ring: PolyRing | None = None,
                       specialize: bool = False) -> bool:
    """[x_0..x_k] == sum_j (-1)^j [x_0..^x_j..x_k] prod_t (x_j^n - y_t^n).

    With ``specialize`` both sides are compared after setting y_t = x_t.
    """
    if k < 1:
        raise ValueError("useful rule needs k >= 1")
    ring = _ring(2 * k + 1, ring)
    lhs, rhs = useful_rule_sides(k, n, ring)
    if specialize:
        for t in range(1, k + 1):
            lhs = substitute_var(lhs, k + t, ring.gen(t))
            rhs = substitute_var(rhs, k + t, ring.gen(t))
    return (lhs - rhs).is_zero()


LEMMAS = {
    "expansion": (2, verify_expansion_rule),
    "laplace": (1, verify_laplace),
    "substitution": (1, verify_substitution),
    "useful": (2, verify_useful_rule),
}


def _run_one(job: tuple[str, int, int]) -> tuple[str, int, int, bool]:
    name, k, n = job
    return name, k, n, LEMMAS[name][1](k, n)


def lemma_sweep(k_max: int, n_values: Sequence[int], jobs: int = 1) -> dict[tuple[str, int, int], bool]:
    """Run every bracket identity for k from its minimum up to ``k_max``."""
    work = [(name, k, n) for name, (k_min, _) in LEMMAS.items()
            for n in n_values for k in range(k_min, k_max + 1)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, work))
    else:
        results = [_run_one(w) for w in work]
    return {(name, k, n): ok for name, k, n, ok in results}
