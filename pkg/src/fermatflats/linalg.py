"""Exact linear algebra: dense RREF for small matrices and an incremental
sparse echelon form used by graded ideal membership.

Over Q the sparse echelon works fraction-free on integers (rows are kept
primitive by dividing out their content); over other fields rows are
normalized to leading coefficient one.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Hashable, Sequence

from .fields import Field, RationalField


def rref(rows: Sequence[Sequence], field: Field) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; pivot search is first nonzero per column."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    ncols = len(m[0]) if m else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if not field.is_zero(m[i][c])), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(inv, x) for x in m[r]]
        for i in range(len(m)):
            if i != r and not field.is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence], field: Field) -> int:
    return len(rref(rows, field)[1])


def _content(vals) -> int:
    g = 0
    for v in vals:
        g = gcd(g, v)
        if g == 1:
            return 1
    return g


class SparseEchelon:
    """Row-echelon basis of a growing set of sparse vectors.

    Vectors are dicts ``label -> coefficient``; the pivot of a row is its
    largest label under ``key``.  With ``track`` each basis row remembers
    the combination of inserted vectors (by tag) that produced it.
    """

    def __init__(self, field: Field, key: Callable[[Hashable], tuple], track: bool = True):
        self.field = field
        self.key = key
        self.track = track
        self.integer = isinstance(field, RationalField)
        self.rows: dict = {}  # pivot label -> (vec, combo)
        self.scales: dict = {}  # tag -> integer the stored column was multiplied by
        self._negkey: dict = {}

    def _nk(self, label):
        nk = self._negkey.get(label)
        if nk is None:
            nk = tuple(-x for x in self.key(label))
            self._negkey[label] = nk
        return nk

    def __len__(self):
        return len(self.rows)

    def _reduce(self, vec: dict, combo: dict, scalar):
        """Top-reduce ``vec`` until its leading label is not a pivot."""
        heap = [(self._nk(lab), lab) for lab in vec]
        heapq.heapify(heap)
        rows = self.rows
        track = self.track
        f = self.field
        while heap:
            _, lab = heapq.heappop(heap)
            c = vec.get(lab)
            if c is None:
                continue
            row = rows.get(lab)
            if row is None:
                return vec, combo, scalar, lab
            rvec, rcombo = row
            if self.integer:
                lead = rvec[lab]
                g = gcd(lead, c)
                a, b = lead // g, c // g
                if a != 1:
                    for k in vec:
                        vec[k] *= a
                    if track:
                        for k in combo:
                            combo[k] *= a
                    scalar *= a
                for k, v in rvec.items():
                    if k in vec:
                        s = vec[k] - b * v
                        if s:
                            vec[k] = s
                        else:
                            del vec[k]
                    else:
                        vec[k] = -b * v
                        heapq.heappush(heap, (self._nk(k), k))
                if track:
                    for k, v in rcombo.items():
                        s = combo.get(k, 0) - b * v
                        if s:
                            combo[k] = s
                        else:
                            combo.pop(k, None)
            else:
                sub, mul, is_zero = f.sub, f.mul, f.is_zero
                for k, v in rvec.items():
                    if k in vec:
                        s = sub(vec[k], mul(c, v))
                        if is_zero(s):
                            del vec[k]
                        else:
                            vec[k] = s
                    else:
                        vec[k] = f.neg(mul(c, v))
                        heapq.heappush(heap, (self._nk(k), k))
                if track:
                    for k, v in rcombo.items():
                        s = sub(combo.get(k, f.zero), mul(c, v))
                        if is_zero(s):
                            combo.pop(k, None)
                        else:
                            combo[k] = s
            vec.pop(lab, None)
        return vec, combo, scalar, None

    def _integerize(self, vec: dict) -> tuple[dict, int]:
        den = 1
        for v in vec.values():
            if isinstance(v, Fraction):
                den = lcm(den, v.denominator)
        if den == 1:
            return {k: int(v) for k, v in vec.items()}, 1
        return {k: int(v * den) for k, v in vec.items()}, den

    def insert(self, vec: dict, tag) -> bool:
        """Add a vector; returns False if it was already in the span."""
        f = self.field
        if self.integer:
            vec, den = self._integerize(vec)
            self.scales[tag] = den
            combo = {tag: 1} if self.track else {}
        else:
            vec = dict(vec)
            combo = {tag: f.one} if self.track else {}
        vec, combo, _, lead = self._reduce(vec, combo, 1)
        if lead is None:
            return False
        if self.integer:
            g = _content(list(vec.values()) + list(combo.values()))
            if vec[lead] < 0:
                g = -g
            if g != 1:
                vec = {k: v // g for k, v in vec.items()}
                combo = {k: v // g for k, v in combo.items()}
        else:
            inv = f.inv(vec[lead])
            vec = {k: f.mul(inv, v) for k, v in vec.items()}
            combo = {k: f.mul(inv, v) for k, v in combo.items()}
        self.rows[lead] = (vec, combo)
        return True

    def solve(self, target: dict):
        """Express ``target`` in the inserted vectors.

        Returns ``{tag: coefficient}`` (in field elements, relative to the
        vectors as passed to :meth:`insert`) or None if not in the span.
        """
        f = self.field
        if self.integer:
            vec, den = self._integerize(target)
            vec, combo, scalar, lead = self._reduce(vec, {}, 1)
            if vec:
                return None
            # den*target*scalar + sum combo*stored = 0, stored = scale*original
            out = {}
            for tag, c in combo.items():
                val = Fraction(-c * self.scales[tag], scalar * den)
                out[tag] = val.numerator if val.denominator == 1 else val
            return out
        vec, combo, _, lead = self._reduce(dict(target), {}, f.one)
        if vec:
            return None
        return {tag: f.neg(c) for tag, c in combo.items()}

    def contains(self, target: dict) -> bool:
        vec = self._integerize(target)[0] if self.integer else dict(target)
        saved = self.track
        self.track = False
        try:
            vec, _, _, lead = self._reduce(vec, {}, 1)
        finally:
            self.track = saved
        return not vec
