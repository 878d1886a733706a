"""Graded barcodes and their metric calculus.

A barcode stores, per integer degree, a finite multiset of half-open
intervals [birth, death) with death possibly +inf.  On top of that model
this module provides translation, torsion thresholds, the ray Hom table,
the graded functor dimensions ``q_dims``, interleaving matchings, the
isomorphism distance ``dprime_distance`` together with its shift-quotient
variant, interval convolution, and limits of Cauchy sequences of barcodes.

All functions are pure; values are immutable after construction, so
concurrent use on shared inputs is safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import InputError, NotCauchy

#: Global comparison tolerance for endpoint arithmetic.
TOL = 1e-9

INF = math.inf


@dataclass(frozen=True)
class Bar:
    """Half-open interval [birth, death); death may be +inf."""

    birth: float
    death: float

    def __post_init__(self):
        if not math.isfinite(self.birth):
            raise InputError(f"bar birth must be finite, got {self.birth}")
        if not self.death > self.birth:
            raise InputError(f"bar needs birth < death, got [{self.birth}, {self.death})")

    @property
    def length(self) -> float:
        return self.death - self.birth

    @property
    def infinite(self) -> bool:
        return math.isinf(self.death)

    def shifted(self, c: float) -> "Bar":
        return Bar(self.birth + c, self.death + c)

    def __repr__(self):
        d = "inf" if self.infinite else repr(self.death)
        return f"[{self.birth}, {d})"


class Barcode:
    """Finite multiset of bars per degree.

    Degree ``n`` holds the summands placed in cohomological degree ``n``.
    Bars within a degree are kept sorted by (birth, death), so two barcodes
    compare equal exactly when they agree as multisets.
    """

    __slots__ = ("degrees",)

    def __init__(self, degrees: Mapping[int, Iterable[Bar]] | None = None):
        canon: dict[int, tuple[Bar, ...]] = {}
        for n, bars in (degrees or {}).items():
            bars = tuple(sorted(bars, key=lambda b: (b.birth, b.death)))
            if bars:
                canon[int(n)] = bars
        object.__setattr__(self, "degrees", canon)

    @classmethod
    def from_pairs(cls, degrees: Mapping[int, Iterable[tuple[float, float]]]) -> "Barcode":
        return cls({n: [Bar(b, d) for (b, d) in bars] for n, bars in degrees.items()})

    def bars(self, n: int) -> tuple[Bar, ...]:
        return self.degrees.get(n, ())

    def items(self):
        return sorted(self.degrees.items())

    def all_bars(self):
        """Iterate (degree, bar) over the whole barcode."""
        for n, bars in self.items():
            for b in bars:
                yield n, b

    @property
    def n_bars(self) -> int:
        return sum(len(v) for v in self.degrees.values())

    def is_empty(self) -> bool:
        return not self.degrees

    def __eq__(self, other):
        return isinstance(other, Barcode) and self.degrees == other.degrees

    def __hash__(self):
        return hash(tuple(sorted(self.degrees.items())))

    def __repr__(self):
        inner = ", ".join(f"{n}: {list(bars)}" for n, bars in self.items())
        return f"Barcode({{{inner}}})"

    def shift(self, c: float) -> "Barcode":
        return shift(self, c)

    def to_json(self) -> dict:
        return {
            "degrees": {
                str(n): [[b.birth, "inf" if b.infinite else b.death] for b in bars]
                for n, bars in self.items()
            }
        }

    @classmethod
    def from_json(cls, data: dict) -> "Barcode":
        try:
            degrees = data["degrees"]
            out = {}
            for n, bars in degrees.items():
                out[int(n)] = [
                    Bar(float(b), INF if d == "inf" else float(d)) for b, d in bars
                ]
            return cls(out)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed barcode JSON: {exc}") from exc


def allclose(b1: Barcode, b2: Barcode, tol: float = TOL) -> bool:
    """Multiset equality of barcodes up to endpoint tolerance."""
    if sorted(b1.degrees) != sorted(b2.degrees):
        return False
    for n in b1.degrees:
        x, y = b1.bars(n), b2.bars(n)
        if len(x) != len(y):
            return False
        for a, b in zip(x, y):
            if a.infinite != b.infinite:
                return False
            if abs(a.birth - b.birth) > tol:
                return False
            if not a.infinite and abs(a.death - b.death) > tol:
                return False
    return True


def shift(b: Barcode, c: float) -> Barcode:
    """Translate every endpoint by +c; degrees are untouched."""
    return Barcode({n: [bar.shifted(c) for bar in bars] for n, bars in b.degrees.items()})


def torsion_threshold(b: Barcode) -> float:
    """Least c >= 0 at which the canonical self-map to the c-translate vanishes.

    For interval summands that is the supremum of bar lengths: +inf when an
    infinite bar is present, 0 for the zero object.
    """
    best = 0.0
    for _, bar in b.all_bars():
        if bar.infinite:
            return INF
        best = max(best, bar.length)
    return best


def hom_dims(src: Bar, tgt: Bar, tol: float = TOL) -> dict[int, int]:
    """Graded Hom dimensions from an infinite bar [s, inf) into a bar.

    Returns {0: 1} for a ray target [a, inf) with s <= a, {1: 1} for a finite
    target [a, b) with a < s <= b, and {} otherwise.  Finite sources are not
    in the table and are rejected.
    """
    if not src.infinite:
        raise InputError("hom_dims source must be an infinite bar")
    s = src.birth
    if tgt.infinite:
        return {0: 1} if s <= tgt.birth + tol else {}
    if tgt.birth + tol < s <= tgt.death + tol:
        return {1: 1}
    return {}


def q_dims(b: Barcode, c: float, tol: float = TOL) -> dict[int, int]:
    """Graded dimensions of the functor Hom(ray(-c), -) applied to the barcode.

    A bar in degree n contributing in Hom-degree m lands in output degree
    n + m, so finite bars show up one degree above their own.
    """
    src = Bar(-c, INF)
    out: dict[int, int] = {}
    for n, bar in b.all_bars():
        for m, d in hom_dims(src, bar, tol).items():
            out[n + m] = out.get(n + m, 0) + d
    return {k: v for k, v in sorted(out.items()) if v}


# ---------------------------------------------------------------------------
# interleaving matchings


@dataclass(frozen=True)
class MatchingWitness:
    """Certificate for an eps-matching, possibly after translating side 2."""

    eps: float
    shift2: float
    pairs: dict[int, tuple[tuple[int, int], ...]] = field(default_factory=dict)
    unmatched1: dict[int, tuple[int, ...]] = field(default_factory=dict)
    unmatched2: dict[int, tuple[int, ...]] = field(default_factory=dict)


def _kuhn_matching(n_left: int, n_right: int, adj: list[list[int]]):
    """Maximum bipartite matching by augmenting paths; deterministic order."""
    match_right = [-1] * n_right

    def try_augment(u: int, seen: list[bool]) -> bool:
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                if match_right[v] == -1 or try_augment(match_right[v], seen):
                    match_right[v] = u
                    return True
        return False

    size = 0
    for u in range(n_left):
        if try_augment(u, [False] * n_right):
            size += 1
    return size, match_right


def _match_degree(bars1, bars2, eps: float, c: float, tol: float):
    """eps-matching of one degree with side 2 translated by c, or None."""
    n1, n2 = len(bars1), len(bars2)

    def pair_ok(x: Bar, y: Bar) -> bool:
        if x.infinite != y.infinite:
            return False
        if abs(x.birth - (y.birth + c)) > eps + tol:
            return False
        return x.infinite or abs(x.death - (y.death + c)) <= eps + tol

    def droppable(x: Bar) -> bool:
        return (not x.infinite) and x.length <= 2 * eps + tol

    # Left = bars1 then one dummy per bar2; right = bars2 then one dummy per bar1.
    adj: list[list[int]] = []
    for i, x in enumerate(bars1):
        row = [j for j, y in enumerate(bars2) if pair_ok(x, y)]
        if droppable(x):
            row.append(n2 + i)
        adj.append(row)
    for j, y in enumerate(bars2):
        row = [j] if droppable(y) else []
        row.extend(range(n2, n2 + n1))
        adj.append(row)

    size, match_right = _kuhn_matching(n1 + n2, n2 + n1, adj)
    if size != n1 + n2:
        return None
    pairs, un1, un2 = [], [], []
    for j in range(n2):
        u = match_right[j]
        if u < n1:
            pairs.append((u, j))
        else:
            un2.append(j)
    matched1 = {i for i, _ in pairs}
    un1 = [i for i in range(n1) if i not in matched1]
    return tuple(pairs), tuple(un1), tuple(un2)


def _match_all(b1: Barcode, b2: Barcode, eps: float, c: float, tol: float):
    if eps < -tol:
        return None
    pairs, un1, un2 = {}, {}, {}
    for n in sorted(set(b1.degrees) | set(b2.degrees)):
        res = _match_degree(b1.bars(n), b2.bars(n), eps, c, tol)
        if res is None:
            return None
        p, u1, u2 = res
        if p:
            pairs[n] = p
        if u1:
            un1[n] = u1
        if u2:
            un2[n] = u2
    return MatchingWitness(eps=eps, shift2=c, pairs=pairs, unmatched1=un1, unmatched2=un2)


def epsilon_interleaved(b1: Barcode, b2: Barcode, eps: float, tol: float = TOL):
    """Decide the symmetric eps-matching relation.

    Matched bars must agree within eps on births and deaths (infinite with
    infinite only); every unmatched bar must have length <= 2*eps.  Returns
    (bool, witness-or-None).
    """
    if eps < 0:
        raise InputError("eps must be >= 0")
    w = _match_all(b1, b2, eps, 0.0, tol)
    return (w is not None), w


def _infinite_counts_differ(b1: Barcode, b2: Barcode) -> bool:
    for n in set(b1.degrees) | set(b2.degrees):
        c1 = sum(1 for b in b1.bars(n) if b.infinite)
        c2 = sum(1 for b in b2.bars(n) if b.infinite)
        if c1 != c2:
            return True
    return False


def _pair_diffs(b1: Barcode, b2: Barcode):
    """Endpoint differences over potentially matched (same degree) pairs."""
    diffs = []
    for n in set(b1.degrees) & set(b2.degrees):
        for x in b1.bars(n):
            for y in b2.bars(n):
                if x.infinite != y.infinite:
                    continue
                diffs.append(x.birth - y.birth)
                if not x.infinite:
                    diffs.append(x.death - y.death)
    return diffs


def _eps_candidates(b1: Barcode, b2: Barcode, bounded_shift: bool):
    diffs = _pair_diffs(b1, b2)
    cands = {0.0}
    for l in diffs:
        if bounded_shift:
            cands.add(abs(l) / 2.0)
    for i, u in enumerate(diffs):
        for v in diffs[i:]:
            cands.add(abs(u - v) / 2.0)
    for bc in (b1, b2):
        for _, bar in bc.all_bars():
            if not bar.infinite:
                cands.add(bar.length / 2.0)
    return sorted(cands)


def _shift_candidates(b1: Barcode, b2: Barcode, eps: float, bounded: bool, tol: float):
    """Translation values worth testing at a given eps."""
    cands = {0.0}
    if bounded:
        cands.update((-eps, eps))
    for n in set(b1.degrees) & set(b2.degrees):
        for x in b1.bars(n):
            for y in b2.bars(n):
                if x.infinite != y.infinite:
                    continue
                ds = [x.birth - y.birth]
                if not x.infinite:
                    ds.append(x.death - y.death)
                lo, hi = max(ds) - eps, min(ds) + eps
                if bounded:
                    lo, hi = max(lo, -eps), min(hi, eps)
                if lo <= hi + tol:
                    cands.update((lo, hi))
    out = []
    for c in sorted(cands):
        if bounded and abs(c) > eps + tol:
            continue
        if not out or c - out[-1] > tol:
            out.append(c)
    return out


def _feasible(b1, b2, eps, bounded, tol):
    for c in _shift_candidates(b1, b2, eps, bounded, tol):
        w = _match_all(b1, b2, eps, c, tol)
        if w is not None:
            return w
    return None


def _distance(b1: Barcode, b2: Barcode, bounded_shift: bool, tol: float):
    if _infinite_counts_differ(b1, b2):
        return INF, None
    w = _feasible(b1, b2, 0.0, bounded_shift, tol)
    if w is not None:
        return 0.0, w
    cands = _eps_candidates(b1, b2, bounded_shift)
    lo, hi = 0, len(cands) - 1
    if _feasible(b1, b2, cands[hi], bounded_shift, tol) is None:
        raise AssertionError("breakpoint candidate set is incomplete")
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if _feasible(b1, b2, cands[mid], bounded_shift, tol) is None:
            lo = mid
        else:
            hi = mid
    eps = cands[hi]
    return 2.0 * eps, _feasible(b1, b2, eps, bounded_shift, tol)


def dprime_distance(b1: Barcode, b2: Barcode, tol: float = TOL) -> float:
    """Isomorphism distance: inf of a+b over (a,b)-isomorphic placements.

    Computed as inf over 2*eps such that some translate of the second
    barcode by |c| <= eps admits an eps-matching; the search is exact over
    the breakpoints generated by endpoint differences.
    """
    return _distance(b1, b2, bounded_shift=True, tol=tol)[0]


def shifted_dprime(b1: Barcode, b2: Barcode, tol: float = TOL) -> float:
    """Shift-quotient distance: inf over all real c of d'(b1, shift(b2, c))."""
    return _distance(b1, b2, bounded_shift=False, tol=tol)[0]


# ---------------------------------------------------------------------------
# convolution


def convolve(b1: Barcode, b2: Barcode) -> Barcode:
    """Bilinear interval convolution.

    Ray * ray adds births; finite * ray translates; finite * finite yields
    one bar of the shorter length at the sum of births and a mirror bar one
    degree higher ending at the sum of deaths.  The unit is {0: [[0, inf)]}.
    """
    out: dict[int, list[Bar]] = {}

    def add(n: int, bar: Bar):
        out.setdefault(n, []).append(bar)

    for n1, x in b1.all_bars():
        for n2, y in b2.all_bars():
            n = n1 + n2
            if x.infinite and y.infinite:
                add(n, Bar(x.birth + y.birth, INF))
            elif x.infinite:
                add(n, Bar(y.birth + x.birth, y.death + x.birth))
            elif y.infinite:
                add(n, Bar(x.birth + y.birth, x.death + y.birth))
            else:
                l = min(x.length, y.length)
                s = x.birth + y.birth
                t = x.death + y.death
                add(n, Bar(s, s + l))
                add(n + 1, Bar(t - l, t))
    return Barcode(out)


# ---------------------------------------------------------------------------
# Cauchy sequences and limits


@dataclass(frozen=True)
class CauchyBarcodeSequence:
    """Finite list of (barcode, bound) with a declared tail bound.

    ``items[n] = (F_n, a_n)`` where consecutive pairs are a_n-isomorphic;
    ``tail`` bounds the sum of the a_k beyond the listed window, so the
    remainder sums ``a_ge(n)`` are finite.
    """

    items: tuple[tuple[Barcode, float], ...]
    tail: float = 0.0

    def __post_init__(self):
        if not self.items:
            raise InputError("empty Cauchy sequence")
        for _, a in self.items:
            if a < 0:
                raise InputError("sequence bounds must be >= 0")
        if self.tail < 0:
            raise InputError("tail bound must be >= 0")

    def __len__(self):
        return len(self.items)

    def a_ge(self, n: int) -> float:
        """Remainder sum of the bounds from index n on, tail included."""
        return sum(a for _, a in self.items[n:]) + self.tail

    def to_json(self) -> dict:
        return {
            "items": [{"barcode": b.to_json(), "a": a} for b, a in self.items],
            "tail": self.tail,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CauchyBarcodeSequence":
        try:
            items = tuple(
                (Barcode.from_json(it["barcode"]), float(it["a"])) for it in data["items"]
            )
            return cls(items, float(data.get("tail", 0.0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed Cauchy sequence JSON: {exc}") from exc


@dataclass(frozen=True)
class LimitCertificate:
    """Per-stage achieved distances against the completeness bound."""

    achieved: tuple[float, ...]
    bounds: tuple[float, ...]

    @property
    def ok(self) -> bool:
        return all(a <= b + TOL for a, b in zip(self.achieved, self.bounds))

    def to_json(self) -> dict:
        return {
            "per_stage": [
                {"n": n, "achieved": a, "bound": b}
                for n, (a, b) in enumerate(zip(self.achieved, self.bounds))
            ],
            "ok": self.ok,
        }


#: Distance bound constant for limits of certified Cauchy sequences.
LIMIT_BOUND_FACTOR = 16.0


def cauchy_limit(seq: CauchyBarcodeSequence, tol: float = TOL):
    """Limit barcode of a certified Cauchy sequence, with a certificate.

    Every consecutive pair is re-certified to be a_n-matched (NotCauchy when
    one fails).  Stages are re-anchored by translating stage n by -a_ge(n);
    the limit is read off the last anchored stage, dropping bars whose
    length is at most twice the declared tail.  The certificate records
    d'(F_n, limit) against 16 * a_ge(n) for every stage.
    """
    items = seq.items
    for n in range(len(items) - 1):
        f, a = items[n]
        g = items[n + 1][0]
        ok, _ = epsilon_interleaved(f, g, a, tol)
        if not ok:
            raise NotCauchy(f"pair ({n}, {n + 1}) is not {a}-isomorphic")

    anchored_last = shift(items[-1][0], -seq.a_ge(len(items) - 1))
    cut = 2.0 * seq.tail
    limit = Barcode(
        {
            n: [b for b in bars if b.infinite or b.length > cut + tol]
            for n, bars in anchored_last.degrees.items()
        }
    )

    achieved = []
    bounds = []
    for n, (f, _) in enumerate(items):
        achieved.append(dprime_distance(f, limit, tol))
        bounds.append(LIMIT_BOUND_FACTOR * seq.a_ge(n))
    return limit, LimitCertificate(tuple(achieved), tuple(bounds))
