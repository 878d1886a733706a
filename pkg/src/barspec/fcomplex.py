"""Filtered cochain complexes over a prime field.

Generators carry real birth grades; the differential raises the degree by
one and, like every structure map here, may only move grades downward
(target grade <= source grade, relaxed by a declared shift for maps).
``reduce`` extracts the barcode of the grade filtration, ``cone`` builds
mapping cones, and homotopies are found by solving the usual linear
system, which makes interleaving certificates checkable.

Translation acts on a complex by adding a constant to all grades, matching
the barcode-level shift.  The thickening family used by the kernel-style
checks is realized by these translations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _linalg
from .barcode import TOL, Bar, Barcode, MatchingWitness, _match_all
from .errors import (
    CertificateInvalid,
    IncompatibleMap,
    InputError,
    InvalidComplex,
    LengthMismatch,
)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, int(math.isqrt(p)) + 1))


class FilteredComplex:
    """Cochain complex with graded generators over F_p.

    ``grades[n]`` lists the birth grades of the degree-n generators and
    ``diffs[n]`` is the matrix of the differential C^n -> C^(n+1), with
    rows indexed by degree n+1 generators.
    """

    __slots__ = ("grades", "diffs", "p")

    def __init__(self, grades, diffs, p: int = 2, validate: bool = True):
        self.grades = {int(n): [float(g) for g in gs] for n, gs in grades.items() if len(gs)}
        self.p = int(p)
        self.diffs = {}
        for n, m in diffs.items():
            m = _linalg.asfield(m, self.p)
            if m.any():
                self.diffs[int(n)] = m
        if validate:
            self.validate()

    def dim(self, n: int) -> int:
        return len(self.grades.get(n, []))

    @property
    def total_dim(self) -> int:
        return sum(len(g) for g in self.grades.values())

    def degree_range(self):
        return sorted(self.grades)

    def diff(self, n: int) -> np.ndarray:
        m = self.diffs.get(n)
        if m is None:
            return np.zeros((self.dim(n + 1), self.dim(n)), dtype=np.int64)
        return m

    def validate(self, tol: float = TOL):
        if not _is_prime(self.p):
            raise InvalidComplex(f"field characteristic {self.p} is not prime")
        for n, m in self.diffs.items():
            if m.shape != (self.dim(n + 1), self.dim(n)):
                raise InvalidComplex(f"differential at degree {n} has wrong shape")
            rows, cols = np.nonzero(m)
            for i, j in zip(rows, cols):
                if self.grades[n + 1][i] > self.grades[n][j] + tol:
                    raise InvalidComplex(
                        f"degree {n}: entry ({i}, {j}) raises the grade"
                    )
        for n in self.diffs:
            if self.dim(n + 2):
                sq = (self.diff(n + 1) @ self.diff(n)) % self.p
                if sq.any():
                    raise InvalidComplex(f"d o d != 0 at degree {n}")

    def shift(self, c: float) -> "FilteredComplex":
        return FilteredComplex(
            {n: [g + c for g in gs] for n, gs in self.grades.items()},
            self.diffs,
            self.p,
            validate=False,
        )

    def to_json(self) -> dict:
        gens = []
        index = {}
        for n in self.degree_range():
            for i, g in enumerate(self.grades[n]):
                index[(n, i)] = len(gens)
                gens.append({"degree": n, "grade": g})
        triples = []
        for n, m in self.diffs.items():
            rows, cols = np.nonzero(m)
            for i, j in zip(rows, cols):
                triples.append([index[(n + 1, int(i))], index[(n, int(j))], int(m[i, j])])
        return {"p": self.p, "generators": gens, "boundary": triples}

    @classmethod
    def from_json(cls, data: dict) -> "FilteredComplex":
        try:
            p = int(data.get("p", 2))
            gens = data["generators"]
            grades: dict[int, list[float]] = {}
            local: list[tuple[int, int]] = []
            for g in gens:
                n = int(g["degree"])
                grades.setdefault(n, [])
                local.append((n, len(grades[n])))
                grades[n].append(float(g["grade"]))
            diffs = {
                n: np.zeros((len(grades.get(n + 1, [])), len(gs)), dtype=np.int64)
                for n, gs in grades.items()
            }
            for row, col, val in data.get("boundary", []):
                nr, ir = local[int(row)]
                nc, ic = local[int(col)]
                if nr != nc + 1:
                    raise InvalidComplex("boundary triple does not raise degree by one")
                diffs[nc][ir, ic] = int(val)
            return cls(grades, diffs, p)
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise InputError(f"malformed complex JSON: {exc}") from exc


def direct_sum(*complexes: FilteredComplex):
    """Direct sum of complexes; also returns per-block, per-degree offsets."""
    if not complexes:
        raise InputError("empty direct sum")
    p = complexes[0].p
    if any(c.p != p for c in complexes):
        raise InputError("mixed field characteristics")
    degrees = sorted({n for c in complexes for n in c.grades})
    grades = {n: [] for n in degrees}
    offsets = [{} for _ in complexes]
    for n in degrees:
        pos = 0
        for k, c in enumerate(complexes):
            offsets[k][n] = pos
            grades[n].extend(c.grades.get(n, []))
            pos += c.dim(n)
    diffs = {}
    for n in degrees:
        rows = sum(c.dim(n + 1) for c in complexes)
        cols = sum(c.dim(n) for c in complexes)
        if rows and cols:
            m = np.zeros((rows, cols), dtype=np.int64)
            for k, c in enumerate(complexes):
                d = c.diff(n)
                if d.size:
                    r0, c0 = offsets[k].get(n + 1, 0), offsets[k][n]
                    m[r0 : r0 + d.shape[0], c0 : c0 + d.shape[1]] = d
            diffs[n] = m
    out = FilteredComplex({n: g for n, g in grades.items() if g}, diffs, p, validate=False)
    return out, offsets


# ---------------------------------------------------------------------------
# presentations of barcodes


@dataclass(frozen=True)
class Presentation:
    """Complex presenting a barcode, with generator positions per bar.

    ``bar_gens[n][k]`` gives (v_index, u_index) of the k-th bar of degree n
    in the canonical order: v creates the class in degree n, u (degree n-1)
    kills it, u_index is None for infinite bars.
    """

    complex: FilteredComplex
    bar_gens: dict[int, list[tuple[int, int | None]]]


def presentation(b: Barcode, p: int = 2) -> Presentation:
    grades: dict[int, list[float]] = {}
    bar_gens: dict[int, list[tuple[int, int | None]]] = {}
    entries = []
    for n, bars in b.items():
        grades.setdefault(n, [])
        bar_gens[n] = []
        for bar in bars:
            v = len(grades[n])
            grades[n].append(bar.birth)
            bar_gens[n].append((v, None))
    for n, bars in b.items():
        for k, bar in enumerate(bars):
            if bar.infinite:
                continue
            grades.setdefault(n - 1, [])
            u = len(grades[n - 1])
            grades[n - 1].append(bar.death)
            v = bar_gens[n][k][0]
            bar_gens[n][k] = (v, u)
            entries.append((n - 1, v, u))
    diffs = {}
    for n, v, u in entries:
        if n not in diffs:
            diffs[n] = np.zeros((len(grades[n + 1]), len(grades[n])), dtype=np.int64)
        diffs[n][v, u] = 1
    cx = FilteredComplex({n: g for n, g in grades.items() if g}, diffs, p, validate=False)
    return Presentation(cx, bar_gens)


def from_barcode(b: Barcode, p: int = 2) -> FilteredComplex:
    return presentation(b, p).complex


# ---------------------------------------------------------------------------
# persistence reduction


def reduce(c: FilteredComplex, tol: float = TOL) -> Barcode:
    """Barcode of the grade filtration.

    Generators enter at their grades; the reduction pairs each generator
    that kills a class with the generator that created it, yielding a bar
    [creator grade, killer grade) in the creator's degree.  Unpaired
    creators give infinite bars.  Zero-length pairs are dropped.
    """
    c.validate(tol)
    order = []
    for n in c.degree_range():
        for i, g in enumerate(c.grades[n]):
            order.append((g, -n, i))
    order_idx = sorted(range(len(order)), key=lambda k: order[k])
    flat: list[tuple[int, int]] = []
    for n in c.degree_range():
        for i in range(c.dim(n)):
            flat.append((n, i))
    pos = {}
    for rank_, k in enumerate(order_idx):
        pos[flat[k]] = rank_

    p = c.p
    columns: dict[int, dict[int, int]] = {}
    low_of: dict[int, int] = {}
    pairs = []
    creators = []
    for rank_ in range(len(flat)):
        n, i = flat[order_idx[rank_]]
        d = c.diff(n)
        col = {}
        if d.size:
            for r in np.nonzero(d[:, i])[0]:
                col[pos[(n + 1, int(r))]] = int(d[r, i])
        while col:
            low = max(col)
            if low not in low_of:
                break
            other = columns[low_of[low]]
            mult = (col[low] * _linalg._inv_mod(other[low], p)) % p
            for k, v in other.items():
                nv = (col.get(k, 0) - mult * v) % p
                if nv:
                    col[k] = nv
                else:
                    col.pop(k, None)
        if col:
            low = max(col)
            columns[rank_] = col
            low_of[low] = rank_
            pairs.append((low, rank_))
        else:
            creators.append(rank_)

    killed = {low for low, _ in pairs}
    bars: dict[int, list[Bar]] = {}
    for low, killer in pairs:
        n, i = flat[order_idx[low]]
        birth = c.grades[n][i]
        kn, ki = flat[order_idx[killer]]
        death = c.grades[kn][ki]
        if death - birth > tol:
            bars.setdefault(n, []).append(Bar(birth, death))
    for rank_ in creators:
        if rank_ in killed:
            continue
        n, i = flat[order_idx[rank_]]
        bars.setdefault(n, []).append(Bar(c.grades[n][i], math.inf))
    return Barcode(bars)


# ---------------------------------------------------------------------------
# chain maps


class ChainMap:
    """Graded map of filtered complexes landing in the shift of the target.

    ``mats[n]`` maps degree-n source generators to degree-n target
    generators; a nonzero entry (i, j) requires target grade i to be at
    most source grade j plus the declared shift.
    """

    __slots__ = ("source", "target", "shift", "mats")

    def __init__(self, source, target, shift, mats, validate: bool = True):
        self.source = source
        self.target = target
        self.shift = float(shift)
        self.mats = {}
        for n, m in mats.items():
            m = _linalg.asfield(m, source.p)
            if m.any():
                self.mats[int(n)] = m
        if validate:
            self.validate()

    def mat(self, n: int) -> np.ndarray:
        m = self.mats.get(n)
        if m is None:
            return np.zeros((self.target.dim(n), self.source.dim(n)), dtype=np.int64)
        return m

    def validate(self, tol: float = TOL):
        if self.source.p != self.target.p:
            raise IncompatibleMap("mixed field characteristics")
        if self.shift < 0:
            raise IncompatibleMap("map shift must be >= 0")
        for n, m in self.mats.items():
            if m.shape != (self.target.dim(n), self.source.dim(n)):
                raise IncompatibleMap(f"matrix at degree {n} has wrong shape")
            rows, cols = np.nonzero(m)
            for i, j in zip(rows, cols):
                if self.target.grades[n][i] > self.source.grades[n][j] + self.shift + tol:
                    raise IncompatibleMap(
                        f"degree {n}: entry ({i}, {j}) exceeds the allowed shift"
                    )
        degs = set(self.source.grades) | set(self.target.grades)
        p = self.source.p
        for n in degs:
            lhs = (self.target.diff(n) @ self.mat(n)) % p
            rhs = (self.mat(n + 1) @ self.source.diff(n)) % p
            if lhs.shape != rhs.shape or (lhs != rhs).any():
                raise IncompatibleMap(f"map does not commute with d at degree {n}")

    def to_json(self) -> dict:
        entries = []
        for n, m in self.mats.items():
            rows, cols = np.nonzero(m)
            for i, j in zip(rows, cols):
                entries.append([n, int(i), int(j), int(m[i, j])])
        return {
            "shift": self.shift,
            "entries": entries,
            "source": self.source.to_json(),
            "target": self.target.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "ChainMap":
        try:
            src = FilteredComplex.from_json(data["source"])
            tgt = FilteredComplex.from_json(data["target"])
            mats = {
                n: np.zeros((tgt.dim(n), src.dim(n)), dtype=np.int64)
                for n in set(src.grades) | set(tgt.grades)
            }
            for n, i, j, v in data.get("entries", []):
                mats[int(n)][int(i), int(j)] = int(v)
            return cls(src, tgt, float(data.get("shift", 0.0)), mats)
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise InputError(f"malformed chain map JSON: {exc}") from exc


def identity_map(c: FilteredComplex, shift: float = 0.0) -> ChainMap:
    mats = {n: np.eye(c.dim(n), dtype=np.int64) for n in c.degree_range()}
    return ChainMap(c, c, shift, mats, validate=False)


def tau(c: FilteredComplex, shift: float) -> ChainMap:
    """Canonical map of a complex into its translate by ``shift``."""
    if shift < 0:
        raise IncompatibleMap("tau needs shift >= 0")
    return identity_map(c, shift)


def zero_map(source, target, shift: float = 0.0) -> ChainMap:
    return ChainMap(source, target, shift, {}, validate=False)


def compose(g: ChainMap, f: ChainMap) -> ChainMap:
    """g after f, shifts add."""
    if g.source is not f.target and g.source.grades != f.target.grades:
        raise IncompatibleMap("composition source/target mismatch")
    p = f.source.p
    mats = {}
    for n in set(f.source.grades) | set(g.target.grades):
        m = (g.mat(n) @ f.mat(n)) % p
        if m.any():
            mats[n] = m
    return ChainMap(f.source, g.target, f.shift + g.shift, mats, validate=False)


def is_homotopic(f: ChainMap, g: ChainMap, tol: float = TOL):
    """Whether f and g agree up to a grade-respecting chain homotopy.

    Solves h o d + d o h = f - g over F_p where the unknown h drops the
    degree by one and obeys the same grade-shift rule as f and g.  Returns
    (bool, witness) with the witness given per degree.
    """
    if f.source is not g.source and f.source.grades != g.source.grades:
        raise IncompatibleMap("homotopy check needs equal sources")
    if f.target is not g.target and f.target.grades != g.target.grades:
        raise IncompatibleMap("homotopy check needs equal targets")
    if abs(f.shift - g.shift) > tol:
        raise IncompatibleMap("homotopy check needs equal shifts")
    src, tgt, p, shift = f.source, f.target, f.source.p, f.shift
    degs = sorted(set(src.grades) | set(tgt.grades))

    # h_m is a (tgt.dim(m-1) x src.dim(m)) block; flatten all blocks row-major
    # and keep only the grade-admissible entries as unknowns.
    block_offset = {}
    allowed_cols = []
    n_full = 0
    for m in degs:
        t_dim, s_dim = tgt.dim(m - 1), src.dim(m)
        block_offset[m] = n_full
        for i in range(t_dim):
            for j in range(s_dim):
                if tgt.grades[m - 1][i] <= src.grades[m][j] + shift + tol:
                    allowed_cols.append(n_full + i * s_dim + j)
        n_full += t_dim * s_dim

    eq_blocks, rhs_blocks = [], []
    for m in degs:
        t_dim, s_dim = tgt.dim(m), src.dim(m)
        if not t_dim or not s_dim:
            continue
        block = np.zeros((t_dim * s_dim, n_full), dtype=np.int64)
        d_tgt = tgt.diff(m - 1)
        if d_tgt.size:
            o = block_offset[m]
            block[:, o : o + d_tgt.shape[1] * s_dim] += np.kron(d_tgt, np.eye(s_dim, dtype=np.int64))
        d_src = src.diff(m)
        if d_src.size and (m + 1) in block_offset:
            o = block_offset[m + 1]
            block[:, o : o + t_dim * d_src.shape[0]] += np.kron(np.eye(t_dim, dtype=np.int64), d_src.T)
        eq_blocks.append(block % p)
        rhs_blocks.append(((f.mat(m) - g.mat(m)) % p).reshape(-1))

    if not eq_blocks:
        return True, {}
    A = np.vstack(eq_blocks)[:, allowed_cols] if allowed_cols else np.vstack(eq_blocks)[:, :0]
    rhs = np.concatenate(rhs_blocks)
    if not allowed_cols:
        return (not rhs.any()), ({} if not rhs.any() else None)
    sol = _linalg.solve(A, rhs, p)
    if sol is None:
        return False, None
    full = np.zeros(n_full, dtype=np.int64)
    full[allowed_cols] = sol
    witness = {}
    for m in degs:
        t_dim, s_dim = tgt.dim(m - 1), src.dim(m)
        if not t_dim or not s_dim:
            continue
        o = block_offset[m]
        h = full[o : o + t_dim * s_dim].reshape(t_dim, s_dim)
        if h.any():
            witness[m] = h
    return True, witness


# ---------------------------------------------------------------------------
# cones and certificates


def cone(f: ChainMap) -> FilteredComplex:
    """Mapping cone of a chain map.

    Target generators keep degree and grade; source generators move one
    degree down and their grades gain the map's shift, which preserves
    grade monotonicity.  Gradewise Euler characteristics then satisfy
    chi(cone) = chi(target) - chi(source).
    """
    f.validate()
    src, tgt, p = f.source, f.target, f.source.p
    degs = sorted(
        {n for n in tgt.grades} | {n - 1 for n in src.grades}
    )
    grades = {}
    for n in degs:
        grades[n] = list(tgt.grades.get(n, [])) + [
            g + f.shift for g in src.grades.get(n + 1, [])
        ]
    diffs = {}
    for n in degs:
        rows = len(grades.get(n + 1, []))
        cols = len(grades.get(n, []))
        if not rows or not cols:
            continue
        m = np.zeros((rows, cols), dtype=np.int64)
        dt = tgt.diff(n)
        if dt.size:
            m[: tgt.dim(n + 1), : tgt.dim(n)] = dt
        fm = f.mat(n + 1)
        if fm.size:
            m[: tgt.dim(n + 1), tgt.dim(n) :] = fm
        ds = src.diff(n + 1)
        if ds.size:
            m[tgt.dim(n + 1) :, tgt.dim(n) :] = (-ds) % p
        if m.any():
            diffs[n] = m
    return FilteredComplex({n: g for n, g in grades.items() if g}, diffs, p, validate=False)


@dataclass(frozen=True)
class InterleavingCertificate:
    """Morphism pair witnessing an (a, b)-isomorphism.

    ``alpha`` maps F into the a-translate of G and ``beta`` maps G into the
    b-translate of F; both round trips must be homotopic to the canonical
    self-maps with shift a+b.  Optional homotopy witnesses may be stored.
    """

    alpha: ChainMap
    beta: ChainMap
    h_source: dict | None = None
    h_target: dict | None = None

    @property
    def a(self) -> float:
        return self.alpha.shift

    @property
    def b(self) -> float:
        return self.beta.shift

    def to_json(self) -> dict:
        return {"alpha": self.alpha.to_json(), "beta": self.beta.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "InterleavingCertificate":
        alpha = ChainMap.from_json(data["alpha"])
        beta = ChainMap.from_json(data["beta"])
        beta = ChainMap(alpha.target, alpha.source, beta.shift, beta.mats)
        return cls(alpha, beta)


def verify_certificate(cert: InterleavingCertificate, tol: float = TOL) -> bool:
    """Check both round-trip conditions of an (a, b)-isomorphism."""
    alpha, beta = cert.alpha, cert.beta
    try:
        alpha.validate(tol)
        beta.validate(tol)
    except IncompatibleMap:
        return False
    c = alpha.shift + beta.shift
    ok1, _ = is_homotopic(compose(beta, alpha), tau(alpha.source, c), tol)
    if not ok1:
        return False
    ok2, _ = is_homotopic(compose(alpha, beta), tau(beta.source, c), tol)
    return ok2


def _matching_mats(src: Presentation, tgt: Presentation, pairs):
    """Canonical component matrices joining matched bars, zero elsewhere."""
    mats = {}
    degs = set(src.complex.grades) | set(tgt.complex.grades)
    for n in degs:
        mats[n] = np.zeros((tgt.complex.dim(n), src.complex.dim(n)), dtype=np.int64)
    for n, deg_pairs in pairs.items():
        for i, j in deg_pairs:
            sv, su = src.bar_gens[n][i]
            tv, tu = tgt.bar_gens[n][j]
            mats[n][tv, sv] = 1
            if su is not None and tu is not None:
                mats[n - 1][tu, su] = 1
    return mats


def _flip_pairs(pairs):
    return {n: tuple((j, i) for i, j in ps) for n, ps in pairs.items()}


def matching_certificate(
    b1: Barcode, b2: Barcode, a: float, b: float, p: int = 2, tol: float = TOL
):
    """Chain-level (a, b)-isomorphism certificate from a bar matching.

    Returns (cert, pres1, pres2) or None when no matching exists at the
    requested shifts.  Matched bars are joined by the canonical component
    maps; unmatched bars must be (a+b)-torsion and are sent to zero.
    """
    eps, c = (a + b) / 2.0, (b - a) / 2.0
    w = _match_all(b1, b2, eps, c, tol)
    if w is None:
        return None
    p1, p2 = presentation(b1, p), presentation(b2, p)
    alpha = ChainMap(p1.complex, p2.complex, a, _matching_mats(p1, p2, w.pairs))
    beta = ChainMap(p2.complex, p1.complex, b, _matching_mats(p2, p1, _flip_pairs(w.pairs)))
    return InterleavingCertificate(alpha, beta), p1, p2


def kernel_matching_certificate(b1: Barcode, b2: Barcode, a: float, p: int = 2,
                                tol: float = TOL):
    """Kernel-sense a-isomorphism maps from a symmetric a-matching.

    Returns (pres1, pres2, alpha, beta) with alpha from the a-thickening of
    the first complex and beta from that of the second, or None when the
    barcodes are not a-matched.
    """
    w = _match_all(b1, b2, a, 0.0, tol)
    if w is None:
        return None
    p1, p2 = presentation(b1, p), presentation(b2, p)
    alpha = ChainMap(kernel_apply(p1.complex, a), p2.complex, 0.0,
                     _matching_mats(p1, p2, w.pairs))
    beta = ChainMap(kernel_apply(p2.complex, a), p1.complex, 0.0,
                    _matching_mats(p2, p1, _flip_pairs(w.pairs)))
    return p1, p2, alpha, beta


@dataclass(frozen=True)
class ConeTorsionReport:
    a: float
    b: float
    cone_torsion: float
    bound: float

    @property
    def ok(self) -> bool:
        return self.cone_torsion <= self.bound + TOL

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "cone_torsion": self.cone_torsion,
            "bound": self.bound,
            "ok": self.ok,
        }


def cone_torsion_bound_check(cert: InterleavingCertificate, tol: float = TOL) -> ConeTorsionReport:
    """Torsion of the cone of alpha against the 2(a+b) bound."""
    if not verify_certificate(cert, tol):
        raise CertificateInvalid("certificate failed verification")
    from .barcode import torsion_threshold

    t = torsion_threshold(reduce(cone(cert.alpha), tol))
    return ConeTorsionReport(cert.a, cert.b, t, 2.0 * (cert.a + cert.b))


# ---------------------------------------------------------------------------
# thickening kernels realized by translations


def kernel_apply(c: FilteredComplex, a: float) -> FilteredComplex:
    """Thickening kernel applied to a complex, realized as translation by a."""
    if a < 0:
        raise InputError("kernel parameter must be >= 0")
    return c.shift(a)


def kernel_restriction(c: FilteredComplex, b: float, a: float) -> ChainMap:
    """Structure map from the b-thickening to the a-thickening, a <= b."""
    if not 0 <= a <= b:
        raise InputError("kernel restriction needs 0 <= a <= b")
    src, tgt = kernel_apply(c, b), kernel_apply(c, a)
    mats = {n: np.eye(c.dim(n), dtype=np.int64) for n in c.degree_range()}
    return ChainMap(src, tgt, 0.0, mats, validate=False)


def verify_kernel_certificate(
    f: FilteredComplex, g: FilteredComplex, a: float,
    alpha: ChainMap, beta: ChainMap, tol: float = TOL,
) -> bool:
    """Check the kernel-sense a-isomorphism round trips against rho_{2a,0}."""
    try:
        alpha.validate(tol)
        beta.validate(tol)
    except IncompatibleMap:
        return False
    k_alpha = ChainMap(kernel_apply(f, 2 * a), kernel_apply(g, a), 0.0, alpha.mats)
    k_beta = ChainMap(kernel_apply(g, 2 * a), kernel_apply(f, a), 0.0, beta.mats)
    rho_f = ChainMap(kernel_apply(f, 2 * a), f, 0.0,
                     {n: np.eye(f.dim(n), dtype=np.int64) for n in f.degree_range()})
    rho_g = ChainMap(kernel_apply(g, 2 * a), g, 0.0,
                     {n: np.eye(g.dim(n), dtype=np.int64) for n in g.degree_range()})
    ok1, _ = is_homotopic(compose(beta, k_alpha), rho_f, tol)
    if not ok1:
        return False
    ok2, _ = is_homotopic(compose(alpha, k_beta), rho_g, tol)
    return ok2


@dataclass(frozen=True)
class ThickeningReport:
    a: float
    rho_cone_torsion: float
    rho_bound: float
    pair_cone_torsion: float | None
    pair_bound: float | None

    @property
    def ok(self) -> bool:
        if self.rho_cone_torsion > self.rho_bound + TOL:
            return False
        if self.pair_cone_torsion is not None:
            return self.pair_cone_torsion <= self.pair_bound + TOL
        return True

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "rho_cone_torsion": self.rho_cone_torsion,
            "rho_bound": self.rho_bound,
            "pair_cone_torsion": self.pair_cone_torsion,
            "pair_bound": self.pair_bound,
            "ok": self.ok,
        }


def thickening_cone_checks(
    c: FilteredComplex, a: float, pair=None, tol: float = TOL
) -> ThickeningReport:
    """Cone-torsion checks for the translation kernel family.

    The cone of rho_{a,0} must be 2a-torsion.  When a kernel-sense
    a-isomorphic pair (other, alpha, beta) is supplied, the cone of alpha
    must be 6a-torsion.
    """
    from .barcode import torsion_threshold

    rho = kernel_restriction(c, a, 0.0)
    t_rho = torsion_threshold(reduce(cone(rho), tol))
    t_pair = bound_pair = None
    if pair is not None:
        other, alpha, beta = pair
        if not verify_kernel_certificate(c, other, a, alpha, beta, tol):
            raise CertificateInvalid("kernel-sense certificate failed verification")
        k_alpha = ChainMap(kernel_apply(c, a), other, 0.0, alpha.mats)
        t_pair = torsion_threshold(reduce(cone(k_alpha), tol))
        bound_pair = 6.0 * a
    return ThickeningReport(a, t_rho, 2.0 * a, t_pair, bound_pair)


# ---------------------------------------------------------------------------
# truncated telescopes


def telescope(
    items: Sequence[tuple[FilteredComplex, ChainMap | None]],
    shifts: Sequence[float],
    n_stages: int,
    tol: float = TOL,
) -> FilteredComplex:
    """Finite-stage homotopy colimit of a normalized inductive system.

    Stage k is translated by ``shifts[k]`` (the remainder sums of the
    consecutive bounds), turning the maps into plain shift-0 maps, and the
    cone of (id - s) over the truncated direct sum is returned.  Its
    barcode equals the barcode of the last included stage up to the
    translation, so d'(reduce(telescope), reduce(C_N)) <= 2 * shifts[N].
    """
    if n_stages < 0 or n_stages >= len(items):
        raise LengthMismatch("truncation stage out of range")
    if len(shifts) < n_stages + 1:
        raise LengthMismatch("need a shift per included stage")
    stages = []
    maps = []
    for k in range(n_stages + 1):
        cx, f = items[k]
        stages.append(kernel_apply(cx, shifts[k]))
        if k < n_stages:
            if f is None:
                raise LengthMismatch(f"missing connecting map at stage {k}")
            if f.shift > shifts[k] - shifts[k + 1] + tol:
                raise IncompatibleMap(
                    f"stage {k}: map shift {f.shift} exceeds the shift budget"
                )
            maps.append(ChainMap(stages[-1], kernel_apply(items[k + 1][0], shifts[k + 1]),
                                 0.0, f.mats))
    if not maps:
        return stages[0]
    total, offsets = direct_sum(*stages)
    lower, lower_offsets = direct_sum(*stages[:-1])
    p = total.p
    mats = {}
    for n in set(lower.grades) | set(total.grades):
        m = np.zeros((total.dim(n), lower.dim(n)), dtype=np.int64)
        for k, f in enumerate(maps):
            src_dim = stages[k].dim(n)
            if not src_dim:
                continue
            c0 = lower_offsets[k].get(n, 0)
            m[offsets[k].get(n, 0) : offsets[k].get(n, 0) + src_dim,
              c0 : c0 + src_dim] = np.eye(src_dim, dtype=np.int64)
            fm = f.mat(n)
            if fm.size:
                r0 = offsets[k + 1].get(n, 0)
                m[r0 : r0 + fm.shape[0], c0 : c0 + fm.shape[1]] = (
                    m[r0 : r0 + fm.shape[0], c0 : c0 + fm.shape[1]] - fm
                ) % p
        if m.any():
            mats[n] = m
    one_minus_s = ChainMap(lower, total, 0.0, mats)
    return cone(one_minus_s)
