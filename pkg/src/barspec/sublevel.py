"""Sublevel ingestion: sampled functions on finite cell complexes.

A sampled function assigns a value to every vertex; the associated pair
filtration collects, for each cut value c, the relative cochain complex of
the pair (whole complex, full subcomplex on vertices above c).  A cell
enters the relative complex at the minimum of its vertex values, so the
family is a filtered cochain complex and its reduction is the persistence
of the pair cohomology.  The image flag inside the total cohomology gives
the filtered module consumed by the spectral-invariant engine, and cup
products on simplicial complexes supply the ring action.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import _linalg
from .barcode import TOL, Barcode
from .errors import (
    ActionUnavailable,
    InputError,
    InvalidComplex,
    UnsupportedComplex,
)
from .fcomplex import FilteredComplex, reduce as reduce_complex
from .specinv import FilteredGradedModule, GradedRing, SpecSet, spec as module_spec, trivial_ring


class CellComplex:
    """Finite simplicial or cubical complex with F_p incidence.

    ``cells[d]`` lists the d-cells; a simplicial cell is a sorted vertex
    tuple, a cubical cell a (base corner, extended directions) pair.
    ``boundaries[d]`` is the matrix of the boundary C_d -> C_(d-1).
    """

    __slots__ = ("kind", "cells", "boundaries", "vertex_of_cell", "n_vertices",
                 "p", "fibered")

    def __init__(self, kind, cells, boundaries, vertex_of_cell, n_vertices,
                 p: int = 2, fibered: bool = False):
        self.kind = kind
        self.cells = cells
        self.boundaries = {d: _linalg.asfield(m, p) for d, m in boundaries.items()}
        self.vertex_of_cell = vertex_of_cell
        self.n_vertices = n_vertices
        self.p = int(p)
        self.fibered = bool(fibered)
        self.validate()

    @property
    def top_dim(self) -> int:
        return max(self.cells)

    def n_cells(self, d: int) -> int:
        return len(self.cells.get(d, ()))

    def boundary(self, d: int) -> np.ndarray:
        m = self.boundaries.get(d)
        if m is None:
            return np.zeros((self.n_cells(d - 1), self.n_cells(d)), dtype=np.int64)
        return m

    def validate(self):
        if self.n_cells(0) != self.n_vertices:
            raise InvalidComplex("vertex count mismatch")
        for d in self.cells:
            if d > 0 and self.boundary(d).shape != (self.n_cells(d - 1), self.n_cells(d)):
                raise InvalidComplex(f"boundary matrix at dimension {d} has wrong shape")
        for d in self.cells:
            if d >= 2:
                sq = (self.boundary(d - 1) @ self.boundary(d)) % self.p
                if sq.any():
                    raise InvalidComplex(f"boundary squared is nonzero at dimension {d}")

    # -- constructors ------------------------------------------------------

    @classmethod
    def simplicial(cls, simplices, p: int = 2, fibered: bool = False) -> "CellComplex":
        """Complex generated by the given simplices (vertex id tuples)."""
        closed: set[tuple[int, ...]] = set()
        for s in simplices:
            s = tuple(sorted(set(int(v) for v in s)))
            if not s:
                raise InvalidComplex("empty simplex")
            for k in range(1, len(s) + 1):
                closed.update(itertools.combinations(s, k))
        by_dim: dict[int, list[tuple[int, ...]]] = {}
        for s in sorted(closed, key=lambda t: (len(t), t)):
            by_dim.setdefault(len(s) - 1, []).append(s)
        vertex_ids = [s[0] for s in by_dim.get(0, [])]
        if vertex_ids != sorted(vertex_ids):
            raise InvalidComplex("vertex ids must sort")
        index = {d: {s: i for i, s in enumerate(ss)} for d, ss in by_dim.items()}
        boundaries = {}
        for d, ss in by_dim.items():
            if d == 0:
                continue
            m = np.zeros((len(by_dim[d - 1]), len(ss)), dtype=np.int64)
            for j, s in enumerate(ss):
                for i in range(len(s)):
                    face = s[:i] + s[i + 1 :]
                    m[index[d - 1][face], j] = (-1) ** i % p
            boundaries[d] = m
        vertex_of_cell = {d: [list(s) for s in ss] for d, ss in by_dim.items()}
        return cls("simplicial", by_dim, boundaries, vertex_of_cell,
                   len(vertex_ids), p, fibered)

    @classmethod
    def cubical(cls, shape, periodic=None, p: int = 2, fibered: bool = False) -> "CellComplex":
        """Grid complex; ``shape[i]`` vertices per axis, optionally periodic."""
        shape = [int(n) for n in shape]
        if not shape or any(n < 1 for n in shape):
            raise InvalidComplex("grid shape must be positive")
        periodic = [bool(b) for b in (periodic or [False] * len(shape))]
        if len(periodic) != len(shape):
            raise InvalidComplex("one periodic flag per axis required")
        k = len(shape)

        def vid(coords) -> int:
            out = 0
            for n, c in zip(shape, coords):
                out = out * n + (c % n)
            return out

        cells: dict[int, list] = {}
        index: dict[int, dict] = {}
        for dirs in itertools.chain.from_iterable(
            itertools.combinations(range(k), d) for d in range(k + 1)
        ):
            d = len(dirs)
            ranges = []
            for i in range(k):
                n, per = shape[i], periodic[i]
                if i in dirs:
                    ranges.append(range(n if per else n - 1))
                else:
                    ranges.append(range(n))
            for base in itertools.product(*ranges):
                cells.setdefault(d, []).append((base, dirs))
        for d, cs in cells.items():
            index[d] = {c: i for i, c in enumerate(cs)}

        boundaries = {}
        for d in cells:
            if d == 0:
                continue
            m = np.zeros((len(cells[d - 1]), len(cells[d])), dtype=np.int64)
            for j, (base, dirs) in enumerate(cells[d]):
                for pos, axis in enumerate(dirs):
                    rest = tuple(x for x in dirs if x != axis)
                    sign = (-1) ** pos
                    upper = list(base)
                    upper[axis] = (upper[axis] + 1) % shape[axis]
                    lo = (tuple(base), rest)
                    hi = (tuple(upper), rest)
                    m[index[d - 1][lo], j] = (m[index[d - 1][lo], j] - sign) % p
                    m[index[d - 1][hi], j] = (m[index[d - 1][hi], j] + sign) % p
            boundaries[d] = m

        vertex_of_cell = {}
        for d, cs in cells.items():
            rows = []
            for base, dirs in cs:
                vs = set()
                for bits in itertools.product((0, 1), repeat=len(dirs)):
                    corner = list(base)
                    for b, axis in zip(bits, dirs):
                        corner[axis] = (corner[axis] + b) % shape[axis]
                    vs.add(vid(corner))
                rows.append(sorted(vs))
            vertex_of_cell[d] = rows
        n_vertices = len(cells[0])
        return cls("cubical", cells, boundaries, vertex_of_cell, n_vertices, p, fibered)

    def coboundary(self, n: int) -> np.ndarray:
        """delta: C^n -> C^(n+1), the transpose of the boundary."""
        return self.boundary(n + 1).T


@dataclass(frozen=True)
class SampledFunction:
    """Vertex values; cells extend by max over vertices (lower-star rule)."""

    values: tuple[float, ...]
    clamp: bool = False

    def __post_init__(self):
        for v in self.values:
            if not math.isfinite(v):
                raise InputError("vertex values must be finite")

    @classmethod
    def from_mapping(cls, mapping, n_vertices: int, clamp: bool = False):
        vals = [None] * n_vertices
        for k, v in mapping.items():
            vals[int(k)] = float(v)
        if any(v is None for v in vals):
            raise InputError("every vertex needs a value")
        return cls(tuple(vals), clamp)

    def cell_value(self, vertices) -> float:
        return max(self.values[v] for v in vertices)

    def cell_entry(self, vertices) -> float:
        """Grade at which the cell enters the relative pair complex."""
        return min(self.values[v] for v in vertices)

    def negated(self) -> "SampledFunction":
        return SampledFunction(tuple(-v for v in self.values), self.clamp)

    @property
    def min(self) -> float:
        return min(self.values)

    @property
    def max(self) -> float:
        return max(self.values)


def dual_function(s: SampledFunction) -> SampledFunction:
    """Reverse-direction partner of a sampled function (negated values)."""
    return s.negated()


@dataclass(frozen=True)
class PairFiltration:
    """Filtered relative cochain complex of (E, {S > c}) over the breakpoints."""

    complex: FilteredComplex
    breakpoints: tuple[float, ...]
    cell_complex: CellComplex
    function: SampledFunction

    def sub_indices(self, c: float, tol: float = TOL) -> dict[int, list[int]]:
        """Generator indices present at cut value c, per degree."""
        out = {}
        for n, grades in self.complex.grades.items():
            out[n] = [i for i, g in enumerate(grades) if g <= c + tol]
        return out

    def complex_at(self, c: float, tol: float = TOL) -> FilteredComplex:
        keep = self.sub_indices(c, tol)
        grades = {n: [self.complex.grades[n][i] for i in idx] for n, idx in keep.items()}
        diffs = {}
        for n, idx in keep.items():
            rows = keep.get(n + 1, [])
            if rows and idx:
                diffs[n] = self.complex.diff(n)[np.ix_(rows, idx)]
        return FilteredComplex(
            {n: g for n, g in grades.items() if g}, diffs, self.complex.p, validate=False
        )


def build_pair_filtration(k: CellComplex, s: SampledFunction) -> PairFiltration:
    """Relative cochain complex of (E, {S > c}) as a filtered complex.

    The full subcomplex on vertices above c misses exactly the cells with
    some vertex at most c, so the relative cochain on a cell enters at the
    minimum of its vertex values and the coboundary never raises grades.
    """
    if len(s.values) != k.n_vertices:
        raise InvalidComplex("function does not match the vertex set")
    grades = {}
    for d in sorted(k.cells):
        grades[d] = [s.cell_entry(vs) for vs in k.vertex_of_cell[d]]
    diffs = {d: k.coboundary(d) for d in sorted(k.cells) if k.n_cells(d + 1)}
    cx = FilteredComplex(grades, diffs, k.p)
    breakpoints = tuple(sorted(set(s.values)))
    return PairFiltration(cx, breakpoints, k, s)


# ---------------------------------------------------------------------------
# cohomology of the full complex


@dataclass(frozen=True)
class CohomologyBasis:
    """Representative cocycles and coordinates for H^* of a cell complex."""

    reps: dict[int, np.ndarray] = field(default_factory=dict)  # cells x dim(H^n)
    cob_basis: dict[int, np.ndarray] = field(default_factory=dict)
    p: int = 2

    def dim(self, n: int) -> int:
        r = self.reps.get(n)
        return 0 if r is None else r.shape[1]

    def graded_dims(self) -> dict[int, int]:
        return {n: self.dim(n) for n in sorted(self.reps) if self.dim(n)}

    def coords_batch(self, n: int, cocycles: np.ndarray) -> np.ndarray:
        """Class coordinates of stacked cocycle columns in the degree-n basis."""
        cocycles = np.asarray(cocycles, dtype=np.int64) % self.p
        reps = self.reps.get(n)
        if reps is None or reps.shape[1] == 0:
            return np.zeros((0, cocycles.shape[1]), dtype=np.int64)
        cob = self.cob_basis.get(n)
        cols = [reps] if cob is None or cob.size == 0 else [reps, cob]
        a = np.hstack(cols)
        sol = _linalg.solve(a, cocycles, self.p)
        if sol is None:
            raise InputError("vector is not a cocycle of the complex")
        return sol[: reps.shape[1]] % self.p

    def coords(self, n: int, cocycle: np.ndarray) -> np.ndarray:
        """Coordinates of a cocycle's class in the degree-n basis."""
        out = self.coords_batch(n, np.asarray(cocycle, dtype=np.int64).reshape(-1, 1))
        return out[:, 0]


def cohomology_basis(k: CellComplex) -> CohomologyBasis:
    reps = {}
    cob = {}
    p = k.p
    for n in sorted(k.cells):
        delta_n = k.coboundary(n)
        z = _linalg.nullspace(delta_n, p) if delta_n.size else np.eye(k.n_cells(n), dtype=np.int64)
        b = k.coboundary(n - 1) if n > 0 else np.zeros((k.n_cells(n), 0), dtype=np.int64)
        b_basis = _linalg.row_basis(b.T, p).T if b.size else np.zeros((k.n_cells(n), 0), dtype=np.int64)
        chosen = []
        span = b_basis.T
        for col in range(z.shape[1]):
            v = z[:, col]
            if not _linalg.in_span(span, v, p):
                chosen.append(v)
                span = np.vstack([span, v]) if span.size else v.reshape(1, -1)
        reps[n] = (
            np.stack(chosen, axis=1) if chosen else np.zeros((k.n_cells(n), 0), dtype=np.int64)
        )
        cob[n] = b_basis
    return CohomologyBasis(reps, cob, p)


# ---------------------------------------------------------------------------
# simplicial cup products


def cup_cochain(k: CellComplex, a_deg: int, u: np.ndarray, b_deg: int, w: np.ndarray):
    """Front/back-face cup product of cochains on an ordered simplicial complex."""
    if k.kind != "simplicial":
        raise UnsupportedComplex("cup products need a simplicial complex (convert first)")
    n = a_deg + b_deg
    out = np.zeros(k.n_cells(n), dtype=np.int64)
    if not k.n_cells(n):
        return out
    idx_a = {tuple(c): i for i, c in enumerate(k.vertex_of_cell.get(a_deg, []))}
    idx_b = {tuple(c): i for i, c in enumerate(k.vertex_of_cell.get(b_deg, []))}
    for j, cell in enumerate(k.vertex_of_cell[n]):
        front = tuple(cell[: a_deg + 1])
        back = tuple(cell[a_deg:])
        out[j] = (u[idx_a[front]] * w[idx_b[back]]) % k.p
    return out


def cup_action(k: CellComplex, classes: CohomologyBasis | None = None):
    """Cohomology ring of positive degrees acting on the full cohomology.

    Returns (ring, actions, basis) where ``actions[r]`` is the right
    multiplication matrix on the concatenated cohomology basis.  Products
    are checked for associativity and, over F_2, commutativity.
    """
    if k.kind != "simplicial":
        raise UnsupportedComplex("cup products need a simplicial complex (convert first)")
    basis = classes or cohomology_basis(k)
    p = k.p
    degs = []
    members = []  # (degree, column in reps)
    for n in sorted(basis.reps):
        for i in range(basis.dim(n)):
            degs.append(n)
            members.append((n, i))
    ring_members = [(n, i) for (n, i) in members if n >= 1]
    ring_degs = [n for (n, i) in ring_members]

    def class_coords(n, vec):
        full = np.zeros(len(members), dtype=np.int64)
        if basis.dim(n):
            c = basis.coords(n, vec)
            for col, (m, i) in enumerate(members):
                if m == n:
                    full[col] = c[i]
        return full

    n_r = len(ring_members)
    mult = np.zeros((n_r, n_r, n_r), dtype=np.int64)
    for a, (na, ia) in enumerate(ring_members):
        for b, (nb, ib) in enumerate(ring_members):
            prod = cup_cochain(k, na, basis.reps[na][:, ia], nb, basis.reps[nb][:, ib])
            nd = na + nb
            if basis.dim(nd):
                coords = basis.coords(nd, prod)
                for c, (nc, ic) in enumerate(ring_members):
                    if nc == nd:
                        mult[a, b, c] = coords[ic]
    ring = GradedRing(ring_degs, mult, p)

    actions = np.zeros((n_r, len(members), len(members)), dtype=np.int64)
    for r, (nr, ir) in enumerate(ring_members):
        for j, (nj, ij) in enumerate(members):
            prod = cup_cochain(k, nj, basis.reps[nj][:, ij], nr, basis.reps[nr][:, ir])
            actions[r][:, j] = class_coords(nj + nr, prod)

    if p == 2:
        for a, (na, ia) in enumerate(ring_members):
            for b, (nb, ib) in enumerate(ring_members):
                ab = cup_cochain(k, na, basis.reps[na][:, ia], nb, basis.reps[nb][:, ib])
                ba = cup_cochain(k, nb, basis.reps[nb][:, ib], na, basis.reps[na][:, ia])
                ca = basis.coords(na + nb, ab) if basis.dim(na + nb) else np.zeros(0)
                cb = basis.coords(na + nb, ba) if basis.dim(na + nb) else np.zeros(0)
                if ca.shape != cb.shape or (ca != cb).any():
                    raise InvalidComplex("cup product is not commutative over F_2")
    return ring, actions, basis


# ---------------------------------------------------------------------------
# the full pipeline


@dataclass(frozen=True)
class SpecResult:
    barcode: Barcode
    module: FilteredGradedModule
    spec: SpecSet
    filtration: PairFiltration


def spec_of_function(k: CellComplex, s: SampledFunction, action="compute",
                     tol: float = TOL) -> SpecResult:
    """Barcode, image-filtration module, and spectrum of a sampled function.

    Levels are the least cut values at which a class of the total
    cohomology lifts to the relative pair complex; the action is computed
    simplicially when requested and possible, taken as supplied
    (ring, action-matrices) otherwise, or left trivial when None.
    """
    pf = build_pair_filtration(k, s)
    barcode = reduce_complex(pf.complex, tol)
    basis = cohomology_basis(k)

    if action == "compute":
        if k.fibered:
            raise ActionUnavailable(
                "fibered complexes need a supplied ring action"
            )
        ring, actions, basis = cup_action(k, basis)
    elif action is None:
        ring, actions = trivial_ring(k.p), None
    else:
        ring, actions = action

    members = []
    for n in sorted(basis.reps):
        for i in range(basis.dim(n)):
            members.append((n, i))
    n_total = len(members)
    if actions is None:
        actions = np.zeros((ring.dim, n_total, n_total), dtype=np.int64)

    # adapted basis of the image flag, one coordinate matrix column per class
    chosen_coords: list[np.ndarray] = []
    chosen_levels: list[float] = []
    chosen_degrees: list[int] = []
    span = np.zeros((0, n_total), dtype=np.int64)
    positions = {n: [pos for pos, (m, _) in enumerate(members) if m == n] for n in basis.reps}
    for c in pf.breakpoints:
        if len(chosen_coords) == n_total:
            break
        keep = pf.sub_indices(c, tol)
        for n in sorted(basis.reps):
            if not basis.dim(n):
                continue
            idx = keep.get(n, [])
            if not idx:
                continue
            delta = pf.complex.diff(n)
            rows = keep.get(n + 1, [])
            sub = (
                delta[np.ix_(rows, idx)]
                if delta.size and rows
                else np.zeros((0, len(idx)), dtype=np.int64)
            )
            kernel = _linalg.nullspace(sub, k.p) if sub.size else np.eye(len(idx), dtype=np.int64)
            if kernel.shape[1] == 0:
                continue
            embedded = np.zeros((pf.complex.dim(n), kernel.shape[1]), dtype=np.int64)
            embedded[np.array(idx), :] = kernel
            coords = basis.coords_batch(n, embedded)
            for col in range(coords.shape[1]):
                cv = coords[:, col]
                if not cv.any():
                    continue
                full = np.zeros(n_total, dtype=np.int64)
                full[positions[n]] = cv
                if not _linalg.in_span(span, full, k.p):
                    chosen_coords.append(full)
                    chosen_levels.append(float(c))
                    chosen_degrees.append(n)
                    span = np.vstack([span, full]) if span.size else full.reshape(1, -1)
    if len(chosen_coords) != n_total:
        raise InvalidComplex("image flag does not exhaust the total cohomology")

    p_mat = np.stack(chosen_coords, axis=1)
    adapted_actions = np.zeros((ring.dim, n_total, n_total), dtype=np.int64)
    for r in range(ring.dim):
        rhs = (actions[r] @ p_mat) % k.p
        sol = _linalg.solve(p_mat, rhs, k.p)
        if sol is None:
            raise InvalidComplex("ring action does not preserve the image flag")
        adapted_actions[r] = sol % k.p

    module = FilteredGradedModule(ring, chosen_degrees, adapted_actions, chosen_levels)
    return SpecResult(barcode, module, module_spec(module, tol), pf)
