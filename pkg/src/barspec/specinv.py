"""Spectral invariants, cup-length, and the counting engine.

The objects here are finitely generated graded modules over a non-unital
graded ring (positive degrees only) with a filtration level attached to
each basis vector.  The level flag is the image filtration of the graded
functor; its jump values are the spectral invariants, and cup-length of
the flag quotients drives the Lusternik-Schnirelmann style counting
inequality.  The spectral norm pairs a module with its reverse-direction
partner, and the duality check compares it against the shift-quotient
distance on the barcode side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _linalg
from .barcode import TOL, Bar, Barcode, shifted_dprime
from .errors import EmptySpec, InputError, NotExact, ZeroClass


class GradedRing:
    """Graded F_p-algebra with homogeneous basis in degrees >= 1.

    ``mult[i, j]`` holds the coefficients of e_i * e_j in the basis.  The
    ring need not be unital; associativity and degree additivity are
    validated on construction.
    """

    __slots__ = ("degrees", "mult", "p")

    def __init__(self, degrees, mult, p: int = 2, validate: bool = True):
        self.degrees = [int(d) for d in degrees]
        n = len(self.degrees)
        self.mult = np.zeros((n, n, n), dtype=np.int64) if n == 0 else _np3(mult, n, p)
        self.p = int(p)
        if validate:
            self.validate()

    @property
    def dim(self) -> int:
        return len(self.degrees)

    def validate(self):
        if any(d < 1 for d in self.degrees):
            raise InputError("ring basis degrees must be >= 1")
        n = self.dim
        for i in range(n):
            for j in range(n):
                for k in np.nonzero(self.mult[i, j])[0]:
                    if self.degrees[k] != self.degrees[i] + self.degrees[j]:
                        raise InputError("ring product is not degree additive")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    left = (self.mult[i, j] @ self.mult[:, k, :]) % self.p
                    right = (self.mult[j, k] @ self.mult[i, :, :]) % self.p
                    if (left != right).any():
                        raise InputError("ring product is not associative")

    def product(self, x, y):
        """Coefficients of x * y for coefficient vectors x, y."""
        return (np.einsum("i,j,ijk->k", x, y, self.mult)) % self.p

    def to_json(self) -> dict:
        triples = []
        n = self.dim
        for i in range(n):
            for j in range(n):
                for k in np.nonzero(self.mult[i, j])[0]:
                    triples.append([i, j, int(k), int(self.mult[i, j, k])])
        return {"p": self.p, "degrees": list(self.degrees), "products": triples}

    @classmethod
    def from_json(cls, data: dict) -> "GradedRing":
        degrees = [int(d) for d in data["degrees"]]
        n = len(degrees)
        mult = np.zeros((n, n, n), dtype=np.int64)
        for i, j, k, v in data.get("products", []):
            mult[int(i), int(j), int(k)] = int(v)
        return cls(degrees, mult, int(data.get("p", 2)))


def _np3(mult, n, p):
    a = np.asarray(mult, dtype=np.int64) % p
    if a.shape != (n, n, n):
        raise InputError("ring structure constants have wrong shape")
    return a


def trivial_ring(p: int = 2) -> GradedRing:
    return GradedRing([], np.zeros((0, 0, 0), dtype=np.int64), p, validate=False)


class GradedModule:
    """Right module over a GradedRing with a homogeneous basis.

    ``actions[r]`` is the matrix of right multiplication by the r-th ring
    basis element; column j holds the coefficients of e_j * r.
    """

    __slots__ = ("ring", "gen_degrees", "actions")

    def __init__(self, ring: GradedRing, gen_degrees, actions, validate: bool = True):
        self.ring = ring
        self.gen_degrees = [int(d) for d in gen_degrees]
        n = len(self.gen_degrees)
        acts = np.asarray(actions, dtype=np.int64) % ring.p
        if acts.size == 0:
            acts = np.zeros((ring.dim, n, n), dtype=np.int64)
        if acts.shape != (ring.dim, n, n):
            raise InputError("action tensor has wrong shape")
        self.actions = acts
        if validate:
            self.validate()

    @property
    def dim(self) -> int:
        return len(self.gen_degrees)

    @property
    def p(self) -> int:
        return self.ring.p

    def validate(self):
        for r in range(self.ring.dim):
            dr = self.ring.degrees[r]
            rows, cols = np.nonzero(self.actions[r])
            for i, j in zip(rows, cols):
                if self.gen_degrees[i] != self.gen_degrees[j] + dr:
                    raise InputError("module action is not degree additive")
        # (v * r) * s == v * (r * s)
        for r in range(self.ring.dim):
            for s in range(self.ring.dim):
                lhs = (self.actions[s] @ self.actions[r]) % self.p
                rhs = np.einsum("k,kij->ij", self.ring.mult[r, s], self.actions) % self.p
                if (lhs != rhs).any():
                    raise InputError("module action is not associative")

    def act(self, vec, r: int):
        return (self.actions[r] @ (np.asarray(vec, dtype=np.int64) % self.p)) % self.p

    def is_zero(self) -> bool:
        return self.dim == 0

    def to_json(self) -> dict:
        triples = []
        for r in range(self.ring.dim):
            rows, cols = np.nonzero(self.actions[r])
            for i, j in zip(rows, cols):
                triples.append([r, int(i), int(j), int(self.actions[r][i, j])])
        return {
            "ring": self.ring.to_json(),
            "basis": [{"degree": d} for d in self.gen_degrees],
            "action": triples,
        }


class FilteredGradedModule(GradedModule):
    """Graded module whose basis is adapted to a filtration flag.

    ``levels[i]`` is the filtration level of basis vector i; the flag at
    level d is the span of the basis vectors with level <= d, and the
    action may never raise levels, so every flag piece is a submodule.
    """

    __slots__ = ("levels",)

    def __init__(self, ring, gen_degrees, actions, levels, validate: bool = True):
        self.levels = [float(x) for x in levels]
        super().__init__(ring, gen_degrees, actions, validate=validate)
        if len(self.levels) != self.dim:
            raise InputError("one level per basis vector required")

    def validate(self):
        super().validate()
        for lv in self.levels:
            if not math.isfinite(lv):
                raise InputError("filtration levels must be finite")
        for r in range(self.ring.dim):
            rows, cols = np.nonzero(self.actions[r])
            for i, j in zip(rows, cols):
                if self.levels[i] > self.levels[j] + TOL:
                    raise InputError("action raises a filtration level")

    def flag_indices(self, d: float, tol: float = TOL):
        return [i for i, lv in enumerate(self.levels) if lv <= d + tol]

    def graded_dims(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for d in self.gen_degrees:
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))

    def restricted(self, indices) -> GradedModule:
        """Plain module on a level-window of the basis (flag subquotient)."""
        indices = list(indices)
        idx = np.array(indices, dtype=np.int64)
        degs = [self.gen_degrees[i] for i in indices]
        if indices:
            acts = self.actions[:, idx[:, None], idx[None, :]]
        else:
            acts = np.zeros((self.ring.dim, 0, 0), dtype=np.int64)
        return GradedModule(self.ring, degs, acts, validate=False)

    def to_json(self) -> dict:
        data = super().to_json()
        for gen, lv in zip(data["basis"], self.levels):
            gen["level"] = lv
        return data


# ---------------------------------------------------------------------------
# cup-length


def cup_length(ring: GradedRing, module: GradedModule) -> int:
    """Longest nonvanishing product chain a0 * r1 * ... * rk, or -1 for 0.

    By multilinearity it suffices to chain basis vectors; the search keeps
    a basis of the span of realized products per length and stops when it
    empties, which grading guarantees after finitely many steps.
    """
    if module.is_zero():
        return -1
    if ring.dim == 0:
        return 0
    current = np.eye(module.dim, dtype=np.int64)
    k = 0
    while True:
        images = []
        for r in range(ring.dim):
            out = (module.actions[r] @ current.T) % module.p
            if out.any():
                images.append(out.T)
        if not images:
            return k
        nxt = _linalg.row_basis(np.vstack(images), module.p)
        if nxt.shape[0] == 0:
            return k
        current = nxt
        k += 1


# ---------------------------------------------------------------------------
# exact sequences


@dataclass(frozen=True)
class ExactSequence:
    """Data of 0 -> A -> B -> C -> 0 with f: A -> B and g: B -> C."""

    a: GradedModule
    b: GradedModule
    c: GradedModule
    f: np.ndarray
    g: np.ndarray


def _check_equivariant(m_from: GradedModule, m_to: GradedModule, mat: np.ndarray):
    p = m_from.p
    for r in range(m_from.ring.dim):
        lhs = (mat @ m_from.actions[r]) % p
        rhs = (m_to.actions[r] @ mat) % p
        if (lhs != rhs).any():
            return False
    return True


def subadditivity_check(seq: ExactSequence, tol: float = TOL):
    """Verify exactness, then cl(B) <= cl(A) + cl(C) + 1.

    Returns (cl_a, cl_b, cl_c, holds).  Raises NotExact when the maps do
    not form a short exact sequence of ring modules.
    """
    a, b, c = seq.a, seq.b, seq.c
    p = b.p
    f = _linalg.asfield(seq.f, p) if seq.f.size else np.zeros((b.dim, a.dim), dtype=np.int64)
    g = _linalg.asfield(seq.g, p) if seq.g.size else np.zeros((c.dim, b.dim), dtype=np.int64)
    if f.shape != (b.dim, a.dim) or g.shape != (c.dim, b.dim):
        raise NotExact("map shapes do not match the modules")
    if _linalg.rank(f, p) != a.dim:
        raise NotExact("first map is not injective")
    if _linalg.rank(g, p) != c.dim:
        raise NotExact("second map is not surjective")
    if a.dim and ((g @ f) % p).any():
        raise NotExact("composition g o f is nonzero")
    if _linalg.rank(g, p) != b.dim - a.dim:
        raise NotExact("image of f is not the kernel of g")
    if not _check_equivariant(a, b, f) or not _check_equivariant(b, c, g):
        raise NotExact("maps are not ring equivariant")
    cl_a = cup_length(a.ring, a)
    cl_b = cup_length(b.ring, b)
    cl_c = cup_length(c.ring, c)
    return cl_a, cl_b, cl_c, cl_b <= cl_a + cl_c + 1


# ---------------------------------------------------------------------------
# spectral invariants


@dataclass(frozen=True)
class SpecSet:
    """Sorted jump values of the level flag, with dimension multiplicities."""

    values: tuple[float, ...]
    multiplicities: tuple[int, ...]

    def __len__(self):
        return len(self.values)

    @property
    def max(self) -> float:
        if not self.values:
            raise EmptySpec("empty spectrum has no maximum")
        return self.values[-1]

    def to_json(self) -> dict:
        return {
            "values": list(self.values),
            "multiplicities": list(self.multiplicities),
        }


def spectral_invariant(module: FilteredGradedModule, alpha, tol: float = TOL) -> float:
    """Least flag level containing the class; the zero class is rejected."""
    v = np.asarray(alpha, dtype=np.int64) % module.p
    if v.shape != (module.dim,):
        raise InputError("class vector has wrong length")
    support = np.nonzero(v)[0]
    if support.size == 0:
        raise ZeroClass("the zero class has no spectral invariant")
    return max(module.levels[i] for i in support)


def spec(module: FilteredGradedModule, tol: float = TOL) -> SpecSet:
    """Distinct flag levels with their dimension jumps."""
    if module.is_zero():
        return SpecSet((), ())
    values: list[float] = []
    counts: list[int] = []
    for lv in sorted(module.levels):
        if values and lv - values[-1] <= tol:
            counts[-1] += 1
        else:
            values.append(lv)
            counts.append(1)
    return SpecSet(tuple(values), tuple(counts))


@dataclass(frozen=True)
class LSReport:
    n_spec: int
    cl_total: int
    levels: tuple[float, ...]
    quotient_cls: tuple[int, ...]
    counting_rhs: int
    inequality_holds: bool
    degenerate_index: int | None
    degenerate_level: float | None

    def to_json(self) -> dict:
        return {
            "n_spec": self.n_spec,
            "cl_total": self.cl_total,
            "levels": list(self.levels),
            "quotient_cls": list(self.quotient_cls),
            "counting_rhs": self.counting_rhs,
            "inequality_holds": self.inequality_holds,
            "degenerate_index": self.degenerate_index,
            "degenerate_level": self.degenerate_level,
        }


def ls_check(module: FilteredGradedModule, ring: GradedRing | None = None,
             tol: float = TOL) -> LSReport:
    """Counting report for the flag of a filtered module.

    Computes N = #spec and the cup-length of the whole module, splits the
    flag into consecutive level quotients, and checks
    cl(total) <= N - 1 + sum of quotient cup-lengths.  When N <= cl(total)
    some quotient must have cup-length >= 1; its level is reported as the
    degenerate value.
    """
    ring = ring or module.ring
    sp = spec(module, tol)
    n_spec = len(sp)
    cl_total = cup_length(ring, module)
    quotient_cls = []
    prev: list[int] = []
    for lv in sp.values:
        cur = module.flag_indices(lv, tol)
        window = [i for i in cur if i not in set(prev)]
        quotient_cls.append(cup_length(ring, module.restricted(window)))
        prev = cur
    rhs = n_spec - 1 + sum(quotient_cls)
    degenerate_index = degenerate_level = None
    if n_spec and n_spec <= cl_total:
        for i, q in enumerate(quotient_cls):
            if q >= 1:
                degenerate_index = i
                degenerate_level = sp.values[i]
                break
    return LSReport(
        n_spec=n_spec,
        cl_total=cl_total,
        levels=sp.values,
        quotient_cls=tuple(quotient_cls),
        counting_rhs=rhs,
        inequality_holds=cl_total <= rhs,
        degenerate_index=degenerate_index,
        degenerate_level=degenerate_level,
    )


def flag_sequence(module: FilteredGradedModule, d_lo: float, d_hi: float,
                  tol: float = TOL) -> ExactSequence:
    """The short exact sequence flag(d_lo) -> flag(d_hi) -> quotient."""
    lo = module.flag_indices(d_lo, tol)
    hi = module.flag_indices(d_hi, tol)
    if not set(lo) <= set(hi):
        raise InputError("flag levels are not nested")
    window = [i for i in hi if i not in set(lo)]
    a = module.restricted(lo)
    b = module.restricted(hi)
    c = module.restricted(window)
    f = np.zeros((b.dim, a.dim), dtype=np.int64)
    for col, i in enumerate(lo):
        f[hi.index(i), col] = 1
    g = np.zeros((c.dim, b.dim), dtype=np.int64)
    for row, i in enumerate(window):
        g[row, hi.index(i)] = 1
    return ExactSequence(a, b, c, f, g)


# ---------------------------------------------------------------------------
# spectral norm and duality


def spectral_norm(fwd: FilteredGradedModule, bwd: FilteredGradedModule,
                  tol: float = TOL) -> float:
    """max spec of the forward module plus max spec of its partner."""
    s1, s2 = spec(fwd, tol), spec(bwd, tol)
    if not len(s1) or not len(s2):
        raise EmptySpec("spectral norm needs nonzero modules")
    return s1.max + s2.max


def unit_barcode_for(module: FilteredGradedModule) -> Barcode:
    """Barcode of the unit object in the model carrying this module.

    One infinite bar starting at 0 per graded dimension of the module.
    """
    return Barcode({n: [Bar(0.0, math.inf)] * k for n, k in module.graded_dims().items()})


@dataclass(frozen=True)
class GammaReport:
    gamma: float
    barcode_distance: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return abs(self.gamma - self.barcode_distance) <= self.tolerance

    def to_json(self) -> dict:
        return {
            "gamma": self.gamma,
            "barcode_distance": self.barcode_distance,
            "tolerance": self.tolerance,
            "ok": self.ok,
        }


def gamma_duality_check(f_barcode: Barcode, fwd: FilteredGradedModule,
                        bwd: FilteredGradedModule, tol: float = TOL) -> GammaReport:
    """Compare the spectral norm with the shift-quotient barcode distance.

    The two numbers are computed along independent routes: the norm from
    the flags of the module pair, the distance by matching the barcode
    against the unit barcode of the same model.
    """
    gamma = spectral_norm(fwd, bwd, tol)
    d = shifted_dprime(unit_barcode_for(fwd), f_barcode, tol)
    return GammaReport(gamma=gamma, barcode_distance=d, tolerance=max(tol, TOL))
