"""Independent oracles used to pin expected values in the tests.

Each oracle recomputes a library quantity along a different route: sheaf
cohomology on a stratified line for the ray Hom table, a fiberwise
compact-support computation for convolution, exhaustive morphism-space
search over interval modules for interleavings, and fresh per-breakpoint
rank computations for the sublevel pipeline.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from barspec._linalg import rank, solve
from barspec.barcode import Bar, Barcode

INF = math.inf
TOL = 1e-9


# ---------------------------------------------------------------------------
# cellular sheaf cohomology on a stratified line


def _cell_model(points):
    """Vertices and open edges of a stratified closed window around points."""
    pts = sorted(set(points))
    lo, hi = pts[0] - 2.0, pts[-1] + 2.0
    verts = [lo] + pts + [hi]
    edges = [(verts[i], verts[i + 1]) for i in range(len(verts) - 1)]
    return verts, edges


def _restriction_complex(verts, edges, in_z, in_u=None):
    """Cochain complex of RGamma(U; k_Z) for cellwise-constant data.

    ``in_z`` tests membership in the locally closed set Z, ``in_u`` (open,
    cellwise) membership in U; both default to everything.
    """
    if in_u is None:
        in_u = lambda x: True  # noqa: E731
    v_idx = {}
    for v in verts:
        if in_u(v) and in_z(v):
            v_idx[v] = len(v_idx)
    e_idx = {}
    for e in edges:
        mid = 0.5 * (e[0] + e[1])
        if in_u(mid) and in_z(mid):
            e_idx[e] = len(e_idx)
    delta = np.zeros((len(e_idx), len(v_idx)), dtype=np.int64)
    for e, j in e_idx.items():
        for v in e:
            if v in v_idx:
                delta[j, v_idx[v]] = 1
    return len(v_idx), len(e_idx), delta, v_idx, e_idx


def ray_hom_oracle(s: float, tgt: Bar) -> dict[int, int]:
    """Graded dims of sections supported on [s, inf) of an interval sheaf.

    Realized on a finite stratified window as the shifted cone of the
    restriction from the window to the open part below s.
    """
    pts = [s, tgt.birth] + ([] if tgt.infinite else [tgt.death])
    verts, edges = _cell_model(pts)
    right = verts[-1]

    def in_z(x):
        if tgt.infinite:
            return tgt.birth <= x <= right
        return tgt.birth <= x < tgt.death

    def in_u(x):
        return x < s

    n0, n1, d_full, vi_f, ei_f = _restriction_complex(verts, edges, in_z)
    m0, m1, d_open, vi_o, ei_o = _restriction_complex(verts, edges, in_z, in_u)
    # restriction chain map: project cells of the window onto cells of U
    r0 = np.zeros((m0, n0), dtype=np.int64)
    for v, j in vi_o.items():
        r0[j, vi_f[v]] = 1
    r1 = np.zeros((m1, n1), dtype=np.int64)
    for e, j in ei_o.items():
        r1[j, ei_f[e]] = 1
    # total complex of the shifted cone: D0 = K^0, D1 = K^1 + U^0, D2 = U^1
    d0 = np.vstack([d_full, r0])
    d1 = np.hstack([r1, d_open]) % 2
    dims = [n0, n1 + m0, m1]
    ranks = [rank(d0, 2), rank(d1, 2)]
    h = {
        0: dims[0] - ranks[0],
        1: dims[1] - ranks[0] - ranks[1],
        2: dims[2] - ranks[1],
    }
    return {m: d for m, d in h.items() if d}


# ---------------------------------------------------------------------------
# convolution via fiberwise compact supports


def _fiber_cohomology(x: Bar, y: Bar, t: float):
    """H^*_c of {t1 in x, t - t1 in y}: 0 compact, 1 open, None otherwise."""

    def in_x(v):
        return x.birth <= v and (x.infinite or v < x.death)

    def in_y(v):
        return y.birth <= v and (y.infinite or v < y.death)

    def member(t1):
        return in_x(t1) and in_y(t - t1)

    lo = x.birth if y.infinite else max(x.birth, t - y.death)
    hi = t - y.birth if x.infinite else min(x.death, t - y.birth)
    if math.isinf(lo) or math.isinf(hi) or hi < lo:
        return None
    closed_lo, closed_hi = member(lo), member(hi)
    if lo == hi:
        return 0 if closed_lo else None
    if closed_lo and closed_hi:
        return 0
    if not closed_lo and not closed_hi:
        return 1
    return None


def convolve_oracle(b1: Barcode, b2: Barcode) -> Barcode:
    """Convolution read off from fiberwise compact-support cohomology."""
    out: dict[int, list[Bar]] = {}
    for n1, x in b1.all_bars():
        for n2, y in b2.all_bars():
            bps = sorted(
                {
                    u + v
                    for u in (x.birth, x.death)
                    for v in (y.birth, y.death)
                    if math.isfinite(u + v)
                }
            )
            samples = [bps[0] - 1.0]
            for i, bp in enumerate(bps):
                samples.append(bp)
                if i + 1 < len(bps):
                    samples.append(0.5 * (bp + bps[i + 1]))
            samples.append(bps[-1] + 1.0)
            for deg_offset in (0, 1):
                birth = None
                for t in samples:
                    val = _fiber_cohomology(x, y, t) == deg_offset
                    if val and birth is None:
                        birth = t
                    elif not val and birth is not None:
                        out.setdefault(n1 + n2 + deg_offset, []).append(Bar(birth, t))
                        birth = None
                if birth is not None:
                    out.setdefault(n1 + n2 + deg_offset, []).append(Bar(birth, INF))
    return Barcode(out)


# ---------------------------------------------------------------------------
# exhaustive interval-module morphism search


def _interval(bar: Bar, shift: float):
    death = INF if bar.infinite else bar.death - shift
    return bar.birth - shift, death


def hom_nonzero(src: Bar, tgt: Bar, shift: float) -> bool:
    """Whether the canonical module map src -> shifted tgt is nonzero.

    The target must be born no later, die no later, and still overlap the
    source; rays map onto their truncations but never the other way.
    """
    tb, td = _interval(tgt, shift)
    src_death = INF if src.infinite else src.death
    if tb > src.birth + TOL:
        return False
    if math.isinf(td) and not math.isinf(src_death):
        return False
    if not math.isinf(td) and not math.isinf(src_death) and td > src_death + TOL:
        return False
    return src.birth + TOL < td


def _triple_nonzero(x: Bar, y: Bar, z: Bar, s1: float, s2: float) -> bool:
    births = [x.birth]
    deaths = [INF if x.infinite else x.death]
    for bar, s in ((y, s1), (z, s1 + s2)):
        tb, td = _interval(bar, s)
        births.append(tb)
        deaths.append(td)
    return max(births) + TOL < min(deaths)


def _tau_matrix(bars, c: float):
    m = np.zeros((len(bars), len(bars)), dtype=np.int64)
    for i, bar in enumerate(bars):
        if bar.infinite or bar.length > c + TOL:
            m[i, i] = 1
    return m


def module_iso_oracle(b1: Barcode, b2: Barcode, a: float, b: float,
                      max_bits: int = 14) -> bool:
    """Exhaustive search for an (a, b)-isomorphism of interval modules.

    Per degree, every F_2 matrix supported on the nonzero Hom positions is
    tried for the forward map; the backward map is then solved for
    linearly under both round-trip conditions, with composites vanishing
    outside triple overlaps.
    """
    for n in sorted(set(b1.degrees) | set(b2.degrees)):
        bars1, bars2 = list(b1.bars(n)), list(b2.bars(n))
        if not bars1 and not bars2:
            continue
        n1, n2 = len(bars1), len(bars2)
        pos_a = [
            (i, j)
            for i in range(n1)
            for j in range(n2)
            if hom_nonzero(bars1[i], bars2[j], a)
        ]
        pos_b = [
            (j, i)
            for j in range(n2)
            for i in range(n1)
            if hom_nonzero(bars2[j], bars1[i], b)
        ]
        if len(pos_a) > max_bits:
            raise ValueError("instance too large for the exhaustive oracle")
        nk = len(pos_b)
        # triple-overlap tables, one slice per backward variable
        t1 = np.zeros((nk, n1), dtype=np.int64)  # rows i -> target i_k
        t2 = np.zeros((nk, n2), dtype=np.int64)  # source j_k -> targets j2
        for k, (jk, ik) in enumerate(pos_b):
            for i in range(n1):
                t1[k, i] = _triple_nonzero(bars1[i], bars2[jk], bars1[ik], a, b)
            for j2 in range(n2):
                t2[k, j2] = _triple_nonzero(bars2[jk], bars1[ik], bars2[j2], b, a)
        rhs = np.concatenate([
            _tau_matrix(bars1, a + b).reshape(-1),
            _tau_matrix(bars2, a + b).reshape(-1),
        ])
        found = False
        for bits in range(1 << len(pos_a)):
            alpha = np.zeros((n1, n2), dtype=np.int64)
            for k in range(len(pos_a)):
                if bits >> k & 1:
                    alpha[pos_a[k]] = 1
            rows = np.zeros((n1 * n1 + n2 * n2, nk), dtype=np.int64)
            for k, (jk, ik) in enumerate(pos_b):
                rows[np.arange(n1) * n1 + ik, k] = alpha[:, jk] * t1[k]
                rows[n1 * n1 + jk * n2 + np.arange(n2), k] = alpha[ik, :] * t2[k]
            if nk == 0:
                if not rhs.any():
                    found = True
                    break
                continue
            if solve(rows, rhs, 2) is not None:
                found = True
                break
        if not found:
            return False
    return True


def oracle_eps_isomorphic(b1: Barcode, b2: Barcode, eps: float) -> bool:
    return module_iso_oracle(b1, b2, eps, eps)


def oracle_dprime(b1: Barcode, b2: Barcode, grid) -> float:
    """Exhaustive infimum of a + b over an (a, b) grid of dyadic shifts."""
    best = INF
    for a in grid:
        for b in grid:
            if a + b < best and module_iso_oracle(b1, b2, a, b):
                best = a + b
    return best


# ---------------------------------------------------------------------------
# naive sublevel ranks


def naive_pair_ranks(k, s):
    """Per-breakpoint pair cohomology and image dimensions by fresh ranks.

    Returns (breakpoints, h_dims, image_dims) where each entry maps a
    degree to its dimension at that cut value.
    """
    p = k.p
    entry = {
        d: [min(s.values[v] for v in vs) for vs in k.vertex_of_cell[d]]
        for d in sorted(k.cells)
    }
    deltas = {d: k.coboundary(d) for d in sorted(k.cells)}
    # full cocycle and coboundary data per degree
    full_z = {}
    full_b = {}
    for d in sorted(k.cells):
        dn = deltas[d]
        if dn.size:
            from barspec._linalg import nullspace

            full_z[d] = nullspace(dn, p)
        else:
            full_z[d] = np.eye(k.n_cells(d), dtype=np.int64)
        prev = k.coboundary(d - 1) if d > 0 else np.zeros((k.n_cells(d), 0), dtype=np.int64)
        full_b[d] = prev

    breakpoints = sorted(set(s.values))
    h_dims, image_dims = [], []
    for c in breakpoints:
        h_at, im_at = {}, {}
        for d in sorted(k.cells):
            cols = [i for i, g in enumerate(entry[d]) if g <= c + TOL]
            if not cols:
                continue
            rows = [i for i, g in enumerate(entry.get(d + 1, [])) if g <= c + TOL]
            dn = deltas[d]
            sub = dn[np.ix_(rows, cols)] if dn.size and rows else np.zeros((0, len(cols)), dtype=np.int64)
            rank_dn = rank(sub, p) if sub.size else 0
            prev_cols = [i for i, g in enumerate(entry.get(d - 1, [])) if g <= c + TOL]
            dprev = deltas.get(d - 1)
            sub_prev = (
                dprev[np.ix_(cols, prev_cols)]
                if dprev is not None and dprev.size and prev_cols
                else np.zeros((len(cols), 0), dtype=np.int64)
            )
            rank_prev = rank(sub_prev, p) if sub_prev.size else 0
            h = len(cols) - rank_dn - rank_prev
            if h:
                h_at[d] = h
            # image of H^d(sub) -> H^d(full): span(Z_sub + B_full) - dim B_full
            z_sub_local = (
                np.eye(len(cols), dtype=np.int64)
                if not sub.size
                else _nullspace_cols(sub, p)
            )
            z_sub = np.zeros((k.n_cells(d), z_sub_local.shape[1]), dtype=np.int64)
            z_sub[np.array(cols)] = z_sub_local
            b_full = full_b[d]
            stacked = np.hstack([z_sub, b_full]) if b_full.size else z_sub
            im = rank(stacked, p) - (rank(b_full, p) if b_full.size else 0)
            if im:
                im_at[d] = im
        h_dims.append(h_at)
        image_dims.append(im_at)
    return breakpoints, h_dims, image_dims


def _nullspace_cols(a, p):
    from barspec._linalg import nullspace

    return nullspace(a, p)
