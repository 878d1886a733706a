"""Seeded randomized suites for the cone-torsion bounds.

The generators draw barcodes with dyadic endpoints, perturb them inside a
declared matching box, and build chain-level certificates out of the
matchings, so every sampled pair comes with a verifiable witness.  Reports
collect the cone torsion against the theorem bounds; a fixed seed makes
every run byte-for-byte reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .barcode import Bar, Barcode
from .fcomplex import (
    cone_torsion_bound_check,
    kernel_matching_certificate,
    matching_certificate,
    thickening_cone_checks,
)

STEP = 0.125  # dyadic grid spacing


def _dyadic(rng, lo_steps: int, hi_steps: int) -> float:
    return STEP * int(rng.integers(lo_steps, hi_steps + 1))


def random_barcode(rng, max_bars: int = 6, degrees=(0, 1), p_infinite: float = 0.3) -> Barcode:
    """Random barcode on the dyadic grid with at most max_bars bars."""
    out: dict[int, list[Bar]] = {}
    for _ in range(int(rng.integers(0, max_bars + 1))):
        n = int(rng.choice(degrees))
        birth = _dyadic(rng, 0, 32)
        if rng.random() < p_infinite:
            bar = Bar(birth, math.inf)
        else:
            bar = Bar(birth, birth + _dyadic(rng, 1, 24))
        out.setdefault(n, []).append(bar)
    return Barcode(out)


def perturbed_pair(rng, max_bars: int = 6, max_eps_steps: int = 6):
    """(b1, b2, a, b) with b2 inside the (eps, c) matching box of b1.

    eps and the centering c are dyadic; dropped and added bars stay below
    the 2*eps torsion cut, so the pair is (a, b)-isomorphic with
    a = eps - c and b = eps + c.
    """
    b1 = random_barcode(rng, max_bars)
    eps_steps = int(rng.integers(0, max_eps_steps + 1))
    eps = STEP * eps_steps
    c = STEP * int(rng.integers(-eps_steps, eps_steps + 1))

    def jiggle() -> float:
        return STEP * int(rng.integers(-eps_steps, eps_steps + 1))

    bars: dict[int, list[Bar]] = {}
    for n, bar in b1.all_bars():
        if not bar.infinite and bar.length <= 2 * eps and rng.random() < 0.3:
            continue  # drop a torsion bar
        birth = bar.birth - c + jiggle()
        if bar.infinite:
            bars.setdefault(n, []).append(Bar(birth, math.inf))
        else:
            death = bar.death - c + jiggle()
            if death <= birth:
                death = birth + STEP  # keep it a bar; still inside the box
                if abs(death - (bar.death - c)) > eps:
                    birth = bar.birth - c
                    death = bar.death - c
            bars.setdefault(n, []).append(Bar(birth, death))
    if eps > 0 and rng.random() < 0.4:
        n = int(rng.choice((0, 1)))
        birth = _dyadic(rng, 0, 32)
        length = STEP * int(rng.integers(1, max(1, int(2 * eps / STEP)) + 1))
        bars.setdefault(n, []).append(Bar(birth, birth + length))
    return b1, Barcode(bars), eps - c, eps + c


@dataclass(frozen=True)
class SuiteSummary:
    n_pairs: int
    n_failures: int
    max_ratio: float

    @property
    def ok(self) -> bool:
        return self.n_failures == 0

    def to_json(self) -> dict:
        return {
            "n_pairs": self.n_pairs,
            "n_failures": self.n_failures,
            "max_ratio": self.max_ratio,
            "ok": self.ok,
        }


def run_cone_suite(n_pairs: int, seed: int, max_bars: int = 6, p: int = 2):
    """Certified random pairs against the 2(a+b) cone-torsion bound."""
    rng = np.random.default_rng(seed)
    reports = []
    failures = 0
    max_ratio = 0.0
    while len(reports) < n_pairs:
        b1, b2, a, b = perturbed_pair(rng, max_bars)
        built = matching_certificate(b1, b2, a, b, p)
        if built is None:
            raise AssertionError("generated pair lost its matching")
        cert, _, _ = built
        rep = cone_torsion_bound_check(cert)
        reports.append(rep)
        if not rep.ok:
            failures += 1
        if rep.bound > 0:
            max_ratio = max(max_ratio, rep.cone_torsion / rep.bound)
        elif rep.cone_torsion > 0:
            max_ratio = math.inf
    return reports, SuiteSummary(n_pairs, failures, max_ratio)


def run_kernel_suite(n_pairs: int, seed: int, max_bars: int = 5, p: int = 2):
    """Shift-kernel checks: rho cones within 2a, certified pairs within 6a."""
    rng = np.random.default_rng(seed)
    reports = []
    failures = 0
    max_ratio = 0.0
    while len(reports) < n_pairs:
        b1 = random_barcode(rng, max_bars)
        a_steps = int(rng.integers(0, 7))
        a = STEP * a_steps

        def jiggle() -> float:
            return STEP * int(rng.integers(-a_steps, a_steps + 1))

        bars: dict[int, list[Bar]] = {}
        for n, bar in b1.all_bars():
            if not bar.infinite and bar.length <= 2 * a and rng.random() < 0.3:
                continue
            birth = bar.birth + jiggle()
            if bar.infinite:
                bars.setdefault(n, []).append(Bar(birth, math.inf))
            else:
                death = bar.death + jiggle()
                if death <= birth:
                    birth, death = bar.birth, bar.death
                bars.setdefault(n, []).append(Bar(birth, death))
        b2 = Barcode(bars)
        built = kernel_matching_certificate(b1, b2, a, p)
        if built is None:
            raise AssertionError("generated kernel pair lost its matching")
        p1, p2, alpha, beta = built
        rep = thickening_cone_checks(p1.complex, a, pair=(p2.complex, alpha, beta))
        reports.append(rep)
        if not rep.ok:
            failures += 1
        for t, bound in ((rep.rho_cone_torsion, rep.rho_bound),
                         (rep.pair_cone_torsion, rep.pair_bound)):
            if t is None:
                continue
            if bound > 0:
                max_ratio = max(max_ratio, t / bound)
            elif t > 0:
                max_ratio = math.inf
    return reports, SuiteSummary(n_pairs, failures, max_ratio)
