"""Worked example meshes, functions, and Cauchy sequences.

These are the instances exercised by the documentation, the test suite,
and the ``demo`` CLI command: the 3-vertex circle with a height function,
the boundary of the 3-simplex, the 7-vertex triangulated torus, a periodic
cubical torus carrying the standard embedded height, a double-well profile
on an interval, and geometric Cauchy sequences of barcodes.
"""

from __future__ import annotations

import math

from .barcode import Bar, Barcode, CauchyBarcodeSequence
from .sublevel import CellComplex, SampledFunction


def circle(n: int = 3, p: int = 2) -> CellComplex:
    """Simplicial circle on n vertices."""
    if n < 3:
        raise ValueError("a simplicial circle needs at least 3 vertices")
    return CellComplex.simplicial([(i, (i + 1) % n) for i in range(n)], p=p)


def circle_height(p: int = 2):
    """Height on the 3-vertex circle with values 0, 1, 2."""
    k = circle(3, p)
    return k, SampledFunction((0.0, 1.0, 2.0))


def circle_height_refined(p: int = 2):
    """Subdivided circle interpolating the same height profile."""
    k = circle(6, p)
    return k, SampledFunction((0.0, 0.5, 1.0, 1.5, 2.0, 1.0))


def sphere(p: int = 2) -> CellComplex:
    """Boundary of the 3-simplex."""
    return CellComplex.simplicial(
        [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)], p=p
    )


def torus(p: int = 2) -> CellComplex:
    """7-vertex triangulated torus (cyclic 2-neighborly triangulation)."""
    faces = []
    for i in range(7):
        faces.append(tuple(sorted(((i % 7), (i + 1) % 7, (i + 3) % 7))))
        faces.append(tuple(sorted(((i % 7), (i + 2) % 7, (i + 3) % 7))))
    return CellComplex.simplicial(faces, p=p)


def torus_height(p: int = 2):
    """Injective vertex heights on the 7-vertex torus."""
    k = torus(p)
    return k, SampledFunction(tuple(float(i) for i in range(7)))


def torus_grid(n: int = 8, p: int = 2):
    """Periodic cubical torus with the height of the standing embedding.

    The sampled function (2 + cos v) sin u has four critical values
    -3, -1, 1, 3, all attained at grid points when 4 divides n.
    """
    if n % 4:
        raise ValueError("the grid must hit the four critical angles")
    k = CellComplex.cubical([n, n], periodic=[True, True], p=p)
    values = []
    for i in range(n):
        for j in range(n):
            u = 2.0 * math.pi * i / n
            v = 2.0 * math.pi * j / n
            values.append((2.0 + math.cos(v)) * math.sin(u))
    return k, SampledFunction(tuple(values))


def interval(n_vertices: int, p: int = 2) -> CellComplex:
    return CellComplex.simplicial(
        [(i, i + 1) for i in range(n_vertices - 1)], p=p
    )


def double_well(p: int = 2):
    """Double-well profile on a 4-vertex interval: one finite bar survives."""
    k = interval(4, p)
    return k, SampledFunction((0.0, 1.0, 0.25, 0.75))


def fiber_well(p: int = 2):
    """Double well on a compactified fiber window; the ends dominate."""
    k = CellComplex.simplicial(
        [(i, i + 1) for i in range(5)], p=p, fibered=True
    )
    return k, SampledFunction((5.0, 0.0, 1.0, 0.25, 0.75, 5.0), clamp=True)


def constant_function(k: CellComplex, c: float) -> SampledFunction:
    return SampledFunction(tuple(float(c) for _ in range(k.n_vertices)))


def cauchy_geometric(n_items: int = 40) -> CauchyBarcodeSequence:
    """F_n = {0: [[0, 1 + 2^-n)]} with bounds a_n = 2^-n and a geometric tail."""
    items = [
        (Barcode({0: [Bar(0.0, 1.0 + 2.0 ** -n)]}), 2.0 ** -n) for n in range(n_items)
    ]
    return CauchyBarcodeSequence(tuple(items), tail=2.0 ** -(n_items - 1))


def cauchy_rays(n_items: int = 30) -> CauchyBarcodeSequence:
    """F_n = {0: [[2^-n, inf)]}; the anchored stages are constant."""
    items = [
        (Barcode({0: [Bar(2.0 ** -n, math.inf)]}), 2.0 ** -(n + 1)) for n in range(n_items)
    ]
    return CauchyBarcodeSequence(tuple(items), tail=2.0 ** -n_items)


DEMO_NAMES = (
    "circle-height",
    "circle-refined",
    "sphere",
    "torus-simplicial",
    "torus-morse",
    "double-well",
    "fiber-well",
    "cauchy-geometric",
    "cauchy-rays",
)


def demo_bundle(name: str) -> dict:
    """Self-contained JSON bundle for a named demo."""
    meshes = {
        "circle-height": circle_height,
        "circle-refined": circle_height_refined,
        "torus-simplicial": torus_height,
        "torus-morse": torus_grid,
        "double-well": double_well,
        "fiber-well": fiber_well,
    }
    if name in meshes:
        k, s = meshes[name]()
        if k.kind == "simplicial":
            complex_json = {
                "type": "simplicial",
                "cells": [list(c) for c in k.cells[k.top_dim]],
                "fibered": k.fibered,
            }
        else:
            n = int(round(math.sqrt(k.n_vertices)))
            complex_json = {"type": "cubical", "shape": [n, n], "periodic": [True, True]}
        return {
            "name": name,
            "complex": complex_json,
            "values": list(s.values),
            "clamp": s.clamp,
        }
    if name == "sphere":
        k = sphere()
        return {
            "name": name,
            "complex": {
                "type": "simplicial",
                "cells": [list(c) for c in k.cells[2]],
                "fibered": False,
            },
            "values": [0.0] * k.n_vertices,
            "clamp": False,
        }
    if name == "cauchy-geometric":
        return {"name": name, "sequence": cauchy_geometric().to_json()}
    if name == "cauchy-rays":
        return {"name": name, "sequence": cauchy_rays().to_json()}
    raise ValueError(f"unknown demo {name!r}; choose from {', '.join(DEMO_NAMES)}")
