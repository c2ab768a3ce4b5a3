"""Odd reflections of Cartan matrices and their equivalence-class orbit.

A reflection at an isotropic root i replaces the Chevalley triple at i
by (f_i, e_i, [f_i, e_i]) and, for every root j coupled to i (A_ij or
A_ji nonzero), by ([e_i, e_j], [f_i, f_j], [e'_j, f'_j]); uncoupled
roots keep their triples.  The reflected Cartan matrix is read off the
built algebra: entry B_jk is the eigenvalue of the new Cartan element
h'_j on the new raising vector e'_k.  Rows that end up even are rescaled
to diagonal 2; isotropic rows are left as computed (equivalence absorbs
the free scaling).  Parities of coupled roots flip, so reflections move
between the inequivalent Cartan matrices of one algebra; the orbit walk
below enumerates them all.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .cartan import (
    EVEN,
    CartanSpec,
    canonical_key,
    registry,
    registry_ids,
)
from .contragredient import AlgebraModel, build
from .fp import FpMatrix, inv_scalar

__all__ = [
    "NotIsotropic",
    "odd_reflect",
    "OrbitGraph",
    "orbit",
    "ReflectionTable",
    "reflection_table",
    "registry_numbered_table",
    "render_table_text",
    "render_orbit_dot",
]


class NotIsotropic(ValueError):
    """Reflection requested at a non-isotropic root."""


def odd_reflect(spec: CartanSpec, i: int, model: AlgebraModel | None = None) -> CartanSpec:
    """Reflect at isotropic root i (1-based); returns the new CartanSpec."""
    if not 1 <= i <= spec.n:
        raise NotIsotropic(f"root index {i} outside 1..{spec.n}")
    if not spec.is_isotropic(i):
        raise NotIsotropic(f"root {i} is not isotropic (A[{i},{i}] != 0)")
    if model is None:
        model = build(spec)
    p, n = spec.p, spec.n
    a = spec.matrix.array
    i0 = i - 1

    coupled = [
        j for j in range(n) if j != i0 and (a[i0, j] != 0 or a[j, i0] != 0)
    ]

    # new raising vectors and their integer weights
    new_weight: list[tuple[int, ...]] = []
    e_new: list = []
    f_new: list = []
    for j in range(n):
        if j == i0:
            new_weight.append(tuple(-1 if k == i0 else 0 for k in range(n)))
            e_new.append(model.f(i))
            f_new.append(model.e(i))
        elif j in coupled:
            new_weight.append(
                tuple((1 if k == i0 else 0) + (1 if k == j else 0) for k in range(n))
            )
            ej = model.bracket(model.e(i), model.e(j + 1))
            fj = model.bracket(model.f(i), model.f(j + 1))
            if ej.is_zero or fj.is_zero:
                raise RuntimeError(
                    f"degenerate reflection: [e_{i}, e_{j + 1}] vanished"
                )
            e_new.append(ej)
            f_new.append(fj)
        else:
            new_weight.append(tuple(1 if k == j else 0 for k in range(n)))
            e_new.append(model.e(j + 1))
            f_new.append(model.f(j + 1))

    gammas = []
    for j in range(n):
        hj = model.bracket(e_new[j], f_new[j])
        if hj.is_zero:
            raise RuntimeError(
                f"degenerate reflection: [e'_{j + 1}, f'_{j + 1}] vanished"
            )
        if any(hj.weight):
            raise RuntimeError("reflected coroot is not a Cartan element")
        gammas.append(np.array(hj.coords, dtype=np.int64))

    parity = tuple(
        (spec.parity[j] + 1) % 2 if j in coupled else spec.parity[j]
        for j in range(n)
    )

    b = np.zeros((n, n), dtype=np.int64)
    for j in range(n):
        for k in range(n):
            wk = np.array(new_weight[k], dtype=np.int64)
            b[j, k] = int(np.dot(gammas[j], a @ wk)) % p
    for j in range(n):
        if parity[j] == EVEN:
            d = int(b[j, j])
            if d == 0:
                raise RuntimeError(
                    f"reflected row {j + 1} is even but has zero diagonal"
                )
            b[j] = (b[j] * (2 * inv_scalar(d, p))) % p
    return CartanSpec(p, n, FpMatrix(p, b), parity)


@dataclass(frozen=True)
class OrbitGraph:
    """Reflection orbit: nodes are equivalence classes (their first
    discovered representatives), edges (from, root, to) with 0-based node
    indices and 1-based root indices relative to the representative."""

    nodes: tuple[CartanSpec, ...]
    keys: tuple[bytes, ...]
    edges: tuple[tuple[int, int, int], ...]


def orbit(spec: CartanSpec) -> OrbitGraph:
    """Breadth-first walk of odd reflections up to equivalence."""
    seed_key = canonical_key(spec)
    nodes = [spec]
    keys = [seed_key]
    index = {seed_key: 0}
    edges = []
    queue = deque([0])
    while queue:
        at = queue.popleft()
        rep = nodes[at]
        model = build(rep)
        for i in rep.isotropic_roots():
            refl = odd_reflect(rep, i, model)
            key = canonical_key(refl)
            to = index.get(key)
            if to is None:
                to = len(nodes)
                nodes.append(refl)
                keys.append(key)
                index[key] = to
                queue.append(to)
            edges.append((at, i, to))
    return OrbitGraph(tuple(nodes), tuple(keys), tuple(edges))


@dataclass(frozen=True)
class ReflectionTable:
    """Rows follow the given representatives; cells hold the 1-based row
    number of the class reached by reflecting at that column's root, or
    None where the root is not isotropic."""

    representatives: tuple[CartanSpec, ...]
    cells: tuple[tuple[int | None, ...], ...]


def reflection_table(
    graph: OrbitGraph, representatives=None
) -> ReflectionTable:
    """Tabulate reflections of one representative per orbit class.

    representatives defaults to the orbit's own discovery order; pass a
    full list (for instance the registry matrices) to fix both the row
    numbering and the column meaning of each row.
    """
    if representatives is None:
        reps = list(graph.nodes)
    else:
        reps = list(representatives)
    if len(reps) != len(graph.nodes):
        raise ValueError(
            f"{len(reps)} representatives for {len(graph.nodes)} classes"
        )
    orbit_keys = set(graph.keys)
    rep_keys = []
    for rep in reps:
        key = canonical_key(rep)
        if key not in orbit_keys:
            raise ValueError("representative is not in the orbit")
        rep_keys.append(key)
    if len(set(rep_keys)) != len(graph.nodes):
        raise ValueError("representatives do not cover every class once")
    class_of = {key: r + 1 for r, key in enumerate(rep_keys)}

    rows = []
    for rep in reps:
        model = build(rep)
        row: list[int | None] = []
        for i in range(1, rep.n + 1):
            if not rep.is_isotropic(i):
                row.append(None)
                continue
            key = canonical_key(odd_reflect(rep, i, model))
            if key not in class_of:
                raise RuntimeError("reflection left the computed orbit")
            row.append(class_of[key])
        rows.append(tuple(row))
    return ReflectionTable(tuple(reps), tuple(rows))


def registry_numbered_table(graph: OrbitGraph) -> ReflectionTable:
    """Reflection table with rows matched to the registry numbering."""
    reps = [registry(k) for k in registry_ids()]
    if len(reps) != len(graph.nodes):
        raise ValueError(
            f"orbit has {len(graph.nodes)} classes, registry has {len(reps)}"
        )
    return reflection_table(graph, reps)


def render_table_text(table: ReflectionTable) -> str:
    n = table.representatives[0].n
    header = "      " + "".join(f"r{i:<3}" for i in range(1, n + 1))
    lines = [header]
    for r, row in enumerate(table.cells):
        cells = "".join(
            f"{'-' if v is None else v:<4}" for v in row
        )
        lines.append(f"{r + 1:>3})  {cells}")
    return "\n".join(lines) + "\n"


def render_orbit_dot(graph: OrbitGraph) -> str:
    lines = ["graph orbit {", "  node [shape=box];"]
    for k in range(len(graph.nodes)):
        lines.append(f'  c{k + 1} [label="class {k + 1}"];')
    seen = set()
    for frm, root, to in graph.edges:
        # one line per undirected class pair, first discovery wins
        tag = (min(frm, to), max(frm, to))
        if tag in seen:
            continue
        seen.add(tag)
        lines.append(f'  c{frm + 1} -- c{to + 1} [label="r{root}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
