"""Cartan matrices over GF(p) with root parities.

A Cartan matrix here is a square matrix of residues together with a
parity flag per row: even rows carry diagonal 2, isotropic rows carry
diagonal 0 and an odd parity.  Two matrices are considered equivalent
when one maps onto the other by a simultaneous row/column permutation
combined with nonzero rescalings of isotropic rows; even rows are pinned
by their diagonal normalization and are never rescaled.

The module ships the registry of the seven inequivalent Cartan matrices
of the exceptional characteristic-5 superalgebra el(5;5), equivalence
search with explicit witnesses, a lexicographic canonical form, exact
inverses, and Dynkin-diagram export (DOT and plain text).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .fp import FpMatrix, inv_scalar, signed_lift

__all__ = [
    "EVEN",
    "ODD",
    "UnknownId",
    "UnsupportedDiagonal",
    "CartanSpec",
    "cartan_spec",
    "registry",
    "registry_ids",
    "permuted",
    "EquivalenceWitness",
    "apply_witness",
    "equivalent",
    "canonical_form",
    "canonical_key",
    "invert_mod_p",
    "DynkinGraph",
    "to_dynkin",
    "render_dot",
    "render_ascii",
    "load_cartan_file",
    "cartan_from_dict",
    "cartan_to_dict",
]

EVEN = 0
ODD = 1


class UnknownId(KeyError):
    """Registry lookup with an id outside 1..7."""


class UnsupportedDiagonal(ValueError):
    """Diagonal entry other than 0 or 2, or a parity that contradicts it."""


@dataclass(frozen=True)
class CartanSpec:
    """A Cartan matrix with its parity vector.

    Roots are numbered 1..n in user-facing interfaces; tuples stored here
    are positional (index 0 is root 1).  Parity entries are EVEN/ODD ints.
    """

    p: int
    n: int
    matrix: FpMatrix
    parity: tuple[int, ...]

    def __post_init__(self):
        if self.matrix.p != self.p:
            raise ValueError("matrix modulus differs from spec modulus")
        if self.matrix.rows != self.n or self.matrix.cols != self.n:
            raise ValueError("matrix is not n x n")
        if len(self.parity) != self.n or any(q not in (EVEN, ODD) for q in self.parity):
            raise ValueError("parity must be a vector of n even/odd flags")
        for i in range(self.n):
            d = self.matrix[i, i]
            if d not in (0, 2 % self.p):
                raise UnsupportedDiagonal(
                    f"diagonal entry A[{i + 1},{i + 1}] = {d} is not 0 or 2; "
                    "non-isotropic odd roots are not supported"
                )
            if d == 0 and self.parity[i] != ODD:
                raise UnsupportedDiagonal(
                    f"root {i + 1} has A[i,i] = 0 but even parity"
                )
            if d != 0 and self.parity[i] != EVEN:
                raise UnsupportedDiagonal(
                    f"root {i + 1} has A[i,i] = 2 but odd parity"
                )

    def is_isotropic(self, i: int) -> bool:
        """Whether root i (1-based) is isotropic."""
        return self.parity[i - 1] == ODD

    def isotropic_roots(self) -> tuple[int, ...]:
        """1-based indices of the isotropic roots."""
        return tuple(i + 1 for i in range(self.n) if self.parity[i] == ODD)


def cartan_spec(p: int, rows, parity=None) -> CartanSpec:
    """Build a CartanSpec, inferring parity from the diagonal if omitted."""
    m = FpMatrix(p, rows)
    n = m.rows
    if parity is None:
        parity = tuple(ODD if m[i, i] == 0 else EVEN for i in range(n))
    else:
        parity = tuple(parity)
    return CartanSpec(p=p, n=n, matrix=m, parity=parity)


# Registry entries are stored with the signs they are usually printed
# with; residues are normalized at construction.
_REGISTRY_ROWS: dict[int, tuple[tuple[int, ...], ...]] = {
    1: (
        (2, 0, -1, 0, 0),
        (0, 2, 0, 0, -1),
        (-1, 0, 0, 1, 1),
        (0, 0, 1, 0, -2),
        (0, -1, 1, -2, 0),
    ),
    2: (
        (0, 0, 1, 0, 0),
        (0, 2, 0, 0, -1),
        (1, 0, 0, -1, -1),
        (0, 0, -1, 2, 0),
        (0, -1, -1, 0, 2),
    ),
    3: (
        (2, 0, -1, 0, 0),
        (0, 2, 0, 0, -1),
        (-1, 0, 2, -1, 0),
        (0, 0, -1, 0, 2),
        (0, -2, 0, -1, 2),
    ),
    4: (
        (2, 0, -1, 0, 0),
        (0, 0, 0, 2, 1),
        (-1, 0, 2, 0, -1),
        (0, -1, 0, 2, -1),
        (0, 1, -1, 2, 0),
    ),
    5: (
        (0, 0, -1, 0, 0),
        (0, 2, 0, 0, -1),
        (-1, 0, 2, -1, -1),
        (0, 0, -1, 2, 0),
        (0, -1, -1, 0, 2),
    ),
    6: (
        (2, 0, -1, 0, 0),
        (0, 0, 0, -2, -1),
        (-1, 0, 2, 0, -1),
        (0, -2, 0, 0, 0),
        (0, -1, -1, 0, 2),
    ),
    7: (
        (2, 0, -1, 0, 0),
        (0, 2, 0, -1, -2),
        (-1, 0, 2, 0, -1),
        (0, 2, 0, 0, 0),
        (0, -1, -1, 0, 2),
    ),
}


def registry_ids() -> tuple[int, ...]:
    return tuple(sorted(_REGISTRY_ROWS))


def registry(matrix_id: int) -> CartanSpec:
    """The el(5;5) Cartan matrix with the given id (1..7), over GF(5)."""
    try:
        rows = _REGISTRY_ROWS[matrix_id]
    except (KeyError, TypeError):
        raise UnknownId(f"no registry matrix {matrix_id!r}; ids are 1..7") from None
    return cartan_spec(5, rows)


# -- equivalence ---------------------------------------------------------


@dataclass(frozen=True)
class EquivalenceWitness:
    """Index permutation plus isotropic row scalings mapping S1 onto S2.

    permutation is 0-based, new-to-old: row a of the image is row
    permutation[a] of the source, scaled by row_scalings[a].  Even rows
    always carry scaling 1.
    """

    permutation: tuple[int, ...]
    row_scalings: tuple[int, ...]


def permuted(spec: CartanSpec, perm) -> CartanSpec:
    """Relabel roots: new index a takes old index perm[a] (0-based)."""
    perm = tuple(perm)
    if sorted(perm) != list(range(spec.n)):
        raise ValueError("not a permutation of 0..n-1")
    a = spec.matrix.array[np.ix_(perm, perm)]
    parity = tuple(spec.parity[q] for q in perm)
    return CartanSpec(spec.p, spec.n, FpMatrix(spec.p, a), parity)


def apply_witness(witness: EquivalenceWitness, spec: CartanSpec) -> CartanSpec:
    base = permuted(spec, witness.permutation)
    rows = np.array(base.matrix.array)
    for a, lam in enumerate(witness.row_scalings):
        rows[a] = (rows[a] * lam) % spec.p
    return CartanSpec(spec.p, spec.n, FpMatrix(spec.p, rows), base.parity)


def _row_match_scaling(src: np.ndarray, dst: np.ndarray, p: int) -> int | None:
    """The unique t with t*src == dst, or None."""
    nz = np.nonzero(src)[0]
    if nz.size == 0:
        return 1 if not dst.any() else None
    t = (int(dst[nz[0]]) * inv_scalar(int(src[nz[0]]), p)) % p
    if t == 0:
        return None
    return t if ((src * t) % p == dst).all() else None


def equivalent(s1: CartanSpec, s2: CartanSpec) -> EquivalenceWitness | None:
    """Search for a witness mapping s1 onto s2; None if inequivalent.

    Permutations are scanned in lexicographic order, so the witness is
    deterministic.
    """
    if (s1.p, s1.n) != (s2.p, s2.n):
        return None
    p, n = s1.p, s1.n
    a2 = s2.matrix.array
    for perm in itertools.permutations(range(n)):
        if any(s1.parity[perm[a]] != s2.parity[a] for a in range(n)):
            continue
        m = s1.matrix.array[np.ix_(perm, perm)]
        lam = [1] * n
        ok = True
        for a in range(n):
            if s2.parity[a] == EVEN:
                if not (m[a] == a2[a]).all():
                    ok = False
                    break
            else:
                t = _row_match_scaling(m[a], a2[a], p)
                if t is None:
                    ok = False
                    break
                lam[a] = t
        if ok:
            return EquivalenceWitness(perm, tuple(lam))
    return None


def _min_row_scaling(row: np.ndarray, p: int) -> np.ndarray:
    best = None
    for t in range(1, p):
        cand = tuple((row * t) % p)
        if best is None or cand < best:
            best = cand
    return np.array(best, dtype=np.int64)


def canonical_form(spec: CartanSpec) -> CartanSpec:
    """Lexicographically minimal equivalent matrix (entries, then parity).

    Scans all index permutations; for each, every isotropic row is
    independently replaced by its minimal nonzero rescaling (rows occupy
    disjoint positions of the flattened entry sequence, so per-row
    minimization is globally minimal for a fixed permutation).
    """
    p, n = spec.p, spec.n
    best_key = None
    best = None
    for perm in itertools.permutations(range(n)):
        m = np.array(spec.matrix.array[np.ix_(perm, perm)])
        parity = tuple(spec.parity[q] for q in perm)
        for a in range(n):
            if parity[a] == ODD:
                m[a] = _min_row_scaling(m[a], p)
        key = (tuple(int(x) for x in m.ravel()), parity)
        if best_key is None or key < best_key:
            best_key = key
            best = (m, parity)
    m, parity = best
    return CartanSpec(p, n, FpMatrix(p, m), parity)


def canonical_key(spec: CartanSpec) -> bytes:
    """Hashable identity of the equivalence class."""
    c = canonical_form(spec)
    head = f"p={c.p};n={c.n};".encode()
    body = bytes(c.matrix.array.astype(np.uint8).ravel().tolist())
    return head + body + bytes(c.parity)


def invert_mod_p(spec: CartanSpec) -> FpMatrix:
    """Exact inverse of the Cartan matrix mod p."""
    return spec.matrix.invert()


# -- Dynkin diagrams -----------------------------------------------------


@dataclass(frozen=True)
class DynkinGraph:
    """Nodes are (index, kind) with 1-based indices; kind is "even" or
    "isotropic".  Edges are (i, j, a_ij, a_ji, style) with i < j and
    signed-lift entry values; style is "plain" or "dotted"."""

    p: int
    nodes: tuple[tuple[int, str], ...]
    edges: tuple[tuple[int, int, int, int, str], ...]


def to_dynkin(spec: CartanSpec) -> DynkinGraph:
    nodes = tuple(
        (i + 1, "isotropic" if spec.parity[i] == ODD else "even")
        for i in range(spec.n)
    )
    edges = []
    for i in range(spec.n):
        for j in range(i + 1, spec.n):
            aij, aji = spec.matrix[i, j], spec.matrix[j, i]
            if aij == 0 and aji == 0:
                continue
            style = "dotted" if aij == 1 and aji == 1 else "plain"
            edges.append(
                (
                    i + 1,
                    j + 1,
                    signed_lift(aij, spec.p),
                    signed_lift(aji, spec.p),
                    style,
                )
            )
    return DynkinGraph(spec.p, nodes, tuple(edges))


def _edge_label(aij: int, aji: int, style: str) -> str | None:
    if style == "dotted" and (aij, aji) == (1, 1):
        return None
    if (aij, aji) == (-1, -1):
        return None
    return f"({aij},{aji})"


def render_dot(graph: DynkinGraph) -> str:
    lines = ["graph cartan {", "  node [shape=circle];"]
    for idx, kind in graph.nodes:
        if kind == "isotropic":
            lines.append(
                f'  {idx} [label="{idx}", style=filled, fillcolor=lightgrey, '
                'xlabel="otimes"];'
            )
        else:
            lines.append(f'  {idx} [label="{idx}"];')
    for i, j, aij, aji, style in graph.edges:
        attrs = []
        if style == "dotted":
            attrs.append("style=dotted")
        label = _edge_label(aij, aji, style)
        if label is not None:
            attrs.append(f'label="{label}"')
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  {i} -- {j}{suffix};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_ascii(graph: DynkinGraph) -> str:
    """Plain-text diagram: one node line, then one line per edge.

    Even nodes print as o, isotropic nodes as (x); dotted edges use '..'
    and plain edges '--', with entry pairs shown when they are not the
    default (-1,-1).
    """
    node_bits = []
    for idx, kind in graph.nodes:
        node_bits.append(f"(x){idx}" if kind == "isotropic" else f"o{idx}")
    lines = ["nodes: " + "  ".join(node_bits)]
    for i, j, aij, aji, style in graph.edges:
        link = ".." if style == "dotted" else "--"
        label = _edge_label(aij, aji, style)
        tail = f"  {label}" if label else ""
        lines.append(f"  {i} {link} {j}{tail}")
    return "\n".join(lines) + "\n"


# -- JSON interchange ----------------------------------------------------

_PARITY_NAMES = {EVEN: "even", ODD: "odd"}
_PARITY_VALUES = {"even": EVEN, "odd": ODD}


def cartan_from_dict(data: dict, p_override: int | None = None) -> CartanSpec:
    try:
        p = int(data["p"]) if p_override is None else int(p_override)
        rows = data["matrix"]
        n = int(data.get("n", len(rows)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"bad Cartan matrix document: {exc}") from exc
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError("matrix is not n x n")
    parity = data.get("parity")
    if parity is not None:
        if len(parity) != n:
            raise ValueError("parity length differs from n")
        try:
            parity = tuple(_PARITY_VALUES[str(q)] for q in parity)
        except KeyError as exc:
            raise ValueError(f"parity entries must be even/odd, got {exc}") from None
    return cartan_spec(p, rows, parity)


def cartan_to_dict(spec: CartanSpec) -> dict:
    return {
        "p": spec.p,
        "n": spec.n,
        "matrix": spec.matrix.tolist(),
        "parity": [_PARITY_NAMES[q] for q in spec.parity],
    }


def load_cartan_file(path, p_override: int | None = None) -> CartanSpec:
    text = Path(path).read_text(encoding="utf-8")
    return cartan_from_dict(json.loads(text), p_override)
