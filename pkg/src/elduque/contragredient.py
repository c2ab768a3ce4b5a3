"""Contragredient Lie superalgebra built from a Cartan matrix over GF(p).

Chevalley generators e_i, f_i, h_i satisfy

    [h_i, e_j] = A_ij e_j,   [h_i, f_j] = -A_ij f_j,   [e_i, f_j] = d_ij h_i,

with the super bracket conventions [x,y] = -(-1)^(p(x)p(y)) [y,x] and
[x,[y,z]] = [[x,y],z] + (-1)^(p(x)p(y)) [y,[x,z]].

The positive part is constructed degree by degree.  At height d the
component of weight c is spanned by candidates [e_i, b] over the stored
basis elements b one height below; a combination is zero in the algebra
exactly when every lowering [f_m, -] kills it, which is decided by exact
rank computations over GF(p).  That test removes the maximal graded
ideal meeting the Cartan subalgebra trivially, so for an invertible A
the outcome is the algebra with no radical.  Lowerings are computed by
the recursion

    [f_m, [e_i, y]] = [[f_m, e_i], y] + (-1)^(p_m p_i) [e_i, [f_m, y]],

where [f_i, e_i] = -(-1)^(p_i) h_i and h acts on a weight-c vector
through the eigenvalue column (A c) mod p.  The negative part mirrors
the positive one through the automorphism e_i -> -f_i,
f_i -> -(-1)^(p_i) e_i, h -> -h, and general brackets between mixed-sign
elements are evaluated by structural recursion on basis words.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cartan import EVEN, ODD, CartanSpec
from .expr import (
    Bracket,
    Generator,
    IndexOutOfRange,
    MixedWeight,
    Scaled,
    Sum,
    multidegree,
)

__all__ = [
    "SingularCartanMatrix",
    "NonTerminated",
    "NoUniqueMaximum",
    "MixedWeight",
    "IndexOutOfRange",
    "Element",
    "RootDatum",
    "Superdimension",
    "AlgebraModel",
    "build",
    "weight_of",
    "evaluate_bracket",
]

DEFAULT_MAX_HEIGHT = 64


class SingularCartanMatrix(ValueError):
    """Cartan matrix is not invertible mod p.

    The degree-by-degree construction itself is defined for any matrix
    (the rank-1 zero matrix terminates and is covered by tests), so
    build() never raises this; it exists for callers that must insist
    on an invertible input before relying on radical-freeness.
    """


class NonTerminated(RuntimeError):
    """No empty height level was reached below the height cap."""

    def __init__(self, max_height: int, roots_so_far: int):
        super().__init__(
            f"construction still alive at height {max_height} "
            f"({roots_so_far} positive roots so far); raise max_height "
            "or reject the input"
        )
        self.max_height = max_height
        self.roots_so_far = roots_so_far


class NoUniqueMaximum(ValueError):
    """Several positive roots share the maximal height."""


@dataclass(frozen=True)
class Element:
    """Weight-homogeneous element.

    weight is an integer vector (entries of one sign): positive weights
    index components of the positive part, negative weights the mirrored
    part, the zero weight the Cartan subalgebra (coords in h_1..h_n).
    Empty coords encode the zero element of that weight.
    """

    weight: tuple[int, ...]
    coords: tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        return not self.coords


@dataclass(frozen=True)
class RootDatum:
    coeffs: tuple[int, ...]
    height: int
    multiplicity: int
    parity: int
    weight_mod_p: tuple[int, ...]


@dataclass(frozen=True)
class Superdimension:
    even: int
    odd: int

    def __str__(self) -> str:
        return f"({self.even}|{self.odd})"

    def as_tuple(self) -> tuple[int, int]:
        return (self.even, self.odd)


@dataclass
class _Component:
    weight: tuple[int, ...]
    dim: int
    words: list[tuple[int, int]]  # (generator 0-based, parent position)
    raise_in: dict[int, np.ndarray]  # i -> (dim, dim_parent)
    lower: dict[int, np.ndarray]  # m -> (dim_target, dim)


def _unit(n: int, i: int) -> tuple[int, ...]:
    return tuple(1 if k == i else 0 for k in range(n))


def _wsum(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def _wsub(a: tuple[int, ...], i: int) -> tuple[int, ...]:
    return tuple(x - (1 if k == i else 0) for k, x in enumerate(a))


def weight_of(coeffs, spec: CartanSpec) -> tuple[int, ...]:
    """Eigenvalue column (A c) mod p of a root coefficient vector."""
    c = np.asarray(tuple(coeffs), dtype=np.int64)
    if c.shape != (spec.n,):
        raise ValueError("coefficient vector length differs from n")
    return tuple(int(x) for x in (spec.matrix.array @ c) % spec.p)


class AlgebraModel:
    """Finished contragredient algebra: weight components, their basis
    words, raising/lowering structure constants, and bracket evaluation.
    Instances are produced by build() and must be treated as immutable.
    """

    def __init__(self, spec: CartanSpec, comps: dict, top_height: int, max_height: int):
        self.spec = spec
        self._comps = comps
        self.top_height = top_height
        self.max_height = max_height
        self._A = spec.matrix.array
        self._p = spec.p
        self._n = spec.n
        self._brackets: dict = {}  # structure constants, keyed by unit pair

    # -- elements -------------------------------------------------------

    def _mk(self, weight: tuple[int, ...], arr) -> Element:
        if arr is None:
            return Element(weight, ())
        a = np.asarray(arr, dtype=np.int64) % self._p
        if a.size == 0 or not a.any():
            return Element(weight, ())
        return Element(weight, tuple(int(x) for x in a))

    def zero(self, weight) -> Element:
        return Element(tuple(weight), ())

    def e(self, i: int) -> Element:
        """Raising generator e_i, 1-based."""
        self._check_index(i)
        return Element(_unit(self._n, i - 1), (1,))

    def f(self, i: int) -> Element:
        """Lowering generator f_i, 1-based."""
        self._check_index(i)
        w = tuple(-x for x in _unit(self._n, i - 1))
        return Element(w, ((-1) % self._p,))  # f_i is -1 times the mirror basis word

    def h(self, gamma) -> Element:
        """Cartan element: h(i) is the generator h_i (1-based), h(coords)
        the combination with the given coordinates in h_1..h_n."""
        if isinstance(gamma, (int, np.integer)):
            self._check_index(int(gamma))
            gamma = _unit(self._n, int(gamma) - 1)
        g = tuple(int(x) % self._p for x in gamma)
        if len(g) != self._n:
            raise ValueError("Cartan coordinate length differs from n")
        return self._mk(tuple(0 for _ in range(self._n)), g)

    def _check_index(self, i: int) -> None:
        if not 1 <= i <= self._n:
            raise IndexOutOfRange(f"generator index {i} outside 1..{self._n}")

    def parity_of(self, x: Element) -> int:
        par = self.spec.parity
        return sum(abs(w) * q for w, q in zip(x.weight, par)) % 2

    def component_dimension(self, weight) -> int:
        comp = self._comps.get(tuple(weight))
        return comp.dim if comp else 0

    def component_words(self, weight) -> tuple[tuple[int, int], ...]:
        comp = self._comps.get(tuple(weight))
        return tuple(comp.words) if comp else ()

    # -- scalar helpers ---------------------------------------------------

    def scale(self, x: Element, s: int) -> Element:
        if x.is_zero:
            return x
        s %= self._p
        if s == 0:
            return Element(x.weight, ())
        return self._mk(x.weight, np.array(x.coords, dtype=np.int64) * s)

    def add(self, x: Element, y: Element) -> Element:
        if x.weight != y.weight:
            raise ValueError("cannot add elements of different weights")
        if x.is_zero:
            return y
        if y.is_zero:
            return x
        return self._mk(
            x.weight,
            np.array(x.coords, dtype=np.int64) + np.array(y.coords, dtype=np.int64),
        )

    @staticmethod
    def _sign_kind(w: tuple[int, ...]) -> str:
        has_pos = any(x > 0 for x in w)
        has_neg = any(x < 0 for x in w)
        if has_pos and has_neg:
            return "mixed"
        if has_pos:
            return "pos"
        if has_neg:
            return "neg"
        return "cartan"

    # -- generator actions ------------------------------------------------

    def act_e(self, i: int, x: Element) -> Element:
        """Bracket [e_i, x]."""
        self._check_index(i)
        i0 = i - 1
        p = self._p
        new_w = _wsum(x.weight, _unit(self._n, i0))
        if x.is_zero:
            return self.zero(new_w)
        kind = self._sign_kind(x.weight)
        if kind == "mixed":
            return self.zero(new_w)
        if kind == "cartan":
            s = -int(np.dot(x.coords, self._A[:, i0])) % p
            return self._mk(_unit(self._n, i0), (s,))
        if kind == "pos":
            tgt = self._comps.get(new_w)
            if tgt is None:
                return self.zero(new_w)
            r = tgt.raise_in.get(i0)
            if r is None:
                return self.zero(new_w)
            return self._mk(new_w, r @ np.array(x.coords, dtype=np.int64))
        # negative side, mirrored through the Chevalley automorphism
        u = tuple(-v for v in x.weight)
        if sum(u) == 1:
            j0 = u.index(1)
            if j0 != i0:
                return self.zero(new_w)
            gamma = np.zeros(self._n, dtype=np.int64)
            gamma[i0] = -x.coords[0]
            return self._mk(tuple(0 for _ in range(self._n)), gamma)
        comp = self._comps.get(u)
        if comp is None:
            return self.zero(new_w)
        low = comp.lower.get(i0)
        if low is None:
            return self.zero(new_w)
        sign = -1 if self.spec.parity[i0] == EVEN else 1  # -(-1)^(p_i)
        return self._mk(new_w, sign * (low @ np.array(x.coords, dtype=np.int64)))

    def act_f(self, i: int, x: Element) -> Element:
        """Bracket [f_i, x]."""
        self._check_index(i)
        i0 = i - 1
        p = self._p
        new_w = _wsub(x.weight, i0)
        if x.is_zero:
            return self.zero(new_w)
        kind = self._sign_kind(x.weight)
        if kind == "mixed":
            return self.zero(new_w)
        if kind == "cartan":
            s = int(np.dot(x.coords, self._A[:, i0])) % p
            return self._mk(tuple(-v for v in _unit(self._n, i0)), ((-s) % p,))
        if kind == "pos":
            if sum(x.weight) == 1:
                j0 = x.weight.index(1)
                if j0 != i0:
                    return self.zero(new_w)
                sign = -1 if self.spec.parity[i0] == EVEN else 1  # -(-1)^(p_i)
                gamma = np.zeros(self._n, dtype=np.int64)
                gamma[i0] = sign * x.coords[0]
                return self._mk(tuple(0 for _ in range(self._n)), gamma)
            comp = self._comps.get(x.weight)
            if comp is None:
                return self.zero(new_w)
            low = comp.lower.get(i0)
            if low is None:
                return self.zero(new_w)
            return self._mk(new_w, low @ np.array(x.coords, dtype=np.int64))
        # negative side
        u = tuple(-v for v in x.weight)
        tgt = self._comps.get(_wsum(u, _unit(self._n, i0)))
        if tgt is None:
            return self.zero(new_w)
        r = tgt.raise_in.get(i0)
        if r is None:
            return self.zero(new_w)
        return self._mk(new_w, -(r @ np.array(x.coords, dtype=np.int64)))

    def act_h(self, gamma, x: Element) -> Element:
        """Bracket [gamma . h, x]: scaling by the weight eigenvalue."""
        g = np.asarray(tuple(gamma), dtype=np.int64)
        w = np.asarray(x.weight, dtype=np.int64)
        s = int(np.dot(g, self._A @ w)) % self._p
        return self.scale(x, s)

    # -- general bracket --------------------------------------------------

    def bracket(self, x: Element, y: Element) -> Element:
        """Super bracket [x, y] of homogeneous elements."""
        out_w = _wsum(x.weight, y.weight)
        if x.is_zero or y.is_zero:
            return self.zero(out_w)
        dx, dy = len(x.coords), len(y.coords)
        acc = self.zero(out_w)
        for s, a in enumerate(x.coords):
            if a == 0:
                continue
            for t, b in enumerate(y.coords):
                if b == 0:
                    continue
                core = self._unit_bracket(x.weight, s, dx, y.weight, t, dy)
                acc = self.add(acc, self.scale(core, a * b))
        return acc

    def _unit_bracket(self, wx, s, dx, wy, t, dy) -> Element:
        key = (wx, s, wy, t)
        hit = self._brackets.get(key)
        if hit is None:
            ex = Element(wx, tuple(1 if u == s else 0 for u in range(dx)))
            ey = Element(wy, tuple(1 if u == t else 0 for u in range(dy)))
            hit = self._bracket_impl(ex, ey)
            self._brackets[key] = hit
        return hit

    def _bracket_impl(self, x: Element, y: Element) -> Element:
        out_w = _wsum(x.weight, y.weight)
        kind = self._sign_kind(y.weight)
        if kind == "mixed":
            return self.zero(out_w)
        p = self._p
        px = self.parity_of(x)
        if kind == "cartan":
            return self.scale(self.act_h(y.coords, x), -1)
        if kind == "pos":
            if sum(y.weight) == 1:
                j0 = y.weight.index(1)
                sgn = -1 if (px * self.spec.parity[j0]) % 2 == 0 else 1
                # [x, a e_j] = a * (-(-1)^(p(x) p_j)) [e_j, x]
                return self.scale(self.act_e(j0 + 1, x), y.coords[0] * sgn)
            comp = self._comps[y.weight]
            acc = self.zero(out_w)
            for t, a in enumerate(y.coords):
                if a == 0:
                    continue
                i0, pt = comp.words[t]
                wp = _wsub(y.weight, i0)
                dim_p = self._comps[wp].dim
                parent = Element(wp, tuple(1 if s == pt else 0 for s in range(dim_p)))
                sgn = 1 if (px * self.spec.parity[i0]) % 2 == 0 else -1
                z1 = self.scale(self.act_e(i0 + 1, x), -sgn)  # [x, e_i]
                term = self.add(
                    self.bracket(z1, parent),
                    self.scale(self.act_e(i0 + 1, self.bracket(x, parent)), sgn),
                )
                acc = self.add(acc, self.scale(term, a))
            return acc
        # y on the negative side
        u = tuple(-v for v in y.weight)
        if sum(u) == 1:
            j0 = u.index(1)
            sgn = -1 if (px * self.spec.parity[j0]) % 2 == 0 else 1
            # y = a N_j = (-a) f_j ; [x, f_j] = (-(-1)^(p(x)p_j)) [f_j, x]
            return self.scale(self.act_f(j0 + 1, x), (-y.coords[0]) * sgn)
        comp = self._comps[u]
        acc = self.zero(out_w)
        for t, a in enumerate(y.coords):
            if a == 0:
                continue
            i0, pt = comp.words[t]
            up = _wsub(u, i0)
            dim_p = self._comps[up].dim
            parent = Element(
                tuple(-v for v in up),
                tuple(1 if s == pt else 0 for s in range(dim_p)),
            )
            sgn = 1 if (px * self.spec.parity[i0]) % 2 == 0 else -1
            z1 = self.scale(self.act_f(i0 + 1, x), -sgn)  # [x, f_i]
            term = self.add(
                self.bracket(z1, parent),
                self.scale(self.act_f(i0 + 1, self.bracket(x, parent)), sgn),
            )
            # N_b = -[f_i, N_parent]
            acc = self.add(acc, self.scale(term, -a))
        return acc

    # -- roots ------------------------------------------------------------

    def positive_roots(self) -> list[RootDatum]:
        """All positive roots, sorted by height then lexicographically."""
        out = []
        par = self.spec.parity
        for w in sorted(self._comps, key=lambda t: (sum(t), t)):
            comp = self._comps[w]
            out.append(
                RootDatum(
                    coeffs=w,
                    height=sum(w),
                    multiplicity=comp.dim,
                    parity=sum(c * q for c, q in zip(w, par)) % 2,
                    weight_mod_p=weight_of(w, self.spec),
                )
            )
        return out

    def superdimension(self) -> Superdimension:
        even = self._n
        odd = 0
        for r in self.positive_roots():
            if r.parity == EVEN:
                even += 2 * r.multiplicity
            else:
                odd += 2 * r.multiplicity
        return Superdimension(even, odd)

    def maximal_root(self) -> RootDatum:
        roots = self.positive_roots()
        top = max(r.height for r in roots)
        at_top = [r for r in roots if r.height == top]
        if len(at_top) != 1:
            raise NoUniqueMaximum(
                f"{len(at_top)} roots share the maximal height {top}"
            )
        return at_top[0]

    # -- export -----------------------------------------------------------

    def to_json_dict(self) -> dict:
        from .cartan import cartan_to_dict

        sdim = self.superdimension()
        roots = self.positive_roots()

        def root_dict(r: RootDatum) -> dict:
            return {
                "coeffs": list(r.coeffs),
                "height": r.height,
                "multiplicity": r.multiplicity,
                "parity": "even" if r.parity == EVEN else "odd",
                "weight_mod_p": list(r.weight_mod_p),
            }

        try:
            maximal = root_dict(self.maximal_root())
        except NoUniqueMaximum:
            maximal = None
        return {
            "cartan": cartan_to_dict(self.spec),
            "superdimension": {"even": sdim.even, "odd": sdim.odd},
            "root_count": len(roots),
            "roots": [root_dict(r) for r in roots],
            "maximal_root": maximal,
        }


def _select_row_basis(rows: np.ndarray, p: int) -> list[int]:
    """Indices of a greedy row basis (first independent rows win)."""
    selected: list[int] = []
    reduced: list[tuple[int, np.ndarray]] = []
    for k in range(rows.shape[0]):
        v = rows[k].copy() % p
        for pc, rr in reduced:
            if v[pc]:
                v = (v - v[pc] * rr) % p
        nz = np.nonzero(v)[0]
        if nz.size:
            pc = int(nz[0])
            v = (v * pow(int(v[pc]), -1, p)) % p
            reduced.append((pc, v))
            selected.append(k)
    return selected


def build(spec: CartanSpec, max_height: int = DEFAULT_MAX_HEIGHT) -> AlgebraModel:
    """Construct the algebra; raises SingularCartanMatrix or NonTerminated."""
    return _build_cached(spec, int(max_height))


@lru_cache(maxsize=None)
def _build_cached(spec: CartanSpec, max_height: int) -> AlgebraModel:
    p, n = spec.p, spec.n
    a = spec.matrix.array
    par = spec.parity
    if max_height < 1:
        raise ValueError("max_height must be at least 1")

    comps: dict[tuple[int, ...], _Component] = {}
    for i in range(n):
        w = _unit(n, i)
        comps[w] = _Component(weight=w, dim=1, words=[(i, -1)], raise_in={}, lower={})
    prev = [_unit(n, i) for i in range(n)]

    for d in range(2, max_height + 1):
        level: list[tuple[int, ...]] = []
        seen = set()
        for cw in prev:
            for i in range(n):
                c = _wsum(cw, _unit(n, i))
                if c not in seen:
                    seen.add(c)
                    level.append(c)
        level.sort()
        built_any = False
        for c in level:
            if _build_component(comps, a, par, p, n, c):
                built_any = True
        if not built_any:
            return AlgebraModel(spec, comps, top_height=d - 1, max_height=max_height)
        prev = [w for w in comps if sum(w) == d]
    raise NonTerminated(max_height, len(comps))


def _build_component(comps, a, par, p, n, c) -> bool:
    """Try to build the weight-c component; returns True if nonzero."""
    candidates: list[tuple[int, int]] = []
    for i0 in range(n):
        if c[i0] < 1:
            continue
        parent = comps.get(_wsub(c, i0))
        if parent is None:
            continue
        candidates.extend((i0, t) for t in range(parent.dim))
    if not candidates:
        return False

    targets = [
        m
        for m in range(n)
        if c[m] >= 1 and _wsub(c, m) in comps
    ]
    blocks: dict[int, np.ndarray] = {
        m: np.zeros((len(candidates), comps[_wsub(c, m)].dim), dtype=np.int64)
        for m in targets
    }
    cp_eig = {}
    for k, (i0, t) in enumerate(candidates):
        cp = _wsub(c, i0)
        if cp not in cp_eig:
            cp_eig[cp] = (a @ np.asarray(cp, dtype=np.int64)) % p
        for m in targets:
            row = blocks[m][k]
            # [[f_m, e_i], b]: nonzero only for m == i
            if m == i0:
                scal = (1 if par[i0] == ODD else -1) * int(cp_eig[cp][i0])
                row[t] = (row[t] + scal) % p
            # (-1)^(p_m p_i) [e_i, [f_m, b]]
            sign2 = -1 if (par[m] == ODD and par[i0] == ODD) else 1
            if sum(cp) == 1:
                j0 = cp.index(1)
                if m == j0:
                    base = a[j0, i0] if par[j0] == EVEN else -a[j0, i0]
                    row[0] = (row[0] + sign2 * int(base)) % p
            else:
                parent = comps[cp]
                low = parent.lower.get(m)
                if low is None:
                    continue
                tgt = comps.get(_wsub(c, m))
                if tgt is None:
                    continue
                r = tgt.raise_in.get(i0)
                if r is None:
                    continue
                w = low[:, t]
                row += sign2 * (r @ w)
                row %= p

    total = np.concatenate([blocks[m] for m in targets], axis=1) if targets else np.zeros(
        (len(candidates), 0), dtype=np.int64
    )
    selected = _select_row_basis(total, p)
    if not selected:
        return False
    dim = len(selected)

    from .fp import FpMatrix

    basis_rows = FpMatrix(p, total[selected].T)  # columns are basis rows
    expansions = np.zeros((dim, len(candidates)), dtype=np.int64)
    for k in range(len(candidates)):
        x = basis_rows.solve(total[k])
        expansions[:, k] = x

    comp = _Component(
        weight=c,
        dim=dim,
        words=[candidates[k] for k in selected],
        raise_in={},
        lower={},
    )
    for i0 in sorted({i for i, _ in candidates}):
        dim_parent = comps[_wsub(c, i0)].dim
        mat = np.zeros((dim, dim_parent), dtype=np.int64)
        for k, (ci, t) in enumerate(candidates):
            if ci == i0:
                mat[:, t] = expansions[:, k]
        comp.raise_in[i0] = mat
    for m in targets:
        comp.lower[m] = blocks[m][selected].T % p
    comps[c] = comp
    return True


def evaluate_bracket(model: AlgebraModel, expr) -> Element:
    """Evaluate a bracket expression in the positive generators.

    Raises MixedWeight for inhomogeneous sums and IndexOutOfRange for
    generator indices outside 1..n.
    """
    multidegree(expr, model.spec.n)  # homogeneity and index check

    def ev(node) -> Element:
        if isinstance(node, Generator):
            return model.e(node.index)
        if isinstance(node, Bracket):
            return model.bracket(ev(node.left), ev(node.right))
        if isinstance(node, Scaled):
            return model.scale(ev(node.node), node.coeff)
        if isinstance(node, Sum):
            acc = None
            for t in node.terms:
                v = ev(t)
                acc = v if acc is None else model.add(acc, v)
            return acc
        raise TypeError(f"unexpected node {node!r}")

    return ev(expr)
