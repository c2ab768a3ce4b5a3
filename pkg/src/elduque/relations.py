"""Relation sets: generation, verification, and discovery.

Three sources of relations in the Chevalley raising generators x_i:

* serre_relations builds the standard presentation candidates from the
  Cartan matrix alone: ad(x_i)^(1+m)(x_j) with m the residue lift of
  -A_ij for even rows, and [x_i, x_i] plus the A_ij = 0 commutators for
  isotropic rows.
* paper_relations returns the bundled corpus for the registry matrices,
  coefficients transcribed verbatim and reduced mod p only when
  evaluated.
* discover searches degree by degree: the free Lie superalgebra on
  x_1..x_n (super Lyndon basis, embedded in the tensor algebra) maps
  onto the model's positive part; kernel vectors not explained by the
  ideal of lower-height relations are reported as new.

verify evaluates any relation set inside a built model and reports the
residual of each relation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cartan import ODD, CartanSpec, UnknownId
from .contragredient import DEFAULT_MAX_HEIGHT, build, evaluate_bracket
from .expr import (
    Bracket,
    BracketExpr,
    Generator,
    IndexOutOfRange,
    MixedWeight,
    Scaled,
    Sum,
    multidegree,
    parse,
)
from .fp import FpMatrix, signed_lift

__all__ = [
    "RelationSet",
    "VerificationRecord",
    "VerificationReport",
    "DiscoveryRecord",
    "DiscoveryReport",
    "HeightLimitExceeded",
    "DISCOVERY_HEIGHT_LIMIT",
    "serre_relations",
    "paper_relations",
    "corpus_ids",
    "verify",
    "discover",
    "discovery_report",
    "expr_to_tensor",
    "relations_from_text",
    "load_relation_file",
    "relation_source",
]

DISCOVERY_HEIGHT_LIMIT = 8


class HeightLimitExceeded(ValueError):
    """Discovery height above the supported limit."""

    def __init__(self, requested: int, limit: int = DISCOVERY_HEIGHT_LIMIT):
        super().__init__(
            f"discovery height {requested} exceeds the limit {limit}"
        )
        self.requested = requested
        self.limit = limit


@dataclass(frozen=True)
class RelationSet:
    """Labeled bracket expressions, all sharing one provenance tag."""

    relations: tuple[tuple[str, BracketExpr], ...]
    provenance: str

    def __len__(self) -> int:
        return len(self.relations)

    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.relations)

    def exprs(self) -> tuple[BracketExpr, ...]:
        return tuple(expr for _, expr in self.relations)


@dataclass(frozen=True)
class VerificationRecord:
    label: str
    weight: tuple[int, ...] | None
    height: int | None
    zero: bool
    residual: tuple[int, ...] | None
    error: str | None = None


@dataclass(frozen=True)
class VerificationReport:
    """Per-relation evaluation results, in input order."""

    records: tuple[VerificationRecord, ...]
    provenance: str

    @property
    def all_zero(self) -> bool:
        return all(r.zero for r in self.records)

    def to_json_list(self) -> list:
        out = []
        for r in self.records:
            item: dict = {"label": r.label, "zero": r.zero}
            if r.weight is not None:
                item["weight"] = list(r.weight)
            if r.residual is not None:
                item["residual"] = list(r.residual)
            if r.error is not None:
                item["error"] = r.error
            out.append(item)
        return out


# -- Serre-type relations --------------------------------------------------


def serre_relations(spec: CartanSpec) -> RelationSet:
    """Presentation candidates read off the Cartan matrix.

    Even row i contributes ad(x_i)^(1+m)(x_j) for every j != i, where m
    is the residue representative of -A_ij in 0..p-1.  Isotropic row i
    contributes [x_i, x_i] and the commutators [x_i, x_j] for the j with
    A_ij = 0.  CartanSpec guarantees diagonal entries in {0, 2}, so no
    further precondition applies.
    """
    a = spec.matrix.array
    rels: list[tuple[str, BracketExpr]] = []
    for i in range(1, spec.n + 1):
        if spec.is_isotropic(i):
            rels.append((f"[x{i},x{i}]", Bracket(Generator(i), Generator(i))))
            for j in range(1, spec.n + 1):
                if j != i and a[i - 1, j - 1] == 0:
                    rels.append(
                        (f"[x{i},x{j}]", Bracket(Generator(i), Generator(j)))
                    )
        else:
            for j in range(1, spec.n + 1):
                if j == i:
                    continue
                m = int((-a[i - 1, j - 1]) % spec.p)
                expr: BracketExpr = Generator(j)
                for _ in range(1 + m):
                    expr = Bracket(Generator(i), expr)
                rels.append((f"ad{1 + m}(x{i})x{j}", expr))
    return RelationSet(tuple(rels), "serre")


# -- bundled corpus ----------------------------------------------------------

# Non-obvious defining relations accompanying each registry matrix, with
# coefficients kept verbatim; the ad-power and isotropic relations from
# serre_relations are implied and not repeated here.
_CORPUS: dict[int, tuple[str, ...]] = {
    1: (
        "[x4,[x3,x5]] - [x5,[x3,x4]]",
        "[[x1,x3],[x3,x4]]",
        "[[x1,x3],[x3,x5]]",
        "[[x2,x5],[x3,x5]]",
        "[[x4,x5],[[x2,x5],[x4,x5]]]",
    ),
    2: (
        "[[x1,x3],[x3,x4]]",
        "[[x1,x3],[x3,x5]]",
        "[[[x3,x4],[x3,x5]],[[x3,[x2,x5]],[[x3,x4],[x3,x5]]]]",
    ),
    3: (
        "[[x3,x4],[[x2,x5],[x4,x5]]] - 4[[x4,[x2,x5]],[x5,[x3,x4]]]",
        "[[x4,[x1,x3]],[[x3,x4],[x4,x5]]]",
    ),
    4: (
        "[x4,[x2,x5]] - 3[x5,[x2,x4]]",
        "[[x2,x5],[x3,x5]]",
        "[[x5,[x1,x3]],[[x3,x5],[x4,x5]]]",
    ),
    5: (
        "[[[x4,[x1,x3]],[x5,[x1,x3]]],"
        "[[[x1,x3],[x2,x5]],[[x4,[x1,x3]],[x5,[x1,x3]]]]]",
    ),
    6: (
        "[[x2,x4],[[x2,x4],[x2,x5]]]",
        "[[[x1,x3],[x2,x5]],[[x3,[x2,x5]],[[x2,x4],[x2,x5]]]]",
    ),
    7: (
        "[x2,[x2,[x2,x5]]]",
        "[[[x2,x4],[x5,[x1,x3]]],[[x5,[x2,x4]],[x3,[x2,[x2,x5]]]]]"
        " - 2[[[x2,x4],[[x1,x3],[x2,x5]]],[[x3,[x2,x5]],[x5,[x2,x4]]]]",
    ),
}


def corpus_ids() -> tuple[int, ...]:
    return tuple(sorted(_CORPUS))


def paper_relations(k: int) -> RelationSet:
    """Bundled relation corpus for registry matrix k (1..7).

    Every relation is checked to be weight-homogeneous at load.
    """
    if k not in _CORPUS:
        raise UnknownId(f"no bundled relations for id {k}")
    rels = []
    for idx, text in enumerate(_CORPUS[k], 1):
        expr = parse(text)
        multidegree(expr, 5)  # raises MixedWeight on a bad transcription
        rels.append((f"{k}.{idx}", expr))
    return RelationSet(tuple(rels), f"paper:{k}")


# -- relation files ----------------------------------------------------------


def relations_from_text(text: str, provenance: str) -> RelationSet:
    """One relation per line; '#' starts a comment; blank lines skipped."""
    rels = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        rels.append((f"L{lineno}", parse(line)))
    return RelationSet(tuple(rels), provenance)


def load_relation_file(path) -> RelationSet:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return relations_from_text(text, f"file:{path}")


def relation_source(token: str, spec: CartanSpec) -> RelationSet:
    """Resolve a relation-source token: paper:K, serre, or file:PATH."""
    if token == "serre":
        return serre_relations(spec)
    if token.startswith("paper:"):
        tail = token[len("paper:"):]
        try:
            k = int(tail)
        except ValueError:
            raise UnknownId(f"bad corpus id {tail!r}") from None
        return paper_relations(k)
    if token.startswith("file:"):
        return load_relation_file(token[len("file:"):])
    raise ValueError(
        f"unknown relation source {token!r}; expected paper:K, serre, or file:PATH"
    )


# -- verification ------------------------------------------------------------


def verify(
    spec: CartanSpec,
    relset: RelationSet,
    max_height: int = DEFAULT_MAX_HEIGHT,
) -> VerificationReport:
    """Evaluate each relation in the built model for spec.

    Weight-inhomogeneous relations are reported (error field set), not
    fatal.  Out-of-range generator indices are an input error and do
    propagate.
    """
    model = build(spec, max_height)
    records = []
    for label, expr in relset.relations:
        try:
            w = multidegree(expr, spec.n)
        except MixedWeight as exc:
            records.append(
                VerificationRecord(label, None, None, False, None, str(exc))
            )
            continue
        val = evaluate_bracket(model, expr)
        if val.is_zero:
            records.append(VerificationRecord(label, w, sum(w), True, None))
        else:
            records.append(
                VerificationRecord(label, w, sum(w), False, val.coords)
            )
    return VerificationReport(tuple(records), relset.provenance)


# -- free Lie superalgebra via the tensor algebra ----------------------------


def _words_of_weight(weight: tuple[int, ...]) -> list[tuple[int, ...]]:
    """All words (tuples of 1-based letters) with the given letter counts,
    in lex order."""
    total = sum(weight)
    counts = list(weight)
    out: list[tuple[int, ...]] = []
    word: list[int] = []

    def rec() -> None:
        if len(word) == total:
            out.append(tuple(word))
            return
        for letter0, c in enumerate(counts):
            if c:
                counts[letter0] -= 1
                word.append(letter0 + 1)
                rec()
                word.pop()
                counts[letter0] += 1

    rec()
    return out


def _is_lyndon(word: tuple[int, ...]) -> bool:
    """Strictly smaller than every proper rotation."""
    n = len(word)
    if n == 0:
        return False
    if n == 1:
        return True
    doubled = word + word
    for s in range(1, n):
        if doubled[s : s + n] <= word:
            return False
    return True


def _lyndon_bracketing(word: tuple[int, ...]) -> BracketExpr:
    """Standard bracketing: split at the longest proper Lyndon suffix."""
    if len(word) == 1:
        return Generator(word[0])
    for s in range(1, len(word)):
        if _is_lyndon(word[s:]):
            return Bracket(_lyndon_bracketing(word[:s]), _lyndon_bracketing(word[s:]))
    raise AssertionError(f"no Lyndon suffix in {word}")


def expr_to_tensor(expr: BracketExpr, spec: CartanSpec) -> dict[tuple[int, ...], int]:
    """Expand a bracket expression in the tensor algebra on x_1..x_n.

    Returns a map from words (tuples of 1-based generator indices) to
    nonzero residues mod p; [a, b] expands word-by-word to
    ab - (-1)^(parity(a) parity(b)) ba.
    """
    p = spec.p
    par = spec.parity

    def word_parity(word: tuple[int, ...]) -> int:
        return sum(par[l - 1] for l in word) % 2

    def rec(node) -> dict[tuple[int, ...], int]:
        if isinstance(node, Generator):
            if not 1 <= node.index <= spec.n:
                raise IndexOutOfRange(
                    f"generator index {node.index} outside 1..{spec.n}"
                )
            return {(node.index,): 1}
        if isinstance(node, Scaled):
            c = node.coeff % p
            return {w: (c * v) % p for w, v in rec(node.node).items()}
        if isinstance(node, Sum):
            acc: dict[tuple[int, ...], int] = {}
            for t in node.terms:
                for w, v in rec(t).items():
                    acc[w] = (acc.get(w, 0) + v) % p
            return acc
        if isinstance(node, Bracket):
            left = rec(node.left)
            right = rec(node.right)
            acc = {}
            for a, ca in left.items():
                pa = word_parity(a)
                for b, cb in right.items():
                    s = (ca * cb) % p
                    acc[a + b] = (acc.get(a + b, 0) + s) % p
                    t = s if pa and word_parity(b) else -s
                    acc[b + a] = (acc.get(b + a, 0) + t) % p
            return acc
        raise TypeError(f"unexpected node {node!r}")

    return {w: v for w, v in rec(expr).items() if v}


def _free_basis(
    weight: tuple[int, ...], spec: CartanSpec
) -> list[BracketExpr]:
    """Super Lyndon basis of the free Lie superalgebra at one weight:
    standard bracketings of Lyndon words, plus squares [b(u), b(u)] of
    odd-parity Lyndon words at the half weight."""
    basis = [
        _lyndon_bracketing(w) for w in _words_of_weight(weight) if _is_lyndon(w)
    ]
    if all(c % 2 == 0 for c in weight):
        half = tuple(c // 2 for c in weight)
        odd_half = (
            sum(c * q for c, q in zip(half, spec.parity)) % 2 == ODD
        )
        if odd_half:
            for w in _words_of_weight(half):
                if _is_lyndon(w):
                    node = _lyndon_bracketing(w)
                    basis.append(Bracket(node, node))
    return basis


@dataclass(frozen=True)
class DiscoveryRecord:
    """Rank bookkeeping at one weight: free = model + ideal + new."""

    weight: tuple[int, ...]
    words: tuple[tuple[int, ...], ...]
    free_dim: int
    model_dim: int
    ideal_dim: int
    new_dim: int
    new: tuple[tuple[str, BracketExpr], ...]
    kernel: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class DiscoveryReport:
    spec: CartanSpec
    up_to_height: int
    records: tuple[DiscoveryRecord, ...]

    def relation_set(self) -> RelationSet:
        rels = []
        for rec in self.records:
            rels.extend(rec.new)
        return RelationSet(tuple(rels), "discovered")


class _SpanTracker:
    """Incremental row span over GF(p) with exact rank queries."""

    def __init__(self, p: int, width: int):
        self.p = p
        self.width = width
        self.rows: list[np.ndarray] = []
        self.rank = 0

    def add(self, row: np.ndarray) -> bool:
        """Add the row; True when it enlarged the span."""
        if self.width == 0:
            return False
        stacked = np.array(self.rows + [row % self.p], dtype=np.int64)
        r = FpMatrix(self.p, stacked).rank()
        if r > self.rank:
            self.rows.append(row % self.p)
            self.rank = r
            return True
        return False


def _weights_of_height(n: int, height: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []
    part: list[int] = []

    def rec(idx: int, remaining: int) -> None:
        if idx == n - 1:
            out.append(tuple(part + [remaining]))
            return
        for c in range(remaining + 1):
            part.append(c)
            rec(idx + 1, remaining - c)
            part.pop()

    rec(0, height)
    return sorted(out)


def discovery_report(spec: CartanSpec, up_to_height: int) -> DiscoveryReport:
    """Degree-by-degree kernel of the free-to-model evaluation map.

    At each weight: the super Lyndon basis spans the free Lie
    superalgebra, evaluation images span the model component, and the
    kernel splits into the ideal generated by lower-height kernels plus
    genuinely new relations.  Requires p >= 5 (the square basis elements
    and the Jacobi identity for squares degenerate below that).
    """
    if up_to_height > DISCOVERY_HEIGHT_LIMIT:
        raise HeightLimitExceeded(up_to_height)
    if up_to_height < 1:
        raise ValueError("up_to_height must be at least 1")
    if spec.p < 5:
        raise ValueError("discovery requires p >= 5")
    p = spec.p
    model = build(spec)

    # full kernel rows per weight, in tensor coordinates
    kernel_store: dict[tuple[int, ...], tuple[list[tuple[int, ...]], np.ndarray]] = {}
    records = []
    for height in range(1, up_to_height + 1):
        for weight in _weights_of_height(spec.n, height):
            basis = _free_basis(weight, spec)
            if not basis:
                continue
            words = _words_of_weight(weight)
            index = {w: k for k, w in enumerate(words)}
            fb = np.zeros((len(basis), len(words)), dtype=np.int64)
            for r, expr in enumerate(basis):
                for w, v in expr_to_tensor(expr, spec).items():
                    fb[r, index[w]] = v
            if FpMatrix(p, fb).rank() != len(basis):
                raise AssertionError(
                    f"dependent Lyndon basis at weight {weight}"
                )

            model_dim = model.component_dimension(weight)
            ev = np.zeros((len(basis), max(model_dim, 1)), dtype=np.int64)
            for r, expr in enumerate(basis):
                val = evaluate_bracket(model, expr)
                if not val.is_zero:
                    ev[r, : model_dim] = val.coords
            kernel_vecs = FpMatrix(p, ev.T).kernel_basis()

            ideal = _SpanTracker(p, len(words))
            for k in range(1, spec.n + 1):
                if weight[k - 1] == 0:
                    continue
                sub = tuple(
                    c - (1 if j == k - 1 else 0) for j, c in enumerate(weight)
                )
                stored = kernel_store.get(sub)
                if stored is None:
                    continue
                sub_words, sub_rows = stored
                par_sub = sum(
                    c * q for c, q in zip(sub, spec.parity)
                ) % 2
                sign = 1 if (spec.parity[k - 1] and par_sub) else -1
                for row in sub_rows:
                    lifted = np.zeros(len(words), dtype=np.int64)
                    for sw, c in zip(sub_words, row):
                        if c:
                            lifted[index[(k,) + sw]] += c
                            lifted[index[sw + (k,)]] += sign * c
                    ideal.add(lifted)
            ideal_dim = ideal.rank

            new_rels: list[tuple[str, BracketExpr]] = []
            kernel_rows = []
            wtag = "w(" + ",".join(map(str, weight)) + ")"
            for vec in kernel_vecs:
                row = (np.array(vec, dtype=np.int64) @ fb) % p
                kernel_rows.append(tuple(int(x) for x in row))
                if ideal.add(row):
                    terms = []
                    for j, c in enumerate(vec):
                        if c:
                            cc = signed_lift(c, p)
                            terms.append(
                                basis[j] if cc == 1 else Scaled(cc, basis[j])
                            )
                    expr = terms[0] if len(terms) == 1 else Sum(tuple(terms))
                    new_rels.append((f"{wtag}#{len(new_rels) + 1}", expr))
            new_dim = len(new_rels)
            if new_dim != len(kernel_vecs) - ideal_dim:
                raise AssertionError(
                    f"rank bookkeeping failed at weight {weight}"
                )

            kernel_store[weight] = (
                words,
                np.array(
                    kernel_rows if kernel_rows else np.zeros((0, len(words))),
                    dtype=np.int64,
                ),
            )
            records.append(
                DiscoveryRecord(
                    weight=weight,
                    words=tuple(words),
                    free_dim=len(basis),
                    model_dim=model_dim,
                    ideal_dim=ideal_dim,
                    new_dim=new_dim,
                    new=tuple(new_rels),
                    kernel=tuple(kernel_rows),
                )
            )
    return DiscoveryReport(spec, up_to_height, tuple(records))


def discover(spec: CartanSpec, up_to_height: int) -> RelationSet:
    """New defining relations per weight, heights 1..up_to_height."""
    return discovery_report(spec, up_to_height).relation_set()
