import json

import numpy as np
import pytest

from elduque.cartan import (
    EVEN,
    ODD,
    CartanSpec,
    UnknownId,
    UnsupportedDiagonal,
    apply_witness,
    canonical_form,
    canonical_key,
    cartan_from_dict,
    cartan_spec,
    cartan_to_dict,
    equivalent,
    invert_mod_p,
    load_cartan_file,
    permuted,
    registry,
    registry_ids,
    render_ascii,
    render_dot,
    to_dynkin,
)
from elduque.fp import SingularMatrix


def test_registry_ids():
    assert registry_ids() == (1, 2, 3, 4, 5, 6, 7)


def test_registry_1_entries():
    spec = registry(1)
    assert spec.p == 5 and spec.n == 5
    assert spec.matrix.signed_rows() == (
        (2, 0, -1, 0, 0),
        (0, 2, 0, 0, -1),
        (-1, 0, 0, 1, 1),
        (0, 0, 1, 0, -2),
        (0, -1, 1, -2, 0),
    )
    assert spec.parity == (EVEN, EVEN, ODD, ODD, ODD)
    assert spec.isotropic_roots() == (3, 4, 5)


def test_registry_5_diagonal():
    spec = registry(5)
    diag = tuple(spec.matrix[i, i] for i in range(5))
    assert diag == (0, 2, 2, 2, 2)
    assert spec.isotropic_roots() == (1,)


@pytest.mark.parametrize("bad", [0, 8, -1])
def test_registry_unknown_id(bad):
    with pytest.raises(UnknownId):
        registry(bad)


def test_parity_inferred_from_diagonal():
    spec = cartan_spec(5, [[2, -1], [-1, 0]])
    assert spec.parity == (EVEN, ODD)


def test_diagonal_outside_scope_rejected():
    with pytest.raises(UnsupportedDiagonal):
        cartan_spec(5, [[1]])


def test_parity_diagonal_mismatch_rejected():
    with pytest.raises(ValueError):
        cartan_spec(5, [[0]], parity=(EVEN,))
    with pytest.raises(ValueError):
        cartan_spec(5, [[2]], parity=(ODD,))


def test_non_prime_modulus_rejected():
    with pytest.raises(ValueError):
        cartan_spec(6, [[2]])


def test_canonical_form_idempotent():
    for k in registry_ids():
        c = canonical_form(registry(k))
        assert canonical_form(c) == c


def test_canonical_form_permutation_invariant():
    rng = np.random.default_rng(11)
    for k in registry_ids():
        spec = registry(k)
        base = canonical_key(spec)
        for _ in range(6):
            perm = tuple(rng.permutation(5))
            assert canonical_key(permuted(spec, perm)) == base


def test_canonical_form_scaling_invariant():
    rng = np.random.default_rng(13)
    for k in registry_ids():
        spec = registry(k)
        base = canonical_key(spec)
        for _ in range(6):
            rows = np.array(spec.matrix.array)
            for i in spec.isotropic_roots():
                lam = int(rng.integers(1, 5))
                rows[i - 1] = (rows[i - 1] * lam) % 5
            scaled = CartanSpec(5, 5, type(spec.matrix)(5, rows), spec.parity)
            assert canonical_key(scaled) == base


def test_registry_canonical_keys_pairwise_distinct():
    keys = [canonical_key(registry(k)) for k in registry_ids()]
    assert len(set(keys)) == 7


def test_equivalent_reflexive_identity_witness():
    spec = registry(1)
    w = equivalent(spec, spec)
    assert w is not None
    assert w.permutation == (0, 1, 2, 3, 4)
    assert apply_witness(w, spec) == spec


def test_equivalent_transposition():
    spec = registry(1)
    swapped = permuted(spec, (1, 0, 2, 3, 4))
    w = equivalent(spec, swapped)
    assert w is not None
    assert apply_witness(w, spec) == swapped


def test_equivalent_distinct_classes_none():
    assert equivalent(registry(3), registry(7)) is None
    assert equivalent(registry(1), registry(2)) is None


def test_equivalent_matches_canonical_form():
    """The witness search and the canonical form agree on randomized
    permutations and isotropic rescalings."""
    rng = np.random.default_rng(17)
    for k in (1, 4, 6):
        spec = registry(k)
        for _ in range(4):
            perm = tuple(rng.permutation(5))
            rows = np.array(permuted(spec, perm).matrix.array)
            parity = permuted(spec, perm).parity
            for i in range(5):
                if parity[i] == ODD and rows[i, i] == 0:
                    rows[i] = (rows[i] * int(rng.integers(1, 5))) % 5
            other = CartanSpec(5, 5, type(spec.matrix)(5, rows), parity)
            w = equivalent(spec, other)
            assert w is not None
            assert apply_witness(w, spec) == other
            assert canonical_key(spec) == canonical_key(other)
    # and disagreement side: different classes never share a key
    for k1 in registry_ids():
        for k2 in registry_ids():
            if k1 < k2:
                assert equivalent(registry(k1), registry(k2)) is None


def test_equivalent_rejects_mismatched_shapes():
    assert equivalent(registry(1), cartan_spec(5, [[2]])) is None


def test_invert_mod_p_round_trip():
    for k in registry_ids():
        spec = registry(k)
        inv = invert_mod_p(spec)
        prod = spec.matrix @ inv
        assert prod.tolist() == [
            [1 if i == j else 0 for j in range(5)] for i in range(5)
        ]
        assert inv.invert() == spec.matrix


def test_invert_mod_p_singular_propagates():
    with pytest.raises(SingularMatrix):
        invert_mod_p(cartan_spec(5, [[0]]))


def test_dynkin_registry_1():
    g = to_dynkin(registry(1))
    kinds = {idx: kind for idx, kind in g.nodes}
    assert kinds == {1: "even", 2: "even", 3: "isotropic", 4: "isotropic", 5: "isotropic"}
    styles = {(i, j): style for i, j, _, _, style in g.edges}
    assert styles[(3, 4)] == "dotted"
    assert styles[(1, 3)] == "plain"
    assert (3, 5) in styles  # A_35 = 1, A_53 = 1
    assert styles[(3, 5)] == "dotted"


def test_dynkin_registry_3_grey_nodes():
    g = to_dynkin(registry(3))
    grey = [idx for idx, kind in g.nodes if kind == "isotropic"]
    assert grey == [4]


def test_dynkin_grey_iff_diagonal_zero():
    for k in registry_ids():
        spec = registry(k)
        g = to_dynkin(spec)
        for idx, kind in g.nodes:
            assert (kind == "isotropic") == (spec.matrix[idx - 1, idx - 1] == 0)


def test_dynkin_edges_iff_nonzero_coupling():
    for k in registry_ids():
        spec = registry(k)
        g = to_dynkin(spec)
        present = {(i, j) for i, j, _, _, _ in g.edges}
        for i in range(1, 6):
            for j in range(i + 1, 6):
                coupled = spec.matrix[i - 1, j - 1] != 0 or spec.matrix[j - 1, i - 1] != 0
                assert ((i, j) in present) == coupled


def test_dynkin_diagonal_only_edgeless():
    g = to_dynkin(cartan_spec(5, [[2, 0], [0, 2]]))
    assert g.edges == ()


def test_render_dot_registry_1():
    text = render_dot(to_dynkin(registry(1)))
    assert "graph cartan {" in text
    assert "3 -- 4 [style=dotted];" in text
    assert text.count("fillcolor=lightgrey") == 3


def test_render_ascii_registry_3():
    text = render_ascii(to_dynkin(registry(3)))
    assert "(x)4" in text
    assert "o1" in text


def test_json_round_trip():
    for k in registry_ids():
        spec = registry(k)
        data = cartan_to_dict(spec)
        assert cartan_from_dict(data) == spec
        assert json.loads(json.dumps(data)) == data


def test_load_cartan_file(tmp_path):
    doc = {"p": 5, "n": 2, "matrix": [[2, -1], [-1, 2]], "parity": ["even", "even"]}
    path = tmp_path / "a2.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    spec = load_cartan_file(path)
    assert spec.p == 5 and spec.n == 2
    assert load_cartan_file(path, p_override=7).p == 7


def test_cartan_from_dict_validation():
    with pytest.raises(ValueError):
        cartan_from_dict({"p": 5, "n": 2, "matrix": [[2, -1]]})
    with pytest.raises(ValueError):
        cartan_from_dict({"p": 5, "matrix": [[2, -1], [-1, 2]], "parity": ["even"]})
    with pytest.raises(ValueError):
        cartan_from_dict(
            {"p": 5, "matrix": [[2, 0], [0, 2]], "parity": ["even", "blue"]}
        )
    with pytest.raises(ValueError):
        cartan_from_dict({"p": 5})
