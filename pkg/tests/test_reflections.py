import pytest

from elduque.cartan import canonical_key, cartan_spec, equivalent, registry, registry_ids
from elduque.contragredient import Superdimension, build
from elduque.reflections import (
    NotIsotropic,
    odd_reflect,
    orbit,
    reflection_table,
    registry_numbered_table,
    render_orbit_dot,
    render_table_text,
)

# reflection targets per registry row; None marks a non-isotropic root
TABLE = (
    (None, None, 2, 3, 4),
    (5, None, 1, None, None),
    (None, None, None, 1, None),
    (None, 6, None, None, 1),
    (2, None, None, None, None),
    (None, 4, None, 7, None),
    (None, None, None, 6, None),
)


@pytest.fixture(scope="module")
def orbit1():
    return orbit(registry(1))


def test_reflect_1_at_3_reaches_class_2():
    refl = odd_reflect(registry(1), 3)
    assert equivalent(refl, registry(2)) is not None


def test_reflect_non_isotropic_rejected():
    with pytest.raises(NotIsotropic):
        odd_reflect(registry(1), 1)  # A_11 = 2
    with pytest.raises(NotIsotropic):
        odd_reflect(registry(1), 0)
    with pytest.raises(NotIsotropic):
        odd_reflect(registry(1), 6)


def test_reflection_involution_on_classes():
    for k in registry_ids():
        spec = registry(k)
        for i in spec.isotropic_roots():
            twice = odd_reflect(odd_reflect(spec, i), i)
            assert canonical_key(twice) == canonical_key(spec)


def test_orbit_has_seven_classes(orbit1):
    assert len(orbit1.nodes) == 7
    assert len(set(orbit1.keys)) == 7


def test_orbit_seed_independent(orbit1):
    other = orbit(registry(3))
    assert set(other.keys) == set(orbit1.keys)


def test_orbit_edges_cover_all_isotropic_roots(orbit1):
    starts = {}
    for frm, root, to in orbit1.edges:
        starts.setdefault(frm, set()).add(root)
    for node_idx, spec in enumerate(orbit1.nodes):
        assert starts[node_idx] == set(spec.isotropic_roots())


def test_orbit_edge_set_symmetric_as_unordered_pairs(orbit1):
    pairs = {(min(f, t), max(f, t)) for f, _, t in orbit1.edges}
    directed = {(f, t) for f, _, t in orbit1.edges}
    for a, b in pairs:
        assert (a, b) in directed or a == b
        assert (b, a) in directed or a == b


def test_rank_one_isotropic_orbit_single_class():
    g = orbit(cartan_spec(5, [[0]]))
    assert len(g.nodes) == 1


def test_registry_numbered_table_matches_reference(orbit1):
    table = registry_numbered_table(orbit1)
    assert table.cells == TABLE


def test_table_dashes_exactly_at_non_isotropic(orbit1):
    table = registry_numbered_table(orbit1)
    for r, spec in enumerate(table.representatives):
        for i in range(1, 6):
            cell = table.cells[r][i - 1]
            assert (cell is None) == (not spec.is_isotropic(i))


def test_table_symmetry(orbit1):
    table = registry_numbered_table(orbit1)
    for m, row in enumerate(table.cells, 1):
        for i, cell in enumerate(row, 1):
            if cell is not None:
                assert table.cells[cell - 1][i - 1] == m


def test_default_numbering_uses_discovery_order(orbit1):
    table = reflection_table(orbit1)
    assert table.representatives == orbit1.nodes
    # row 1 of the discovery-order table with seed registry(1) matches too
    assert table.cells[0] == (None, None, 2, 3, 4)


def test_reflection_table_validates_representatives(orbit1):
    with pytest.raises(ValueError):
        reflection_table(orbit1, [registry(1)])
    reps = [registry(k) for k in (1, 1, 3, 4, 5, 6, 7)]
    with pytest.raises(ValueError):
        reflection_table(orbit1, reps)
    with pytest.raises(ValueError):
        reflection_table(
            orbit1,
            [cartan_spec(5, [[2]])] + [registry(k) for k in range(2, 8)],
        )


def test_superdimension_invariant_under_reflection():
    for k in registry_ids():
        spec = registry(k)
        for i in spec.isotropic_roots():
            refl = odd_reflect(spec, i)
            assert build(refl).superdimension() == Superdimension(55, 32)


def test_parity_bookkeeping():
    """Isotropic diagonal zeros match odd parities after reflection."""
    for k in registry_ids():
        spec = registry(k)
        for i in spec.isotropic_roots():
            refl = odd_reflect(spec, i)
            zeros = sum(1 for j in range(5) if refl.matrix[j, j] == 0)
            odd = sum(refl.parity)
            assert zeros == odd


def test_reflected_parities_flip_coupled_roots():
    spec = registry(1)
    refl = odd_reflect(spec, 3)  # row 3 couples roots 1, 4, 5
    assert refl.parity[2] == spec.parity[2]
    for j0 in (0, 3, 4):
        assert refl.parity[j0] != spec.parity[j0]
    assert refl.parity[1] == spec.parity[1]


def test_render_table_text(orbit1):
    text = render_table_text(registry_numbered_table(orbit1))
    lines = text.strip().splitlines()
    assert len(lines) == 8  # header + 7 rows
    assert lines[1].split() == ["1)", "-", "-", "2", "3", "4"]
    assert lines[6].split() == ["6)", "-", "4", "-", "7", "-"]


def test_render_orbit_dot(orbit1):
    text = render_orbit_dot(orbit1)
    assert text.startswith("graph orbit {")
    assert 'c1 -- c2 [label="r3"];' in text
    assert text.count(" -- ") == 6  # spanning connections among 7 classes
