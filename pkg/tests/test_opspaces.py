import pytest

from qhs.exact import ExactMatrix, ResourceGuardError
from qhs.opspaces import (
    axiom_report,
    fxi_space,
    grid_cells,
    hom_operator_space,
    saturation_report,
)
from qhs.oracle import OracleGroup, OracleRealization, dual_z2
from qhs.partitions import CategorySpec
from qhs.weingarten import IndexSet


def dual_real():
    return OracleRealization(dual_z2(2), IndexSet.parse("1", 2))


def sn4_real():
    return OracleRealization(OracleGroup.symmetric(4), IndexSet.parse("1,2", 4))


def test_fxi_dual_full_space_cell():
    space = fxi_space(dual_real(), "", "oo")
    assert space.dimension == 4


def test_fxi_scalar_cell_dimension_one():
    assert fxi_space(dual_real(), "", "").dimension == 1
    assert fxi_space(sn4_real(), "", "").dimension == 1


def test_fxi_contains_fix_vector_on_full_index_set():
    real = OracleRealization(OracleGroup.symmetric(3), IndexSet.parse("1,2,3", 3))
    space = fxi_space(real, "", "o")
    assert space.contains(ExactMatrix(3, 1, (1, 1, 1)))


def test_contains_zero_identity_and_generic_nonmember():
    space = fxi_space(dual_real(), "o", "o")
    assert space.contains(ExactMatrix.zeros(2, 2))
    assert space.contains(ExactMatrix.identity(2))
    thin = fxi_space(dual_real(), "", "o")
    assert thin.dimension == 1
    assert not thin.contains(ExactMatrix(2, 1, (1, 0)))


def test_contains_shape_mismatch():
    space = fxi_space(dual_real(), "", "o")
    with pytest.raises(ValueError):
        space.contains(ExactMatrix.identity(2))


def test_resource_guard():
    real = sn4_real()
    with pytest.raises(ResourceGuardError):
        fxi_space(real, "oooo", "ooo")


def test_fxi_monotone_in_evaluation_points():
    real = sn4_real()
    dims = []
    for count in (1, 6, 12, 24):
        dims.append(fxi_space(real, "", "oo", points=range(count)).dimension)
    assert dims == sorted(dims, reverse=True)
    assert dims[-1] == fxi_space(real, "", "oo").dimension


def test_hom_operator_space_sources_agree_for_sn4():
    group = OracleGroup.symmetric(4)
    spec = CategorySpec("S", 4)
    for cell in (("", "oo"), ("o", "o"), ("oo", "")):
        from_group = hom_operator_space(group, *cell)
        from_spec = hom_operator_space(spec, *cell)
        assert from_group.dimension == from_spec.dimension
        assert all(from_group.contains(T) for T in from_spec.basis)


def test_axiom_report_on_group_homspaces_is_tensor_category():
    group = OracleGroup.symmetric(3)
    cells = grid_cells(2)
    spaces = {cell: hom_operator_space(group, *cell) for cell in cells}
    report = axiom_report(spaces)
    assert report["asserted_passed"]
    assert report["composition"]["passed"]
    assert report["tensor"]["passed"]


def test_saturation_dual_strictly_larger():
    report = saturation_report(dual_real(), dual_z2(2), 2)
    assert report["verdict"] == "strictly-larger"
    cell = next(c for c in report["cells"] if (c["k"], c["l"]) == ("", "oo"))
    assert cell["dim_hom"] == 2 and cell["dim_fxi"] == 4
    assert all(c["inclusion"] for c in report["cells"])
    assert report["axioms"]["asserted_passed"]


def test_saturation_sn4_inclusions_hold():
    report = saturation_report(sn4_real(), OracleGroup.symmetric(4), 2)
    assert all(c["inclusion"] for c in report["cells"])
    assert report["axioms"]["asserted_passed"]


def test_grid_cells_ordering_deterministic():
    cells = grid_cells(1)
    assert cells[0] == ("", "")
    assert set(cells) == {("", ""), ("", "b"), ("", "o"), ("b", ""), ("o", "")}
    assert cells == sorted(cells, key=lambda c: (len(c[0]) + len(c[1]), c[0], c[1]))


def test_report_is_json_serialisable():
    import json

    text = json.dumps(saturation_report(dual_real(), dual_z2(2), 1))
    assert "verdict" in text
