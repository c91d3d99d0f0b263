import json

import pytest

from trivertex import verify
from trivertex.poly import LaurentPoly, Var
from trivertex.verify import (
    check_average_ratio,
    check_column_decomposition,
    check_column_reduction,
    check_convention,
    check_counting,
    check_deformed_limit,
    check_derivative_value,
    check_increasing_labels,
    check_inhomogeneous,
    check_loop_recursion,
    check_mixed_boundary_column,
    check_multiple_commutation,
    check_one_column,
    check_schur_correspondence,
    check_schur_oracles,
    check_tetrahedron,
    check_zf,
    increasing_grid,
    reports_to_json,
    run_battery,
    schur_grid,
)


def assert_pass(report):
    assert report.passed, (report.name, report.params, report.detail)


def test_zf_examples():
    assert_pass(check_zf(2, (1, 1)))
    assert_pass(check_zf(3, (0, 2)))
    assert_pass(check_zf(3, (2, 0)))
    assert_pass(check_zf(4, (1, 3)))


def test_zf_full_smallest():
    for i in range(3):
        for j in range(3):
            assert_pass(check_zf(2, (i, j)))


def test_increasing_labels():
    assert_pass(check_increasing_labels(3, (1, 2, 2)))
    assert_pass(check_increasing_labels(4, (0, 0, 1, 3)))
    assert_pass(check_increasing_labels(2, (2,)))
    with pytest.raises(ValueError):
        check_increasing_labels(3, (2, 1))


def test_schur_correspondence():
    assert_pass(check_schur_correspondence(3, ((3, 2), (1, 1))))
    assert_pass(check_schur_correspondence(4, ((4, 1), (2, 2))))
    assert_pass(check_schur_correspondence(2, ((2, 1),)))
    with pytest.raises(ValueError):
        check_schur_correspondence(3, ((1, 1), (2, 1)))
    with pytest.raises(ValueError):
        check_schur_correspondence(3, ((4, 1),))


def test_multiple_commutation():
    assert_pass(check_multiple_commutation(3, ((2, 1), (1, 1))))
    assert_pass(check_multiple_commutation(4, ((3, 2), (1, 1))))
    # away from the vacuum too
    assert_pass(check_multiple_commutation(
        3, ((2, 1), (0, 1)), kets=[(0, 0, 0), (1, 0, 0), (0, 1, 1), (2, 0, 1)]))


def test_derivative_value():
    assert_pass(check_derivative_value(4, (4, 3, 2, 1)))
    assert_pass(check_derivative_value(4, (3, 2, 1, 0)))
    assert_pass(check_derivative_value(3, (3, 1)))
    with pytest.raises(ValueError):
        check_derivative_value(3, (1, 1))


def test_counting_examples():
    assert_pass(check_counting(4, ((4, 1), (2, 1), (1, 1))))
    assert_pass(check_counting(3, ((3, 2), (1, 1))))
    assert_pass(check_counting(2, ((2, 1), (0, 1))))


def test_average_ratio():
    # 13/4, 7/2, 15/4: n-1 + ell/n, not any simpler-looking fraction
    for ell, ratio in ((1, "13/4"), (2, "7/2"), (3, "15/4")):
        r = check_average_ratio(4, ell)
        assert_pass(r)
        assert r.detail["ratio"] == ratio
    with pytest.raises(ValueError):
        check_average_ratio(4, 4)


def test_inhomogeneous():
    assert_pass(check_inhomogeneous(3, (1, 1, 1)))
    assert_pass(check_inhomogeneous(3, (2, 1, 1)))
    assert_pass(check_inhomogeneous(3, (1, 2, 2)))
    assert_pass(check_inhomogeneous(4, (1, 1, 1, 2)))
    with pytest.raises(ValueError):
        check_inhomogeneous(3, (1, 1))


def test_one_column():
    assert_pass(check_one_column(1, 1))
    assert_pass(check_one_column(2, 4))
    assert_pass(check_one_column(3, 5))


def test_mixed_boundary_column():
    assert_pass(check_mixed_boundary_column(1, 1, 3))
    assert_pass(check_mixed_boundary_column(2, 1, 3))
    assert_pass(check_mixed_boundary_column(2, 2, 4))
    # more occupied bra slots than layers: both sides vanish
    assert_pass(check_mixed_boundary_column(3, 0, 2))
    # no layers at all
    assert_pass(check_mixed_boundary_column(1, 0, 0))


def test_column_reduction():
    assert_pass(check_column_reduction(3, 0))
    assert_pass(check_column_reduction(3, 1))
    assert_pass(check_column_reduction(4, 0))


def test_column_decomposition():
    assert_pass(check_column_decomposition(2, 3))
    assert_pass(check_column_decomposition(3, 3))
    with pytest.raises(ValueError):
        check_column_decomposition(1, 3)


def test_oracle_cross_checks():
    assert_pass(check_schur_oracles(25))
    assert_pass(check_loop_recursion(25))
    assert_pass(check_deformed_limit())
    assert_pass(check_tetrahedron(3))


def test_convention_check():
    assert_pass(check_convention())


def test_grid_sizes():
    assert len(list(schur_grid())) == 235
    assert len(list(increasing_grid())) == 431


def test_battery_selection_and_json():
    reports = run_battery("tetrahedron")
    assert len(reports) == 1
    assert reports[0].name == "tetrahedron"
    parsed = json.loads(reports_to_json(reports))
    assert parsed[0]["passed"] is True
    assert parsed[0]["params"] == {"cutoff": 4}
    with pytest.raises(ValueError):
        run_battery("nonsense")


def test_hat_group():
    reports = run_battery("hat")
    assert all(r.passed for r in reports), [r.name for r in reports if not r.passed]
    assert len(reports) == 8


def test_report_failure_shape():
    # force a mismatch by lying about the expected labels: a decreasing
    # sequence handed to the increasing check must raise, not mis-report
    r = check_zf(2, (0, 1), cutoff=3)
    assert r.passed
    assert r.seconds >= 0
    obj = r.to_obj()
    assert set(obj) == {"name", "params", "passed", "detail", "seconds"}
