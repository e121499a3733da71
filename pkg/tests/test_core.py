import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from conftest import seeded_functional, seeded_operator, seeded_vector
from rankone.core import (
    DenseOperator,
    DimensionMismatchError,
    Functional,
    RankOneForm,
    SingularMatrixError,
    Vector,
    invert,
    outer,
    pair,
    rank_estimate,
)


def test_pair_orthogonal_coordinates():
    assert pair(Functional([1, 0]), Vector([0, 1])) == 0


def test_pair_hand_sum():
    # 3*1 + 4*2
    assert pair(Functional([3, 4]), Vector([1, 2])) == 11


@given(st.complex_numbers(allow_nan=False, allow_infinity=False, max_magnitude=1e6))
def test_pair_one_dimensional_identity(lam):
    assert pair(Functional([1]), Vector([lam])) == lam


def test_pair_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        pair(Functional([1, 2]), Vector([1, 2, 3]))


def test_outer_entrywise():
    op = outer(Vector([1, 2]), Functional([3, 4]))
    assert_allclose(op.matrix, [[3, 4], [6, 8]])


def test_outer_zero_vector():
    op = outer(Vector([0, 0, 0]), Functional([1, 2, 3]))
    assert_allclose(op.matrix, np.zeros((3, 3)))


def test_outer_scalar_case():
    assert_allclose(outer(Vector([1]), Functional([1])).matrix, [[1]])


def test_outer_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        outer(Vector([1, 2, 3]), Functional([1, 2]))


def test_outer_acts_as_pairing_on_basis():
    rng = np.random.default_rng(11)
    for dim in (1, 3, 6):
        f = seeded_vector(rng, dim)
        l = seeded_functional(rng, dim)
        op = outer(f, l)
        for i in range(dim):
            u = Vector.basis(i, dim)
            assert_allclose((op @ u).entries, (pair(l, u) * f).entries, atol=1e-14)


def test_invert_identity():
    assert_allclose(invert(DenseOperator.identity(4)).matrix, np.eye(4))


def test_invert_diagonal():
    inv = invert(DenseOperator(np.diag([2.0, 4.0])))
    assert_allclose(inv.matrix, np.diag([0.5, 0.25]))


def test_invert_residual_seeded():
    rng = np.random.default_rng(3)
    a = seeded_operator(rng, 8)
    x = invert(a)
    assert np.max(np.abs((a @ x).matrix - np.eye(8))) <= 1e-10


@pytest.mark.parametrize("dim", [2, 8, 32])
def test_invert_two_sided_residual(dim):
    rng = np.random.default_rng(dim)
    a = seeded_operator(rng, dim)
    x = invert(a)
    eye = np.eye(dim)
    assert np.max(np.abs((a @ x).matrix - eye)) <= 1e-10
    assert np.max(np.abs((x @ a).matrix - eye)) <= 1e-10


def test_invert_singular_raises():
    with pytest.raises(SingularMatrixError):
        invert(DenseOperator([[1.0, 1.0], [1.0, 1.0]]))


def test_rank_estimate_outer_is_one():
    assert rank_estimate(outer(Vector([1, 2]), Functional([3, 4])), 1e-10) == 1


def test_rank_estimate_zero_matrix():
    assert rank_estimate(DenseOperator.zero(3), 1e-10) == 0


def test_rank_estimate_identity():
    assert rank_estimate(DenseOperator.identity(3), 1e-10) == 3


def test_rank_estimate_requires_positive_tol():
    with pytest.raises(ValueError):
        rank_estimate(DenseOperator.identity(2), 0.0)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=1, max_value=6), st.integers(min_value=0, max_value=2**31))
def test_rank_of_random_outer_products(dim, seed):
    rng = np.random.default_rng(seed)
    f = seeded_vector(rng, dim)
    l = seeded_functional(rng, dim)
    assert rank_estimate(outer(f, l), 1e-10) <= 1


def test_values_reject_nonfinite_entries():
    with pytest.raises(ValueError):
        Vector([1.0, np.nan])
    with pytest.raises(ValueError):
        Functional([np.inf])
    with pytest.raises(ValueError):
        DenseOperator([[1.0, np.nan], [0.0, 1.0]])


def test_values_reject_empty_and_nonsquare():
    with pytest.raises(ValueError):
        Vector([])
    with pytest.raises(ValueError):
        DenseOperator(np.zeros((2, 3)))


def test_values_are_immutable():
    v = Vector([1.0, 2.0])
    with pytest.raises(ValueError):
        v.entries[0] = 5.0
    a = DenseOperator.identity(2)
    with pytest.raises(ValueError):
        a.matrix[0, 0] = 5.0


def test_rank_one_form_materializes_as_outer():
    form = RankOneForm(Vector([1, 2]), Functional([3, 4]))
    assert_allclose(form.materialize().matrix, [[3, 4], [6, 8]])
    with pytest.raises(DimensionMismatchError):
        RankOneForm(Vector([1, 2]), Functional([3, 4, 5]))


def test_rank_one_form_gauge_keeps_outer_product():
    form = RankOneForm(Vector([1, 2]), Functional([3, 4]))
    scaled = form.gauge(-2.5 + 1.0j)
    assert_allclose(scaled.materialize().matrix, form.materialize().matrix, atol=1e-14)
