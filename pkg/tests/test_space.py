import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sunidyn.errors import CapacityError, UsageError
from sunidyn.space import (
    CoeffVector,
    DiskRegion,
    ExponentialSum,
    Metric,
    Polynomial,
    SpaceSpec,
    exp_sum_eval,
    exp_sum_truncate,
    poly_sup_norm,
    seq_norm,
)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
cplx = st.builds(complex, finite, finite)
vectors = st.lists(cplx, min_size=0, max_size=8)
spaces = st.sampled_from([SpaceSpec.c0(), SpaceSpec.ell(1), SpaceSpec.ell(2), SpaceSpec.ell(3.5)])


def test_seq_norm_examples():
    assert seq_norm(CoeffVector(), SpaceSpec.c0()) == 0
    assert seq_norm(CoeffVector(), SpaceSpec.ell(2)) == 0
    assert seq_norm(CoeffVector([3, 4]), SpaceSpec.ell(2)) == pytest.approx(5, abs=1e-14)
    assert seq_norm(CoeffVector([1, -2, 0.5]), SpaceSpec.c0()) == pytest.approx(2, abs=1e-15)


def test_space_spec_validation():
    with pytest.raises(UsageError):
        SpaceSpec("ellq", 0.5)
    with pytest.raises(UsageError):
        SpaceSpec("l7")
    with pytest.raises(UsageError):
        DiskRegion(0, 0)


@given(vectors, vectors, cplx, spaces)
def test_norm_triangle_and_homogeneity(a, b, c, space):
    x, y = CoeffVector(a), CoeffVector(b)
    nx, ny = seq_norm(x, space), seq_norm(y, space)
    assert seq_norm(x + y, space) <= nx + ny + 1e-12 * (1 + nx + ny)
    assert seq_norm(x * c, space) == pytest.approx(abs(c) * nx, rel=1e-12, abs=1e-12)


@given(vectors, st.integers(0, 5), spaces)
def test_trailing_zeros_do_not_change_norm(a, k, space):
    assert seq_norm(CoeffVector(list(a) + [0] * k), space) == seq_norm(CoeffVector(a), space)
    assert CoeffVector(list(a) + [0] * k) == CoeffVector(a)


def test_huge_and_tiny_coefficients_survive():
    tiny = CoeffVector.from_polar([-5000.0], [0.0])
    assert not tiny.is_zero()
    assert seq_norm(tiny * 2, SpaceSpec.c0()) == 0.0  # underflows only on output
    assert tiny.logmod[0] == -5000.0
    a = CoeffVector([1 + 2j, 3])
    assert (a - a).is_zero()


def test_poly_sup_norm_examples():
    assert poly_sup_norm(Polynomial(), DiskRegion(0, 1), 8) == 0
    assert poly_sup_norm(Polynomial([0, 1]), DiskRegion(0, 2), 64) == pytest.approx(2, abs=1e-12)
    f = Polynomial([1, 0, 1])
    # dense-grid oracle
    z = np.exp(2j * np.pi * np.arange(20000) / 20000)
    dense = np.max(np.abs(z**2 + 1))
    assert poly_sup_norm(f, DiskRegion(0, 1), 256) == pytest.approx(dense, abs=1e-9)
    assert dense == pytest.approx(2, abs=1e-9)
    with pytest.raises(UsageError):
        poly_sup_norm(f, DiskRegion(0, 1), 4)


@given(st.lists(cplx, min_size=1, max_size=6), st.floats(0.1, 2), st.floats(1.01, 2))
def test_poly_sup_norm_monotone_in_radius(c, r, factor):
    f = Polynomial(c)
    small = poly_sup_norm(f, DiskRegion(0, r), 512)
    big = poly_sup_norm(f, DiskRegion(0, r * factor), 512)
    assert small <= big * (1 + 1e-3) + 1e-12


def test_polynomial_degree_cap():
    with pytest.raises(CapacityError):
        Polynomial([1] * 10, degree_cap=5)
    assert Polynomial([1, 2, 0, 0]).degree == 1


def test_exp_sum_eval_examples():
    assert exp_sum_eval(ExponentialSum(), 1) == 0
    assert exp_sum_eval(ExponentialSum([(1, 0)]), 5) == pytest.approx(1, abs=1e-15)
    assert exp_sum_eval(ExponentialSum([(2, np.log(2))]), 1) == pytest.approx(4, abs=1e-12)


def test_exp_sum_merges_duplicate_exponents():
    s = ExponentialSum([(1, 2), (3, 1j), (2, 2)])
    assert len(s) == 2
    assert s.terms[0][0] == pytest.approx(3)
    assert len(ExponentialSum([(1, 2), (-1, 2)])) == 0


def test_exp_sum_truncate_examples():
    assert exp_sum_truncate(ExponentialSum([(1, 0)]), 5).poly == Polynomial([1])
    p = exp_sum_truncate(ExponentialSum([(1, 1)]), 2).poly
    assert p.allclose(Polynomial([1, 1, 0.5]), 1e-15)
    p = exp_sum_truncate(ExponentialSum([(1, 1), (-1, -1)]), 3).poly
    assert np.max(np.abs(p.coeffs - np.array([0, 2, 0, 1 / 3]))) <= 1e-15
    with pytest.raises(CapacityError):
        exp_sum_truncate(ExponentialSum([(1, 1)]), 600)


@given(
    st.lists(st.tuples(cplx, cplx), min_size=1, max_size=4),
    st.integers(5, 40),
    st.floats(0, 1),
    st.floats(0, 2 * np.pi),
)
def test_truncation_within_reported_bound(terms, degree, rad, ang):
    s = ExponentialSum([(c / 10, lam / 5) for c, lam in terms])
    tr = exp_sum_truncate(s, degree, radius=1.0)
    z = rad * np.exp(1j * ang)
    err = abs(tr.poly(z) - s(z))
    scale = float(np.sum(np.abs(s.coefficients) * np.exp(np.abs(s.exponents))))
    assert err <= tr.error_bound + 1e-13 * (1 + scale)


def test_metric_distance_kinds():
    m = Metric()
    assert m.distance(CoeffVector([1]), CoeffVector([0, 1])) == pytest.approx(np.sqrt(2))
    assert m.distance(Polynomial([0, 1]), Polynomial()) == pytest.approx(1)
    with pytest.raises(UsageError):
        m.distance(CoeffVector([1]), Polynomial([1]))
