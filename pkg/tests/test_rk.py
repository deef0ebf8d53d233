import warnings

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from sunidyn.constructors.rk import (
    conv_region_probe,
    conv_Rk,
    diff_Rk,
    equivalence_classes,
    representatives,
    shift_Rk,
)
from sunidyn.dirichlet import find_return_sequence, ratio_set
from sunidyn.errors import CapacityError, DegenerateConstruction, UsageError
from sunidyn.operators import Convolution, ConvolutionSymbol, DiffPower, ShiftPower, iterate
from sunidyn.shifts import power_groups
from sunidyn.space import CoeffVector, ExponentialSum, Metric, Polynomial

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)
cplx = st.builds(complex, finite, finite)


def test_shift_rk_single_operator():
    v = shift_Rk(CoeffVector.basis(0), 3, (1,), (2,))
    assert v.allclose(CoeffVector([0, 0, 0, 1 / 8]), 1e-15)
    assert iterate(ShiftPower(lam=2), v, 3) == CoeffVector.basis(0)


def test_shift_rk_block_offsets():
    v = shift_Rk(CoeffVector([1]), 4, (1, 2), (2, 3))
    assert v.allclose(CoeffVector([0, 0, 0, 0, 2.0**-4, 0, 0, 0, 3.0**-4]), 1e-15)
    assert iterate(ShiftPower(lam=2), v, 4)[0] == pytest.approx(1)
    assert iterate(ShiftPower(r=2, lam=3), v, 4) .allclose(CoeffVector([1]), 1e-15)


def test_shift_rk_degenerate_branch():
    with pytest.warns(DegenerateConstruction):
        v = shift_Rk(CoeffVector([1, 2, 3]), 2, (1,), (2,))
    assert v.is_zero()


def test_shift_rk_rejects_non_s_families():
    with pytest.raises(UsageError):
        shift_Rk(CoeffVector([1]), 5, (1, 1), (2, 4))


def test_representatives():
    assert representatives([1, 1, 2, 3, 3, 3]) == [1, 2, 5]


@st.composite
def tied_real_families(draw):
    """Sorted powers with ties and strictly increasing positive real moduli."""
    distinct = sorted(draw(st.sets(st.integers(1, 4), min_size=1, max_size=3)))
    rs, lams = [], []
    base = 1.0
    for r in distinct:
        base += draw(st.floats(0.2, 1.5))
        for _ in range(draw(st.integers(1, 2))):
            rs.append(r)
            lams.append(base)
    return rs, lams


@given(tied_real_families(), st.lists(cplx, min_size=1, max_size=5), st.integers(0, 20))
def test_shift_exact_reconstruction(fam, c, extra):
    rs, lams = fam
    x = CoeffVector(c)
    assume(len(x) > 0)
    n = max(len(x), 1) + extra
    v = shift_Rk(x, n, rs, lams)
    N = len(x)
    for r, lam in zip(rs, lams):
        y = iterate(ShiftPower(r=r, lam=lam), v, n)
        assert np.max(np.abs(y.coeffs[:N] - x.coeffs)) <= 1e-10 * (1 + np.max(np.abs(x.coeffs)))
        # the rest of y lives at indices >= n >= N
        if len(y) > N:
            assert np.all(y.coeffs[N:n] == 0)


def test_diff_rk_examples():
    f = Polynomial([1])
    g = diff_Rk(f, 2, (1,), (2,))
    assert g.allclose(Polynomial([0, 0, 1 / 8]), 1e-15)
    assert iterate(DiffPower(1, 2), g, 2).allclose(f, 1e-15)
    assert diff_Rk(Polynomial(), 2, (1,), (2,)).is_zero()
    g = diff_Rk(f, 2, (1, 1), (2, -2))
    assert g.allclose(Polynomial([0, 0, 1 / 8]), 1e-15)
    for lam in (2, -2):
        assert iterate(DiffPower(1, lam), g, 2).allclose(f, 1e-15)


def test_diff_rk_preconditions():
    with pytest.raises(UsageError):
        diff_Rk(Polynomial([1]), 2, (1, 1), (2, 3))
    with pytest.raises(CapacityError):
        diff_Rk(Polynomial([1]), 100, (1, 2), (2, 3), degree_cap=150)
    # far powers stay finite in log space
    g = diff_Rk(Polynomial([1]), 200, (1, 2), (2, 3), degree_cap=512)
    assert np.isfinite(g.logmod[-1]) and g.logmod[-1] < -1000


@given(st.integers(0, 4), st.sampled_from([0.0, 0.25, 1 / 3, 0.5]))
def test_diff_convergence_along_returns(m, phase):
    rs = (1, 1, 2)
    lams = (1.5, 1.5 * np.exp(2j * np.pi * phase), 2.0)
    fam = [DiffPower(r, lam) for r, lam in zip(rs, lams)]
    f = Polynomial([0] * m + [1])
    angles = ratio_set(lams, power_groups(rs))
    nk = find_return_sequence(angles or (0.0,), (1e-9,) * 5, n_max=10**4).indices
    metric = Metric()

    def err(n):
        g = diff_Rk(f, n, rs, lams)
        return max(metric.distance(iterate(op, g, n), f) for op in fam)

    assert err(nk[4]) < err(nk[0])


def test_conv_rk_examples():
    sym = ConvolutionSymbol((0, 1))
    n = 7
    r = conv_Rk([ExponentialSum([(1, 2)])], n, [sym])
    assert r.terms[0][0] == pytest.approx(2.0**-n)
    back = iterate(Convolution(sym), r, n)
    assert back.terms[0][0] == pytest.approx(1, abs=1e-14)
    assert conv_Rk([ExponentialSum()], 3, [sym]).is_zero()


def test_conv_rk_unimodular_pair():
    s1, s2 = ConvolutionSymbol((0, 1)), ConvolutionSymbol((0, -1))
    E, zetas = equivalence_classes([s1, s2])
    assert E == [(0, 1), (0, 1)] and zetas[0, 1] == pytest.approx(-1)
    v = ExponentialSum([(1, 2)])
    for n in (3, 4):
        r = conv_Rk([v, v], n, [s1, s2])
        expected = 0.5 * 2.0**-n + 0.5 * (-2.0) ** -n
        got = r.terms[0][0] if len(r) else 0
        assert abs(got - expected) <= 1e-15
        y = iterate(Convolution(s1), r, n)
        got = y.terms[0][0] if len(y) else 0
        assert abs(got - (0.5 + 0.5 * (-1) ** n)) <= 1e-14


@given(st.integers(1, 60), st.floats(0, 1))
def test_conv_diagonal_exactness(n, t):
    s1, s2 = ConvolutionSymbol((0, 1)), ConvolutionSymbol((0, np.exp(2j * np.pi * t)))
    v = ExponentialSum([(1 + 1j, 1.5), (0.5, 2j)])
    r = conv_Rk([v, ExponentialSum()], n, [s1, s2])
    y = iterate(Convolution(s1), r, n)
    # tau = 2, so exactly half of v comes back
    assert np.allclose(np.sort_complex(y.coefficients), np.sort_complex(v.coefficients / 2), atol=1e-13)


def test_conv_region_violation_names_pair():
    with pytest.raises(UsageError, match=r"\(1, 2\)"):
        conv_Rk([ExponentialSum([(1, 2), (1, 0.5)])], 3, [ConvolutionSymbol((0, 1))])
    with pytest.raises(UsageError):
        conv_Rk(
            [ExponentialSum([(1, 1.5)]), ExponentialSum()],
            3,
            [ConvolutionSymbol((0, 1)), ConvolutionSymbol((0, 2))],
        )


def test_region_probe():
    rep = conv_region_probe([ConvolutionSymbol((0, 1))], (-2, 2), (-2, 2), 41)
    mod = np.abs(rep.points)
    assert np.all(mod[rep.u0] < 1) and np.all(mod[rep.ui[0]] > 1)
    assert rep.u0_points.size and rep.ui_points(0).size
    rep = conv_region_probe([ConvolutionSymbol((0, 1))], (-0.4, 0.4), (-0.4, 0.4), 11)
    assert rep.ui_empty == (True,) and not rep.u0_empty
    syms = [ConvolutionSymbol((0, 1)), ConvolutionSymbol((0, 2))]
    rep = conv_region_probe(syms, (-2, 2), (-2, 2), 41)
    z = rep.points
    assert not rep.ui[0].any()
    assert np.array_equal(rep.ui[1], (2 * np.abs(z) - 1 >= 1e-6) & (np.abs(z) >= 1e-6))
    with pytest.raises(UsageError):
        conv_region_probe(syms, resolution=0)
