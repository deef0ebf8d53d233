import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sunidyn.errors import UsageError
from sunidyn.operators import ShiftPower, WeightSequence
from sunidyn.shifts import (
    ShiftFamily,
    check_condition_iii,
    condition_iii_sweep,
    decide_d_unweighted,
    decide_s_unweighted,
    normalize_unweighted,
    power_groups,
)


def test_decisions_on_reference_families():
    assert decide_s_unweighted((1, 2, 2), (2, 3, -3))
    assert not decide_d_unweighted((1, 2, 2), (2, 3, -3))
    res = decide_s_unweighted((1, 1), (2, 4))
    assert not res and "(iii)" in res.reason
    res = decide_s_unweighted((1, 2), (1, 2))
    assert not res and "(i)" in res.reason
    res = decide_s_unweighted((1, 2), (3, 2))
    assert not res and "(ii)" in res.reason
    assert decide_d_unweighted((1, 2), (2, 3))


def test_validation():
    with pytest.raises(UsageError):
        decide_s_unweighted((2, 1), (2, 3))
    with pytest.raises(UsageError):
        decide_s_unweighted((1,), (2, 3))
    with pytest.raises(UsageError):
        decide_s_unweighted((1,), (0,))


def _reference_s(rs, lams):
    """Brute restatement: moduli > 1, strictly increasing across distinct
    powers, equal within a power."""
    mods = [abs(v) for v in lams]
    if min(mods) <= 1:
        return False
    for i in range(len(rs)):
        for j in range(len(rs)):
            if rs[i] < rs[j] and not mods[i] < mods[j]:
                return False
            if rs[i] == rs[j] and mods[i] != mods[j]:
                return False
    return True


@given(
    st.lists(
        st.tuples(st.integers(1, 4), st.sampled_from([0.5, 1.0, 1.5, 2.0, 3.0]), st.floats(0, 1)),
        min_size=1,
        max_size=5,
    )
)
def test_decide_s_matches_pairwise_restatement(members):
    members = sorted(members, key=lambda m: m[0])
    rs = [m[0] for m in members]
    lams = [m[1] * np.exp(2j * np.pi * m[2]) for m in members]
    assert bool(decide_s_unweighted(rs, lams)) == _reference_s(rs, [m[1] for m in members])


@given(st.lists(st.integers(1, 4), min_size=1, max_size=5))
def test_d_implies_s(rs):
    rs = sorted(rs)
    lams = [1.5 + k for k in range(len(rs))]
    if decide_d_unweighted(rs, lams):
        assert decide_s_unweighted(rs, lams)


def test_condition_iii_examples():
    fam = ShiftFamily.from_triples([(WeightSequence.constant(2), 1, 1)])
    assert check_condition_iii(fam, 10, 0, 50) == 4  # 2**4 > 10
    fam = ShiftFamily.from_triples(
        [(WeightSequence.constant(2), 1, 1), (WeightSequence.constant(2), 2, 1)]
    )
    assert check_condition_iii(fam, 4, 1, 50) == 3
    unit = ShiftFamily.from_triples([(WeightSequence.constant(1), 1, 1)])
    assert check_condition_iii(unit, 10, 0, 50) is None


def test_condition_iii_requires_increasing_powers():
    fam = ShiftFamily.from_triples(
        [(WeightSequence.constant(2), 2, 1), (WeightSequence.constant(2), 1, 1)]
    )
    with pytest.raises(UsageError):
        check_condition_iii(fam, 10, 0, 5)


def test_condition_iii_sweep_periodic_weights():
    w = WeightSequence.periodic([1, 4])
    fam = ShiftFamily.from_triples([(w, 1, 1)])
    sweep = condition_iii_sweep(fam, k_max=2, m_max=100)
    assert all(m is not None for m in sweep.values())


def test_normalize_and_groups():
    rs, lams = normalize_unweighted([ShiftPower(WeightSequence.constant(2), 2, 1j)])
    assert rs == [2] and lams[0] == pytest.approx(4j)
    with pytest.raises(UsageError):
        normalize_unweighted([ShiftPower(WeightSequence.periodic([1, 2]), 1, 1)])
    assert power_groups([2, 1, 2, 3]) == [1, 0, 1, 2]
