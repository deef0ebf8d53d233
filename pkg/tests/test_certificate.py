import warnings

import numpy as np
import pytest

from sunidyn.constructors.certificate import (
    ApproxCertificate,
    ApproxRequest,
    CriterionInstance,
    build_certificate,
    polynomial_image_request,
    split_by_region,
)
from sunidyn.errors import BudgetExhausted, IllConditioned, UsageError
from sunidyn.operators import (
    Convolution,
    ConvolutionSymbol,
    DiffPower,
    ShiftPower,
    Translation,
    WeightSequence,
    iterate,
)
from sunidyn.oracle import brute_force_certificate_check
from sunidyn.space import CoeffVector, DiskRegion, ExponentialSum, Metric, Polynomial

E0 = CoeffVector.basis(0)


def check(req, cert):
    anchor = req.anchor if req.anchor is not None else None
    return brute_force_certificate_check(cert, req.family, req.target, req.eps, req.metric, anchor)


def test_rolewicz_certificate():
    req = ApproxRequest([ShiftPower(lam=2)], E0, 1e-9, 10**5)
    cert = build_certificate(req)
    assert cert.per_op_error == (0.0,)
    assert cert.x.allclose(CoeffVector.basis(cert.n) * 2.0**-cert.n, 0)
    assert check(req, cert)


def test_parity_certificate():
    req = ApproxRequest([ShiftPower(lam=2), ShiftPower(lam=-2)], E0, 1e-6, 10**5)
    cert = build_certificate(req)
    assert cert.n % 2 == 0
    assert max(cert.per_op_error) < 1e-6 and cert.anchor_error < 1e-6
    bumped = ApproxCertificate(cert.x, cert.n + 1, (), 0.0)
    assert not check(req, bumped)


def test_non_unimodular_family_rejected():
    with pytest.raises(UsageError):
        build_certificate(ApproxRequest([ShiftPower(lam=2), ShiftPower(lam=4)], E0, 1e-3, 100))


def test_request_validation():
    with pytest.raises(UsageError):
        ApproxRequest([ShiftPower(lam=2), DiffPower()], E0, 1e-3, 10)
    with pytest.raises(UsageError):
        ApproxRequest([ShiftPower(lam=2)], E0, 0, 10)
    with pytest.raises(UsageError):
        build_certificate(ApproxRequest([ShiftPower(lam=2)], Polynomial([1]), 1e-3, 10))
    with pytest.raises(UsageError):
        build_certificate(
            ApproxRequest([ShiftPower(WeightSequence.periodic([1, 2]), 1, 2)], E0, 1e-3, 10)
        )


def test_budget_exhaustion_carries_best():
    req = ApproxRequest([ShiftPower(lam=2), ShiftPower(lam=-2)], E0, 1e-6, 5)
    with pytest.raises(BudgetExhausted) as info:
        build_certificate(req)
    assert info.value.partial is not None and info.value.partial.n <= 5


def test_anchor_and_mixed_powers():
    fam = [ShiftPower(lam=1.5), ShiftPower(r=2, lam=3j), ShiftPower(r=2, lam=-3)]
    anchor = CoeffVector([0.3, -1, 2j])
    target = CoeffVector([1, 2, 3])
    req = ApproxRequest(fam, target, 1e-6, 10**5, anchor)
    cert = build_certificate(req)
    assert check(req, cert)
    assert cert.n % 4 == 0  # ratio 3j / -3 = -i needs n divisible by 4


def test_diff_certificate():
    fam = [DiffPower(1, 1.5), DiffPower(1, -1.5), DiffPower(2, 2)]
    req = ApproxRequest(fam, Polynomial([1, 0, 1]), 1e-6, 10**4, Polynomial([0, 0.2]))
    cert = build_certificate(req)
    assert cert.n % 2 == 0 and check(req, cert)


def test_conv_certificate():
    fam = [Convolution(ConvolutionSymbol((0, 1))), Convolution(ConvolutionSymbol((0, 1j)))]
    target = ExponentialSum([(1, 2), (-0.5, 1.5j)])
    anchor = ExponentialSum([(0.1, 0.2)])
    req = ApproxRequest(fam, target, 1e-6, 10**4, anchor)
    cert = build_certificate(req)
    assert cert.n % 4 == 0 and check(req, cert)
    with pytest.raises(UsageError):
        build_certificate(ApproxRequest(fam, target, 1e-6, 10**4, ExponentialSum([(1, 3)])))


def test_split_by_region_shares_classes():
    syms = [ConvolutionSymbol((0, 1)), ConvolutionSymbol((0, -1)), ConvolutionSymbol((0, 0, 1))]
    parts = split_by_region(ExponentialSum([(1, 1.5), (1, 0.8)]), syms)
    assert [len(p) for p in parts] == [1, 1, 1]
    assert parts[0].exponents[0] == 0.8 and parts[2].exponents[0] == 1.5


def test_translation_certificate():
    fam = [Translation(1, 1), Translation(1, -1), Translation(-1j, 1.0)]
    metric = Metric(disk=DiskRegion(0, 0.25), samples=64)
    req = ApproxRequest(fam, Polynomial([0, 1]), 1e-2, 200, Polynomial([1]), metric)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IllConditioned)
        cert = build_certificate(req)
    assert cert.n % 2 == 0 and check(req, cert)
    with pytest.raises(UsageError):
        build_certificate(
            ApproxRequest([Translation(1, 1), Translation(1, 2)], Polynomial([1]), 1e-2, 50,
                          metric=metric)
        )


def test_polynomial_image_also_certifies():
    rng = np.random.default_rng(7)
    fam = [ShiftPower(lam=2), ShiftPower(lam=2j)]
    req = ApproxRequest(fam, CoeffVector([1, -1]), 1e-6, 10**5)
    cert = build_certificate(req)
    for _ in range(5):
        P = rng.standard_normal(int(rng.integers(1, 5)))
        P[-1] = P[-1] or 1.0
        i = int(rng.integers(0, 2))
        req2 = polynomial_image_request(req, cert, P, i)
        cert2 = build_certificate(req2)
        assert check(req2, cert2)


def test_certificate_n_is_reproduced_by_iteration():
    req = ApproxRequest([ShiftPower(lam=3)], CoeffVector([1, 2]), 1e-8, 10**4)
    cert = build_certificate(req)
    y = iterate(req.family[0], cert.x, cert.n)
    assert y.allclose(req.target, 1e-8)


def test_criterion_instance_requires_increasing():
    assert CriterionInstance((1, 3, 8), (), "shift").nk == (1, 3, 8)
    with pytest.raises(UsageError):
        CriterionInstance((3, 3), (), "shift")
