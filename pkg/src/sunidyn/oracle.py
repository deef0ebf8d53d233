"""Brute-force verification: orbit scans, certificate checks, transitivity probes.

Nothing here trusts the constructors.  Every iterate is recomputed from the
operator description, and every claimed error is re-measured with the
configured metric.
"""

import math
from dataclasses import dataclass, field
from typing import Any, NamedTuple

import numpy as np

from . import _logpolar as lp
from . import operators as ops
from .errors import UsageError
from .space import CoeffVector, ExponentialSum, Metric, Polynomial, zero_like


@dataclass(frozen=True)
class BallSpec:
    """Open ball ``{u : distance(u, center) < radius}``."""

    center: Any
    radius: float
    metric: Metric = field(default_factory=Metric)

    def __post_init__(self):
        if not self.radius > 0:
            raise UsageError("ball radius must be positive")

    def contains(self, u):
        return self.metric.distance(u, self.center) < self.radius


def _check_family(family, x):
    if not family:
        raise UsageError("family must be nonempty")
    for op in family:
        ok = isinstance(x, ops.element_kind(op)) or (
            isinstance(x, ExponentialSum) and isinstance(op, (ops.DiffPower, ops.Convolution))
        )
        if not ok:
            raise UsageError(f"{type(op).__name__} cannot act on {type(x).__name__}")


def joint_errors(family, x, target, n, metric=Metric()):
    """``[distance(T_j**n x, target) for each j]``."""
    return [metric.distance(ops.iterate(op, x, n), target) for op in family]


def best_simultaneous_index(family, x, target, N, metric=Metric()):
    """``(n*, score)`` minimising ``max_j distance(T_j**n x, target)`` over
    ``1 <= n <= N``; ties go to the smallest ``n``."""
    _check_family(family, x)
    if N < 1:
        raise UsageError("N must be at least 1")
    best_n, best = None, math.inf
    for n in range(1, int(N) + 1):
        its = [ops.iterate(op, x, n) for op in family]
        score = max(metric.distance(y, target) for y in its)
        if score < best:
            best_n, best = n, score
        if all(y.is_zero() for y in its):
            # zero is fixed by linear maps, so later scores only tie
            break
    return best_n, best


class CheckResult(NamedTuple):
    ok: bool
    errors: tuple
    anchor_error: float
    offending: int | None

    def __bool__(self):
        return self.ok


def brute_force_certificate_check(cert, family, target, eps, metric=Metric(), anchor=None):
    """Recompute every ``T_j**n x`` and compare with ``eps``.

    ``offending`` is the first failing operator index, or -1 when only the
    anchor distance fails.
    """
    x = cert.x
    _check_family(family, x)
    errors = tuple(joint_errors(family, x, target, cert.n, metric))
    ref = anchor if anchor is not None else zero_like(x)
    a_err = metric.distance(x, ref)
    for j, e in enumerate(errors):
        if not e < eps:
            return CheckResult(False, errors, a_err, j)
    if anchor is not None and not a_err < eps:
        return CheckResult(False, errors, a_err, -1)
    return CheckResult(True, errors, a_err, None)


# -- transitivity probe -------------------------------------------------------


class Witness(NamedTuple):
    u: Any
    n: int
    trial: int


def _random_like(rng, x, radius, metric):
    """Random element of the same kind as ``x`` with norm at most ``radius``."""
    if isinstance(x, CoeffVector):
        size = max(len(x), 1) + int(rng.integers(0, 4))
        v = CoeffVector(rng.standard_normal(size) + 1j * rng.standard_normal(size))
    elif isinstance(x, Polynomial):
        size = max(len(x), 1) + int(rng.integers(0, 4))
        v = Polynomial(rng.standard_normal(size) + 1j * rng.standard_normal(size), x.degree_cap)
    else:
        exps = x.exponents if len(x) else np.array([0j])
        v = ExponentialSum(list(zip(rng.standard_normal(len(exps)), exps)))
    nv = metric.norm(v)
    if nv == 0:
        return v * 0
    return v * (radius * float(rng.uniform(0.0, 1.0)) / nv)


def _right_inverse(op, v, n):
    """Some ``w`` with ``T**n w = v`` when a simple one exists, else None."""
    if isinstance(op, ops.ShiftPower) and isinstance(v, CoeffVector):
        shift = op.r * n
        N = len(v)
        if N == 0:
            return v
        i = np.arange(N)
        wl, wp = op.weights.log_window(i + 1, shift)
        ll, lph = ops._power_polar(op.lam, n)
        lm = np.concatenate([np.full(shift, -np.inf), v.logmod - wl - ll])
        ph = np.concatenate([np.zeros(shift), v.phase - wp - lph])
        return CoeffVector.from_polar(lm, ph)
    if isinstance(op, ops.DiffPower) and isinstance(v, Polynomial):
        from .constructors.rk import diff_Rk

        try:
            return diff_Rk(v, n, (op.r,), (op.lam,))
        except UsageError:
            return None
    if isinstance(op, ops.Translation) and isinstance(v, Polynomial):
        inv = complex(op.lam) ** -1
        try:
            return ops._translate(v, -n * op.a, n, inv)
        except UsageError:
            return None
    if isinstance(op, ops.Convolution) and isinstance(v, ExponentialSum):
        el, ep = lp.poly_polar(op.symbol.coeffs, v.exponents)
        if not np.all(np.isfinite(el)):
            return None
        return ops._exp_diagonal(v, n, -el, -ep)
    return None


def transitivity_probe(family, U, V, N, trials, seed, metric=None):
    """Search for ``u`` in ``U`` and ``n <= N`` with ``T_j**n u`` in ``V`` for every ``j``.

    Trial ``t`` draws from ``numpy.random.default_rng([seed, t])``: a random
    point of ``U``, plus for a random ``n`` a correction that steers one
    operator (or the average of all of them) onto ``V``'s center.  Every
    candidate is checked directly against both balls.  None is evidence, not
    proof, that the family is not transitive for this pair.
    """
    if trials < 1 or N < 1:
        raise UsageError("need trials >= 1 and N >= 1")
    metric = metric or U.metric
    _check_family(family, U.center)
    p = len(family)
    for t in range(int(trials)):
        rng = np.random.default_rng([int(seed), t])
        base = U.center + _random_like(rng, U.center, 0.5 * U.radius, metric)
        n_try = int(rng.integers(1, int(N) + 1))
        mode = int(rng.integers(0, p + 1))
        chosen = family if mode == p else [family[mode]]
        lifts = []
        for op in chosen:
            resid = V.center - ops.iterate(op, base, n_try)
            w = _right_inverse(op, resid, n_try)
            if w is None:
                lifts = None
                break
            lifts.append(w)
        u = base
        if lifts:
            total = lifts[0]
            for w in lifts[1:]:
                total = total + w
            u = base + total * (1.0 / len(lifts))
        try:
            inside = U.contains(u)
        except UsageError:
            inside = False
        if not inside:
            u = base
        for n in range(1, int(N) + 1):
            if all(V.contains(ops.iterate(op, u, n)) for op in family):
                return Witness(u, n, t)
    return None
