"""Simultaneous-approximation certificates.

A certificate is a vector ``x`` and an index ``n`` such that ``x`` is within
``eps`` of the anchor and every ``T_j**n x`` is within ``eps`` of the common
target.  The vector is assembled as ``x = anchor + R_k(target)`` with the
family-specific ``R_k`` maps; candidate indices come from simultaneous
return times of the unimodular ratios that the construction leaves behind.
Every candidate is re-verified by the oracle before it is returned.
"""

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .. import operators as ops
from ..dirichlet import find_return, ratio_set
from ..errors import BudgetExhausted, CapacityError, UsageError
from ..oracle import brute_force_certificate_check
from ..shifts import decide_s_unweighted, normalize_unweighted, power_groups
from ..space import ExponentialSum, Metric, zero_like
from .rk import check_modulus_ties, conv_Rk, diff_Rk, equivalence_classes, shift_Rk
from .runge import translation_construct, translation_n0

MAX_ATTEMPTS = 200


@dataclass(frozen=True)
class ApproxRequest:
    family: tuple
    target: Any
    eps: float
    budget: int
    anchor: Any = None
    metric: Metric = field(default_factory=Metric)
    degree: int = 30
    max_attempts: int = MAX_ATTEMPTS

    def __post_init__(self):
        fam = tuple(self.family)
        object.__setattr__(self, "family", fam)
        if not fam:
            raise UsageError("family must be nonempty")
        if len({type(op) for op in fam}) != 1:
            raise UsageError("family must consist of operators of one kind")
        if not self.eps > 0:
            raise UsageError("eps must be positive")
        if self.budget < 1:
            raise UsageError("budget must be a positive integer")

    @property
    def kind(self):
        return type(self.family[0])


@dataclass(frozen=True)
class ApproxCertificate:
    x: Any
    n: int
    per_op_error: tuple
    anchor_error: float


@dataclass(frozen=True)
class CriterionInstance:
    """Return times and the family they serve; ``rk_kind`` names the construction."""

    nk: tuple
    family: tuple
    rk_kind: str

    def __post_init__(self):
        nk = tuple(int(n) for n in self.nk)
        if any(b <= a for a, b in zip(nk, nk[1:])):
            raise UsageError("return times must be strictly increasing")
        object.__setattr__(self, "nk", nk)


def _anchor(req, target):
    return zero_like(target) if req.anchor is None else req.anchor


def _next_return(angles, tol, n_min, n_max):
    """Smallest ``n >= n_min`` where every angle is within ``tol`` of returning."""
    if n_min > n_max:
        return None
    if not angles:
        return n_min
    return find_return(angles, tol, n_min, n_max)


def _search(req, target, anchor, angles, n_start, build, step_tol):
    """Walk candidate indices from ``n_start``; return the first verified certificate."""
    best = None
    n = max(1, int(n_start))
    if n > req.budget:
        # nothing can pass; still scan from 1 so a partial result is reported
        n = 1
    for _ in range(req.max_attempts):
        n = _next_return(angles, step_tol, n, req.budget)
        if n is None:
            break
        try:
            x = build(n)
        except CapacityError as exc:
            if best is None:
                raise BudgetExhausted(f"capacity reached before any certificate: {exc}") from None
            break
        chk = brute_force_certificate_check(
            ApproxCertificate(x, n, (), 0.0), req.family, target, req.eps, req.metric, anchor
        )
        cert = ApproxCertificate(x, n, chk.errors, chk.anchor_error)
        if chk.ok:
            return cert
        if best is None or max(cert.per_op_error + (cert.anchor_error,)) < max(
            best.per_op_error + (best.anchor_error,)
        ):
            best = cert
        n += 1
    raise BudgetExhausted(
        f"no certificate with eps={req.eps:g} up to n={req.budget} "
        f"({req.max_attempts} attempts max)",
        partial=best,
    )


def _build_shift(req):
    target, anchor = req.target, _anchor(req, req.target)
    rs, lams = normalize_unweighted(req.family)
    order = sorted(range(len(rs)), key=lambda i: rs[i])
    rs_s = [rs[i] for i in order]
    lams_s = [lams[i] for i in order]
    decision = decide_s_unweighted(rs_s, lams_s)
    if not decision:
        raise UsageError(f"shift family is not s-hypercyclic: {decision.reason}")
    ynorm = req.metric.norm(target)
    if ynorm == 0:
        return _search(req, target, anchor, (), max(len(anchor), 1),
                       lambda n: anchor, 1.0)
    angles = ratio_set(lams, power_groups(rs))
    # the off-diagonal blocks decay like rho**n
    mods = [abs(v) for v in lams]
    rho = max(
        [1.0 / m for m in mods]
        + [mods[j] / mods[t] for j in range(len(rs)) for t in range(len(rs)) if rs[t] > rs[j]]
    )
    n_decay = math.ceil(math.log(req.eps / (2 * ynorm)) / math.log(rho)) if rho < 1 else 1
    r_min = min(rs)
    n_start = max(len(target), math.ceil(len(anchor) / r_min), n_decay, 1)
    return _search(
        req, target, anchor, angles, n_start,
        lambda n: anchor + shift_Rk(target, n, rs_s, lams_s),
        req.eps / (2 * ynorm),
    )


def _build_diff(req):
    target, anchor = req.target, _anchor(req, req.target)
    rs = [op.r for op in req.family]
    lams = [op.lam for op in req.family]
    check_modulus_ties(rs, lams)
    ynorm = max(req.metric.norm(target), 1e-300)
    angles = ratio_set(lams, power_groups(rs))
    n_start = max(1, math.ceil(len(anchor) / min(rs)))
    cap = target.degree_cap
    return _search(
        req, target, anchor, angles, n_start,
        lambda n: anchor + diff_Rk(target, n, rs, lams, cap),
        req.eps / (2 * ynorm),
    )


def split_by_region(target, symbols):
    """Assign each term of ``target`` to the class ``E_i`` of symbols of largest modulus.

    Returns per-symbol ExponentialSums (members of one class share the
    term) or raises when a term lies outside every ``U_i``.
    """
    E, _ = equivalence_classes(symbols)
    parts = [[] for _ in symbols]
    for c, lam in target.terms:
        vals = np.abs([s(lam) for s in symbols])
        i = int(np.argmax(vals))
        for j in E[i]:
            parts[j].append((c, lam))
    return [ExponentialSum(p) for p in parts]


def _build_conv(req):
    target = req.target
    if not isinstance(target, ExponentialSum):
        raise UsageError("convolution certificates need an ExponentialSum target")
    anchor = _anchor(req, target)
    symbols = [op.symbol for op in req.family]
    for c, lam in anchor.terms:
        if not max(abs(s(lam)) for s in symbols) < 1.0:
            raise UsageError(f"anchor exponent {lam} is not in the decay region U_0")
    parts = split_by_region(target, symbols)
    E, zetas = equivalence_classes(symbols)
    angles = tuple(sorted({float(np.angle(z) / (2 * np.pi)) % 1.0 for z in zetas.values()}))
    ynorm = max(req.metric.norm(target), 1e-300)
    return _search(
        req, target, anchor, angles, 1,
        lambda n: anchor + conv_Rk(parts, n, symbols),
        req.eps / (2 * ynorm),
    )


def _build_translation(req):
    target = req.target
    anchor = _anchor(req, target)
    r = req.metric.disk.radius
    if req.metric.disk.center != 0:
        raise UsageError("translation certificates use a disk centred at 0")
    groups = {}
    for j, op in enumerate(req.family):
        groups.setdefault(op.a, []).append(j)
    reps = []
    for a, members in groups.items():
        mods = {abs(req.family[j].lam) for j in members}
        if max(mods) - min(mods) > 1e-12:
            raise UsageError(f"operators with step {a} need scalars of equal modulus")
        reps.append((a, req.family[members[0]].lam))
    keys = list(groups)
    group_of = [keys.index(op.a) for op in req.family]
    angles = ratio_set([op.lam for op in req.family], group_of)
    n0 = translation_n0([a for a, _ in reps], r)
    ynorm = max(req.metric.norm(target), 1e-300)

    def build(n):
        fit = translation_construct(
            anchor, [(target, a, lam) for a, lam in reps], r, req.degree, n,
            samples=max(req.metric.samples // 2, 16), degree_cap=target.degree_cap,
        )
        return fit.poly

    return _search(req, target, anchor, angles, math.floor(n0) + 1, build,
                   req.eps / (2 * ynorm))


_DISPATCH = {
    ops.ShiftPower: _build_shift,
    ops.DiffPower: _build_diff,
    ops.Convolution: _build_conv,
    ops.Translation: _build_translation,
}


def build_certificate(req):
    """First verified certificate in increasing candidate ``n`` up to ``req.budget``.

    Raises :class:`BudgetExhausted` carrying the best unverified attempt when
    the budget, the attempt cap or the degree cap runs out.
    """
    for op in req.family:
        if not isinstance(req.target, ops.element_kind(op)) and not (
            isinstance(req.target, ExponentialSum) and isinstance(op, ops.Convolution)
        ):
            raise UsageError(
                f"{type(op).__name__} family needs a {ops.element_kind(op).__name__} target"
            )
    if req.anchor is not None and type(req.anchor) is not type(req.target):
        raise UsageError("anchor and target must be elements of the same kind")
    return _DISPATCH[req.kind](req)


def polynomial_image_request(req, cert, P, i):
    """Request anchored at ``P(T_i) x`` for a certificate vector ``x``.

    Succeeding on it shows universal vectors arbitrarily close to the
    polynomial image, finite-stage evidence for a dense subspace of
    universal vectors.
    """
    seed = ops.apply_operator_polynomial(P, req.family[i], cert.x)
    return ApproxRequest(
        req.family, req.target, req.eps, req.budget, seed, req.metric, req.degree,
        req.max_attempts,
    )

