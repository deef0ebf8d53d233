"""Right-inverse-like maps ``R_k`` for shift, differentiation and convolution families.

Each map takes a target ``w`` and an index ``n`` and returns a small vector
whose ``n``-th iterates under every operator of the family land near ``w``.
All ``1/lam**n`` factors and factorial denominators are kept in log-polar
form.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .. import _logpolar as lp
from ..errors import CapacityError, DegenerateConstruction, UsageError
from ..shifts import TOL_MOD, decide_s_unweighted
from ..space import CoeffVector, ExponentialSum, Polynomial

ZETA_TOL = 1e-12
MARGIN_MIN = 1e-6


def _inv_power(lam, n):
    """(log, arg) of ``lam**-n``, argument reduced mod 2*pi."""
    l1, p1 = lp.scalar_polar(lam)
    return -(n * l1), -float(lp.wrap(n * p1))


def representatives(rs):
    """Index of the last member of each run of equal powers (``rs`` sorted)."""
    p = len(rs)
    return [j for j in range(p) if j == p - 1 or rs[j] != rs[j + 1]]


def shift_Rk(x, n, rs, lambdas):
    """Block vector ``(0_1, u_1, 0_2, u_2, ..., 0_d, u_d)`` for ``lam_j B^{r_j}``.

    One block per distinct power: block ``l`` starts at index
    ``r_{t_l} * n`` and holds ``x / lam_{t_l}**n``, where ``t_l`` is the last
    member of the ``l``-th run of equal powers.  Needs ``n >= len(x)``; for
    smaller ``n`` the zero vector is returned with a
    :class:`DegenerateConstruction` warning.
    """
    decision = decide_s_unweighted(rs, lambdas)
    if not decision:
        raise UsageError(f"shift family is not s-hypercyclic: {decision.reason}")
    N = len(x)
    if n < N:
        warnings.warn(
            f"n = {n} < N = {N}: R_k falls back to the zero vector", DegenerateConstruction
        )
        return CoeffVector()
    if N == 0:
        return CoeffVector()
    reps = representatives(list(rs))
    size = rs[reps[-1]] * n + N
    lm = np.full(size, -np.inf)
    ph = np.zeros(size)
    for t in reps:
        start = rs[t] * n
        il, ip = _inv_power(lambdas[t], n)
        lm[start : start + N] = x.logmod + il
        ph[start : start + N] = x.phase + ip
    return CoeffVector.from_polar(lm, ph)


def _tau(keys):
    return [sum(1 for k in keys if k == key) for key in keys]


def check_modulus_ties(rs, lambdas):
    for i in range(len(rs)):
        for j in range(i + 1, len(rs)):
            if rs[i] == rs[j] and abs(abs(lambdas[i]) - abs(lambdas[j])) > TOL_MOD:
                raise UsageError(
                    f"operators {i + 1} and {j + 1} share power r = {rs[i]} "
                    f"but |lambda| differs ({abs(lambdas[i]):.12g} vs {abs(lambdas[j]):.12g})"
                )


def diff_Rk(f, n, rs, lambdas, degree_cap=None):
    """``sum_l 1/tau(l) * lam_l**-n * z^(m + r_l n) / ((m+1)...(m + r_l n))``,
    extended linearly over the coefficients of ``f``.

    ``tau(l)`` is the number of members sharing the power ``r_l``.
    """
    rs = [int(r) for r in rs]
    lambdas = [complex(v) for v in lambdas]
    if len(rs) != len(lambdas) or not rs:
        raise UsageError("need matching, nonempty powers and scalars")
    if any(v == 0 for v in lambdas):
        raise UsageError("scalars must be nonzero")
    check_modulus_ties(rs, lambdas)
    cap = f.degree_cap if degree_cap is None else int(degree_cap)
    if f.is_zero():
        return Polynomial((), cap)
    size = len(f) + max(rs) * n
    if size - 1 > cap:
        raise CapacityError(
            f"R_k needs degree {size - 1} (deg f + r_max * n) but degree_cap is {cap}"
        )
    taus = _tau(rs)
    m = np.arange(len(f))
    rows_lm = np.full((len(rs), size), -np.inf)
    rows_ph = np.zeros((len(rs), size))
    for l, (r, lam) in enumerate(zip(rs, lambdas)):
        il, ip = _inv_power(lam, n)
        shift = r * n
        denom = gammaln(m + shift + 1.0) - gammaln(m + 1.0)
        rows_lm[l, m + shift] = f.logmod - math.log(taus[l]) + il - denom
        rows_ph[l, m + shift] = f.phase + ip
    lm, ph = lp.lp_sum(rows_lm, rows_ph, axis=0)
    return Polynomial.from_polar(lm, ph, degree_cap=cap)


def unimodular_ratio(sym_i, sym_j, tol=ZETA_TOL):
    """``zeta`` with ``|zeta| = 1`` and ``Phi_j = zeta * Phi_i`` coefficientwise, else None."""
    a = np.zeros(max(len(sym_i.coeffs), len(sym_j.coeffs)), complex)
    b = np.zeros_like(a)
    a[: len(sym_i.coeffs)] = sym_i.coeffs
    b[: len(sym_j.coeffs)] = sym_j.coeffs
    k = int(np.argmax(np.abs(a)))
    if a[k] == 0:
        return None
    zeta = b[k] / a[k]
    if abs(abs(zeta) - 1.0) > tol:
        return None
    scale = max(1.0, float(np.max(np.abs(a))))
    if np.max(np.abs(b - zeta * a)) > tol * scale:
        return None
    return complex(zeta)


def equivalence_classes(symbols):
    """``E_i`` (indices j with ``Phi_j`` a unimodular multiple of ``Phi_i``)
    and the ratios ``zeta_{ij}``."""
    p = len(symbols)
    E, zetas = [], {}
    for i in range(p):
        cls = []
        for j in range(p):
            z = 1.0 + 0j if i == j else unimodular_ratio(symbols[i], symbols[j])
            if z is not None:
                cls.append(j)
                zetas[i, j] = z
        E.append(tuple(cls))
    return E, zetas


def check_region(symbols, i, lam, E):
    """Raise unless ``lam`` lies in the open region where ``Phi_i`` strictly dominates."""
    vals = np.abs(np.array([s(lam) for s in symbols]))
    if not vals[i] > 1.0:
        raise UsageError(f"|Phi_{i + 1}({lam})| = {vals[i]:.6g} is not > 1")
    for j, v in enumerate(vals):
        if j not in E[i] and not v < vals[i]:
            raise UsageError(
                f"|Phi_{j + 1}({lam})| = {v:.6g} is not below |Phi_{i + 1}({lam})| = {vals[i]:.6g}"
            )


def conv_Rk(targets, n, symbols):
    """``sum_i 1/tau(i) * sum_l c_{i,l} Phi_i(lam_{i,l})**-n * e_{lam_{i,l}}``.

    ``targets[i]`` is an :class:`ExponentialSum` whose exponents lie where
    ``Phi_i`` has modulus > 1 and dominates every ``Phi_j`` that is not a
    unimodular multiple of it.
    """
    if len(targets) != len(symbols):
        raise UsageError(f"{len(targets)} targets for {len(symbols)} symbols")
    E, _ = equivalence_classes(symbols)
    exps, lms, phs = [], [], []
    for i, (v, sym) in enumerate(zip(targets, symbols)):
        tau = len(E[i])
        for l, lam in enumerate(v.exponents):
            try:
                check_region(symbols, i, complex(lam), E)
            except UsageError as exc:
                raise UsageError(f"target ({i + 1}, {l + 1}): {exc}") from None
        if v.is_zero():
            continue
        pl, pp = lp.poly_polar(sym.coeffs, v.exponents)
        exps.append(v.exponents)
        lms.append(v.logmod - math.log(tau) - n * pl)
        phs.append(v.phase - lp.wrap(n * pp))
    if not exps:
        return ExponentialSum()
    return ExponentialSum.from_polar(
        np.concatenate(exps), np.concatenate(lms), np.concatenate(phs)
    )


@dataclass(frozen=True)
class RegionReport:
    points: np.ndarray
    u0: np.ndarray
    ui: tuple

    @property
    def u0_points(self):
        return self.points[self.u0]

    def ui_points(self, i):
        return self.points[self.ui[i]]

    @property
    def u0_empty(self):
        return not self.u0.any()

    @property
    def ui_empty(self):
        return tuple(not m.any() for m in self.ui)


def conv_region_probe(symbols, re_range=(-2.0, 2.0), im_range=(-2.0, 2.0), resolution=41,
                      margin=MARGIN_MIN):
    """Classify grid points into the decay region ``U_0`` and the regions ``U_i``.

    A point counts only if every defining inequality holds with at least
    ``margin`` to spare; members of ``E_i`` tie with ``Phi_i`` by definition
    and are not compared.
    """
    if resolution < 1:
        raise UsageError("grid resolution must be positive")
    xs = np.linspace(re_range[0], re_range[1], resolution)
    ys = np.linspace(im_range[0], im_range[1], resolution)
    pts = (xs[None, :] + 1j * ys[:, None]).ravel()
    mods = np.abs(np.array([s(pts) for s in symbols]))
    E, _ = equivalence_classes(symbols)
    u0 = 1.0 - mods.max(axis=0) >= margin
    ui = []
    for i in range(len(symbols)):
        ok = mods[i] - 1.0 >= margin
        for j in range(len(symbols)):
            if j not in E[i]:
                ok &= mods[i] - mods[j] >= margin
        ui.append(ok)
    return RegionReport(pts, u0, tuple(ui))

