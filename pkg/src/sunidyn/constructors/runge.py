"""Runge-type polynomial fits on disjoint disks and the translation construction.

One polynomial is fitted by weighted least squares to piecewise targets on
the boundary circles of pairwise disjoint disks.  Columns are the monomials
``(z / rho)**k`` with ``rho`` the radius of a disk about the origin that
contains every piece, so the fitted coefficients stay comparable in size
and map back to ``z``-monomials by a diagonal rescale.
"""

import math
import warnings
from dataclasses import dataclass
from typing import Any, NamedTuple

import numpy as np

from ..errors import CapacityError, IllConditioned, UsageError
from ..space import DEFAULT_DEGREE_CAP, DiskRegion, Polynomial

COND_WARN = 1e12


@dataclass(frozen=True)
class FitPiece:
    """A disk and the function to match on it (a Polynomial or any callable)."""

    region: DiskRegion
    target: Any
    weight: float = 1.0


class RungeFit(NamedTuple):
    poly: Polynomial
    errors: tuple
    condition: float


def _evaluate(target, z):
    if isinstance(target, (int, float, complex)):
        return np.full(z.shape, complex(target))
    return np.asarray(target(z), dtype=complex)


def runge_fit(pieces, degree, boundary_samples=64, degree_cap=DEFAULT_DEGREE_CAP):
    """Least-squares fit of one polynomial of the given degree to every piece.

    Errors are sup errors measured on a verification grid with four times the
    fitting samples.  A condition estimate above ``COND_WARN`` triggers an
    :class:`IllConditioned` warning; the fit is still returned.
    """
    pieces = [p if isinstance(p, FitPiece) else FitPiece(*p) for p in pieces]
    if not pieces:
        raise UsageError("need at least one piece")
    if degree < 0:
        raise UsageError("degree must be nonnegative")
    if degree > degree_cap:
        raise CapacityError(f"degree {degree} exceeds degree_cap {degree_cap}")
    if boundary_samples < 8:
        raise UsageError("need at least 8 boundary samples")
    for i, a in enumerate(pieces):
        for j in range(i + 1, len(pieces)):
            if not a.region.disjoint_from(pieces[j].region):
                raise UsageError(f"disks {i + 1} and {j + 1} overlap")
    rho = max(abs(p.region.center) + p.region.radius for p in pieces)
    k = np.arange(degree + 1)
    rows, rhs = [], []
    for p in pieces:
        z = p.region.boundary(boundary_samples)
        rows.append(p.weight * (z / rho)[:, None] ** k[None, :])
        rhs.append(p.weight * _evaluate(p.target, z))
    A = np.vstack(rows)
    b = np.concatenate(rhs)
    norms = np.linalg.norm(A, axis=0)
    norms[norms == 0] = 1.0
    coef, _, _, sv = np.linalg.lstsq(A / norms, b, rcond=None)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else math.inf
    if cond > COND_WARN:
        warnings.warn(f"least-squares system condition estimate {cond:.3g}", IllConditioned)
    poly = Polynomial(coef / norms / rho**k, degree_cap)
    errors = []
    for p in pieces:
        z = p.region.boundary(4 * boundary_samples)
        errors.append(float(np.max(np.abs(poly(z) - _evaluate(p.target, z)))))
    return RungeFit(poly, tuple(errors), cond)


def translation_n0(bs, r):
    """``max_{i != l} 2r/|b_i - b_l| + max_l 2r/|b_l|``."""
    bs = [complex(b) for b in bs]
    pair = [2 * r / abs(bi - bl) for i, bi in enumerate(bs) for bl in bs[i + 1 :]]
    return (max(pair) if pair else 0.0) + max(2 * r / abs(b) for b in bs)


class TranslationFit(NamedTuple):
    poly: Polynomial
    anchor_error: float
    target_errors: tuple
    condition: float


def translation_construct(h, targets, r, degree, n, samples=64, degree_cap=DEFAULT_DEGREE_CAP):
    """Polynomial ``f`` close to ``h`` on ``B(0, r)`` with ``mu_l**n f(z + n b_l)``
    close to ``g_l`` on ``B(0, r)`` for every ``(g_l, b_l, mu_l)`` in ``targets``.

    The piece on ``B(n b_l, r)`` carries weight ``1 + |mu_l|**n`` so that its
    error, once multiplied back by ``|mu_l|**n``, is controlled like the
    others.  Errors are measured directly on the verification grid.
    """
    if not r > 0:
        raise UsageError("radius must be positive")
    if not targets:
        raise UsageError("need at least one translation target")
    bs = [complex(b) for _, b, _ in targets]
    mus = [complex(m) for _, _, m in targets]
    if any(b == 0 for b in bs):
        raise UsageError("translation steps must be nonzero")
    if len(set(bs)) != len(bs):
        raise UsageError("translation steps must be distinct (equal steps give coinciding disks)")
    if any(m == 0 for m in mus):
        raise UsageError("scalars must be nonzero")
    n0 = translation_n0(bs, r)
    if not n > n0:
        raise UsageError(f"n = {n} too small: disjoint disks need n > n_0 = {n0:.6g}")
    pieces = [FitPiece(DiskRegion(0j, r), h)]
    for (g, b, mu) in targets:
        lmu, amu = math.log(abs(mu)), float(np.angle(mu))
        scale = np.exp(-n * lmu - 1j * ((n * amu) % (2 * math.pi)))
        shift = n * complex(b)
        pieces.append(
            FitPiece(
                DiskRegion(shift, r),
                lambda z, g=g, s=shift, c=scale: c * _evaluate(g, z - s),
                1.0 + math.exp(min(n * lmu, 700.0)),
            )
        )
    fit = runge_fit(pieces, degree, samples, degree_cap)
    f = fit.poly
    z = DiskRegion(0j, r).boundary(4 * samples)
    anchor_err = float(np.max(np.abs(f(z) - _evaluate(h, z))))
    errs = []
    for (g, b, mu) in targets:
        lmu, amu = math.log(abs(mu)), float(np.angle(mu))
        val = np.exp(n * lmu + 1j * ((n * amu) % (2 * math.pi))) * f(z + n * complex(b))
        errs.append(float(np.max(np.abs(val - _evaluate(g, z)))))
    return TranslationFit(f, anchor_err, tuple(errs), fit.condition)
