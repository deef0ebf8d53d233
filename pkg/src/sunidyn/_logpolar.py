"""Coefficient arrays stored as (log-modulus, argument) pairs.

Orbit computations routinely multiply coefficients by factors like
``4**-10000`` or ``Phi(lam)**10000``.  Plain complex doubles under/overflow
long before that, so every element type keeps its coefficients in this form
and only converts to ``complex`` when a value is actually needed.  Zero is
``logmod == -inf``.
"""

import numpy as np

TWO_PI = 2.0 * np.pi
LOG2 = np.log(2.0)


def wrap(phase):
    """Reduce angles to [-pi, pi)."""
    return np.remainder(np.asarray(phase, dtype=float) + np.pi, TWO_PI) - np.pi


def from_complex(values):
    v = np.atleast_1d(np.asarray(values, dtype=complex))
    with np.errstate(divide="ignore"):
        lm = np.log(np.abs(v))
    ph = np.angle(v)
    ph[~np.isfinite(lm)] = 0.0
    return lm, ph


def to_complex(lm, ph):
    lm = np.asarray(lm, dtype=float)
    ph = np.asarray(ph, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        mod = np.exp(lm)
        return mod * np.cos(ph) + 1j * (mod * np.sin(ph))


def scalar_polar(c):
    """(log|c|, arg c) for a python/numpy complex scalar."""
    c = complex(c)
    if c == 0:
        return -np.inf, 0.0
    return float(np.log(abs(c))), float(np.angle(c))


def lp_sum(lm, ph, axis=-1, signs=None):
    """Sum of ``exp(lm) * exp(i*ph)`` along ``axis``, returned in log-polar form.

    Terms are rescaled by the largest modulus before summing, so sums of
    astronomically small or large numbers are as accurate as ordinary
    double-precision sums of numbers near 1.  ``signs`` (+1/-1, broadcast
    against ``lm``) negates terms without touching their phases.
    """
    lm = np.asarray(lm, dtype=float)
    ph = np.asarray(ph, dtype=float)
    m = np.max(lm, axis=axis, keepdims=True)
    finite = np.isfinite(m)
    shift = np.where(finite, m, 0.0)
    with np.errstate(invalid="ignore", under="ignore"):
        rel = np.exp(lm - shift)
    if signs is not None:
        rel = rel * signs
    s = np.sum(rel * np.cos(ph), axis=axis) + 1j * np.sum(rel * np.sin(ph), axis=axis)
    m = np.squeeze(m, axis=axis)
    finite = np.squeeze(finite, axis=axis)
    with np.errstate(divide="ignore"):
        out_lm = np.where(finite, np.squeeze(shift, axis=axis) + np.log(np.abs(s)), -np.inf)
    out_ph = np.where(np.isfinite(out_lm), np.angle(s), 0.0)
    return out_lm, out_ph


def combine(lm_a, ph_a, lm_b, ph_b, sign=1.0):
    """Elementwise ``a + sign*b`` for equal-length log-polar arrays.

    Subtraction is done on the rotated values directly (not by adding pi to
    the phase), so ``a - a`` is exactly zero.
    """
    lm_a = np.asarray(lm_a, dtype=float)
    lm_b = np.asarray(lm_b, dtype=float)
    m = np.maximum(lm_a, lm_b)
    finite = np.isfinite(m)
    shift = np.where(finite, m, 0.0)
    with np.errstate(invalid="ignore", under="ignore"):
        ra = np.exp(lm_a - shift)
        rb = np.exp(lm_b - shift)
    s = (ra * np.cos(ph_a) + sign * rb * np.cos(ph_b)) + 1j * (
        ra * np.sin(ph_a) + sign * rb * np.sin(ph_b)
    )
    with np.errstate(divide="ignore"):
        out_lm = np.where(finite, shift + np.log(np.abs(s)), -np.inf)
    out_ph = np.where(np.isfinite(out_lm), np.angle(s), 0.0)
    return out_lm, out_ph


def pad(lm, ph, length):
    n = len(lm)
    if n >= length:
        return lm, ph
    return (
        np.concatenate([lm, np.full(length - n, -np.inf)]),
        np.concatenate([ph, np.zeros(length - n)]),
    )


def trim_length(lm):
    nz = np.flatnonzero(np.isfinite(lm))
    return 0 if nz.size == 0 else int(nz[-1]) + 1


def log_sup(lm):
    """log of max modulus; -inf for the empty/zero array."""
    return float(np.max(lm)) if len(lm) else -np.inf


def log_lq(lm, q):
    """log of (sum |c|^q)^(1/q), computed with the usual max-shift."""
    if len(lm) == 0:
        return -np.inf
    m = float(np.max(lm))
    if not np.isfinite(m):
        return -np.inf
    with np.errstate(under="ignore"):
        s = np.sum(np.exp(q * (lm - m)))
    return m + np.log(s) / q


# -- compensated polynomial evaluation ----------------------------------------
# Double-double arithmetic (Dekker/Knuth error-free transforms).  Raising a
# symbol value to the n-th power multiplies its rounding error by n, so the
# symbol is evaluated to about 32 digits before taking log and argument.

_SPLIT = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a):
    t = _SPLIT * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_add(a, b):
    s, e = _two_sum(a[0], b[0])
    e = e + (a[1] + b[1])
    return _two_sum(s, e)


def _dd_mul_d(a, d):
    p, e = _two_prod(a[0], d)
    e = e + a[1] * d
    return _two_sum(p, e)


def _dd_neg(a):
    return -a[0], -a[1]


def poly_polar(coeffs, z):
    """(log|P(z)|, arg P(z)) for ``P = sum coeffs[k] z**k``, evaluated by a
    compensated Horner scheme; zeros give (-inf, 0)."""
    z = np.asarray(z, dtype=complex)
    coeffs = [complex(c) for c in coeffs]
    xr, xi = z.real, z.imag
    zero = np.zeros(z.shape)
    re, im = (zero, zero), (zero, zero)
    with np.errstate(over="ignore", invalid="ignore"):
        for a in reversed(coeffs):
            # (re + i im) * (xr + i xi) + a
            nre = _dd_add(_dd_mul_d(re, xr), _dd_neg(_dd_mul_d(im, xi)))
            nim = _dd_add(_dd_mul_d(re, xi), _dd_mul_d(im, xr))
            re = _dd_add(nre, (np.full(z.shape, a.real), zero))
            im = _dd_add(nim, (np.full(z.shape, a.imag), zero))
    bad = ~(np.isfinite(re[0]) & np.isfinite(im[0]) & np.isfinite(re[1]) & np.isfinite(im[1]))
    if np.any(bad):
        # Horner overflowed: sum the terms in log space instead
        lm, ph = _poly_polar_terms(coeffs, z)
        re = (np.where(bad, 0.0, re[0]), np.where(bad, 0.0, re[1]))
        im = (np.where(bad, 0.0, im[0]), np.where(bad, 0.0, im[1]))
        hl, hp = _dd_polar(re, im)
        return np.where(bad, lm, hl), np.where(bad, ph, hp)
    return _dd_polar(re, im)


def _poly_polar_terms(coeffs, z):
    ca_l, ca_p = from_complex(np.array(coeffs, dtype=complex))
    zl, zp = from_complex(z)
    k = np.arange(len(coeffs))[:, None]
    with np.errstate(invalid="ignore"):
        lm = ca_l[:, None] + np.where(k == 0, 0.0, k * zl[None, :])
    return lp_sum(lm, ca_p[:, None] + k * zp[None, :], axis=0)


def _dd_polar(re, im):
    """Log-polar form of a double-double complex value ``re + i im``."""
    # rescale by an exact power of two so the squares neither underflow nor overflow
    _, e = np.frexp(np.maximum(np.abs(re[0]), np.abs(im[0])))
    rh, rl = np.ldexp(re[0], -e), np.ldexp(re[1], -e)
    ih, il = np.ldexp(im[0], -e), np.ldexp(im[1], -e)
    s2h, s2l = _two_prod(rh, rh)
    t2h, t2l = _two_prod(ih, ih)
    sq = _dd_add((s2h, s2l + 2 * rh * rl), (t2h, t2l + 2 * ih * il))
    with np.errstate(divide="ignore", invalid="ignore"):
        lm = 0.5 * (np.log(sq[0]) + sq[1] / sq[0]) + e * LOG2
        ph = np.arctan2(ih, rh) + (il * rh - rl * ih) / sq[0]
    nz = sq[0] > 0
    lm = np.where(nz, lm, -np.inf)
    ph = np.where(nz, ph, 0.0)
    return lm, ph
