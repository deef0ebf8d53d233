"""Operator descriptions and their exact action on space elements.

Four operator kinds are supported:

``ShiftPower``   ``lam * B_a**r`` on sequences, ``(B_a x)_n = a_{n+1} x_{n+1}``
``DiffPower``    ``lam * D**r`` on polynomials / exponential sums
``Translation``  ``lam * tau_a``, ``(tau_a f)(z) = f(z + a)``, on polynomials
``Convolution``  ``Phi(D) = sum a_n D**n`` for a polynomial symbol ``Phi``

Powers ``lam**n`` and weight products are accumulated as log-modulus plus
argument, so iterates stay finite for the orbit lengths used in practice.
"""

from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy.special import gammaln

from . import _logpolar as lp
from .errors import UsageError
from .space import CoeffVector, ExponentialSum, Polynomial


def _log_factorial(n):
    return gammaln(np.asarray(n, dtype=float) + 1.0)


@dataclass(frozen=True)
class WeightSequence:
    """Generator for a bounded weight sequence ``a_1, a_2, ...`` (1-based).

    ``kind`` is ``"constant"`` (``values=(c,)``), ``"periodic"`` (``values``
    repeat with period ``len(values)``) or ``"explicit"`` (``values`` then
    ``tail`` forever).
    """

    kind: str = "constant"
    values: tuple = (1.0,)
    tail: complex = 1.0
    _cum: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        vals = tuple(complex(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "tail", complex(self.tail))
        if self.kind not in ("constant", "periodic", "explicit"):
            raise UsageError(f"unknown weight generator {self.kind!r}")
        if not vals:
            raise UsageError("weight generator needs at least one value")
        if self.kind == "constant" and len(vals) != 1:
            raise UsageError("constant weights take exactly one value")
        if any(v == 0 for v in vals) or (self.kind == "explicit" and self.tail == 0):
            raise UsageError("weights must be nonzero")
        lm, ph = lp.from_complex(vals)
        cum_lm = np.concatenate([[0.0], np.cumsum(lm)])
        cum_ph = np.concatenate([[0.0], np.cumsum(ph)])
        object.__setattr__(self, "_cum", (cum_lm, cum_ph))

    @classmethod
    def constant(cls, c=1.0):
        return cls("constant", (c,))

    @classmethod
    def periodic(cls, values):
        return cls("periodic", tuple(values))

    @classmethod
    def explicit(cls, values, tail):
        return cls("explicit", tuple(values), tail)

    @property
    def is_unit(self):
        return self.kind == "constant" and self.values[0] == 1

    @property
    def bound(self):
        mods = [abs(v) for v in self.values]
        if self.kind == "explicit":
            mods.append(abs(self.tail))
        return max(mods)

    def term(self, n):
        if n < 1:
            raise UsageError("weights are indexed from 1")
        if self.kind == "constant":
            return self.values[0]
        if self.kind == "periodic":
            return self.values[(n - 1) % len(self.values)]
        return self.values[n - 1] if n <= len(self.values) else self.tail

    def _cumulative(self, n):
        """(sum log|a_t|, sum arg a_t) over t = 1..n, for an int array n >= 0."""
        n = np.asarray(n, dtype=np.int64)
        cum_lm, cum_ph = self._cum
        L = len(self.values)
        if self.kind == "periodic":
            q, r = np.divmod(n, L)
            return q * cum_lm[L] + cum_lm[r], q * cum_ph[L] + cum_ph[r]
        # explicit (constant is handled in log_window)
        lt, pt = lp.scalar_polar(self.tail)
        head = np.minimum(n, L)
        extra = n - head
        return cum_lm[head] + extra * lt, cum_ph[head] + extra * pt

    def log_window(self, start, count):
        """log-polar product ``a_start * ... * a_{start+count-1}``.

        ``start`` may be an integer array; ``count`` is a nonnegative int.
        """
        start = np.asarray(start, dtype=np.int64)
        if count == 0:
            return np.zeros(start.shape), np.zeros(start.shape)
        if self.kind == "constant":
            l1, p1 = lp.scalar_polar(self.values[0])
            return np.full(start.shape, count * l1), np.full(start.shape, count * p1)
        hi_lm, hi_ph = self._cumulative(start + count - 1)
        lo_lm, lo_ph = self._cumulative(start - 1)
        return hi_lm - lo_lm, hi_ph - lo_ph


@dataclass(frozen=True)
class ConvolutionSymbol:
    """Polynomial symbol ``Phi(z) = sum coeffs[n] z**n`` with type constants."""

    coeffs: tuple
    A: float = 1.0
    B: float = 0.0

    def __post_init__(self):
        c = tuple(complex(v) for v in self.coeffs)
        if not c:
            raise UsageError("convolution symbol needs at least one coefficient")
        object.__setattr__(self, "coeffs", c)

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=complex)
        out = np.zeros(lam.shape, complex)
        for a in reversed(self.coeffs):
            out = out * lam + a
        return out if out.ndim else complex(out)


@dataclass(frozen=True)
class ShiftPower:
    weights: WeightSequence = field(default_factory=WeightSequence)
    r: int = 1
    lam: complex = 1.0

    def __post_init__(self):
        _check_power(self.r)
        object.__setattr__(self, "lam", _nonzero(self.lam))


@dataclass(frozen=True)
class DiffPower:
    r: int = 1
    lam: complex = 1.0

    def __post_init__(self):
        _check_power(self.r)
        object.__setattr__(self, "lam", _nonzero(self.lam))


@dataclass(frozen=True)
class Translation:
    a: complex = 1.0
    lam: complex = 1.0

    def __post_init__(self):
        object.__setattr__(self, "a", _nonzero(self.a, "translation step"))
        object.__setattr__(self, "lam", _nonzero(self.lam))


@dataclass(frozen=True)
class Convolution:
    symbol: ConvolutionSymbol


OperatorSpec = Union[ShiftPower, DiffPower, Translation, Convolution]


def _check_power(r):
    if int(r) != r or r < 1:
        raise UsageError(f"power r must be a positive integer, got {r!r}")


def _nonzero(v, what="scalar"):
    v = complex(v)
    if v == 0:
        raise UsageError(f"{what} must be nonzero")
    return v


def element_kind(op):
    """The element class an operator acts on (ExponentialSum also allowed
    for DiffPower and Convolution)."""
    return CoeffVector if isinstance(op, ShiftPower) else Polynomial


def _kind_error(op, x):
    return UsageError(f"{type(op).__name__} cannot act on {type(x).__name__}")


# -- iteration ----------------------------------------------------------------


def iterate(op, x, n):
    """``op**n`` applied to ``x`` (``n = 0`` returns ``x``)."""
    if n < 0 or int(n) != n:
        raise UsageError(f"iteration count must be a nonnegative integer, got {n!r}")
    n = int(n)
    if isinstance(op, ShiftPower):
        if not isinstance(x, CoeffVector):
            raise _kind_error(op, x)
        return x if n == 0 else _shift_iterate(op, x, n)
    if isinstance(x, ExponentialSum):
        if n == 0:
            return x
        if isinstance(op, DiffPower):
            ll, pl = lp.scalar_polar(op.lam)
            el, ep = lp.from_complex(x.exponents)
            return _exp_diagonal(x, n, ll + op.r * el, pl + op.r * ep)
        if isinstance(op, Convolution):
            return _exp_diagonal(x, n, *lp.poly_polar(op.symbol.coeffs, x.exponents))
        raise _kind_error(op, x)
    if not isinstance(x, Polynomial) or not isinstance(op, (DiffPower, Translation, Convolution)):
        raise _kind_error(op, x)
    if n == 0:
        return x
    if isinstance(op, DiffPower):
        return _diff_iterate(x, op.r * n, n, op.lam)
    if isinstance(op, Translation):
        return _translate(x, n * op.a, n, op.lam)
    y = x
    for _ in range(n):
        if y.is_zero():
            break
        y = _convolve_poly(op.symbol, y)
    return y


def apply(op, x):
    return iterate(op, x, 1)


def orbit(op, x, N):
    """``[op x, op^2 x, ..., op^N x]``."""
    if N < 1:
        raise UsageError("orbit length must be positive")
    out = []
    y = x
    for _ in range(N):
        y = apply(op, y)
        out.append(y)
    return out


def apply_operator_polynomial(P, op, x):
    """``P(op) x = sum_k P[k] * op**k x``."""
    P = list(P)
    if not P:
        raise UsageError("operator polynomial needs at least one coefficient")
    total = None
    y = x
    for k, c in enumerate(P):
        if k:
            y = apply(op, y)
        term = y * c
        total = term if total is None else total + term
    return total


def _power_polar(lam, n):
    """(n log|lam|, n arg lam) with the argument reduced mod 2*pi."""
    l1, p1 = lp.scalar_polar(lam)
    return n * l1, float(lp.wrap(n * p1))


def _shift_iterate(op, x, n):
    shift = op.r * n
    size = len(x) - shift
    if size <= 0:
        return CoeffVector()
    i = np.arange(size)
    wl, wp = op.weights.log_window(i + 1, shift)
    ll, pl = _power_polar(op.lam, n)
    return CoeffVector.from_polar(
        x.logmod[shift:] + wl + ll, x.phase[shift:] + wp + pl
    )


def _diff_iterate(f, order, n, lam):
    size = len(f) - order
    if size <= 0:
        return Polynomial((), f.degree_cap)
    k = np.arange(size)
    ll, pl = _power_polar(lam, n)
    lm = f.logmod[order:] + (_log_factorial(k + order) - _log_factorial(k)) + ll
    return Polynomial.from_polar(lm, f.phase[order:] + pl, degree_cap=f.degree_cap)


def _translate(f, a, n, lam):
    """``lam**n * f(z + a)`` via the binomial expansion of each monomial."""
    if f.is_zero():
        return f
    d = len(f)
    m = np.arange(d)[None, :]
    k = np.arange(d)[:, None]
    valid = m >= k
    la, pa = lp.scalar_polar(a)
    diff = np.where(valid, m - k, 0)
    log_binom = _log_factorial(m) - _log_factorial(k) - _log_factorial(diff)
    lm = np.where(valid, f.logmod[None, :] + log_binom + diff * la, -np.inf)
    ph = np.where(valid, f.phase[None, :] + diff * pa, 0.0)
    clm, cph = lp.lp_sum(lm, ph, axis=1)
    ll, pl = _power_polar(lam, n)
    return Polynomial.from_polar(clm + ll, cph + pl, degree_cap=f.degree_cap)


def _convolve_poly(symbol, f):
    """``sum_{j <= deg f} a_j f^(j)``; symbol coefficients beyond deg f are never read."""
    d = len(f)
    a = np.zeros(d, complex)
    used = symbol.coeffs[:d]
    a[: len(used)] = used
    alm, aph = lp.from_complex(a)
    j = np.arange(d)[None, :]
    k = np.arange(d)[:, None]
    src = k + j
    valid = src < d
    src_c = np.where(valid, src, 0)
    lm = np.where(
        valid,
        alm[None, :] + f.logmod[src_c] + _log_factorial(src_c) - _log_factorial(k),
        -np.inf,
    )
    ph = np.where(valid, aph[None, :] + f.phase[src_c], 0.0)
    clm, cph = lp.lp_sum(lm, ph, axis=1)
    return Polynomial.from_polar(clm, cph, degree_cap=f.degree_cap)


def _exp_diagonal(s, n, el, ep):
    """Scale term ``(c, lam)`` by ``eigenvalue(lam)**n``, the eigenvalue given
    as (log-modulus, argument) arrays."""
    with np.errstate(invalid="ignore"):
        lm = s.logmod + n * el
    lm = np.where(np.isfinite(el), lm, -np.inf)
    return ExponentialSum.from_polar(s.exponents, lm, s.phase + lp.wrap(n * ep))
