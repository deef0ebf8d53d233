"""Space elements, norms and distances.

Three element kinds are used throughout:

* :class:`CoeffVector` -- finitely supported sequences, the vectors that
  backward shifts act on (``c_0`` or ``l_q``);
* :class:`Polynomial` -- truncated entire functions, acted on by
  differentiation, translation and convolution operators;
* :class:`ExponentialSum` -- finite sums ``sum c * exp(lam * z)``, the
  eigenbasis of convolution operators.

Coefficients are stored in log-polar form (see ``_logpolar``) so values far
outside the double range survive orbit computations.  Sup norms of entire
functions are taken over the boundary circle of one closed disk.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.special import gammaln

from . import _logpolar as lp
from .errors import CapacityError, UsageError

DEFAULT_DEGREE_CAP = 512


@dataclass(frozen=True)
class SpaceSpec:
    kind: str = "ellq"
    q: float | None = 2.0

    def __post_init__(self):
        if self.kind not in ("c0", "ellq"):
            raise UsageError(f"unknown sequence space {self.kind!r}")
        if self.kind == "ellq":
            if self.q is None or not self.q >= 1:
                raise UsageError(f"l_q needs q >= 1, got {self.q!r}")
        elif self.q is not None:
            object.__setattr__(self, "q", None)

    @classmethod
    def c0(cls):
        return cls("c0", None)

    @classmethod
    def ell(cls, q=2.0):
        return cls("ellq", float(q))


@dataclass(frozen=True)
class DiskRegion:
    center: complex = 0j
    radius: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        if not self.radius > 0:
            raise UsageError(f"disk radius must be positive, got {self.radius}")

    def boundary(self, samples):
        k = np.arange(samples)
        return self.center + self.radius * np.exp(2j * np.pi * k / samples)

    def disjoint_from(self, other):
        return abs(self.center - other.center) > self.radius + other.radius


class _Coeffs:
    """Immutable coefficient list indexed from 0, implicit zeros beyond it."""

    __slots__ = ("_lm", "_ph")

    def __init__(self, coeffs=()):
        c = np.asarray(coeffs, dtype=complex).ravel()
        if c.size:
            lm, ph = lp.from_complex(c)
        else:
            lm, ph = np.empty(0), np.empty(0)
        self._set(lm, ph)

    def _set(self, lm, ph):
        n = lp.trim_length(lm)
        lm = np.array(lm[:n], dtype=float)
        ph = np.array(lp.wrap(ph[:n]), dtype=float)
        ph[~np.isfinite(lm)] = 0.0
        if np.any(np.isnan(lm)) or np.any(lm == np.inf):
            raise UsageError("coefficient overflow: non-finite log-modulus")
        lm.flags.writeable = False
        ph.flags.writeable = False
        self._lm, self._ph = lm, ph

    def _new(self, lm, ph):
        obj = object.__new__(type(self))
        obj._copy_config(self)
        obj._set(lm, ph)
        return obj

    def _copy_config(self, other):
        pass

    @classmethod
    def from_polar(cls, logmod, phase, **kwargs):
        """Build from explicit log-moduli and arguments."""
        obj = object.__new__(cls)
        obj._init_config(**kwargs)
        obj._set(np.asarray(logmod, dtype=float), np.asarray(phase, dtype=float))
        return obj

    def _init_config(self, **kwargs):
        if kwargs:
            raise TypeError(f"unexpected arguments {sorted(kwargs)}")

    @property
    def logmod(self):
        return self._lm

    @property
    def phase(self):
        return self._ph

    @property
    def coeffs(self):
        return lp.to_complex(self._lm, self._ph)

    def __len__(self):
        return len(self._lm)

    def __getitem__(self, i):
        if i < 0:
            raise IndexError(i)
        if i >= len(self._lm):
            return 0j
        return complex(lp.to_complex(self._lm[i], self._ph[i]))

    def is_zero(self):
        return len(self._lm) == 0

    def _binary(self, other, sign):
        if type(other) is not type(self):
            return NotImplemented
        n = max(len(self), len(other))
        a = lp.pad(self._lm, self._ph, n)
        b = lp.pad(other._lm, other._ph, n)
        return self._new(*lp.combine(a[0], a[1], b[0], b[1], sign))

    def __add__(self, other):
        return self._binary(other, 1.0)

    def __sub__(self, other):
        return self._binary(other, -1.0)

    def __neg__(self):
        return self.scale_polar(0.0, np.pi)

    def scale_polar(self, logmod, phase):
        """Multiply every coefficient by ``exp(logmod + i*phase)``."""
        return self._new(self._lm + logmod, self._ph + phase)

    def __mul__(self, c):
        if isinstance(c, (int, float, complex, np.number)):
            return self.scale_polar(*lp.scalar_polar(c))
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    __hash__ = None

    def allclose(self, other, atol=1e-12):
        n = max(len(self), len(other))
        a = np.zeros(n, complex)
        b = np.zeros(n, complex)
        a[: len(self)] = self.coeffs
        b[: len(other)] = other.coeffs
        return bool(np.allclose(a, b, rtol=0, atol=atol))

    def __repr__(self):
        return f"{type(self).__name__}({np.array2string(self.coeffs, precision=6)})"


class CoeffVector(_Coeffs):
    """Finitely supported element of ``c_0`` or ``l_q``."""

    __slots__ = ()

    @classmethod
    def basis(cls, n):
        c = np.zeros(n + 1, complex)
        c[n] = 1
        return cls(c)


class Polynomial(_Coeffs):
    """``sum coeffs[m] * z**m`` with ``degree <= degree_cap``."""

    __slots__ = ("degree_cap",)

    def __init__(self, coeffs=(), degree_cap=DEFAULT_DEGREE_CAP):
        self.degree_cap = int(degree_cap)
        super().__init__(coeffs)

    def _init_config(self, degree_cap=DEFAULT_DEGREE_CAP):
        self.degree_cap = int(degree_cap)

    def _copy_config(self, other):
        self.degree_cap = other.degree_cap

    def _set(self, lm, ph):
        if self.degree_cap < 1:
            raise UsageError("degree_cap must be a positive integer")
        n = lp.trim_length(lm)
        if n - 1 > self.degree_cap:
            raise CapacityError(
                f"polynomial degree {n - 1} exceeds degree_cap {self.degree_cap}"
            )
        super()._set(lm, ph)

    @property
    def degree(self):
        return len(self) - 1

    def log_abs_values(self, z):
        """log|f(z)| for an array of points (``-inf`` where f vanishes)."""
        return _poly_log_values(self, z)[0]

    def __call__(self, z):
        lm, ph = _poly_log_values(self, z)
        out = lp.to_complex(lm, ph)
        return out if np.ndim(z) else complex(out[0])


def _poly_log_values(f, z):
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if f.is_zero():
        return np.full(z.shape, -np.inf), np.zeros(z.shape)
    m = np.arange(len(f))[:, None]
    with np.errstate(divide="ignore"):
        logz = np.log(np.abs(z))[None, :]
    with np.errstate(invalid="ignore"):
        mlog = np.where(m == 0, 0.0, m * logz)
    lm = f.logmod[:, None] + mlog
    ph = f.phase[:, None] + m * np.angle(z)[None, :]
    return lp.lp_sum(lm, ph, axis=0)


class ExponentialSum:
    """``sum_l c_l * exp(lam_l * z)`` with pairwise distinct exponents."""

    __slots__ = ("_exps", "_lm", "_ph")

    def __init__(self, terms=()):
        terms = list(terms)
        if terms:
            c = np.array([t[0] for t in terms], dtype=complex)
            lam = np.array([t[1] for t in terms], dtype=complex)
            # merge in plain complex arithmetic so c - c cancels exactly
            order, inverse = _first_occurrence_groups(lam)
            merged = np.zeros(len(order), complex)
            np.add.at(merged, inverse, c)
            lam = lam[order]
            lm, ph = lp.from_complex(merged)
        else:
            lam, lm, ph = np.empty(0, complex), np.empty(0), np.empty(0)
        self._set(lam, lm, ph)

    @classmethod
    def from_polar(cls, exponents, logmod, phase, signs=None):
        obj = object.__new__(cls)
        obj._set(
            np.asarray(exponents, dtype=complex).ravel(),
            np.asarray(logmod, dtype=float).ravel(),
            np.asarray(phase, dtype=float).ravel(),
            signs,
        )
        return obj

    def _set(self, lam, lm, ph, signs=None):
        order, inverse = _first_occurrence_groups(lam)
        k = len(order)
        if k < len(lam):
            glm = np.full((k, len(lam)), -np.inf)
            gph = np.zeros((k, len(lam)))
            gsg = np.ones((k, len(lam)))
            cols = np.arange(len(lam))
            glm[inverse, cols] = lm
            gph[inverse, cols] = ph
            if signs is not None:
                gsg[inverse, cols] = signs
            lm, ph = lp.lp_sum(glm, gph, axis=1, signs=gsg)
            lam = lam[order]
        elif signs is not None:
            ph = np.where(np.asarray(signs) < 0, ph + np.pi, ph)
        keep = np.isfinite(lm)
        lam, lm, ph = lam[keep], np.array(lm[keep], float), np.array(lp.wrap(ph[keep]), float)
        for a in (lam, lm, ph):
            a.flags.writeable = False
        self._exps, self._lm, self._ph = lam, lm, ph

    @property
    def exponents(self):
        return self._exps

    @property
    def logmod(self):
        return self._lm

    @property
    def phase(self):
        return self._ph

    @property
    def coefficients(self):
        return lp.to_complex(self._lm, self._ph)

    @property
    def terms(self):
        return list(zip(self.coefficients.tolist(), self._exps.tolist()))

    def __len__(self):
        return len(self._exps)

    def is_zero(self):
        return len(self._exps) == 0

    def _binary(self, other, sign):
        if not isinstance(other, ExponentialSum):
            return NotImplemented
        return ExponentialSum.from_polar(
            np.concatenate([self._exps, other._exps]),
            np.concatenate([self._lm, other._lm]),
            np.concatenate([self._ph, other._ph]),
            signs=np.concatenate([np.ones(len(self)), np.full(len(other), sign)]),
        )

    def __add__(self, other):
        return self._binary(other, 1.0)

    def __sub__(self, other):
        return self._binary(other, -1.0)

    def __neg__(self):
        return self.scale_polar(0.0, np.pi)

    def scale_polar(self, logmod, phase):
        return ExponentialSum.from_polar(self._exps, self._lm + logmod, self._ph + phase)

    def __mul__(self, c):
        if isinstance(c, (int, float, complex, np.number)):
            return self.scale_polar(*lp.scalar_polar(c))
        return NotImplemented

    __rmul__ = __mul__

    def log_abs_values(self, z):
        return _exp_sum_log_values(self, z)[0]

    def __call__(self, z):
        lm, ph = _exp_sum_log_values(self, z)
        out = lp.to_complex(lm, ph)
        return out if np.ndim(z) else complex(out[0])

    def __eq__(self, other):
        if not isinstance(other, ExponentialSum):
            return NotImplemented
        return np.array_equal(self._exps, other._exps) and np.array_equal(
            self.coefficients, other.coefficients
        )

    __hash__ = None

    def __repr__(self):
        inner = ", ".join(f"({c:.6g}, {lam:.6g})" for c, lam in self.terms)
        return f"ExponentialSum([{inner}])"


def _first_occurrence_groups(lam):
    """Indices of first occurrences and, per entry, its group number."""
    seen = {}
    order = []
    inverse = np.empty(len(lam), dtype=int)
    for i, v in enumerate(lam.tolist()):
        g = seen.get(v)
        if g is None:
            g = seen[v] = len(order)
            order.append(i)
        inverse[i] = g
    return np.array(order, dtype=int), inverse


def _exp_sum_log_values(s, z):
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if s.is_zero():
        return np.full(z.shape, -np.inf), np.zeros(z.shape)
    w = s.exponents[:, None] * z[None, :]
    return lp.lp_sum(s.logmod[:, None] + w.real, s.phase[:, None] + w.imag, axis=0)


# -- norms --------------------------------------------------------------------


def seq_norm(x, space=SpaceSpec()):
    """sup-norm on ``c_0``, ``(sum |x_n|^q)^(1/q)`` on ``l_q``."""
    if space.kind == "c0":
        return float(np.exp(lp.log_sup(x.logmod)))
    return float(np.exp(lp.log_lq(x.logmod, space.q)))


def _check_samples(samples):
    if samples < 8:
        raise UsageError(f"need at least 8 boundary samples, got {samples}")


def poly_sup_norm(f, disk=DiskRegion(), samples=128):
    """Max of ``|f|`` over ``samples`` equispaced points of the disk's boundary."""
    _check_samples(samples)
    if f.is_zero():
        return 0.0
    return float(np.exp(np.max(f.log_abs_values(disk.boundary(samples)))))


def exp_sum_sup_norm(s, disk=DiskRegion(), samples=128):
    _check_samples(samples)
    if s.is_zero():
        return 0.0
    return float(np.exp(np.max(s.log_abs_values(disk.boundary(samples)))))


def exp_sum_eval(s, z):
    return s(complex(z))


class Truncation(NamedTuple):
    poly: Polynomial
    error_bound: float


def exp_sum_truncate(s, degree, radius=1.0, degree_cap=DEFAULT_DEGREE_CAP):
    """Taylor polynomial of degree ``degree`` of an exponential sum.

    Coefficient ``m`` is ``sum_l c_l * lam_l**m / m!``.  ``error_bound`` is
    the Lagrange remainder bound on the closed disk of the given radius.
    """
    if degree > degree_cap:
        raise CapacityError(f"degree {degree} exceeds degree_cap {degree_cap}")
    if degree < 0:
        raise UsageError("degree must be nonnegative")
    if s.is_zero():
        return Truncation(Polynomial((), degree_cap), 0.0)
    m = np.arange(degree + 1)[:, None]
    lam = s.exponents[None, :]
    with np.errstate(divide="ignore"):
        loglam = np.log(np.abs(lam))
    with np.errstate(invalid="ignore"):
        mlog = np.where(m == 0, 0.0, m * loglam)
    lm = s.logmod[None, :] + mlog - gammaln(m + 1.0)
    ph = s.phase[None, :] + m * np.angle(lam)
    clm, cph = lp.lp_sum(lm, ph, axis=1)
    poly = Polynomial.from_polar(clm, cph, degree_cap=degree_cap)
    a = np.abs(s.exponents) * radius
    cabs = np.exp(s.logmod)
    bound = float(np.sum(cabs * np.exp((degree + 1) * np.log(np.where(a > 0, a, 1.0))
                                      - gammaln(degree + 2.0) + a) * (a > 0)))
    return Truncation(poly, bound)


# -- metric -------------------------------------------------------------------


@dataclass(frozen=True)
class Metric:
    """One consistent distance for every element kind.

    Sequences use the norm of ``space``; entire functions use the boundary
    sup over ``disk`` with ``samples`` points.
    """

    space: SpaceSpec = field(default_factory=SpaceSpec)
    disk: DiskRegion = field(default_factory=DiskRegion)
    samples: int = 128

    def norm(self, x):
        if isinstance(x, CoeffVector):
            return seq_norm(x, self.space)
        if isinstance(x, Polynomial):
            return poly_sup_norm(x, self.disk, self.samples)
        if isinstance(x, ExponentialSum):
            return exp_sum_sup_norm(x, self.disk, self.samples)
        raise UsageError(f"not a space element: {type(x).__name__}")

    def distance(self, x, y):
        if type(x) is not type(y):
            raise UsageError(
                f"cannot compare {type(x).__name__} with {type(y).__name__}"
            )
        return self.norm(x - y)


def zero_like(x):
    if isinstance(x, Polynomial):
        return Polynomial((), x.degree_cap)
    return type(x)()
