"""Conversion between configuration models, domain objects and JSON values.

Outputs use the polar-log form ``{"mod_log": .., "arg": ..}`` for every
nonzero complex number so huge and tiny magnitudes survive; zero is written
as ``{"re": 0.0, "im": 0.0}``.
"""

import math

import numpy as np

from .. import operators as ops
from ..space import CoeffVector, DiskRegion, ExponentialSum, Metric, Polynomial, SpaceSpec
from ..errors import UsageError
from . import schema as S


def complex_in(v):
    if isinstance(v, S.PolarLog):
        if v.mod_log > 709:
            raise UsageError(f"scalar exp({v.mod_log}) does not fit in a double")
        return complex(math.exp(v.mod_log) * np.exp(1j * v.arg))
    if isinstance(v, S.Rect):
        return complex(v.re, v.im)
    return complex(v)


def polar_in(v):
    """(log-modulus, argument) without leaving log space."""
    if isinstance(v, S.PolarLog):
        return v.mod_log, v.arg
    z = complex_in(v)
    return (math.log(abs(z)), float(np.angle(z))) if z != 0 else (-math.inf, 0.0)


def _polar_arrays(values):
    pairs = [polar_in(v) for v in values]
    lm = np.array([p[0] for p in pairs], dtype=float)
    ph = np.array([p[1] for p in pairs], dtype=float)
    return lm, ph


def polar_out(lm, ph):
    if not np.isfinite(lm):
        return {"re": 0.0, "im": 0.0}
    return {"mod_log": float(lm), "arg": float(ph)}


def complex_out(z):
    z = complex(z)
    if z == 0:
        return {"re": 0.0, "im": 0.0}
    return {"mod_log": math.log(abs(z)), "arg": float(np.angle(z))}


def weights_in(w):
    vals = tuple(complex_in(v) for v in w.values)
    if w.kind == "constant":
        return ops.WeightSequence.constant(vals[0])
    if w.kind == "periodic":
        return ops.WeightSequence.periodic(vals)
    return ops.WeightSequence.explicit(vals, complex_in(w.tail))


def operator_in(m):
    if isinstance(m, S.ShiftOp):
        return ops.ShiftPower(weights_in(m.weights), m.r, complex_in(m.lam))
    if isinstance(m, S.DiffOp):
        return ops.DiffPower(m.r, complex_in(m.lam))
    if isinstance(m, S.TranslationOp):
        return ops.Translation(complex_in(m.a), complex_in(m.lam))
    return ops.Convolution(
        ops.ConvolutionSymbol(tuple(complex_in(c) for c in m.coeffs), m.A, m.B)
    )


def element_in(m, degree_cap=512):
    if isinstance(m, S.ExpSumElement):
        if not m.terms:
            return ExponentialSum()
        lm, ph = _polar_arrays([t.c for t in m.terms])
        lam = np.array([complex_in(t.lam) for t in m.terms])
        return ExponentialSum.from_polar(lam, lm, ph)
    lm, ph = _polar_arrays(m.coeffs)
    if m.type == "vector":
        return CoeffVector.from_polar(lm, ph)
    return Polynomial.from_polar(lm, ph, degree_cap=degree_cap)


def element_out(x):
    if isinstance(x, ExponentialSum):
        return {
            "type": "exp_sum",
            "terms": [
                {"c": polar_out(lm, ph), "lambda": complex_out(lam)}
                for lam, lm, ph in zip(x.exponents, x.logmod, x.phase)
            ],
        }
    kind = "vector" if isinstance(x, CoeffVector) else "polynomial"
    return {"type": kind, "coeffs": [polar_out(lm, ph) for lm, ph in zip(x.logmod, x.phase)]}


def element_from_json(d, degree_cap=512):
    """Inverse of :func:`element_out` (validated through the schema)."""
    from pydantic import TypeAdapter

    return element_in(TypeAdapter(S.ElementModel).validate_python(d), degree_cap)


def metric_in(cfg):
    space = SpaceSpec.c0() if cfg.space.kind == "c0" else SpaceSpec.ell(cfg.space.q or 2.0)
    disk = DiskRegion(complex_in(cfg.disk.center), cfg.disk.radius)
    return Metric(space, disk, cfg.samples)
