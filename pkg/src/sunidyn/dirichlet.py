"""Simultaneous return times for finite sets of unimodular scalars.

A scalar ``c = exp(2*pi*i*theta)`` has ``|c**n - 1| = 2|sin(pi * n*theta)|``.
Every finite set of such scalars admits indices ``n_1 < n_2 < ...`` along
which all of them tend to 1; here they are found by an exhaustive scan with
early exit, which is exact and deterministic for ranges up to ~1e7.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExhausted, UsageError

CHUNK = 1 << 16


@dataclass(frozen=True)
class UnimodularSet:
    """Scalars ``exp(2*pi*i*angle)``; angles are reduced into [0, 1)."""

    angles: tuple

    def __post_init__(self):
        a = tuple(float(t) % 1.0 for t in self.angles)
        if not a:
            raise UsageError("unimodular set must be nonempty")
        object.__setattr__(self, "angles", a)

    @classmethod
    def from_scalars(cls, scalars):
        return cls(tuple(np.angle(np.asarray(scalars, complex)) / (2 * np.pi)))


@dataclass(frozen=True)
class ReturnSequence:
    indices: tuple
    residuals: tuple


def residual(angles, n):
    """``max_j |exp(2*pi*i*n*angle_j) - 1|`` for an int or int array ``n``."""
    th = np.asarray(angles, dtype=float)[:, None]
    nn = np.atleast_1d(np.asarray(n, dtype=np.int64))[None, :]
    prod = nn * th
    frac = prod - np.round(prod)
    r = np.max(2.0 * np.abs(np.sin(np.pi * frac)), axis=0)
    return r if np.ndim(n) else float(r[0])


def _threads():
    try:
        return max(1, int(os.environ.get("SUNIDYN_THREADS", "1")))
    except ValueError:
        return 1


def _scan_chunk(angles, lo, hi, eps):
    n = np.arange(lo, hi + 1, dtype=np.int64)
    hits = np.flatnonzero(residual(angles, n) < eps)
    return int(n[hits[0]]) if hits.size else None


def find_return(uset, eps, n_min=1, n_max=10**6):
    """Smallest ``n`` in ``[n_min, n_max]`` with residual below ``eps``, else None.

    The range is scanned in chunks; with ``SUNIDYN_THREADS > 1`` a wave of
    consecutive chunks is scanned concurrently and the earliest hit wins, so
    the answer does not depend on the worker count.
    """
    if not isinstance(uset, UnimodularSet):
        uset = UnimodularSet(tuple(uset))
    if not eps > 0:
        raise UsageError("eps must be positive")
    if n_min < 1 or n_min > n_max:
        raise UsageError(f"need 1 <= n_min <= n_max, got [{n_min}, {n_max}]")
    angles = uset.angles
    workers = _threads()
    lo = int(n_min)
    if workers == 1:
        while lo <= n_max:
            hi = min(lo + CHUNK - 1, int(n_max))
            hit = _scan_chunk(angles, lo, hi, eps)
            if hit is not None:
                return hit
            lo = hi + 1
        return None
    with ThreadPoolExecutor(max_workers=workers) as pool:
        while lo <= n_max:
            bounds = []
            for _ in range(workers):
                if lo > n_max:
                    break
                hi = min(lo + CHUNK - 1, int(n_max))
                bounds.append((lo, hi))
                lo = hi + 1
            results = pool.map(lambda b: _scan_chunk(angles, b[0], b[1], eps), bounds)
            for hit in results:
                if hit is not None:
                    return hit
    return None


def default_schedule(stages=10, eps0=0.5):
    return tuple(eps0 / 2**k for k in range(stages))


def find_return_sequence(uset, eps_schedule=None, n_max=10**6):
    """Strictly increasing return times meeting a shrinking tolerance schedule.

    Raises :class:`BudgetExhausted` carrying the partial sequence if some
    stage finds nothing up to ``n_max``.
    """
    if not isinstance(uset, UnimodularSet):
        uset = UnimodularSet(tuple(uset))
    sched = default_schedule() if eps_schedule is None else tuple(eps_schedule)
    if not sched:
        raise UsageError("empty tolerance schedule")
    if any(b > a for a, b in zip(sched, sched[1:])):
        raise UsageError("tolerance schedule must be nonincreasing")
    indices, residuals = [], []
    n_min = 1
    for k, eps in enumerate(sched):
        if n_min > n_max:
            n = None
        else:
            n = find_return(uset, eps, n_min, n_max)
        if n is None:
            raise BudgetExhausted(
                f"stage {k} (eps={eps:g}) found no return time in [{n_min}, {n_max}]",
                partial=ReturnSequence(tuple(indices), tuple(residuals)),
            )
        indices.append(n)
        residuals.append(residual(uset.angles, n))
        n_min = n + 1
    return ReturnSequence(tuple(indices), tuple(residuals))


def ratio_set(scalars, groups):
    """Angles of ``s_i / s_j`` for all pairs ``(i, j)`` in a common group.

    ``groups`` maps each scalar index to a group key.  Returns an empty tuple
    when no two scalars share a group (every ``n`` is then a return time).
    """
    scalars = [complex(s) for s in scalars]
    angles = set()
    for i, si in enumerate(scalars):
        for j, sj in enumerate(scalars):
            if i < j and groups[i] == groups[j]:
                a = float(np.angle(si / sj) / (2 * np.pi)) % 1.0
                angles.add(a)
    return tuple(sorted(angles))
