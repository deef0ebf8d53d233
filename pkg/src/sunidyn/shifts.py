"""Decision procedures for families of backward-shift powers.

Two characterisations are implemented:

* weighted powers with strictly increasing exponents ``r_1 < ... < r_p``:
  the bounded form of the weight-product growth condition (any finite run
  can only confirm it up to the tested ``M``, ``k``);
* unweighted families ``lam_1 B^{r_1}, ..., lam_p B^{r_p}`` with
  nondecreasing ``r``: three modulus conditions, decided exactly.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import UsageError
from .operators import ShiftPower

TOL_MOD = 1e-12


@dataclass(frozen=True)
class ShiftFamily:
    members: tuple  # of ShiftPower

    def __post_init__(self):
        m = tuple(self.members)
        if not m:
            raise UsageError("shift family must be nonempty")
        if not all(isinstance(op, ShiftPower) for op in m):
            raise UsageError("shift family members must be ShiftPower operators")
        object.__setattr__(self, "members", m)

    @classmethod
    def from_triples(cls, triples):
        return cls(tuple(ShiftPower(w, r, lam) for w, r, lam in triples))

    @property
    def unweighted(self):
        return all(op.weights.is_unit for op in self.members)

    @property
    def rs(self):
        return tuple(op.r for op in self.members)

    @property
    def lambdas(self):
        return tuple(op.lam for op in self.members)


class Decision(NamedTuple):
    value: bool
    reason: str

    def __bool__(self):
        return self.value


def _condition_holds(members, logM, k, m):
    for j in range(k + 1):
        own = []
        for op in members:
            lm, _ = op.weights.log_window(j + 1, op.r * m)
            own.append(float(lm))
            if not own[-1] > logM:
                return False
        for li, op_l in enumerate(members):
            for op_s in members[:li]:
                start = j + (op_l.r - op_s.r) * m + 1
                lm_s, _ = op_s.weights.log_window(start, op_s.r * m)
                if not own[li] - float(lm_s) > logM:
                    return False
    return True


def check_condition_iii(family, M, k, m_max):
    """Smallest ``m <= m_max`` satisfying the weight-product growth condition.

    For every ``j`` in ``0..k``: ``|a_{l,j+1}...a_{l,j+r_l m}| > M`` for all
    ``l``, and for ``s < l`` the quotient of that product by
    ``|a_{s,j+(r_l-r_s)m+1}...a_{s,j+r_l m}|`` exceeds ``M``.  Everything is
    compared in log space.  Returns None when no ``m`` up to ``m_max`` works.
    """
    members = family.members
    rs = family.rs
    if any(b <= a for a, b in zip(rs, rs[1:])):
        raise UsageError(f"powers must be strictly increasing, got {rs}")
    if not M > 0:
        raise UsageError("M must be positive")
    if k < 0 or m_max < 1:
        raise UsageError("need k >= 0 and m_max >= 1")
    logM = math.log(M)
    for m in range(1, int(m_max) + 1):
        if _condition_holds(members, logM, int(k), m):
            return m
    return None


def condition_iii_sweep(family, k_max=3, m_max=200, Ms=None):
    """Run the bounded check over a grid of ``M`` and ``k``.

    Returns ``{(M, k): m or None}``.  A full grid of hits is evidence for the
    growth condition, never a proof of it.
    """
    Ms = tuple(10.0**e for e in range(1, 7)) if Ms is None else tuple(Ms)
    return {
        (M, k): check_condition_iii(family, M, k, m_max)
        for M in Ms
        for k in range(k_max + 1)
    }


def _validate(rs, lambdas):
    rs = [int(r) for r in rs]
    lambdas = [complex(v) for v in lambdas]
    if len(rs) != len(lambdas):
        raise UsageError(f"{len(rs)} powers but {len(lambdas)} scalars")
    if not rs:
        raise UsageError("need at least one operator")
    if any(r < 1 for r in rs):
        raise UsageError("powers must be positive integers")
    if any(b < a for a, b in zip(rs, rs[1:])):
        raise UsageError(f"powers must be nondecreasing, got {tuple(rs)}")
    if any(v == 0 for v in lambdas):
        raise UsageError("scalars must be nonzero")
    return rs, [abs(v) for v in lambdas]


def decide_s_unweighted(rs, lambdas):
    """Whether ``lam_1 B^{r_1}, ..., lam_p B^{r_p}`` are s-hypercyclic.

    With ``A = {j : r_j = r_{j+1}}``: (i) every ``|lam_j| > 1``;
    (ii) ``|lam_j| < |lam_{j+1}|`` off ``A``; (iii) ``|lam_j| = |lam_{j+1}|``
    on ``A``.  Moduli are compared with tolerance ``TOL_MOD``.
    """
    rs, mods = _validate(rs, lambdas)
    for j, a in enumerate(mods):
        if not a - 1.0 > TOL_MOD:
            return Decision(False, f"condition (i): |lambda_{j + 1}| = {a:.12g} is not > 1")
    for j in range(len(rs) - 1):
        if rs[j] == rs[j + 1]:
            continue
        if not mods[j + 1] - mods[j] > TOL_MOD:
            return Decision(
                False,
                f"condition (ii): r_{j + 1} < r_{j + 2} but |lambda_{j + 1}| = {mods[j]:.12g}"
                f" is not < |lambda_{j + 2}| = {mods[j + 1]:.12g}",
            )
    for j in range(len(rs) - 1):
        if rs[j] != rs[j + 1]:
            continue
        if abs(mods[j + 1] - mods[j]) > TOL_MOD:
            return Decision(
                False,
                f"condition (iii): r_{j + 1} = r_{j + 2} but |lambda_{j + 1}| = {mods[j]:.12g}"
                f" differs from |lambda_{j + 2}| = {mods[j + 1]:.12g}",
            )
    return Decision(True, "conditions (i), (ii), (iii) hold")


def decide_d_unweighted(rs, lambdas):
    """Whether the same family is d-hypercyclic: strictly increasing powers
    and ``1 < |lam_1| < ... < |lam_p|``."""
    rs, mods = _validate(rs, lambdas)
    for j in range(len(rs) - 1):
        if rs[j] == rs[j + 1]:
            return Decision(False, f"powers not strictly increasing: r_{j + 1} = r_{j + 2} = {rs[j]}")
    if not mods[0] - 1.0 > TOL_MOD:
        return Decision(False, f"|lambda_1| = {mods[0]:.12g} is not > 1")
    for j in range(len(rs) - 1):
        if not mods[j + 1] - mods[j] > TOL_MOD:
            return Decision(
                False,
                f"moduli not strictly increasing: |lambda_{j + 1}| = {mods[j]:.12g},"
                f" |lambda_{j + 2}| = {mods[j + 1]:.12g}",
            )
    return Decision(True, "strictly increasing powers and moduli, |lambda_1| > 1")


def normalize_unweighted(ops):
    """Rewrite constant-weight shift powers ``lam (c B)^r`` as ``(lam c^r) B^r``.

    Returns ``(rs, lambdas)`` or raises if some member has non-constant weights.
    """
    rs, lams = [], []
    for op in ops:
        if op.weights.kind != "constant":
            raise UsageError(
                "certificates are built for unweighted (or constant-weight) shift families only"
            )
        rs.append(op.r)
        lams.append(op.lam * op.weights.values[0] ** op.r)
    return rs, lams


def sort_by_power(rs):
    """Stable permutation sorting ``rs`` ascending."""
    return sorted(range(len(rs)), key=lambda i: rs[i])


def power_groups(rs):
    """Group index per member; members sharing ``r`` share a group, numbered by increasing ``r``."""
    order = sort_by_power(rs)
    groups = [0] * len(rs)
    g = -1
    prev = None
    for i in order:
        if rs[i] != prev:
            g += 1
            prev = rs[i]
        groups[i] = g
    return groups
