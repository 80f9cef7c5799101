"""Random walks near a floor and the stopped-walk generating function.

A +-1 walk started at height h above a reflecting floor steps up with
probability (1/2)(g+2)/(g+1) when standing at height g.  The probability
of a whole step sequence telescopes to the closed form

    (1/2)^n * (h + 1 + sum of steps) / (h + 1),

which this module evaluates both ways and cross-checks on every call.

Weighting the up-runs of a free simple walk by the norm sequence z and
stopping the walk at a geometric time with parameter w gives a
generating function with the closed form

    (1 - w) * A(w) / (1 - (w/2) * A(w)),
    A(w) = sum_j (w/2)^j z_j   (z_j := 1 beyond J),

whose denominator is exactly the root function of the bound module: its
smallest positive pole is the critical w.  A brute-force evaluator that
enumerates all 2^n walks up to a cutoff length is provided as the
ground truth for the closed form.
"""

from __future__ import annotations

import itertools

import numpy as np

from .bounds import critical_w
from .dyck import run_statistics, run_z_weight
from .errors import DomainError, InputError, SizeGuardError, ToleranceError
from .linalg import NormSequence

__all__ = [
    "floor_walk_step_product",
    "floor_walk_closed_form",
    "pbot_probability",
    "stopped_walk_generating_function",
    "stopped_walk_series_exhaustive",
]

_SERIES_LIMIT = 20


def _validated_steps(h: int, omega) -> tuple:
    """Check that every height the walk steps FROM is nonnegative.

    The final height may be -1: the step into it has probability zero,
    so such walks are legal inputs with value 0.
    """
    steps = tuple(omega)
    for s in steps:
        if s not in (1, -1):
            raise InputError(f"steps must be +-1, got {s!r}")
    if not steps:
        raise InputError("the walk must contain at least one step")
    g = h
    for i, s in enumerate(steps):
        if g < 0:
            raise DomainError(
                f"walk height {g} below the floor before step {i + 1}"
            )
        g += s
    return steps


def floor_walk_step_product(h: int, omega) -> float:
    """Probability of the step sequence, one factor per step."""
    steps = _validated_steps(h, omega)
    prob = 1.0
    g = h
    for s in steps:
        up = 0.5 * (g + 2) / (g + 1)
        prob *= up if s == 1 else 1.0 - up
        g += s
    return prob


def floor_walk_closed_form(h: int, omega) -> float:
    """Telescoped probability (1/2)^n (h + 1 + sum omega) / (h + 1)."""
    steps = _validated_steps(h, omega)
    n = len(steps)
    return 0.5**n * (h + 1 + sum(steps)) / (h + 1)


def pbot_probability(h: int, omega) -> float:
    """Floor-walk probability, computed both ways and cross-checked."""
    a = floor_walk_step_product(h, omega)
    b = floor_walk_closed_form(h, omega)
    if abs(a - b) > 1e-14:
        raise ToleranceError(
            f"step product {a!r} and closed form {b!r} disagree"
        )
    return b


def _prefix(ns: NormSequence, J: int) -> NormSequence:
    if not 1 <= J <= ns.J:
        raise InputError(f"J must be in [1, {ns.J}], got {J}")
    return NormSequence(norm_s=ns.norm_s, z=np.array(ns.z[:J]))


def stopped_walk_generating_function(ns: NormSequence, J: int, w: float) -> float:
    """Closed form of sum_n w^n E[z-weight of up-runs], times (1 - w).

    Only the first J norm sequence values are used; deeper runs carry
    weight 1.  Defined for 0 <= w strictly below the denominator's root.
    """
    sub = _prefix(ns, J)
    if not 0.0 <= w < 2.0:
        raise DomainError(f"w must lie in [0, 2), got {w}")
    wc = critical_w(sub)
    if w >= wc:
        raise DomainError(f"w={w} is at or beyond the pole at w={wc:.12g}")
    x = w / 2.0
    series = 1.0 + float((x ** np.arange(1, J + 1)) @ sub.z)
    series += x ** (J + 1) / (1.0 - x)
    denom = 1.0 - x * series
    if denom <= 0.0:
        # w_c is located to finite tolerance; the denominator itself is
        # the authoritative pole detector
        raise DomainError(f"w={w} is at or beyond the pole near w={wc:.12g}")
    return (1.0 - w) * series / denom


def stopped_walk_series_exhaustive(
    ns: NormSequence, J: int, w: float, n_max: int = 14
) -> float:
    """Ground truth for the generating function by full enumeration.

    Sums (1 - w) w^n E[z-weight] over walk lengths n = 0..n_max, where
    the expectation runs over all 2^n equally likely +-1 walks.  For
    0 <= w < 1 the truncation error is at most w^(n_max+1) / (1 - w).
    """
    sub = _prefix(ns, J)
    if n_max > _SERIES_LIMIT:
        raise SizeGuardError(
            f"enumeration is limited to n_max <= {_SERIES_LIMIT}, got {n_max}"
        )
    if w < 0:
        raise DomainError(f"w must be nonnegative, got {w}")
    z = sub.z
    total = 1.0  # empty walk
    for n in range(1, n_max + 1):
        acc = 0.0
        for walk in itertools.product((1, -1), repeat=n):
            acc += run_z_weight(run_statistics(walk, J), z, "up")
        total += w**n * acc / 2**n
    return (1.0 - w) * total
