"""Random-matrix sampling and largest-eigenvalue experiments.

Samples centered Gaussian matrices whose entry variances follow a
given profile, measures the largest absolute eigenvalue per sample,
and aggregates statistics for comparison against the analytic bounds.

Each trial owns an RNG stream derived from (seed, trial index), so
results are identical no matter how trials are scheduled; aggregation
sorts by trial index. The largest eigenvalue is found by power
iteration on v -> H (H v): squaring merges the near-degenerate
+-lambda pair at the spectral edge into one dominant eigenvalue and
keeps the implementation dependency-free.
"""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .linalg import VarianceMatrix

ENSEMBLES = ("real-symmetric", "complex-hermitian")


@dataclass(frozen=True)
class McConfig:
    """Parameters of one sampling experiment."""

    trials: int
    seed: int
    ensemble: str = "real-symmetric"
    power_tol: float = 1e-11
    power_max_iter: int = 200_000

    def __post_init__(self):
        if not isinstance(self.trials, int) or self.trials < 1:
            raise InputError(f"trials must be a positive integer, got {self.trials!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise InputError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if self.ensemble not in ENSEMBLES:
            raise InputError(
                f"unknown ensemble {self.ensemble!r}; choose from {ENSEMBLES}"
            )
        if self.power_tol <= 0:
            raise InputError(f"power_tol must be positive, got {self.power_tol}")
        if not isinstance(self.power_max_iter, int) or self.power_max_iter < 1:
            raise InputError(
                f"power_max_iter must be a positive integer, got {self.power_max_iter!r}"
            )


@dataclass(frozen=True)
class PowerResult:
    """Largest absolute eigenvalue estimate with a convergence flag."""

    value: float
    converged: bool
    iterations: int


@dataclass(frozen=True)
class McResult:
    """Aggregated largest-eigenvalue statistics.

    ``std`` uses the n-1 denominator and is reported as 0 with
    ``std_defined`` False when fewer than two trials converged.
    ``elapsed`` is wall-clock seconds and does not take part in
    equality comparisons.
    """

    trials: int
    seed: int
    ensemble: str
    per_trial: tuple
    mean: float
    std: float
    std_defined: bool
    failures: int
    elapsed: float = field(compare=False)

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "ensemble": self.ensemble,
            "per_trial": list(self.per_trial),
            "mean": self.mean,
            "std": self.std,
            "std_defined": self.std_defined,
            "failures": self.failures,
            "elapsed": self.elapsed,
        }


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent, reproducible RNG stream for one trial."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed,
                                                        spawn_key=(trial,)))


def sample_matrix(s: VarianceMatrix, ensemble: str,
                  rng: np.random.Generator) -> np.ndarray:
    """One centered Gaussian sample with E |H_xy|^2 = S_xy.

    Real-symmetric: H_xy = H_yx ~ Normal(0, S_xy) for x <= y,
    independently. Complex-hermitian: off-diagonal real and imaginary
    parts each Normal(0, S_xy / 2); diagonal real Normal(0, S_xx).
    """
    if ensemble not in ENSEMBLES:
        raise InputError(f"unknown ensemble {ensemble!r}; choose from {ENSEMBLES}")
    sigma = np.sqrt(s.entries)
    if ensemble == "real-symmetric":
        upper = np.triu(sigma * rng.standard_normal((s.n, s.n)))
        return upper + np.triu(upper, 1).T
    gr = rng.standard_normal((s.n, s.n))
    gi = rng.standard_normal((s.n, s.n))
    upper = np.triu(sigma * (gr + 1j * gi) / math.sqrt(2), 1)
    diag = np.diag(np.diag(sigma) * np.diag(gr))
    return upper + upper.conj().T + diag


def spectral_radius(h, tol: float = 1e-11, max_iter: int = 200_000,
                    rng: np.random.Generator | None = None) -> PowerResult:
    """Largest absolute eigenvalue of a symmetric/hermitian matrix.

    Power iteration on the squared matrix with a Rayleigh-quotient
    stopping rule: successive quotients must agree to ``tol``
    relatively. Non-convergence is reported through the flag, with the
    best estimate so far, rather than raised.
    """
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise InputError(f"need a square matrix, got shape {h.shape}")
    if not np.allclose(h, h.conj().T, rtol=1e-12, atol=1e-12):
        raise InputError("matrix is not symmetric/hermitian")
    if rng is None:
        rng = np.random.default_rng()
    n = h.shape[0]
    v = rng.standard_normal(n).astype(h.dtype, copy=False)
    if np.iscomplexobj(h):
        v = v + 1j * rng.standard_normal(n)
    v = v / np.linalg.norm(v)
    prev = math.inf
    lam = 0.0
    for it in range(1, max_iter + 1):
        w = h @ (h @ v)
        lam = float(np.vdot(v, w).real)
        norm_w = float(np.linalg.norm(w))
        if norm_w == 0.0:
            # H^2 v = 0 for a random v means H v = 0, hence lambda = 0
            return PowerResult(0.0, True, it)
        if abs(lam - prev) <= tol * max(abs(lam), 1e-300):
            return PowerResult(math.sqrt(max(lam, 0.0)), True, it)
        prev = lam
        v = w / norm_w
    return PowerResult(math.sqrt(max(lam, 0.0)), False, max_iter)


def mc_experiment(s: VarianceMatrix, cfg: McConfig) -> McResult:
    """Run ``cfg.trials`` independent samples and aggregate statistics.

    Deterministic given (seed, trials, ensemble): every trial draws
    from its own stream. Trials whose power iteration fails to
    converge are excluded from the statistics and counted as failures.
    """
    start = time.perf_counter()
    values = []
    failures = 0
    for trial in range(cfg.trials):
        rng = trial_rng(cfg.seed, trial)
        h = sample_matrix(s, cfg.ensemble, rng)
        out = spectral_radius(h, tol=cfg.power_tol,
                              max_iter=cfg.power_max_iter, rng=rng)
        if out.converged:
            values.append(out.value)
        else:
            failures += 1
    mean = statistics.fmean(values) if values else 0.0
    if len(values) >= 2:
        std, std_defined = statistics.stdev(values), True
    else:
        std, std_defined = 0.0, False
    return McResult(
        trials=cfg.trials,
        seed=cfg.seed,
        ensemble=cfg.ensemble,
        per_trial=tuple(values),
        mean=mean,
        std=std,
        std_defined=std_defined,
        failures=failures,
        elapsed=time.perf_counter() - start,
    )
