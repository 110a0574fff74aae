"""Dominant root of the denominator kernel and the leading-term estimate.

The kernel Q(z) = 1 - 2z + z^k (1 - z) has exactly one zero inside the unit
disk, just right of 1/2; coefficient growth of the series is controlled by
(2 rho)^(-n).  This module locates that root, counts the disk zeros
numerically through the argument principle, and evaluates the closed-form
leading-term estimate of the multiplicity probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

NEWTON_MAX_K = 40
_RESIDUAL_TOL = 1e-12


class NumericalInstabilityError(RuntimeError):
    """A numerical procedure failed to stabilize within its refinement budget."""


@dataclass(frozen=True)
class DominantRoot:
    k: int
    value: float
    bracket_lo: float
    bracket_hi: float
    residual: float
    method: str  # "bisection+newton" or "series-expansion"


@dataclass(frozen=True)
class SingularityApproximation:
    n: int
    k: int
    m: int
    value: float
    numerator_at_root: float      # rho^(k*m) * (1-rho)^(m+1), log-safe outside
    derivative_at_root: float     # Q'(rho)
    decay_factor: float           # (2 rho)^(-n)
    log_binomial: float           # log C(n+m, m)

    @property
    def binomial_factor(self) -> float:
        return math.exp(self.log_binomial)


def kernel_value(k: int, z):
    """Q(z) = 1 - 2z + z^k (1 - z); works for real or complex z."""
    return 1 - 2 * z + z**k * (1 - z)


def kernel_derivative(k: int, z):
    return -2 + k * z ** (k - 1) - (k + 1) * z**k


def root_bracket(k: int) -> tuple[float, float]:
    """Open interval guaranteed to contain the dominant root."""
    return 1.0 / (2.0 - 2.0 ** -(k + 1)), 0.5 + 2.0 ** -(k + 1)


def solve_dominant_root(k: int) -> DominantRoot:
    """Locate the unique kernel zero in (0, 1).

    Q decreases on (0, 1), so bisection on the bracket is safe; Newton then
    polishes to |Q| <= 1e-12.  Beyond k = 40 the root sits within
    O(k / 2^(2k)) of 1/2 + 2^-(k+2), below double resolution, so the series
    value is returned directly.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    lo, hi = root_bracket(k)
    if k > NEWTON_MAX_K:
        x = 0.5 + 2.0 ** -(k + 2)
        return DominantRoot(k, x, lo, hi, abs(kernel_value(k, x)), "series-expansion")
    a, b = lo, hi
    for _ in range(200):
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        if kernel_value(k, mid) > 0:
            a = mid
        else:
            b = mid
    x = 0.5 * (a + b)
    for _ in range(100):
        q = kernel_value(k, x)
        if abs(q) <= 1e-15:
            break
        step = q / kernel_derivative(k, x)
        candidate = x - step
        if not (lo < candidate < hi):
            candidate = 0.5 * (a + b)
        if q > 0:
            a = max(a, x)
        else:
            b = min(b, x)
        if candidate == x:
            break
        x = candidate
    residual = abs(kernel_value(k, x))
    if residual > _RESIDUAL_TOL:
        raise NumericalInstabilityError(
            f"root polish for k={k} stalled at residual {residual:.3e}"
        )
    return DominantRoot(k, x, lo, hi, residual, "bisection+newton")


def count_roots_in_unit_disk(k: int, samples: int = 4096, max_doublings: int = 8) -> int:
    """Number of kernel zeros with |z| < 1, by integrating the winding of
    Q(e^(i theta)) around the origin.

    The sample count doubles until two successive winding integers agree;
    a persistently non-integer winding raises NumericalInstabilityError.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    previous = None
    n = samples
    for _ in range(max_doublings):
        theta = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
        z = np.exp(1j * theta)
        w = kernel_value(k, z)
        if np.any(w == 0):
            raise NumericalInstabilityError("kernel zero on the unit circle sample")
        steps = np.angle(np.roll(w, -1) / w)
        total = float(np.sum(steps)) / (2.0 * np.pi)
        winding = round(total)
        if abs(total - winding) < 0.25 and np.max(np.abs(steps)) < 2.5:
            if previous == winding:
                return winding
            previous = winding
        else:
            previous = None
        n *= 2
    raise NumericalInstabilityError(
        f"winding number for k={k} did not stabilize at {n // 2} samples"
    )


def log_decay_rate(k: int) -> float:
    """log(2 rho_k), evaluated without cancellation near rho = 1/2."""
    root = solve_dominant_root(k)
    return math.log1p(2.0 * (root.value - 0.5))


def log_geometric_bounds(n: int, k: int) -> tuple[float, float, float]:
    """Natural logs of the geometric sandwich around the decay factor:
    (-n/2^k, -n log(2 rho), -n/2^(k+2)), strictly increasing for every
    n, k >= 1 regardless of scale."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be >= 1")
    return -n / 2.0**k, -n * log_decay_rate(k), -n / 2.0 ** (k + 2)


def geometric_bounds(n: int, k: int) -> tuple[float, float, float]:
    """(exp(-n/2^k), (2 rho)^(-n), exp(-n/2^(k+2))), strictly increasing.

    The middle value is computed as exp(-n log(2 rho)) so that direct
    powering never overflows; for n / 2^k beyond ~745 all three values lie
    under the double-precision floor and collapse to 0.0, in which case
    ``log_geometric_bounds`` still separates them.
    """
    lower, mid, upper = log_geometric_bounds(n, k)
    return math.exp(lower), math.exp(mid), math.exp(upper)


def prob_multiplicity_singularity(n: int, k: int, m: int) -> SingularityApproximation:
    """Leading-term estimate of the probability that size k has multiplicity
    m in a uniform composition of n:

        C(n+m, m) * 2 P(rho) / (-rho Q'(rho))^(m+1) * (2 rho)^(-n)

    with P(rho) = rho^(k*m) (1-rho)^(m+1).  All powers are assembled in log
    space; accuracy improves like 1 + O(1/n).
    """
    if n < 1 or k < 1 or m < 0:
        raise ValueError("need n, k >= 1 and m >= 0")
    root = solve_dominant_root(k)
    rho = root.value
    qprime = kernel_derivative(k, rho)
    log_p = k * m * math.log(rho) + (m + 1) * math.log1p(-rho)
    log_binom = math.lgamma(n + m + 1) - math.lgamma(m + 1) - math.lgamma(n + 1)
    log_decay = -n * math.log1p(2.0 * (rho - 0.5))
    log_value = (
        log_binom
        + math.log(2.0)
        + log_p
        - (m + 1) * math.log(rho * -qprime)
        + log_decay
    )
    value = math.exp(log_value) if log_value > -745.0 else 0.0
    return SingularityApproximation(
        n=n,
        k=k,
        m=m,
        value=value,
        numerator_at_root=math.exp(log_p) if log_p > -745.0 else 0.0,
        derivative_at_root=qprime,
        decay_factor=math.exp(log_decay) if log_decay > -745.0 else 0.0,
        log_binomial=log_binom,
    )


def expected_sizes_with_multiplicity_singularity(n: int, m: int) -> float:
    """Dominant-root estimate of the expected number of part sizes with
    multiplicity m: the leading-term probabilities summed over k."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    terms = []
    past_peak = math.log2(max(n, 2)) + 4
    for k in range(1, n // m + 1):
        value = prob_multiplicity_singularity(n, k, m).value
        terms.append(value)
        # Past the peak near k = log2(n/m) successive terms shrink by at
        # least 2^-m, so the untouched tail is below twice the last term.
        if k > past_peak and value < 1e-16 * max(terms):
            break
    return math.fsum(terms)
