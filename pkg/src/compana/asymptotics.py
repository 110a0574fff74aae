"""Limit behaviour of the multiplicity statistics.

The expected number of part sizes with multiplicity ``m`` in a uniform
composition of ``n`` approaches

    n^m / m! * sum_k 2^(-k m) exp(-n / 2^k),

a harmonic sum whose value equals a constant 1/(m log 2) plus a tiny
1-periodic oscillation in log2(n).  This module evaluates the sum directly,
through its residue (Fourier) closed form with complex-gamma coefficients,
and exposes the resulting prediction for the probability that a random part
size has multiplicity m: (1/m + F({log2 n})) / log n, where the fluctuation
F has amplitude of order 1e-5.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

LN2 = math.log(2.0)
# Controls the fluctuation amplitude: 2 * (ALPHA/sinh ALPHA)^(1/2) ~ 1e-5.
ALPHA = 2.0 * math.pi**2 / LN2

DEFAULT_HARMONICS = 5
_DIRECT_CUTOFF = 1e-20

# Lanczos approximation, g = 607/128 with 15 terms (Godfrey's set); relative
# error stays below ~1e-13 over the half-plane Re z >= 1/2 at the imaginary
# heights used here.
_LANCZOS_G = 4.7421875
_LANCZOS_COEFFS = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)


@dataclass(frozen=True)
class HarmonicSumResult:
    """Scaled harmonic sum by both routes, with truncation metadata."""

    n: float
    m: int
    direct: float
    residue: float
    k_lo: int
    k_hi: int
    p_max: int


@dataclass(frozen=True)
class FluctuationParams:
    """Harmonic amplitudes/phases of the periodic fluctuation."""

    m: int
    p_max: int
    alpha: float
    amplitudes: tuple[float, ...]
    phases: tuple[float, ...]


def complex_gamma(z: complex) -> complex:
    """Gamma function for complex arguments (Lanczos form).

    Raises ValueError at the poles (non-positive real integers).
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == int(z.real):
        raise ValueError(f"gamma pole at z={z.real}")
    if z.real < 0.5:
        # Reflection keeps the series argument in the convergent half-plane.
        return math.pi / (cmath.sin(math.pi * z) * complex_gamma(1.0 - z))
    z -= 1.0
    acc = complex(_LANCZOS_COEFFS[0])
    for i, coeff in enumerate(_LANCZOS_COEFFS[1:], start=1):
        acc += coeff / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * acc


def _gamma_line_argument(m: int, p: int) -> complex:
    return complex(m, 2.0 * math.pi * p / LN2)


def _direct_window(n: float, m: int, rel_cutoff: float) -> tuple[int, int, float]:
    """Smallest k-window whose excluded terms all fall below rel_cutoff
    times the peak term; returns (k_lo, k_hi, log of peak term)."""
    center = max(1, round(math.log2(n / m)))

    def log_term(k: int) -> float:
        return -k * m * LN2 - n / 2.0**k

    floor = math.log(rel_cutoff)
    peak = log_term(center)
    k_lo = center
    while k_lo > 1 and log_term(k_lo - 1) > peak + floor:
        k_lo -= 1
        peak = max(peak, log_term(k_lo))
    k_hi = center
    while log_term(k_hi + 1) > peak + floor:
        k_hi += 1
        peak = max(peak, log_term(k_hi))
    return k_lo, k_hi, peak


def harmonic_sum_direct(n: float, m: int, rel_cutoff: float = _DIRECT_CUTOFF) -> float:
    """n^m/m! * sum_{k>=1} 2^(-k m) exp(-n/2^k) by direct summation.

    Terms are gathered outward from the peak near k = log2(n/m) until they
    fall below ``rel_cutoff`` times the largest one, then added largest
    first.  The scaling happens in log space so n up to 1e9 (and beyond)
    is safe.
    """
    n, m = _validate_sum_args(n, m)
    k_lo, k_hi, peak = _direct_window(n, m, rel_cutoff)
    log_terms = [-k * m * LN2 - n / 2.0**k for k in range(k_lo, k_hi + 1)]
    scaled = math.fsum(sorted((math.exp(lt - peak) for lt in log_terms), reverse=True))
    return math.exp(m * math.log(n) - math.lgamma(m + 1) + peak + math.log(scaled))


def harmonic_sum_direct_range(n: float, m: int, rel_cutoff: float = _DIRECT_CUTOFF) -> tuple[int, int]:
    """The k-window the direct summation actually uses (for reporting)."""
    n, m = _validate_sum_args(n, m)
    k_lo, k_hi, _ = _direct_window(n, m, rel_cutoff)
    return k_lo, k_hi


def _validate_sum_args(n: float, m: int) -> tuple[float, int]:
    n = float(n)
    if n < 2:
        raise ValueError("n must be >= 2")
    if m < 1:
        raise ValueError("m must be >= 1")
    return n, m


def harmonic_sum_residues(n: float, m: int, p_max: int = DEFAULT_HARMONICS) -> float:
    """The same scaled sum by its residue closed form:

        1/(m! log 2) * [ (m-1)! + 2 Re sum_{p=1..p_max}
                          e^(-2 pi i p {log2 n}) Gamma(m + 2 pi i p / log 2) ].

    The oscillatory phase is taken from the fractional part of log2(n), so
    large n loses no precision to the integer part.  Harmonics decay like
    exp(-p * ALPHA / 2); p_max = 5 is far beyond double precision already.
    """
    n, m = _validate_sum_args(n, m)
    if p_max < 0:
        raise ValueError("p_max must be >= 0")
    frac = math.log2(n) % 1.0
    total = float(math.factorial(m - 1))
    for p in range(1, p_max + 1):
        phase = cmath.exp(-2j * math.pi * p * frac)
        total += 2.0 * (phase * complex_gamma(_gamma_line_argument(m, p))).real
    return total / (math.factorial(m) * LN2)


def harmonic_sum_result(n: float, m: int, p_max: int = DEFAULT_HARMONICS) -> HarmonicSumResult:
    """Both harmonic-sum routes packaged with their truncation metadata."""
    k_lo, k_hi = harmonic_sum_direct_range(n, m)
    return HarmonicSumResult(
        n=float(n),
        m=m,
        direct=harmonic_sum_direct(n, m),
        residue=harmonic_sum_residues(n, m, p_max),
        k_lo=k_lo,
        k_hi=k_hi,
        p_max=p_max,
    )


def fluctuation(x: float, m: int = 1, p_max: int = DEFAULT_HARMONICS) -> float:
    """Mean-zero 1-periodic fluctuation F(x) = (2/m!) Re sum_{p>=1}
    e^(-2 pi i p x) Gamma(m + 2 pi i p / log 2).

    The input is reduced mod 1.  The gamma argument uses m on the real axis,
    matching the residue series term for term.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    x = float(x) % 1.0
    total = 0.0
    for p in range(1, p_max + 1):
        phase = cmath.exp(-2j * math.pi * p * x)
        total += 2.0 * (phase * complex_gamma(_gamma_line_argument(m, p))).real
    return total / math.factorial(m)


def first_harmonic_amplitude(m: int, p: int) -> tuple[float, float]:
    """(amplitude, phase) of the p-th fluctuation harmonic.

    For m = 1 the amplitude has the closed form (2/m!) (p a / sinh(p a))^(1/2)
    with a = 2 pi^2 / log 2; other m fall back to the gamma modulus, which is
    the same quantity by the sine reflection identity when m = 1.
    """
    if m < 1 or p < 1:
        raise ValueError("m and p must be >= 1")
    gamma_value = complex_gamma(_gamma_line_argument(m, p))
    phase = cmath.phase(gamma_value)
    if m == 1:
        x = p * ALPHA
        # sinh overflows near x ~ 1400; rearrange as sqrt(2 x) e^(-x/2).
        amplitude = 2.0 * math.sqrt(2.0 * x) * math.exp(-0.5 * x) / math.sqrt(
            -math.expm1(-2.0 * x)
        )
    else:
        amplitude = 2.0 * abs(gamma_value) / math.factorial(m)
    return amplitude, phase


def fluctuation_params(m: int = 1, p_max: int = DEFAULT_HARMONICS) -> FluctuationParams:
    amps = []
    phases = []
    for p in range(1, p_max + 1):
        amplitude, phase = first_harmonic_amplitude(m, p)
        amps.append(amplitude)
        phases.append(phase)
    return FluctuationParams(
        m=m, p_max=p_max, alpha=ALPHA, amplitudes=tuple(amps), phases=tuple(phases)
    )


def fluctuation_extremes(m: int = 1, p_max: int = DEFAULT_HARMONICS, grid: int = 4096) -> float:
    """max |F| over a uniform grid of one period."""
    return max(abs(fluctuation(i / grid, m, p_max)) for i in range(grid))


def predict_event_probability(n: float, m: int, p_max: int = DEFAULT_HARMONICS) -> float:
    """Limit prediction for the probability that a uniformly chosen part
    size of a uniform composition of n has multiplicity m:

        (1/m + F({log2 n})) / log n   (natural log).
    """
    n = float(n)
    if n <= 1:
        raise ValueError("n must exceed 1")
    if m < 1:
        raise ValueError("m must be >= 1")
    frac = math.log2(n) % 1.0
    return (1.0 / m + fluctuation(frac, m, p_max)) / math.log(n)


def expected_sizes_with_multiplicity_approx(n: float, m: int) -> float:
    """Harmonic-sum value of the expected number of part sizes with
    multiplicity m (alias of the direct summation)."""
    return harmonic_sum_direct(n, m)
