"""Independent two-particle spectrum from the center-of-mass decomposition.

For two particles the quantization conditions decouple: summing them fixes
the total momentum exactly, differencing them leaves one scalar secular
equation for the relative rapidity.  The same equation arises from a plane
domain with periodic boundaries and a mixed (Robin) condition of strength
``g/2`` on the symmetry line, which is what makes this a genuinely
independent check of the vector solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import WrongParticleNumber
from .model import ModelParams, TWO_PI
from .solver import DEFAULT_SETTINGS, SolverSettings, enumerate_spectrum

ROOT_TOLERANCE = 1e-12


@dataclass(frozen=True)
class TwoBodyLevel:
    """One level labeled by total-momentum and relative quantum numbers.

    ``total_momentum_number`` is ``s = I_1 + I_2`` (an integer), and
    ``relative_number`` is ``n = I_2 - I_1`` (a positive integer); for
    half-integer quantum numbers ``s + n`` is odd.  The energy splits as
    ``P**2/2 + 2*kappa**2`` with ``P = 2*pi*s/L``.
    """

    total_momentum_number: int
    relative_number: int
    relative_root: float
    energy: float


@dataclass(frozen=True)
class ComparisonReport:
    """Outcome of matching the scalar-secular levels against the vector solver."""

    e_max: float
    coupling: float
    n_levels_bethe: int
    n_levels_secular: int
    max_abs_deviation: float
    tolerance: float
    passed: bool


def relative_secular_root(n: int, params: ModelParams) -> float:
    """Unique root of ``L*kappa + 2*arctan(2*kappa/g) - pi*n`` on (0, pi*n/L).

    The secular function is strictly increasing, negative at 0 and positive
    at ``pi*n/L``, so plain bisection needs no tuning.
    """
    if n < 1:
        raise ValueError("relative quantum number n must be >= 1")
    length = params.ring_length
    g = params.coupling

    def secular(kappa: float) -> float:
        return length * kappa + 2.0 * math.atan(2.0 * kappa / g) - math.pi * n

    lo, hi = 0.0, math.pi * n / length
    while hi - lo > ROOT_TOLERANCE:
        mid = 0.5 * (lo + hi)
        if secular(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def two_body_levels(params: ModelParams, e_max: float) -> list[TwoBodyLevel]:
    """All two-particle levels with energy <= e_max, sorted ascending.

    The root for relative number n exceeds ``pi*(n-1)/L``, which bounds the
    relative energy from below and makes the enumeration provably complete.
    """
    if params.n_particles != 2:
        raise WrongParticleNumber("two_body_levels requires exactly 2 particles")
    length = params.ring_length
    levels: list[TwoBodyLevel] = []
    n = 1
    while 2.0 * (math.pi * (n - 1) / length) ** 2 <= e_max:
        kappa = relative_secular_root(n, params)
        relative_energy = 2.0 * kappa * kappa
        if relative_energy <= e_max:
            budget = e_max - relative_energy
            s_reach = int(math.floor(length * math.sqrt(2.0 * budget) / TWO_PI))
            for s in range(-s_reach, s_reach + 1):
                if (s + n) % 2 == 0:
                    continue  # I_1, I_2 must both be half-integers
                p_total = TWO_PI * s / length
                total = 0.5 * p_total * p_total + relative_energy
                if total <= e_max:
                    levels.append(TwoBodyLevel(s, n, kappa, total))
        n += 1
    levels.sort(key=lambda lv: (lv.energy, lv.total_momentum_number, lv.relative_number))
    return levels


def compare_with_bethe(params: ModelParams, e_max: float,
                       settings: SolverSettings = DEFAULT_SETTINGS,
                       tolerance: float = 1e-9) -> ComparisonReport:
    """Match the scalar-secular level list against the vector Newton solver.

    Both lists are sorted by energy and compared pairwise; PASS means equal
    counts and maximum absolute energy deviation within tolerance.
    """
    if params.n_particles != 2:
        raise WrongParticleNumber("compare_with_bethe requires exactly 2 particles")
    secular_levels = two_body_levels(params, e_max)
    table = enumerate_spectrum(params, e_max, settings)
    max_dev = 0.0
    if len(secular_levels) == len(table.levels):
        for ref, state in zip(secular_levels, table.levels):
            max_dev = max(max_dev, abs(ref.energy - state.energy))
        passed = max_dev <= tolerance
    else:
        max_dev = math.inf
        passed = False
    return ComparisonReport(
        e_max=float(e_max),
        coupling=params.coupling,
        n_levels_bethe=len(table.levels),
        n_levels_secular=len(secular_levels),
        max_abs_deviation=max_dev,
        tolerance=tolerance,
        passed=passed,
    )
