"""Newton solver for the quantization conditions and spectrum enumeration.

The residual is the gradient of a strictly convex action, so a damped Newton
iteration started from the impenetrable-limit guess ``k_j = 2*pi*I_j/L``
converges for any repulsive coupling; a geometric continuation in ``1/g``
backs it up for stiff cases.
"""

from __future__ import annotations

import itertools
import math
from bisect import bisect_right
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidQuantumNumbers, NonConvergence, OutOfRange
from .model import (
    TWO_PI,
    BetheState,
    ModelParams,
    PartitionShape,
    QuantumNumbers,
    as_quantum_numbers,
    bethe_residual,
    energy,
    gaudin_matrix,
    jacobian_det,
    momentum,
)


@dataclass(frozen=True)
class SolverSettings:
    """Newton iteration controls.

    ``continuation_steps = 0`` means a direct solve; when the direct solve
    fails, the retry ladder uses ``continuation_steps`` geometric increments
    in ``1/g`` (or 16 if left at 0).
    """

    residual_tolerance: float = 1e-12
    max_iterations: int = 200
    max_backtracks: int = 40
    continuation_steps: int = 0

    def __post_init__(self):
        if not self.residual_tolerance > 0.0:
            raise ValueError("residual_tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


DEFAULT_SETTINGS = SolverSettings()


@dataclass(frozen=True)
class SpectrumTable:
    """All physical levels up to an energy cutoff, sorted by energy."""

    params: ModelParams
    levels: tuple[BetheState, ...]
    cutoff: float

    @property
    def energies(self) -> np.ndarray:
        return np.asarray([state.energy for state in self.levels], dtype=float)


def _newton(params, shape, i_values, k0, settings):
    """Damped Newton iteration; returns (k, iterations, norms, converged)."""
    k = np.array(k0, dtype=float)
    r = bethe_residual(params, shape, i_values, k)
    norms = [float(np.linalg.norm(r))]
    for iteration in range(settings.max_iterations):
        if float(np.max(np.abs(r))) <= settings.residual_tolerance:
            return k, iteration, norms, True
        jac = TWO_PI * gaudin_matrix(params, shape, k)
        step = np.linalg.solve(jac, r)
        scale = 1.0
        for _ in range(settings.max_backtracks + 1):
            k_new = k - scale * step
            r_new = bethe_residual(params, shape, i_values, k_new)
            if np.linalg.norm(r_new) < norms[-1]:
                break
            scale *= 0.5
        else:
            return k, iteration + 1, norms, False
        k, r = k_new, r_new
        norms.append(float(np.linalg.norm(r)))
    converged = float(np.max(np.abs(r))) <= settings.residual_tolerance
    return k, settings.max_iterations, norms, converged


def solve_state(params: ModelParams, shape: PartitionShape, quantum_numbers,
                settings: SolverSettings = DEFAULT_SETTINGS) -> BetheState:
    """Solve the quantization conditions for one state.

    ``quantum_numbers`` holds one strictly increasing representative per
    block.  The initial guess is the impenetrable-limit value
    ``k_j = 2*pi*I_j/L``; a failed direct solve retries with geometric
    continuation from that limit down to the requested coupling.

    Raises ``InvalidQuantumNumbers`` for repeated or unordered entries and
    ``NonConvergence`` (with the residual-norm trace) if all attempts fail.
    """
    qn = as_quantum_numbers(params, quantum_numbers, shape.dimension)
    i_values = qn.values
    k0 = TWO_PI * i_values / params.ring_length

    k, iters, norms, ok = _newton(params, shape, i_values, k0, settings)
    if not ok:
        steps = settings.continuation_steps if settings.continuation_steps > 0 else 16
        c_full = 1.0 / params.coupling
        k = np.array(k0, dtype=float)
        total_iters = iters
        for level in range(steps - 1, -1, -1):
            g_step = 1.0 / (c_full * 0.5**level)
            params_step = replace(params, coupling=g_step)
            k, iters, norms, ok = _newton(params_step, shape, i_values, k, settings)
            total_iters += iters
            if not ok:
                raise NonConvergence(
                    f"no convergence for I={qn.doubled} (doubled), blocks="
                    f"{shape.blocks}, g={params.coupling} (failed at continuation "
                    f"coupling {g_step})",
                    norms,
                )
        iters = total_iters

    res = bethe_residual(params, shape, i_values, k)
    return BetheState(
        shape=shape,
        quantum_numbers=qn,
        rapidities=tuple(float(v) for v in k),
        energy=energy(shape, k),
        momentum=momentum(shape, k),
        gaudin_det=jacobian_det(params, shape, k),
        residual_norm=float(np.max(np.abs(res))),
        iterations=iters,
    )


def _tuples_with_key_at_most(params: ModelParams, cap: int) -> dict[int, list[tuple[int, ...]]]:
    """Group doubled quantum-number tuples by the integer shell key sum(d_j^2)."""
    n = params.n_particles
    delta = params.parity_offset
    reach = math.isqrt(max(cap, 0))
    candidates = [d for d in range(-reach, reach + 1) if d % 2 == delta]
    shells: dict[int, list[tuple[int, ...]]] = {}
    for combo in itertools.combinations(candidates, n):
        key = sum(d * d for d in combo)
        if key <= cap:
            shells.setdefault(key, []).append(combo)
    for group in shells.values():
        group.sort()
    return shells


def enumerate_spectrum(params: ModelParams, e_max: float,
                       settings: SolverSettings = DEFAULT_SETTINGS) -> SpectrumTable:
    """Every physical level (all blocks of size one) with energy <= e_max.

    States are organized in shells of equal impenetrable-limit energy
    ``sum_j (2*pi*I_j/L)**2``.  Repulsion only lowers the energy, so every
    shell below the cutoff contributes unconditionally; beyond it, shells are
    solved until two consecutive ones yield no state under the cutoff.
    """
    if not e_max > 0.0:
        raise ValueError("e_max must be positive")
    shape = PartitionShape((1,) * params.n_particles)
    scale = (math.pi / params.ring_length) ** 2  # E_tonks = scale * shell key

    cap = int(e_max / scale) + 32
    shells = _tuples_with_key_at_most(params, cap)
    keys = sorted(shells)

    states: list[BetheState] = []
    empty_streak = 0
    pos = 0
    while True:
        if pos == len(keys):
            new_cap = 2 * cap + 32
            extended = _tuples_with_key_at_most(params, new_cap)
            keys = sorted(extended)
            pos = bisect_right(keys, cap)
            shells, cap = extended, new_cap
            if pos == len(keys):
                continue
        key = keys[pos]
        pos += 1
        accepted = 0
        for doubled in shells[key]:
            qn = QuantumNumbers(doubled, params.parity_offset)
            try:
                state = solve_state(params, shape, qn, settings)
            except NonConvergence as exc:
                raise NonConvergence(
                    f"spectrum enumeration failed at I={doubled} (doubled): {exc}",
                    exc.residual_norms,
                ) from exc
            if state.energy <= e_max:
                states.append(state)
                accepted += 1
        empty_streak = 0 if accepted else empty_streak + 1
        if empty_streak >= 2:
            break

    states.sort(key=lambda s: (s.energy, s.quantum_numbers.doubled))
    return SpectrumTable(params=params, levels=tuple(states), cutoff=float(e_max))


def staircase(table: SpectrumTable, e: float) -> int:
    """Number of levels with energy <= e; e must not exceed the table cutoff."""
    if e > table.cutoff:
        raise OutOfRange(f"e={e} exceeds the enumerated cutoff {table.cutoff}")
    return int(np.searchsorted(table.energies, e, side="right"))
