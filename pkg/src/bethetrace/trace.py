"""Oscillatory density of states from the closed-form winding expansion.

Poisson resummation over each partition's unrestricted quantum numbers turns
the level density into a smooth background plus a sum over integer winding
vectors M.  Stationary phase evaluates each winding term in closed form:
free stationary rapidities on the energy shell, a scattering-phase dressing,
and an amplitude carrying the quantization Jacobian.  Summation order is
fixed (partitions in reverse-lexicographic order, windings in lexicographic
order) with compensated accumulation, so results are bit-stable for any
worker count.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import NonPositiveEnergy, WrongParticleNumber
from .model import TWO_PI, ModelParams, PartitionShape, gaudin_determinants
from .partitions import enumerate_partitions
from .weyl import DEFAULT_QUADRATURE, QuadratureSpec, _density_partition, weyl_density_total

_GRID_CHUNK = 256
_WINDING_BLOCK = 64


@dataclass(frozen=True)
class WindingVector:
    """Nonzero integer winding components, one per partition block."""

    components: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(int(m) for m in self.components))
        if not any(self.components):
            raise ValueError("the zero winding vector is excluded")

    @property
    def signed_sum(self) -> int:
        return sum(self.components)


@dataclass(frozen=True)
class TraceSettings:
    """Winding cutoff and optional partition filter.

    ``m_max`` bounds every component: the winding set is the full integer
    box ``max_i |M_i| <= m_max`` minus the origin.  ``partitions_included``
    restricts the partition sum when not None (blocks given as tuples).
    """

    m_max: int
    partitions_included: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        if self.m_max < 1:
            raise ValueError("m_max must be at least 1")
        if self.partitions_included is not None:
            object.__setattr__(
                self,
                "partitions_included",
                tuple(tuple(int(b) for b in blocks) for blocks in self.partitions_included),
            )


@dataclass(frozen=True)
class GridSpec:
    """Uniform energy grid; e_min must be positive."""

    e_min: float
    e_max: float
    step: float

    def __post_init__(self):
        if not self.e_min > 0.0:
            raise NonPositiveEnergy("e_min must be strictly positive")
        if not self.e_max > self.e_min:
            raise ValueError("e_max must exceed e_min")
        if not self.step > 0.0:
            raise ValueError("step must be positive")

    @property
    def energies(self) -> np.ndarray:
        count = int(math.floor((self.e_max - self.e_min) / self.step + 1e-9)) + 1
        return self.e_min + self.step * np.arange(count)


@dataclass(frozen=True)
class DensityGrid:
    """Per-grid-point smooth, oscillatory, and total densities."""

    e_min: float
    e_max: float
    step: float
    energies: np.ndarray = field(repr=False)
    values_smooth: np.ndarray = field(repr=False)
    values_osc: np.ndarray = field(repr=False)
    values_total: np.ndarray = field(repr=False)


def winding_enumerate(d: int, m_max: int) -> list[WindingVector]:
    """All nonzero winding vectors with sup-norm <= m_max, lexicographic order."""
    if d < 1 or m_max < 1:
        raise ValueError("need d >= 1 and m_max >= 1")
    return [
        WindingVector(combo)
        for combo in itertools.product(range(-m_max, m_max + 1), repeat=d)
        if any(combo)
    ]


def _winding_array(d: int, m_max: int) -> np.ndarray:
    grid = np.stack(
        np.meshgrid(*[np.arange(-m_max, m_max + 1)] * d, indexing="ij"), axis=-1
    ).reshape(-1, d)
    return grid[np.any(grid != 0, axis=1)]


def _components(m) -> np.ndarray:
    comps = m.components if isinstance(m, WindingVector) else tuple(m)
    if not any(comps):
        raise ValueError("the zero winding vector is excluded")
    return np.asarray(comps, dtype=float)


def scaled_action(shape: PartitionShape, m, params: ModelParams) -> float:
    """Action scale ``sum_i (L*M_i)**2 / (4*a_i)`` of a winding vector."""
    comps = _components(m)
    a = np.asarray(shape.blocks, dtype=float)
    return float(np.sum((params.ring_length * comps) ** 2 / (4.0 * a)))


def stationary_rapidities(shape: PartitionShape, m, e: float, params: ModelParams) -> np.ndarray:
    """Stationary-phase rapidities ``(L*M_i)/(2*a_i) * sqrt(e/S)`` on the shell."""
    if not e > 0.0:
        raise NonPositiveEnergy("energy must be strictly positive")
    comps = _components(m)
    a = np.asarray(shape.blocks, dtype=float)
    action = scaled_action(shape, m, params)
    return params.ring_length * comps / (2.0 * a) * math.sqrt(e / action)


def scattering_phase(shape: PartitionShape, m, e: float, params: ModelParams) -> np.ndarray:
    """Pairwise phase pickup ``2*sum_j a_j*arctan((k_i - k_j)/g)`` at the stationary point."""
    k = stationary_rapidities(shape, m, e, params)
    a = np.asarray(shape.blocks, dtype=float)
    diffs = k[:, None] - k[None, :]
    return 2.0 * (a[None, :] * np.arctan(diffs / params.coupling)).sum(axis=1)


def amplitude(shape: PartitionShape, m, e: float, params: ModelParams) -> float:
    """Winding-term amplitude, including the quantization Jacobian.

    ``(pi**(d-1)/prod a)**(1/2) * (e**(d-3)/S**(d-1))**(1/4) * det dI/dk``
    evaluated at the stationary rapidities.
    """
    if not e > 0.0:
        raise NonPositiveEnergy("energy must be strictly positive")
    d = shape.dimension
    a = np.asarray(shape.blocks, dtype=float)
    action = scaled_action(shape, m, params)
    k = stationary_rapidities(shape, m, e, params)
    det = float(gaudin_determinants(params, shape, k[None, :])[0])
    pref = math.sqrt(math.pi ** (d - 1) / float(np.prod(a)))
    return pref * e ** (0.25 * (d - 3)) * action ** (-0.25 * (d - 1)) * det


def total_phase(shape: PartitionShape, m, e: float, params: ModelParams) -> float:
    """Winding-term phase with caustic and lattice-parity corrections.

    ``2*sqrt(S*e) - (pi/4)*(d-1) + M.Phi + pi*delta*sum(M)`` where delta is
    the half-integer offset of the quantum numbers.
    """
    if not e > 0.0:
        raise NonPositiveEnergy("energy must be strictly positive")
    comps = _components(m)
    d = shape.dimension
    action = scaled_action(shape, m, params)
    phase = 2.0 * math.sqrt(action * e) - 0.25 * math.pi * (d - 1)
    phase += float(np.dot(comps, scattering_phase(shape, m, e, params)))
    phase += math.pi * params.parity_offset * float(np.sum(comps))
    return phase


def _osc_partition_grid(params: ModelParams, shape: PartitionShape,
                        energies: np.ndarray, settings: TraceSettings) -> np.ndarray:
    """Kahan-compensated winding sum over an energy array."""
    d = shape.dimension
    a = np.asarray(shape.blocks, dtype=float)
    length = params.ring_length
    g = params.coupling
    delta = params.parity_offset
    x = np.sqrt(energies)
    windings = _winding_array(d, settings.m_max)
    pref = math.sqrt(math.pi ** (d - 1) / float(np.prod(a)))
    energy_power = energies ** (0.25 * (d - 3))
    maslov = 0.25 * math.pi * (d - 1)

    total = np.zeros_like(energies)
    comp = np.zeros_like(energies)
    for start in range(0, windings.shape[0], _WINDING_BLOCK):
        block = windings[start:start + _WINDING_BLOCK].astype(float)
        actions = ((length * block) ** 2 / (4.0 * a)).sum(axis=1)  # (b,)
        dirs = length * block / (2.0 * a) / np.sqrt(actions)[:, None]  # (b, d)
        k = x[None, :, None] * dirs[:, None, :]  # (b, m, d)
        dets = gaudin_determinants(params, shape, k)  # (b, m)
        if d == 1:
            winding_phase = np.zeros((block.shape[0], x.size))
        else:
            diffs = k[..., :, None] - k[..., None, :]
            phases = 2.0 * (a * np.arctan(diffs / g)).sum(axis=-1)  # (b, m, d)
            winding_phase = np.einsum("bd,bmd->bm", block, phases)
        angle = (
            2.0 * np.sqrt(actions)[:, None] * x[None, :]
            - maslov
            + winding_phase
            + math.pi * delta * block.sum(axis=1)[:, None]
        )
        rows = (
            pref
            * energy_power[None, :]
            * actions[:, None] ** (-0.25 * (d - 1))
            * dets
            * np.cos(angle)
        )
        for row in rows:  # fixed lexicographic order, compensated
            y = row - comp
            t = total + y
            comp = (t - total) - y
            total = t
    return total


def _included_shapes(params: ModelParams, settings: TraceSettings) -> list[PartitionShape]:
    shapes = enumerate_partitions(params.n_particles).shapes
    if settings.partitions_included is None:
        return list(shapes)
    allowed = set(settings.partitions_included)
    picked = [s for s in shapes if s.blocks in allowed]
    if len(picked) != len(allowed):
        missing = allowed - {s.blocks for s in picked}
        raise ValueError(f"unknown partitions requested: {sorted(missing)}")
    return picked


def rho_osc_partition(shape: PartitionShape, e: float, params: ModelParams,
                      settings: TraceSettings) -> float:
    """Oscillatory density of one partition: sum over windings of A*cos(R)."""
    energies = _as_positive_array(e)
    return float(_osc_partition_grid(params, shape, energies, settings)[0])


def rho_osc_total(params: ModelParams, e, settings: TraceSettings):
    """Signed partition sum of the oscillatory density (scalar or array)."""
    energies = _as_positive_array(e)
    total = np.zeros_like(energies)
    for shape in _included_shapes(params, settings):
        total += float(shape.coefficient) * _osc_partition_grid(
            params, shape, energies, settings
        )
    return float(total[0]) if np.ndim(e) == 0 else total


def _as_positive_array(e) -> np.ndarray:
    energies = np.atleast_1d(np.asarray(e, dtype=float))
    if np.any(energies <= 0.0):
        raise NonPositiveEnergy("energy must be strictly positive")
    return energies


def default_workers() -> int:
    """Worker count from BETHETRACE_WORKERS, else the available parallelism."""
    env = os.environ.get("BETHETRACE_WORKERS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def rho_total(params: ModelParams, grid: GridSpec, settings: TraceSettings,
              quad_spec: QuadratureSpec = DEFAULT_QUADRATURE,
              workers: int | None = None) -> DensityGrid:
    """Smooth, oscillatory, and total densities on a uniform energy grid.

    Grid points are distributed over threads in fixed chunks; per-point
    reductions never cross chunk boundaries, so any worker count produces
    identical bytes.
    """
    energies = grid.energies
    shapes = _included_shapes(params, settings)
    if workers is None:
        workers = default_workers()

    def work(start: int) -> tuple[np.ndarray, np.ndarray]:
        e_chunk = energies[start:start + _GRID_CHUNK]
        smooth = _smooth_chunk(params, e_chunk, shapes, quad_spec)
        osc = np.zeros_like(e_chunk)
        for shape in shapes:
            osc += float(shape.coefficient) * _osc_partition_grid(
                params, shape, e_chunk, settings
            )
        return smooth, osc

    starts = list(range(0, energies.size, _GRID_CHUNK))
    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, starts))
    else:
        results = [work(s) for s in starts]

    smooth = np.concatenate([r[0] for r in results])
    osc = np.concatenate([r[1] for r in results])
    return DensityGrid(
        e_min=grid.e_min,
        e_max=grid.e_max,
        step=grid.step,
        energies=energies,
        values_smooth=smooth,
        values_osc=osc,
        values_total=smooth + osc,
    )


def _smooth_chunk(params, e_chunk, shapes, quad_spec):
    smooth = np.zeros_like(e_chunk)
    for shape in shapes:
        smooth += float(shape.coefficient) * _density_partition(
            params, shape, e_chunk, quad_spec
        )
    return smooth


def find_peaks(grid: DensityGrid) -> list[tuple[float, float]]:
    """Strict local maxima of the total density with parabolic refinement."""
    x = grid.energies
    y = grid.values_total
    peaks: list[tuple[float, float]] = []
    for i in range(1, x.size - 1):
        if y[i] > y[i - 1] and y[i] > y[i + 1]:
            denom = y[i - 1] - 2.0 * y[i] + y[i + 1]
            offset = 0.5 * (y[i - 1] - y[i + 1]) / denom
            pos = x[i] + offset * grid.step
            height = y[i] - 0.25 * (y[i - 1] - y[i + 1]) * offset
            peaks.append((float(pos), float(height)))
    return peaks


@dataclass(frozen=True)
class PeakMatch:
    """One spectral feature: the levels sharing a nearest maximum."""

    level_mean: float
    peak_position: float
    distance: float
    level_count: int


def match_levels_to_peaks(level_energies, peaks, tolerance: float) -> tuple[bool, list[PeakMatch]]:
    """Group levels by their nearest local maximum and check each feature.

    Levels closer together than the truncated winding sum can resolve merge
    into a single maximum, so each maximum is compared against the mean of
    the levels it attracts (exact degeneracies weight that mean naturally).
    The feature-to-maximum map is one-to-one by construction; the check
    passes when every feature mean lies within ``tolerance`` of its maximum.
    """
    levels = np.sort(np.asarray(level_energies, dtype=float))
    positions = np.asarray([p[0] for p in peaks], dtype=float)
    if positions.size == 0 or levels.size == 0:
        raise ValueError("need at least one level and one peak")
    nearest = np.argmin(np.abs(positions[None, :] - levels[:, None]), axis=1)
    matches = []
    passed = True
    for peak_index in sorted(set(int(i) for i in nearest)):
        members = levels[nearest == peak_index]
        center = float(members.mean())
        dist = abs(center - positions[peak_index])
        matches.append(PeakMatch(center, float(positions[peak_index]), dist, members.size))
        if dist > tolerance:
            passed = False
    return passed, matches


@dataclass(frozen=True)
class ResurgenceRow:
    """Windowed averages of the oscillatory part against the smooth background."""

    m_max: int
    mean_osc_between_levels: float
    weyl_mean: float
    gap: float


def resurgence_profile(params: ModelParams, m_max_values, window,
                       level_energies=None,
                       quad_spec: QuadratureSpec = DEFAULT_QUADRATURE,
                       level_margin: float = 5.0) -> list[ResurgenceRow]:
    """Mean oscillatory density at inter-level midpoints, per winding cutoff.

    For each m_max, evaluates the oscillatory sum at the midpoints between
    consecutive distinct levels inside ``window`` and reports its mean next
    to the smooth background mean; the gap ``|mean_osc + weyl_mean|`` closes
    as the cutoff grows.
    """
    lo, hi = float(window[0]), float(window[1])
    if not 0.0 < lo < hi:
        raise ValueError("window must satisfy 0 < lo < hi")
    for m_max in m_max_values:
        if m_max < 1:
            raise ValueError("every m_max must be at least 1 (empty winding set)")
    if level_energies is None:
        from .solver import enumerate_spectrum

        table = enumerate_spectrum(params, hi + level_margin)
        level_energies = table.energies
    unique = _unique_sorted(np.asarray(level_energies, dtype=float))
    mids = 0.5 * (unique[:-1] + unique[1:])
    mids = mids[(mids >= lo) & (mids <= hi)]
    if mids.size == 0:
        raise ValueError("no inter-level midpoints inside the window")
    weyl_mean = float(np.mean(weyl_density_total(params, mids, quad_spec)))
    rows = []
    for m_max in m_max_values:
        settings = TraceSettings(m_max=int(m_max))
        mean_osc = float(np.mean(rho_osc_total(params, mids, settings)))
        rows.append(
            ResurgenceRow(
                m_max=int(m_max),
                mean_osc_between_levels=mean_osc,
                weyl_mean=weyl_mean,
                gap=abs(mean_osc + weyl_mean),
            )
        )
    return rows


def _unique_sorted(values: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Collapse exactly degenerate levels (e.g. momentum-reversal partners)."""
    out: list[float] = []
    for v in np.sort(values):
        if not out or v - out[-1] > tol:
            out.append(float(v))
    return np.asarray(out)


def semiclassical_count(params: ModelParams, e, settings: TraceSettings):
    """Closed-form cumulative integral of the total density for one particle.

    With a single block the Jacobian is constant and the scattering phase
    vanishes, so each winding term integrates exactly to
    ``(L/2pi) * sin(2*sqrt(S*e)) / sqrt(S)``; for more particles no closed
    form exists and this raises.
    """
    if params.n_particles != 1:
        raise WrongParticleNumber(
            "closed-form counting is only available for a single particle"
        )
    energies = _as_positive_array(e)
    length = params.ring_length
    shape = PartitionShape((1,))
    x = np.sqrt(energies)
    count = (length / math.pi) * x
    for m in range(1, settings.m_max + 1):
        action = scaled_action(shape, (m,), params)
        # both windings +-m contribute the same closed-form integral
        count = count + 2.0 * (length / TWO_PI) * np.sin(
            2.0 * math.sqrt(action) * x
        ) / math.sqrt(action)
    return float(count[0]) if np.ndim(e) == 0 else count
