"""Domain types and pure functions for bosons with contact interaction on a ring.

Units are fixed by ``hbar = 2m = 1``: the energy of a state with rapidities
``k_j`` and block multiplicities ``a_j`` is ``sum_j a_j k_j**2``.  The ring
length is dimensionless and defaults to ``2*pi``, in which case free
single-particle levels sit at integer squares.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidQuantumNumbers

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ModelParams:
    """Particle number, repulsive coupling, and ring length.

    ``coupling`` must be strictly positive: the attractive regime supports
    bound states the quantization residual below does not describe, and the
    free-boson point ``g = 0`` is a singular limit of its arctangent terms.
    """

    n_particles: int
    coupling: float
    ring_length: float = TWO_PI

    def __post_init__(self):
        if self.n_particles < 1:
            raise ValueError("n_particles must be a positive integer")
        if not self.coupling > 0.0:
            raise ValueError("coupling must be strictly positive (repulsive regime)")
        if not self.ring_length > 0.0:
            raise ValueError("ring_length must be strictly positive")

    @property
    def parity_offset(self) -> int:
        """0 when quantum numbers are integers (odd N), 1 when half-integers."""
        return (self.n_particles + 1) % 2


@dataclass(frozen=True)
class QuantumNumbers:
    """Strictly increasing (half-)integers stored exactly as doubled integers.

    ``doubled[j] = 2*I_j`` so half-integers never touch floating point.  All
    entries share the parity ``parity_offset``: even doubled values for odd
    particle numbers, odd doubled values for even particle numbers.
    """

    doubled: tuple[int, ...]
    parity_offset: int

    def __post_init__(self):
        object.__setattr__(self, "doubled", tuple(int(d) for d in self.doubled))
        if self.parity_offset not in (0, 1):
            raise InvalidQuantumNumbers("parity_offset must be 0 or 1")
        for d in self.doubled:
            if d % 2 != self.parity_offset:
                raise InvalidQuantumNumbers(
                    f"doubled quantum number {d} has parity {d % 2}, "
                    f"expected {self.parity_offset}"
                )
        if any(a >= b for a, b in zip(self.doubled, self.doubled[1:])):
            raise InvalidQuantumNumbers(
                f"quantum numbers must be strictly increasing, got {self.doubled}"
            )

    def __len__(self) -> int:
        return len(self.doubled)

    @property
    def values(self) -> np.ndarray:
        return np.asarray(self.doubled, dtype=float) / 2.0


@dataclass(frozen=True)
class PartitionShape:
    """An integer partition: non-increasing positive blocks ``a_i``.

    The block sizes act as multiplicity factors (how many quantum numbers
    coincide); ``coefficient`` is the exact signed weight with which the
    unrestricted sum over one representative per block enters the
    decomposition of an ordered sum.
    """

    blocks: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(int(b) for b in self.blocks))
        if not self.blocks or any(b < 1 for b in self.blocks):
            raise ValueError("blocks must be positive integers")
        if any(a < b for a, b in zip(self.blocks, self.blocks[1:])):
            raise ValueError("blocks must be non-increasing")

    @property
    def total(self) -> int:
        return sum(self.blocks)

    @property
    def dimension(self) -> int:
        return len(self.blocks)

    @property
    def multiplicity_counts(self) -> dict[int, int]:
        """Map block size m -> how many blocks have that size."""
        counts: dict[int, int] = {}
        for b in self.blocks:
            counts[b] = counts.get(b, 0) + 1
        return counts

    @property
    def coefficient(self) -> Fraction:
        """Exact weight (-1)**(d-N) / prod_m (m**s_m * s_m!)."""
        n = self.total
        d = self.dimension
        sign = -1 if (d - n) % 2 else 1
        denom = 1
        for m, s in self.multiplicity_counts.items():
            denom *= m**s * math.factorial(s)
        return Fraction(sign, denom)


@dataclass(frozen=True)
class BetheState:
    """A solved eigenstate: quantum numbers, rapidities, and observables."""

    shape: PartitionShape
    quantum_numbers: QuantumNumbers
    rapidities: tuple[float, ...]
    energy: float
    momentum: float
    gaudin_det: float
    residual_norm: float
    iterations: int


def as_quantum_numbers(params: ModelParams, qn, expected_length: int | None = None) -> QuantumNumbers:
    """Coerce a QuantumNumbers instance or a sequence of I-values.

    Float sequences are accepted when every ``2*I`` is within 1e-9 of an
    integer of the parity required by ``params``.
    """
    if isinstance(qn, QuantumNumbers):
        out = qn
        if out.parity_offset != params.parity_offset:
            raise InvalidQuantumNumbers(
                f"parity offset {out.parity_offset} does not match particle "
                f"number {params.n_particles}"
            )
    else:
        doubled = []
        for v in qn:
            d = 2.0 * float(v)
            r = round(d)
            if abs(d - r) > 1e-9:
                raise InvalidQuantumNumbers(f"{v} is not a (half-)integer")
            doubled.append(int(r))
        out = QuantumNumbers(tuple(doubled), params.parity_offset)
    if expected_length is not None and len(out) != expected_length:
        raise InvalidQuantumNumbers(
            f"expected {expected_length} quantum numbers, got {len(out)}"
        )
    return out


def _i_values(qn) -> np.ndarray:
    if isinstance(qn, QuantumNumbers):
        return qn.values
    return np.asarray(qn, dtype=float)


def bethe_residual(params: ModelParams, shape: PartitionShape, quantum_numbers, rapidities) -> np.ndarray:
    """Residual of the quantization conditions with multiplicity factors.

    Component j is ``L*k_j + 2*sum_i a_i*arctan((k_j - k_i)/g) - 2*pi*I_j``;
    the zero vector characterizes a solved state.  With all blocks equal to
    one this is the plain N-particle quantization condition.
    """
    k = np.asarray(rapidities, dtype=float)
    i_vals = _i_values(quantum_numbers)
    a = np.asarray(shape.blocks, dtype=float)
    if not (k.shape == i_vals.shape == a.shape):
        raise ValueError(
            f"dimension mismatch: blocks {a.shape}, quantum numbers "
            f"{i_vals.shape}, rapidities {k.shape}"
        )
    diffs = k[:, None] - k[None, :]
    scattering = (a[None, :] * np.arctan(diffs / params.coupling)).sum(axis=1)
    return params.ring_length * k + 2.0 * scattering - TWO_PI * i_vals


def _gaudin(params: ModelParams, shape: PartitionShape, rapidities: np.ndarray) -> np.ndarray:
    """Build the Jacobian dI/dk for a batch of rapidity vectors (..., d)."""
    k = np.asarray(rapidities, dtype=float)
    a = np.asarray(shape.blocks, dtype=float)
    d = shape.dimension
    if k.shape[-1] != d:
        raise ValueError(f"rapidity vectors must have length {d}, got {k.shape[-1]}")
    g = params.coupling
    diffs = k[..., :, None] - k[..., None, :]
    kern = g / (g * g + diffs * diffs)
    idx = np.arange(d)
    kern[..., idx, idx] = 0.0
    gmat = -2.0 * a * kern  # entry (j, i) = -2 a_i K(k_j - k_i), i != j
    gmat[..., idx, idx] = params.ring_length + 2.0 * (a * kern).sum(axis=-1)
    gmat /= TWO_PI
    return gmat


def gaudin_matrix(params: ModelParams, shape: PartitionShape, rapidities) -> np.ndarray:
    """Jacobian dI/dk of the quantization map at the given rapidities.

    Row j: diagonal ``(L + 2*sum_{l!=j} a_l K(k_j-k_l))/2pi`` and off-diagonal
    ``-2 a_i K(k_j-k_i)/2pi`` with kernel ``K(x) = g/(g^2 + x^2)``.  Rows are
    strictly diagonally dominant with excess exactly ``L/2pi``.
    """
    k = np.asarray(rapidities, dtype=float)
    if k.ndim != 1:
        raise ValueError("gaudin_matrix expects a single rapidity vector")
    return _gaudin(params, shape, k)


def gaudin_determinants(params: ModelParams, shape: PartitionShape, rapidities) -> np.ndarray:
    """Determinant of the quantization Jacobian for a batch of vectors (..., d)."""
    return np.linalg.det(_gaudin(params, shape, rapidities))


def jacobian_det(params: ModelParams, shape: PartitionShape, rapidities) -> float:
    """det dI/dk; strictly positive by diagonal dominance."""
    k = np.asarray(rapidities, dtype=float)
    if k.ndim != 1:
        raise ValueError("jacobian_det expects a single rapidity vector")
    return float(np.linalg.det(_gaudin(params, shape, k)))


def energy(shape: PartitionShape, rapidities) -> float:
    """Multiplicity-weighted kinetic energy ``sum_j a_j k_j**2``."""
    k = np.asarray(rapidities, dtype=float)
    a = np.asarray(shape.blocks, dtype=float)
    if k.shape != a.shape:
        raise ValueError("rapidities must match the number of blocks")
    return float(np.dot(a, k * k))


def momentum(shape: PartitionShape, rapidities) -> float:
    """Multiplicity-weighted total momentum ``sum_j a_j k_j``."""
    k = np.asarray(rapidities, dtype=float)
    a = np.asarray(shape.blocks, dtype=float)
    if k.shape != a.shape:
        raise ValueError("rapidities must match the number of blocks")
    return float(np.dot(a, k))
