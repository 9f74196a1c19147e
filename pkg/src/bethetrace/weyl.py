"""Smooth part of the density of states via energy-shell quadrature.

Per partition, the smooth density is the integral of the quantization
Jacobian over the shell ``sum_j a_j k_j**2 = E``.  Rescaling ``u = sqrt(a)*k``
turns the shell into a sphere, leaving

    E**((d-2)/2) / 2 * prod(a)**(-1/2) * integral over S^(d-1) of det dI/dk,

which a tensor-product Gauss-Legendre rule in the d-1 angles evaluates to
spectral accuracy (the integrand is smooth and strictly positive).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .errors import NonPositiveEnergy
from .model import ModelParams, PartitionShape, gaudin_determinants
from .partitions import enumerate_partitions

_CHUNK = 256
_MAX_BATCH = 1 << 20  # cap on energies*nodes per determinant batch


@dataclass(frozen=True)
class QuadratureSpec:
    """Gauss-Legendre nodes per spherical angle."""

    nodes_per_angle: int = 64

    def __post_init__(self):
        if self.nodes_per_angle < 8:
            raise ValueError("nodes_per_angle must be at least 8")


DEFAULT_QUADRATURE = QuadratureSpec()


@lru_cache(maxsize=8)
def _sphere_rule(d: int, nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Unit-sphere points (n, d) and weights summing to the surface area."""
    if d == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    x, w = np.polynomial.legendre.leggauss(nodes)
    if d == 2:
        theta = math.pi * (x + 1.0)  # [0, 2*pi)
        pts = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        return pts, w * math.pi
    if d == 3:
        theta = 0.5 * math.pi * (x + 1.0)  # [0, pi]
        phi = math.pi * (x + 1.0)
        t, p = np.meshgrid(theta, phi, indexing="ij")
        wt, wp = np.meshgrid(w, w, indexing="ij")
        pts = np.stack(
            [np.cos(t), np.sin(t) * np.cos(p), np.sin(t) * np.sin(p)], axis=-1
        ).reshape(-1, 3)
        weights = (np.sin(t) * wt * wp).reshape(-1) * 0.5 * math.pi * math.pi
        return pts, weights
    if d == 4:
        chi = 0.5 * math.pi * (x + 1.0)
        theta = 0.5 * math.pi * (x + 1.0)
        phi = math.pi * (x + 1.0)
        c, t, p = np.meshgrid(chi, theta, phi, indexing="ij")
        wc, wt, wp = np.meshgrid(w, w, w, indexing="ij")
        pts = np.stack(
            [
                np.cos(c),
                np.sin(c) * np.cos(t),
                np.sin(c) * np.sin(t) * np.cos(p),
                np.sin(c) * np.sin(t) * np.sin(p),
            ],
            axis=-1,
        ).reshape(-1, 4)
        weights = (np.sin(c) ** 2 * np.sin(t) * wc * wt * wp).reshape(-1)
        weights = weights * 0.25 * math.pi * math.pi * math.pi
        return pts, weights
    raise NotImplementedError(f"sphere quadrature not implemented for d={d}")


def _density_partition(params, shape, energies, quad_spec):
    a = np.asarray(shape.blocks, dtype=float)
    d = shape.dimension
    pts, weights = _sphere_rule(d, quad_spec.nodes_per_angle)
    directions = pts / np.sqrt(a)  # shell point k = sqrt(e) * direction
    prefactor = 0.5 / math.sqrt(float(np.prod(a)))
    out = np.empty_like(energies)
    for start in range(0, energies.size, _CHUNK):
        e_chunk = energies[start:start + _CHUNK]
        root = np.sqrt(e_chunk)[:, None, None]
        node_block = max(1, _MAX_BATCH // e_chunk.size)
        acc = np.zeros_like(e_chunk)
        for nstart in range(0, weights.size, node_block):  # fixed order
            k = root * directions[None, nstart:nstart + node_block, :]
            dets = np.abs(gaudin_determinants(params, shape, k))
            acc += dets @ weights[nstart:nstart + node_block]
        out[start:start + _CHUNK] = prefactor * e_chunk ** (0.5 * (d - 2)) * acc
    return out


def _as_energy_array(e):
    energies = np.atleast_1d(np.asarray(e, dtype=float))
    if np.any(energies <= 0.0):
        raise NonPositiveEnergy("energy must be strictly positive")
    return energies


def weyl_density_partition(params: ModelParams, shape: PartitionShape, e,
                           quad_spec: QuadratureSpec = DEFAULT_QUADRATURE):
    """Smooth density contribution of one partition at energy e (scalar or array)."""
    energies = _as_energy_array(e)
    out = _density_partition(params, shape, energies, quad_spec)
    return float(out[0]) if np.isscalar(e) or np.ndim(e) == 0 else out


def weyl_density_total(params: ModelParams, e,
                       quad_spec: QuadratureSpec = DEFAULT_QUADRATURE):
    """Signed partition sum of the smooth density at energy e (scalar or array)."""
    energies = _as_energy_array(e)
    total = np.zeros_like(energies)
    for shape in enumerate_partitions(params.n_particles).shapes:
        total += float(shape.coefficient) * _density_partition(
            params, shape, energies, quad_spec
        )
    return float(total[0]) if np.isscalar(e) or np.ndim(e) == 0 else total


def weyl_count(params: ModelParams, e: float,
               quad_spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Integral of the smooth density from 0 to e.

    The substitution ``e' = s**2`` removes the inverse-square-root endpoint
    singularity of single-block partitions before the adaptive quadrature.
    """
    energies = _as_energy_array(e)
    if energies.size != 1:
        raise ValueError("weyl_count expects a scalar energy")

    def integrand(s: float) -> float:
        if s == 0.0:
            s = 1e-300
        return weyl_density_total(params, s * s, quad_spec) * 2.0 * s

    value, _ = quad(integrand, 0.0, math.sqrt(float(energies[0])),
                    epsabs=1e-8, epsrel=1e-10, limit=200)
    return float(value)
