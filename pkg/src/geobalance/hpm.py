"""Hamiltonian particle-mesh discretization on a doubly periodic square:
cubic B-spline deposition/gather, modulated grid coupling with an optional
background depth, spectral inverse-Helmholtz smoothing, and a Strang step.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .integrators import StepperConfig

DOMAIN = 2.0 * np.pi
Background = Optional[Callable[[float, np.ndarray, np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class PeriodicGrid:
    """M x M nodes on [0, 2pi)^2 with spacing h = 2pi/M."""

    m: int

    def __post_init__(self):
        if self.m < 8:
            raise ValueError("need at least 8 nodes per dimension")

    @property
    def h(self) -> float:
        return DOMAIN / self.m

    def nodes(self):
        """Meshgrid (X, Y) of node coordinates, indexed [ix, iy]."""
        x = self.h * np.arange(self.m)
        return np.meshgrid(x, x, indexing="ij")


@dataclass
class ParticleEnsemble:
    """N particles with flat (2N,) position/momentum arrays and uniform
    per-particle mass."""

    q: np.ndarray
    p: np.ndarray
    mass: float = 1.0
    tau: float = 0.0

    def __post_init__(self):
        self.q = np.mod(np.asarray(self.q, dtype=float), DOMAIN)
        self.p = np.asarray(self.p, dtype=float).copy()
        if self.q.shape != self.p.shape or self.q.ndim != 1 or self.q.size % 2:
            raise ValueError("q and p must be equal-length flat 2N arrays")
        if not self.mass > 0:
            raise ValueError("particle mass must be positive")

    @property
    def n_particles(self) -> int:
        return self.q.size // 2


@dataclass
class DepthField:
    mu: np.ndarray
    includes_background: bool = False


@dataclass(frozen=True)
class ModulationEnvelope:
    """Gaussian switching function g(tau) = exp(-((tau-center)/width)^2)."""

    center: float
    width: float

    def __call__(self, tau: float) -> float:
        return float(np.exp(-(((tau - self.center) / self.width) ** 2)))


def _envelope_value(envelope, tau: float) -> float:
    return 1.0 if envelope is None else float(envelope(tau))


def bspline_1d(s):
    """Cardinal cubic B-spline, B(0) = 2/3, support (-2, 2)."""
    s = np.abs(np.asarray(s, dtype=float))
    out = np.zeros_like(s)
    inner = s <= 1.0
    outer = (s > 1.0) & (s <= 2.0)
    out[inner] = 2.0 / 3.0 - s[inner] ** 2 + 0.5 * s[inner] ** 3
    out[outer] = (2.0 - s[outer]) ** 3 / 6.0
    return out


def bspline_deriv_1d(s):
    s = np.asarray(s, dtype=float)
    a = np.abs(s)
    out = np.zeros_like(s)
    inner = a <= 1.0
    outer = (a > 1.0) & (a <= 2.0)
    out[inner] = -2.0 * s[inner] + 1.5 * s[inner] * a[inner]
    out[outer] = -0.5 * np.sign(s[outer]) * (2.0 - a[outer]) ** 2
    return out


def _stencil_1d(x, grid: PeriodicGrid):
    """Base node index, fractional offset, and the 4-node index window."""
    u = np.mod(np.asarray(x, dtype=float), DOMAIN) / grid.h
    base = np.floor(u).astype(int)
    frac = u - base
    idx = np.mod(base[..., None] - 1 + np.arange(4), grid.m)
    return base, frac, idx


def bspline_weights_1d(x: float, grid: PeriodicGrid):
    """Weights of the 4 nearest nodes; returns (first node index, weights).

    Node j of the stencil sits at index (first + j) mod M; weights sum to 1
    by the partition-of-unity property.
    """
    base, frac, idx = _stencil_1d(np.atleast_1d(x), grid)
    s = frac[:, None] - np.arange(-1, 3)
    w = bspline_1d(s)
    return int(idx[0, 0]), w[0]


def shape_2d(q, grid: PeriodicGrid):
    """Tensor-product 4x4 stencil of basis values at a position (x, y).

    Returns (ix0, iy0, weights) with weights[i, j] belonging to node
    ((ix0 + i) mod M, (iy0 + j) mod M).
    """
    q = np.asarray(q, dtype=float)
    ix0, wx = bspline_weights_1d(q[0], grid)
    iy0, wy = bspline_weights_1d(q[1], grid)
    return ix0, iy0, np.outer(wx, wy)


def _stencils(q_flat: np.ndarray, grid: PeriodicGrid):
    """Vectorized stencil data for all particles: index windows and 1-d
    value/derivative weight rows."""
    x, y = q_flat[0::2], q_flat[1::2]
    _, fx, ix = _stencil_1d(x, grid)
    _, fy, iy = _stencil_1d(y, grid)
    sx = fx[:, None] - np.arange(-1, 3)
    sy = fy[:, None] - np.arange(-1, 3)
    return ix, iy, bspline_1d(sx), bspline_1d(sy), \
        bspline_deriv_1d(sx) / grid.h, bspline_deriv_1d(sy) / grid.h


def _background_nodes(background: Background, grid: PeriodicGrid,
                      tau: float) -> np.ndarray:
    if background is None:
        return np.zeros((grid.m, grid.m))
    x, y = grid.nodes()
    return np.asarray(background(tau, x, y), dtype=float)


def deposit(particles: ParticleEnsemble, grid: PeriodicGrid,
            background: Background = None, tau: float = 0.0) -> DepthField:
    """Scatter particle masses onto the grid and add the background depth."""
    mu = _deposit_particles(particles.q, particles.mass, grid)
    mu += _background_nodes(background, grid, tau)
    return DepthField(mu, includes_background=background is not None)


def _deposit_particles(q_flat: np.ndarray, mass: float,
                       grid: PeriodicGrid) -> np.ndarray:
    m = grid.m
    mu = np.zeros(m * m)
    if q_flat.size:
        ix, iy, wx, wy, _, _ = _stencils(q_flat, grid)
        flat_idx = (ix[:, :, None] * m + iy[:, None, :]).ravel()
        vals = (mass * wx[:, :, None] * wy[:, None, :]).ravel()
        np.add.at(mu, flat_idx, vals)
    return mu.reshape(m, m)


def smooth_field(depth: DepthField, alpha: float) -> DepthField:
    """Inverse Helmholtz (1 - alpha^2 Laplacian)^{-1} applied spectrally."""
    return DepthField(_smooth(depth.mu, alpha), depth.includes_background)


def _smooth(mu: np.ndarray, alpha: float) -> np.ndarray:
    if alpha == 0.0:
        return mu
    m = mu.shape[0]
    if m & (m - 1):
        raise ValueError(f"smoothing requires a power-of-two grid, got {m}")
    k = np.fft.fftfreq(m, d=1.0 / m)
    k2 = k[:, None] ** 2 + k[None, :] ** 2
    return np.real(np.fft.ifft2(np.fft.fft2(mu) / (1.0 + alpha * alpha * k2)))


def _coupling(particles: ParticleEnsemble, grid: PeriodicGrid,
              background: Background, tau: float, alpha: float):
    """Particle depth, smoothed particle depth, smoothed background."""
    mu_p = _deposit_particles(particles.q, particles.mass, grid)
    mu_bg = _background_nodes(background, grid, tau)
    return mu_p, _smooth(mu_p, alpha), _smooth(mu_bg, alpha)


def hpm_potential(particles: ParticleEnsemble, grid: PeriodicGrid,
                  background: Background = None,
                  envelope: Optional[ModulationEnvelope] = None,
                  tau: float = 0.0, alpha: float = 0.0) -> float:
    """Grid-coupling potential V such that H_hpm = K + eps * V."""
    mu_p, s_mu_p, s_mu_bg = _coupling(particles, grid, background, tau, alpha)
    raw = 0.5 * np.sum(mu_p * s_mu_p) + np.sum(mu_p * s_mu_bg)
    return _envelope_value(envelope, tau) * float(raw)


def hpm_energy(particles: ParticleEnsemble, grid: PeriodicGrid,
               background: Background = None,
               envelope: Optional[ModulationEnvelope] = None,
               eps: float = 0.1, tau: float = 0.0,
               alpha: float = 0.0) -> float:
    """Total HPM energy: kinetic part plus the modulated grid coupling."""
    kin = 0.5 * float(particles.p @ particles.p)
    return kin + eps * hpm_potential(particles, grid, background, envelope,
                                     tau, alpha)


def hpm_potential_gradient(particles: ParticleEnsemble, grid: PeriodicGrid,
                           background: Background = None,
                           envelope: Optional[ModulationEnvelope] = None,
                           tau: float = 0.0, alpha: float = 0.0) -> np.ndarray:
    """Gradient of the coupling potential with respect to all particle
    positions (flat 2N), from the analytic B-spline derivative."""
    _, s_mu_p, s_mu_bg = _coupling(particles, grid, background, tau, alpha)
    c = s_mu_p + s_mu_bg
    ix, iy, wx, wy, dwx, dwy = _stencils(particles.q, grid)
    cvals = c[ix[:, :, None], iy[:, None, :]]
    gx = np.sum(dwx[:, :, None] * wy[:, None, :] * cvals, axis=(1, 2))
    gy = np.sum(wx[:, :, None] * dwy[:, None, :] * cvals, axis=(1, 2))
    grad = np.empty_like(particles.q)
    grad[0::2] = gx
    grad[1::2] = gy
    return _envelope_value(envelope, tau) * particles.mass * grad


def hpm_force(particles: ParticleEnsemble, grid: PeriodicGrid,
              background: Background = None,
              envelope: Optional[ModulationEnvelope] = None,
              eps: float = 0.1, tau: float = 0.0,
              alpha: float = 0.0) -> np.ndarray:
    """Per-particle force -eps * grad of the coupling potential."""
    return -eps * hpm_potential_gradient(particles, grid, background,
                                         envelope, tau, alpha)


def _flow_k_arrays(p: np.ndarray, q: np.ndarray, t: float):
    c, s = np.cos(t), np.sin(t)
    px, py = p[0::2], p[1::2]
    rp = np.empty_like(p)
    rp[0::2] = c * px + s * py
    rp[1::2] = -s * px + c * py
    dq = p - rp
    qn = q.copy()
    qn[0::2] += dq[1::2]
    qn[1::2] -= dq[0::2]
    return rp, qn


def hpm_step(particles: ParticleEnsemble, grid: PeriodicGrid,
             background: Background = None,
             envelope: Optional[ModulationEnvelope] = None,
             cfg: StepperConfig = None, alpha: float = 0.0) -> ParticleEnsemble:
    """One Strang step of the HPM system: half inertial flow, grid-coupling
    kick at the midpoint time, half inertial flow; positions re-wrapped."""
    dt = cfg.dt
    p, q = _flow_k_arrays(particles.p, particles.q, 0.5 * dt)
    mid = ParticleEnsemble(q, p, particles.mass, particles.tau)
    force = hpm_force(mid, grid, background, envelope, cfg.eps.eps,
                      particles.tau + 0.5 * dt, alpha)
    p = p + dt * force
    p, q = _flow_k_arrays(p, q, 0.5 * dt)
    return ParticleEnsemble(q, p, particles.mass, particles.tau + dt)
