"""Numerical realization of the averaging machinery: balance projections,
the period-averaged potential, the first-order generator, homological
residuals, the second-order slow Hamiltonian, and drift diagnostics."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Tuple

import numpy as np

from .core import (EpsilonParameter, PhaseState, PotentialField, apply_j2,
                   apply_j2t, structure_matrix)
from .integrators import TrajectoryRecord, flow_k

FAST_PERIOD = 2.0 * np.pi


@dataclass(frozen=True)
class QuadratureSpec:
    """Equispaced nodes over one fast period for the averaging integrals."""

    n_nodes: int = 128

    def __post_init__(self):
        if self.n_nodes < 4:
            raise ValueError("need at least 4 quadrature nodes")


@dataclass(frozen=True)
class DriftReport:
    eps: float
    delta_k: float
    delta_e: float
    horizon: float

    def __post_init__(self):
        if self.delta_k < 0 or self.delta_e < 0:
            raise ValueError("drift magnitudes must be nonnegative")


def balance_momentum(q: np.ndarray, tau: float, eps: EpsilonParameter,
                     potential: PotentialField) -> np.ndarray:
    """First-order slow-manifold momentum p_gs = -eps * J2 grad V."""
    return -eps.eps * apply_j2(potential.gradient(q, tau))


def ageostrophic_momentum(state: PhaseState, eps: EpsilonParameter,
                          potential: PotentialField) -> np.ndarray:
    """Departure from geostrophic balance, p - p_gs."""
    return state.p - balance_momentum(state.q, state.tau, eps, potential)


def transform_position(q_eps: np.ndarray, eps: EpsilonParameter,
                       potential: PotentialField,
                       tau: float = 0.0) -> np.ndarray:
    """First-order position map from transformed to physical coordinates,
    q = q_eps - eps * grad V(q_eps).

    The slow models integrate the transformed position; mapping their
    output through this shift makes it comparable with the physical
    trajectory at one order higher than the raw coordinates.
    """
    q_eps = np.asarray(q_eps, dtype=float)
    return q_eps - eps.eps * potential.gradient(q_eps, tau)


def untransform_position(q: np.ndarray, eps: EpsilonParameter,
                         potential: PotentialField,
                         tau: float = 0.0) -> np.ndarray:
    """First-order inverse of ``transform_position``."""
    q = np.asarray(q, dtype=float)
    return q + eps.eps * potential.gradient(q, tau)


def slow_manifold_state(q_eps: np.ndarray, eps: EpsilonParameter,
                        potential: PotentialField,
                        tau: float = 0.0) -> PhaseState:
    """Physical phase state on the second-order slow manifold over q_eps.

    The transformed momentum is set to zero, so the physical momentum is
    the physical-time derivative of the mapped slow solution: the
    second-order slow velocity J2^T (eps grad V - eps^2/2 grad ||grad V||^2)
    pushed through the Jacobian (I - eps Hess V) of the position map.
    First-order balance p = -eps J2 grad V leaves O(eps^2) fast
    oscillations; this refinement reduces them to O(eps^3).
    """
    q_eps = np.asarray(q_eps, dtype=float)
    e = eps.eps
    grad = potential.gradient(q_eps, tau)
    slow_vel = apply_j2t(e * grad
                         - 0.5 * e * e
                         * potential.grad_norm_sq_gradient(q_eps, tau))
    p = slow_vel - e * potential.hessian(q_eps, tau) @ slow_vel
    return PhaseState(p=p, q=q_eps - e * grad, tau=tau)


def _fast_samples(z: PhaseState, potential: PotentialField,
                  quad: QuadratureSpec) -> np.ndarray:
    """V evaluated along the fast flow at equispaced phase nodes."""
    taus = FAST_PERIOD * np.arange(quad.n_nodes) / quad.n_nodes
    return np.array([potential.value(flow_k(z, t).q, 0.0) for t in taus])


def averaged_potential(z: PhaseState, potential: PotentialField,
                       quad: QuadratureSpec = QuadratureSpec()) -> float:
    """Average of V along the fast flow over one period.

    The integrand is periodic and analytic, so the equispaced-node
    (trapezoidal) average is spectrally accurate.
    """
    return float(np.mean(_fast_samples(z, potential, quad)))


def generator_f1(z: PhaseState, potential: PotentialField,
                 quad: QuadratureSpec = QuadratureSpec()) -> float:
    """First-order transformation generator,
    (1/T) * integral of tau * (V - Vbar) along the fast flow.

    The tau weight breaks periodicity, so the integral is taken of the
    trigonometric interpolant of the samples: each Fourier mode e^{ik tau}
    integrates to 1/(ik), giving spectral accuracy where a plain
    trapezoidal sum would stall at O(h^2).
    """
    g = _fast_samples(z, potential, quad)
    g = g - g.mean()
    n = quad.n_nodes
    gh = np.fft.rfft(g) / n
    kmax = (n - 1) // 2  # Nyquist mode is pure cosine and integrates to 0
    k = np.arange(1, kmax + 1)
    return float(np.sum(2.0 * np.imag(gh[1:kmax + 1]) / k))


def poisson_bracket(f: Callable[[PhaseState], float],
                    g: Callable[[PhaseState], float],
                    z: PhaseState, step: float = 1e-5) -> float:
    """{f, g} = grad f . J grad g with gradients by central differences."""
    n = z.n_parcels
    j = structure_matrix(n)
    d = 2 * n

    def grad(fun):
        out = np.empty(2 * d)
        for i in range(2 * d):
            e = np.zeros(2 * d)
            e[i] = step
            zp = PhaseState(z.p + e[:d], z.q + e[d:], z.tau)
            zm = PhaseState(z.p - e[:d], z.q - e[d:], z.tau)
            out[i] = (fun(zp) - fun(zm)) / (2 * step)
        return out

    return float(grad(f) @ j @ grad(g))


def homological_residual(z: PhaseState, potential: PotentialField,
                         quad: QuadratureSpec = QuadratureSpec(),
                         step: float = 1e-5) -> float:
    """|Vbar - V - {K, F1}| at z, brackets by finite differences."""

    def kin(s: PhaseState) -> float:
        return float(0.5 * s.p @ s.p)

    def f1(s: PhaseState) -> float:
        return generator_f1(s, potential, quad)

    vbar = averaged_potential(z, potential, quad)
    v = potential.value(z.q, 0.0)
    bracket = poisson_bracket(kin, f1, z, step)
    return abs(vbar - v - bracket)


def lsg_hamiltonian(q: np.ndarray, eps: EpsilonParameter,
                    potential: PotentialField, tau: float = 0.0) -> float:
    """Second-order slow Hamiltonian eps*V - eps^2/2 * ||grad V||^2."""
    e = eps.eps
    g = potential.gradient(q, tau)
    return e * potential.value(q, tau) - 0.5 * e * e * float(g @ g)


def drift_metrics(record: TrajectoryRecord, eps: float = np.nan) -> DriftReport:
    """Kinetic and total-energy drift between first and last samples."""
    if len(record) < 2:
        raise ValueError("need at least 2 samples to measure drift")
    return DriftReport(
        eps=eps,
        delta_k=abs(record.kinetic[-1] - record.kinetic[0]),
        delta_e=abs(record.energy[-1] - record.energy[0]),
        horizon=float(record.tau[-1] - record.tau[0]),
    )


def fit_exponential(points: Sequence[Tuple[float, float]]) -> Tuple[float, float]:
    """Least-squares fit of delta = C * exp(-c / eps) through (eps, delta)
    pairs; returns (C, c)."""
    if len(points) < 2:
        raise ValueError("need at least 2 points for the fit")
    eps = np.array([p[0] for p in points], dtype=float)
    delta = np.array([p[1] for p in points], dtype=float)
    if np.any(delta <= 0) or np.any(eps <= 0):
        raise ValueError("all eps and delta values must be positive")
    if np.unique(eps).size != eps.size:
        raise ValueError("eps values must be distinct")
    slope, intercept = np.polyfit(1.0 / eps, np.log(delta), 1)
    return float(np.exp(intercept)), float(-slope)
