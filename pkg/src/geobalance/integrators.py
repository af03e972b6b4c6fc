"""Exact sub-flows, the Strang composition, an RK4 reference, and the
reduced slow-model integrators."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .core import (EpsilonParameter, PhaseState, PotentialField, apply_j2,
                   apply_j2t, kinetic_energy, total_energy)

SCHEMES = ("strang", "rk4", "slow_geostrophic", "slow_lsg")


@dataclass(frozen=True)
class StepperConfig:
    dt: float
    scheme: str = "strang"
    eps: EpsilonParameter = field(default_factory=lambda: EpsilonParameter(0.1))

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")


@dataclass
class TrajectoryRecord:
    """Sampled time series of state and diagnostics."""

    tau: np.ndarray
    p: np.ndarray  # (n_samples, 2N)
    q: np.ndarray  # (n_samples, 2N)
    kinetic: np.ndarray
    energy: np.ndarray
    kinetic_ag: np.ndarray

    def __len__(self):
        return self.tau.size


def flow_k(state: PhaseState, t: float) -> PhaseState:
    """Exact flow of the kinetic Hamiltonian: per-parcel inertial rotation.

    p -> exp(J2 t) p,  q -> J2 (I - exp(J2 t)) p + q.  Slow time is left
    untouched; the composite stepper does the bookkeeping.
    """
    c, s = np.cos(t), np.sin(t)
    p, q = state.p, state.q
    rp = np.empty_like(p)
    rp[0::2] = c * p[0::2] + s * p[1::2]
    rp[1::2] = -s * p[0::2] + c * p[1::2]
    qn = q + apply_j2(p - rp)
    return PhaseState(rp, qn, state.tau)


def kick_v(state: PhaseState, t: float, eps: EpsilonParameter,
           potential: PotentialField, tau_sample: Optional[float] = None) -> PhaseState:
    """Flow of eps*V under the structure operator: p -> p - t*eps*grad V(q).

    The potential is evaluated at ``tau_sample`` (defaults to the state's
    own slow time); positions and slow time are unchanged.
    """
    tau = state.tau if tau_sample is None else tau_sample
    g = potential.gradient(state.q, tau)
    return PhaseState(state.p - t * eps.eps * g, state.q, state.tau)


def strang_step(state: PhaseState, cfg: StepperConfig,
                potential: PotentialField) -> PhaseState:
    """Half kinetic flow, full potential kick, half kinetic flow.

    Second-order symplectic.  Time-dependent potentials are sampled at the
    midpoint time tau + dt/2.
    """
    dt = cfg.dt
    s = flow_k(state, 0.5 * dt)
    s = kick_v(s, dt, cfg.eps, potential, tau_sample=state.tau + 0.5 * dt)
    s = flow_k(s, 0.5 * dt)
    return PhaseState(s.p, s.q, state.tau + dt)


def _full_rhs(p, q, tau, eps, potential):
    dp = apply_j2(p) - eps.eps * potential.gradient(q, tau)
    return dp, p.copy()


def rk4_step(state: PhaseState, cfg: StepperConfig,
             potential: PotentialField) -> PhaseState:
    """Classical fourth-order step on the full vector field (non-symplectic
    reference)."""
    dt, eps = cfg.dt, cfg.eps
    p, q, tau = state.p, state.q, state.tau
    k1p, k1q = _full_rhs(p, q, tau, eps, potential)
    k2p, k2q = _full_rhs(p + 0.5 * dt * k1p, q + 0.5 * dt * k1q,
                         tau + 0.5 * dt, eps, potential)
    k3p, k3q = _full_rhs(p + 0.5 * dt * k2p, q + 0.5 * dt * k2q,
                         tau + 0.5 * dt, eps, potential)
    k4p, k4q = _full_rhs(p + dt * k3p, q + dt * k3q, tau + dt, eps, potential)
    pn = p + dt / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p)
    qn = q + dt / 6.0 * (k1q + 2 * k2q + 2 * k3q + k4q)
    return PhaseState(pn, qn, tau + dt)


def geostrophic_rhs(q: np.ndarray, tau: float, eps: EpsilonParameter,
                    potential: PotentialField) -> np.ndarray:
    """First-order slow model: qdot = -eps * J2 grad V."""
    return -eps.eps * apply_j2(potential.gradient(q, tau))


def lsg_rhs(q: np.ndarray, tau: float, eps: EpsilonParameter,
            potential: PotentialField) -> np.ndarray:
    """Second-order (large-scale semi-geostrophic) slow model:
    qdot = J2^T (eps grad V - eps^2/2 grad ||grad V||^2)."""
    e = eps.eps
    f = e * potential.gradient(q, tau) \
        - 0.5 * e * e * potential.grad_norm_sq_gradient(q, tau)
    return apply_j2t(f)


class SlowSolverError(RuntimeError):
    pass


def slow_integrate(q0: np.ndarray, cfg: StepperConfig,
                   potential: PotentialField, horizon: float,
                   fp_tol: float = 1e-13, max_fp_iter: int = 50):
    """Implicit-midpoint integration of a reduced slow model.

    Returns (taus, positions) with positions of shape (n_steps+1, 2N).
    Both reduced systems are canonical, so the midpoint rule is symplectic
    for them.
    """
    if cfg.scheme == "slow_geostrophic":
        rhs = geostrophic_rhs
    elif cfg.scheme == "slow_lsg":
        rhs = lsg_rhs
    else:
        raise ValueError(f"scheme {cfg.scheme!r} is not a slow model")
    q = np.asarray(q0, dtype=float).copy()
    dt = cfg.dt
    n_steps = int(round(horizon / dt)) if horizon > 0 else 0
    taus = np.empty(n_steps + 1)
    out = np.empty((n_steps + 1, q.size))
    taus[0], out[0] = 0.0, q
    tau = 0.0
    for k in range(n_steps):
        tmid = tau + 0.5 * dt
        qn = q + dt * rhs(q, tmid, cfg.eps, potential)  # explicit predictor
        for _ in range(max_fp_iter):
            qn_new = q + dt * rhs(0.5 * (q + qn), tmid, cfg.eps, potential)
            res = np.max(np.abs(qn_new - qn))
            qn = qn_new
            if res <= fp_tol:
                break
        else:
            raise SlowSolverError(
                f"implicit midpoint failed to converge at step {k} "
                f"(residual {res:.3e})")
        q = qn
        tau += dt
        taus[k + 1], out[k + 1] = tau, q
    return taus, out


def integrate(state0: PhaseState, cfg: StepperConfig,
              potential: PotentialField, horizon: Optional[float] = None,
              stride: int = 1,
              stop: Optional[Callable[[PhaseState], bool]] = None,
              max_steps: Optional[int] = None,
              stepper: Optional[Callable] = None) -> TrajectoryRecord:
    """Drive a stepper, sampling (tau, q, p, K, H, K_ag) every ``stride``
    steps and at the final step.

    Runs for ``horizon`` slow-time units, or until ``stop(state)`` is true
    (checked after each full step), whichever comes first.  Aborts on
    non-finite state.
    """
    from .normalform import ageostrophic_momentum

    if stride < 1:
        raise ValueError("stride must be >= 1")
    if horizon is None and stop is None:
        raise ValueError("need a horizon or a stopping predicate")
    if stepper is None:
        stepper = {"strang": strang_step, "rk4": rk4_step}[cfg.scheme]

    n_steps = None
    if horizon is not None:
        if horizon < 0:
            raise ValueError("horizon must be >= 0")
        n_steps = int(round(horizon / cfg.dt))

    samples = []

    def sample(s: PhaseState):
        p_ag = ageostrophic_momentum(s, cfg.eps, potential)
        samples.append((s.tau, s.p.copy(), s.q.copy(),
                        kinetic_energy(s.p),
                        total_energy(s, potential, cfg.eps),
                        kinetic_energy(p_ag)))

    state = state0
    sample(state)
    k = 0
    while True:
        if n_steps is not None and k >= n_steps:
            break
        if max_steps is not None and k >= max_steps:
            raise RuntimeError(f"step budget {max_steps} exhausted at tau="
                               f"{state.tau:.6g}")
        try:
            state = stepper(state, cfg, potential)
        except ValueError as exc:
            raise RuntimeError(f"integration aborted at step {k}: {exc}") from exc
        k += 1
        done = stop is not None and stop(state)
        if k % stride == 0 or done or (n_steps is not None and k == n_steps):
            sample(state)
        if done:
            break

    taus, ps, qs, ks, hs, kags = zip(*samples)
    return TrajectoryRecord(np.array(taus), np.array(ps), np.array(qs),
                            np.array(ks), np.array(hs), np.array(kags))
