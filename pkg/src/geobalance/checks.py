"""Fast invariant self-checks, runnable via the `check` subcommand."""

from __future__ import annotations

import numpy as np

from .core import (EpsilonParameter, ModelPotential, PhaseState,
                   LinearPotential)
from .hpm import ParticleEnsemble, PeriodicGrid, bspline_1d, deposit
from .integrators import StepperConfig, flow_k, strang_step
from .normalform import (QuadratureSpec, averaged_potential, generator_f1,
                         homological_residual)


def _check(name: str, ok: bool, detail: str = "") -> bool:
    status = "ok" if ok else "FAIL"
    print(f"  [{status}] {name}{'  ' + detail if detail else ''}")
    return ok


def run_all() -> bool:
    rng = np.random.default_rng(42)
    ok = True

    state = PhaseState(rng.normal(size=2), rng.normal(size=2))
    back = flow_k(state, 2 * np.pi)
    err = max(np.max(np.abs(back.p - state.p)), np.max(np.abs(back.q - state.q)))
    ok &= _check("full-period inertial rotation is the identity", err < 1e-12,
                 f"err={err:.2e}")

    pot = ModelPotential()
    g = pot.gradient(np.zeros(2))
    fd = np.array([(pot.value([1e-6, 0.0]) - pot.value([-1e-6, 0.0])) / 2e-6,
                   (pot.value([0.0, 1e-6]) - pot.value([0.0, -1e-6])) / 2e-6])
    err = np.max(np.abs(g - fd))
    ok &= _check("analytic model gradient matches finite differences",
                 err < 1e-6, f"err={err:.2e}")

    cfg = StepperConfig(dt=0.01, eps=EpsilonParameter(0.1))
    fwd = strang_step(state, cfg, pot)
    bwd = flow_k(kickless_reverse(fwd, cfg, pot), 0.0)
    err = max(np.max(np.abs(bwd.p - state.p)), np.max(np.abs(bwd.q - state.q)))
    ok &= _check("Strang step is time reversible", err < 1e-12,
                 f"err={err:.2e}")

    z = PhaseState(0.3 * rng.normal(size=2), rng.normal(size=2))
    quad = QuadratureSpec(128)
    res = homological_residual(z, pot, quad)
    ok &= _check("homological residual small", res < 1e-5, f"res={res:.2e}")

    lin = LinearPotential()
    vb = averaged_potential(z, lin, quad)
    err = abs(vb - (z.q[0] + z.p[1]))
    ok &= _check("averaged linear potential closed form", err < 1e-10,
                 f"err={err:.2e}")
    err = abs(generator_f1(z, lin, quad) + z.p[0])
    ok &= _check("linear-potential generator closed form", err < 1e-10,
                 f"err={err:.2e}")

    grid = PeriodicGrid(16)
    xs = rng.uniform(0, 2 * np.pi, size=200)
    s = xs[:, None] / grid.h
    base = np.floor(s)
    w = bspline_1d((s - base) - np.arange(-1, 3))
    err = np.max(np.abs(w.sum(axis=1) - 1.0))
    ok &= _check("B-spline partition of unity", err < 1e-14, f"err={err:.2e}")

    parts = ParticleEnsemble(rng.uniform(0, 2 * np.pi, size=20),
                             np.zeros(20), mass=0.7)
    total = deposit(parts, grid).mu.sum()
    err = abs(total - 0.7 * 10)
    ok &= _check("deposition conserves mass", err < 1e-12 * 7,
                 f"err={err:.2e}")

    print("all checks passed" if ok else "SOME CHECKS FAILED")
    return bool(ok)


def kickless_reverse(state: PhaseState, cfg: StepperConfig, pot) -> PhaseState:
    """Apply the Strang map with negated step (time-independent V)."""
    neg = StepperConfig(dt=cfg.dt, scheme=cfg.scheme, eps=cfg.eps)
    s = flow_k(state, -0.5 * neg.dt)
    from .integrators import kick_v
    s = kick_v(s, -neg.dt, neg.eps, pot)
    s = flow_k(s, -0.5 * neg.dt)
    return PhaseState(s.p, s.q, state.tau - neg.dt)
