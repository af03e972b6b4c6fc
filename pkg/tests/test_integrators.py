import numpy as np
import pytest

from geobalance import (EpsilonParameter, LinearPotential, ModelPotential,
                        PhaseState, StepperConfig, flow_k, geostrophic_rhs,
                        integrate, kick_v, lsg_rhs, rk4_step, slow_integrate,
                        strang_step)
from geobalance.core import structure_matrix
from geobalance.integrators import SlowSolverError
from geobalance.normalform import lsg_hamiltonian

EPS01 = EpsilonParameter(0.1)


def reference_rk4(state, dt, eps, potential, n_sub=1000):
    """High-accuracy reference: rk4 with dt/n_sub substeps."""
    cfg = StepperConfig(dt=dt / n_sub, scheme="rk4", eps=eps)
    for _ in range(n_sub):
        state = rk4_step(state, cfg, potential)
    return state


class TestFlowK:
    def test_full_period_identity(self):
        rng = np.random.default_rng(0)
        z = PhaseState(rng.normal(size=4), rng.normal(size=4), tau=0.3)
        out = flow_k(z, 2 * np.pi)
        assert np.allclose(out.p, z.p, atol=1e-12)
        assert np.allclose(out.q, z.q, atol=1e-12)
        assert out.tau == z.tau

    def test_half_period(self):
        z = PhaseState(np.array([1.0, 0.0]), np.array([0.0, 0.0]))
        out = flow_k(z, np.pi)
        assert np.allclose(out.p, [-1.0, 0.0], atol=1e-15)
        assert np.allclose(out.q, [0.0, -2.0], atol=1e-15)

    def test_quarter_period(self):
        z = PhaseState(np.array([1.0, 0.0]), np.array([0.0, 0.0]))
        out = flow_k(z, np.pi / 2)
        assert np.allclose(out.p, [0.0, -1.0], atol=1e-15)
        assert np.allclose(out.q, [1.0, -1.0], atol=1e-15)

    def test_group_property(self):
        rng = np.random.default_rng(1)
        z = PhaseState(rng.normal(size=6), rng.normal(size=6))
        a = flow_k(flow_k(z, 0.7), 1.9)
        b = flow_k(z, 2.6)
        assert np.allclose(a.p, b.p, atol=1e-12)
        assert np.allclose(a.q, b.q, atol=1e-12)

    def test_parcels_independent(self):
        rng = np.random.default_rng(2)
        p, q = rng.normal(size=4), rng.normal(size=4)
        whole = flow_k(PhaseState(p, q), 0.8)
        first = flow_k(PhaseState(p[:2], q[:2]), 0.8)
        assert np.allclose(whole.p[:2], first.p, atol=1e-15)
        assert np.allclose(whole.q[:2], first.q, atol=1e-15)


class TestKickV:
    def test_zero_gradient_identity(self):
        z = PhaseState(np.array([0.2, 0.3]), np.array([1.0, 2.0]))
        out = kick_v(z, 1.0, EpsilonParameter(0.0), ModelPotential())
        assert np.array_equal(out.p, z.p)
        assert np.array_equal(out.q, z.q)

    def test_model_potential_origin(self):
        z = PhaseState(np.zeros(2), np.zeros(2))
        out = kick_v(z, 1.0, EPS01, ModelPotential())
        assert np.allclose(out.p, [-0.1, 0.0], atol=1e-15)
        assert np.array_equal(out.q, z.q)

    def test_kick_composition_linear_potential(self):
        pot = LinearPotential((0.4, -0.2))
        z = PhaseState(np.array([0.1, 0.1]), np.array([0.5, 0.5]))
        twice = kick_v(kick_v(z, 0.3, EPS01, pot), 0.3, EPS01, pot)
        once = kick_v(z, 0.6, EPS01, pot)
        assert np.allclose(twice.p, once.p, atol=1e-15)


class TestStrang:
    def test_eps_zero_reduces_to_flow_k(self):
        z = PhaseState(np.array([0.3, -0.4]), np.array([0.1, 0.2]))
        cfg = StepperConfig(dt=0.05, eps=EpsilonParameter(0.0))
        out = strang_step(z, cfg, ModelPotential())
        ref = flow_k(z, 0.05)
        assert np.allclose(out.p, ref.p, atol=1e-15)
        assert np.allclose(out.q, ref.q, atol=1e-15)
        assert out.tau == pytest.approx(z.tau + 0.05)

    def test_near_identity_small_dt(self):
        z = PhaseState(np.array([0.3, -0.4]), np.array([0.1, 0.2]))
        pot = ModelPotential()
        for dt in (1e-3, 1e-4, 1e-5):
            out = strang_step(z, StepperConfig(dt=dt, eps=EPS01), pot)
            delta = max(np.max(np.abs(out.p - z.p)), np.max(np.abs(out.q - z.q)))
            assert delta <= 2.0 * dt * max(np.max(np.abs(z.p)), 1.0)

    def test_one_step_against_reference(self):
        z = PhaseState(np.array([0.0, 0.1]), np.array([0.0, 0.0]))
        cfg = StepperConfig(dt=0.01, eps=EPS01)
        out = strang_step(z, cfg, ModelPotential())
        ref = reference_rk4(z, 0.01, EPS01, ModelPotential())
        err = max(np.max(np.abs(out.p - ref.p)), np.max(np.abs(out.q - ref.q)))
        assert err <= 1e-7

    def test_time_reversibility(self):
        z = PhaseState(np.array([0.2, 0.1]), np.array([0.4, -0.3]))
        pot = ModelPotential()
        fwd = strang_step(z, StepperConfig(dt=0.05, eps=EPS01), pot)
        # reverse: flow/kick composition with negative increments
        back = flow_k(fwd, -0.025)
        back = kick_v(back, -0.05, EPS01, pot)
        back = flow_k(back, -0.025)
        assert np.allclose(back.p, z.p, atol=1e-12)
        assert np.allclose(back.q, z.q, atol=1e-12)

    def test_global_second_order(self):
        z0 = PhaseState(np.array([0.0, 0.1]), np.array([0.0, 0.0]))
        pot = ModelPotential()
        horizon = 1.0

        def run(dt):
            rec = integrate(z0, StepperConfig(dt=dt, eps=EPS01), pot,
                            horizon=horizon, stride=10 ** 9)
            return np.concatenate([rec.p[-1], rec.q[-1]])

        ref = reference_rk4(z0, horizon, EPS01, pot, n_sub=20000)
        ref = np.concatenate([ref.p, ref.q])
        e1 = np.max(np.abs(run(0.02) - ref))
        e2 = np.max(np.abs(run(0.01) - ref))
        order = np.log2(e1 / e2)
        assert order >= 1.9

    def test_symplecticity_jacobian(self):
        rng = np.random.default_rng(7)
        pot = ModelPotential()
        cfg = StepperConfig(dt=0.01, eps=EPS01)
        j = structure_matrix(1)
        jinv = np.linalg.inv(j)
        for _ in range(3):
            p0, q0 = rng.normal(size=2), rng.normal(size=2)
            step = 1e-6
            d = np.empty((4, 4))
            for i in range(4):
                e = np.zeros(4)
                e[i] = step
                zp = strang_step(PhaseState(p0 + e[:2], q0 + e[2:]), cfg, pot)
                zm = strang_step(PhaseState(p0 - e[:2], q0 - e[2:]), cfg, pot)
                d[:, i] = np.concatenate([zp.p - zm.p, zp.q - zm.q]) / (2 * step)
            defect = np.max(np.abs(d.T @ jinv @ d - jinv))
            assert defect <= 1e-7


class TestRK4:
    def test_identity_free_rotation_order(self):
        z = PhaseState(np.array([0.4, -0.2]), np.array([0.0, 0.0]))
        pot = LinearPotential((0.0, 0.0))
        errs = []
        for dt in (0.2, 0.1):
            out = rk4_step(z, StepperConfig(dt=dt, scheme="rk4",
                                            eps=EpsilonParameter(0.0)), pot)
            exact = flow_k(z, dt)
            errs.append(max(np.max(np.abs(out.p - exact.p)),
                            np.max(np.abs(out.q - exact.q))))
        ratio = errs[0] / errs[1]
        assert 24 <= ratio <= 40  # local truncation order 5

    def test_global_fourth_order(self):
        z0 = PhaseState(np.array([0.0, 0.1]), np.array([0.0, 0.0]))
        pot = ModelPotential()
        ref = reference_rk4(z0, 1.0, EPS01, pot, n_sub=20000)
        ref = np.concatenate([ref.p, ref.q])

        def run(dt):
            rec = integrate(z0, StepperConfig(dt=dt, scheme="rk4", eps=EPS01),
                            pot, horizon=1.0, stride=10 ** 9)
            return np.concatenate([rec.p[-1], rec.q[-1]])

        e1 = np.max(np.abs(run(0.04) - ref))
        e2 = np.max(np.abs(run(0.02) - ref))
        assert np.log2(e1 / e2) >= 3.9


class TestSlowModels:
    def test_geostrophic_rhs_linear(self):
        rhs = geostrophic_rhs(np.zeros(2), 0.0, EpsilonParameter(0.3),
                              LinearPotential((1.0, 0.0)))
        assert np.allclose(rhs, [0.0, 0.3], atol=1e-15)

    def test_geostrophic_rhs_model_origin(self):
        rhs = geostrophic_rhs(np.zeros(2), 0.0, EPS01, ModelPotential())
        assert np.allclose(rhs, [0.0, 0.1], atol=1e-15)

    def test_lsg_rhs_reduces_to_geostrophic_for_linear(self):
        pot = LinearPotential((0.7, 0.1))
        q = np.array([0.2, 0.9])
        assert np.allclose(lsg_rhs(q, 0.0, EPS01, pot),
                           geostrophic_rhs(q, 0.0, EPS01, pot), atol=1e-15)

    def test_lsg_rhs_matches_hamiltonian_gradient(self):
        pot = ModelPotential()
        q = np.array([0.5, 0.0])
        step = 1e-6
        grad_h = np.empty(2)
        for i in range(2):
            e = np.zeros(2)
            e[i] = step
            grad_h[i] = (lsg_hamiltonian(q + e, EPS01, pot)
                         - lsg_hamiltonian(q - e, EPS01, pot)) / (2 * step)
        expected = np.array([-grad_h[1], grad_h[0]])  # J2^T grad H
        assert np.allclose(lsg_rhs(q, 0.0, EPS01, pot), expected, atol=1e-6)

    def test_lsg_rhs_leading_order(self):
        pot = ModelPotential()
        q = np.array([0.3, 0.4])
        for eps in (1e-3, 1e-4):
            e = EpsilonParameter(eps)
            lead = lsg_rhs(q, 0.0, e, pot) / eps
            target = -np.array([pot.gradient(q)[1], -pot.gradient(q)[0]])
            assert np.allclose(lead, target, atol=10 * eps)

    def test_slow_integrate_linear_exact(self):
        pot = LinearPotential((1.0, 0.0))
        e = EpsilonParameter(0.2)
        for scheme in ("slow_geostrophic", "slow_lsg"):
            taus, qs = slow_integrate(np.zeros(2),
                                      StepperConfig(dt=0.1, scheme=scheme,
                                                    eps=e), pot, 2.0)
            expected = np.outer(taus, [0.0, 0.2])
            assert np.allclose(qs, expected, atol=1e-12)

    def test_slow_integrate_second_order(self):
        pot = ModelPotential()
        for scheme in ("slow_geostrophic", "slow_lsg"):
            _, ref = slow_integrate(np.zeros(2),
                                    StepperConfig(dt=0.001, scheme=scheme,
                                                  eps=EPS01), pot, 1.0)
            errs = []
            for dt in (0.1, 0.05):
                _, qs = slow_integrate(np.zeros(2),
                                       StepperConfig(dt=dt, scheme=scheme,
                                                     eps=EPS01), pot, 1.0)
                errs.append(np.max(np.abs(qs[-1] - ref[-1])))
            assert 3.5 <= errs[0] / errs[1] <= 4.5

    def test_slow_integrate_zero_horizon(self):
        taus, qs = slow_integrate(np.array([1.0, 2.0]),
                                  StepperConfig(dt=0.1,
                                                scheme="slow_geostrophic",
                                                eps=EPS01),
                                  ModelPotential(), 0.0)
        assert taus.shape == (1,)
        assert np.array_equal(qs[0], [1.0, 2.0])

    def test_slow_integrate_rejects_fast_scheme(self):
        with pytest.raises(ValueError):
            slow_integrate(np.zeros(2),
                           StepperConfig(dt=0.1, scheme="strang", eps=EPS01),
                           ModelPotential(), 1.0)


class TestIntegrateDriver:
    def test_zero_horizon_initial_sample_only(self):
        z = PhaseState(np.array([0.0, 0.1]), np.zeros(2))
        rec = integrate(z, StepperConfig(dt=0.01, eps=EPS01),
                        ModelPotential(), horizon=0.0)
        assert len(rec) == 1
        assert rec.kinetic[0] == pytest.approx(0.005)

    def test_eps_zero_kinetic_exactly_conserved(self):
        z = PhaseState(np.array([0.0, 0.1]), np.zeros(2))
        cfg = StepperConfig(dt=0.01, eps=EpsilonParameter(0.0))
        rec = integrate(z, cfg, LinearPotential((1.0, 0.0)), horizon=1000.0,
                        stride=1000)
        assert np.max(np.abs(rec.kinetic - rec.kinetic[0])) <= 1e-14

    def test_stop_predicate_drift_setup(self):
        eps = 0.25
        z = PhaseState(np.array([0.0, eps]), np.array([0.0, -12.0]))
        cfg = StepperConfig(dt=eps * eps, eps=EpsilonParameter(eps))
        rec = integrate(z, cfg, ModelPotential(),
                        stop=lambda s: s.q[1] > 10.0, stride=100,
                        max_steps=200000)
        assert rec.q[-1][1] > 10.0

    def test_step_budget_abort(self):
        z = PhaseState(np.array([0.0, 0.1]), np.zeros(2))
        cfg = StepperConfig(dt=0.01, eps=EPS01)
        with pytest.raises(RuntimeError, match="budget"):
            integrate(z, cfg, ModelPotential(), stop=lambda s: False,
                      max_steps=10)

    def test_stride_sampling(self):
        z = PhaseState(np.array([0.0, 0.1]), np.zeros(2))
        cfg = StepperConfig(dt=0.01, eps=EPS01)
        rec = integrate(z, cfg, ModelPotential(), horizon=1.0, stride=10)
        assert len(rec) == 11  # initial sample + every 10th of 100 steps

    def test_energy_conservation_strang_vs_rk4(self):
        z0 = PhaseState(np.array([0.0, 0.1]), np.zeros(2))
        pot = ModelPotential()
        horizon = 250.0
        drifts = {}
        for dt in (0.02, 0.01, 0.005):
            rec = integrate(z0, StepperConfig(dt=dt, eps=EPS01), pot,
                            horizon=horizon, stride=200)
            drifts[dt] = np.max(np.abs(rec.energy - rec.energy[0])
                                / abs(rec.energy[0]))
        assert 3.0 <= drifts[0.02] / drifts[0.01] <= 5.0
        assert 3.0 <= drifts[0.01] / drifts[0.005] <= 5.0

    def test_drift_growth_strang_bounded_rk4_secular(self):
        # symplectic: energy error oscillates but does not accumulate;
        # rk4: error magnitude is tiny here but grows linearly in time
        z0 = PhaseState(np.array([0.0, 0.1]), np.zeros(2))
        pot = ModelPotential()

        def growth(scheme):
            rec = integrate(z0, StepperConfig(dt=0.02, scheme=scheme,
                                              eps=EPS01), pot,
                            horizon=1000.0, stride=100)
            d = np.abs(rec.energy - rec.energy[0]) / abs(rec.energy[0])
            return np.max(d) / np.max(d[rec.tau <= 500.0])

        assert growth("strang") <= 1.1
        assert growth("rk4") >= 1.5
