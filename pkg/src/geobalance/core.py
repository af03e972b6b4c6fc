"""Phase-space state, potential fields, and energy functionals.

All quantities are nondimensional.  A state holds N parcels with
positions and momenta stored as flat arrays of length 2N, ordered
(x1, y1, x2, y2, ...).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# 2x2 rotation generator: J2 @ (x, y) = (y, -x)
J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def rot2(theta: float) -> np.ndarray:
    """Matrix exponential exp(J2*theta) = cos(theta)*I + sin(theta)*J2."""
    return np.cos(theta) * np.eye(2) + np.sin(theta) * J2


def apply_j2(v: np.ndarray) -> np.ndarray:
    """Apply the block-diagonal rotation generator to a flat 2N vector."""
    out = np.empty_like(v)
    out[0::2] = v[1::2]
    out[1::2] = -v[0::2]
    return out


def apply_j2t(v: np.ndarray) -> np.ndarray:
    """Apply J2^T = J2^{-1} = -J2 blockwise."""
    out = np.empty_like(v)
    out[0::2] = -v[1::2]
    out[1::2] = v[0::2]
    return out


def structure_matrix(n_parcels: int) -> np.ndarray:
    """Non-canonical structure operator [[J_2N, -I], [I, 0]] for z = (p, q)."""
    d = 2 * n_parcels
    j2n = np.kron(np.eye(n_parcels), J2)
    top = np.hstack([j2n, -np.eye(d)])
    bot = np.hstack([np.eye(d), np.zeros((d, d))])
    return np.vstack([top, bot])


@dataclass(frozen=True)
class PhaseState:
    """Momenta and positions of N parcels plus slow time tau."""

    p: np.ndarray
    q: np.ndarray
    tau: float = 0.0

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        q = np.asarray(self.q, dtype=float)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        if p.shape != q.shape or p.ndim != 1 or p.size % 2 or p.size == 0:
            raise ValueError(
                f"p and q must be equal-length flat arrays of even size, "
                f"got {p.shape} and {q.shape}"
            )
        if not (np.all(np.isfinite(p)) and np.all(np.isfinite(q))):
            raise ValueError("non-finite entries in phase state")

    @property
    def n_parcels(self) -> int:
        return self.p.size // 2


@dataclass(frozen=True)
class EpsilonParameter:
    """Joint Rossby/Burger number.  Zero is admitted for degenerate
    (potential-free) control runs."""

    eps: float

    def __post_init__(self):
        if not self.eps >= 0:
            raise ValueError(f"eps must be nonnegative, got {self.eps}")


class PotentialField:
    """Contract for the layer depth / potential energy V(q, tau).

    Concrete fields supply ``value`` and an analytic ``gradient``;
    finite differences are used only as test oracles.  The default
    ``grad_norm_sq_gradient`` (needed by the second-order slow model)
    falls back to nested central differences, which caps achievable
    tolerances at roughly 1e-6.
    """

    time_dependent: bool = False

    def value(self, q: np.ndarray, tau: float = 0.0) -> float:
        raise NotImplementedError

    def gradient(self, q: np.ndarray, tau: float = 0.0) -> np.ndarray:
        raise NotImplementedError

    def grad_norm_sq_gradient(self, q: np.ndarray, tau: float = 0.0,
                              step: float = 1e-5) -> np.ndarray:
        """Gradient of ||grad V||^2, by central differences of gradient()."""
        q = np.asarray(q, dtype=float)
        out = np.zeros_like(q)
        for i in range(q.size):
            e = np.zeros_like(q)
            e[i] = step
            gp = self.gradient(q + e, tau)
            gm = self.gradient(q - e, tau)
            out[i] = (gp @ gp - gm @ gm) / (2 * step)
        return out

    def hessian(self, q: np.ndarray, tau: float = 0.0,
                step: float = 1e-6) -> np.ndarray:
        """Symmetrized central-difference Hessian of V."""
        q = np.asarray(q, dtype=float)
        n = q.size
        h = np.empty((n, n))
        for i in range(n):
            e = np.zeros(n)
            e[i] = step
            h[:, i] = (self.gradient(q + e, tau)
                       - self.gradient(q - e, tau)) / (2 * step)
        return 0.5 * (h + h.T)


class ModelPotential(PotentialField):
    """V(q) = q_x + exp(-(q_x^2 + q_y^2))/2 for a single parcel."""

    def value(self, q, tau=0.0):
        q = np.asarray(q, dtype=float)
        return float(q[0] + 0.5 * np.exp(-(q[0] ** 2 + q[1] ** 2)))

    def gradient(self, q, tau=0.0):
        q = np.asarray(q, dtype=float)
        e = np.exp(-(q[0] ** 2 + q[1] ** 2))
        return np.array([1.0 - q[0] * e, -q[1] * e])

    def hessian(self, q, tau=0.0):
        q = np.asarray(q, dtype=float)
        x, y = q
        e = np.exp(-(x * x + y * y))
        return e * np.array([[2 * x * x - 1, 2 * x * y],
                             [2 * x * y, 2 * y * y - 1]])

    def grad_norm_sq_gradient(self, q, tau=0.0, step=None):
        # grad ||g||^2 = 2 H g with H the Hessian of V
        return 2.0 * self.hessian(q, tau) @ self.gradient(q, tau)


class LinearPotential(PotentialField):
    """V(q) = a . q per parcel (constant gradient; exact slow drift)."""

    def __init__(self, a=(1.0, 0.0)):
        self.a = np.asarray(a, dtype=float)

    def value(self, q, tau=0.0):
        q = np.asarray(q, dtype=float)
        return float(np.tile(self.a, q.size // 2) @ q)

    def gradient(self, q, tau=0.0):
        q = np.asarray(q, dtype=float)
        return np.tile(self.a, q.size // 2)

    def grad_norm_sq_gradient(self, q, tau=0.0, step=None):
        return np.zeros_like(np.asarray(q, dtype=float))

    def hessian(self, q, tau=0.0, step=None):
        n = np.asarray(q, dtype=float).size
        return np.zeros((n, n))


def kinetic_energy(p: np.ndarray) -> float:
    """K(p) = ||p||^2 / 2."""
    p = np.asarray(p, dtype=float)
    return float(0.5 * p @ p)


def total_energy(state: PhaseState, potential: PotentialField,
                 eps: EpsilonParameter) -> float:
    """H(z) = K(p) + eps * V(q, tau)."""
    return kinetic_energy(state.p) + eps.eps * potential.value(state.q, state.tau)
