"""Driven XY chain: parameters, momentum grid, static diagonalization, BCS ground state.

The chain is

    H(t) = -sum_i [ (1+gamma)/2 sx_i sx_{i+1} + (1-gamma)/2 sy_i sy_{i+1} - h(t) sz_i ]

with periodic boundaries, h(t) = h0 + dh*sin(omega*t), hbar = 1 and exchange
coupling 1.  After the Jordan-Wigner map (sz_i = 2 n_i - 1, even fermion
parity / antiperiodic sector) the dynamics factorizes over (k, -k) pairs.
Each pair lives in the two-dimensional space {|0>, c+_k c+_{-k}|0>} where,
in the gauge that makes the pairing amplitude real, the Hamiltonian reads

    H_k(h) = -2 [ (h - cos k) sigma_z + gamma sin k sigma_x ].

Its eigenvalues are -+2*eps_k with eps_k of :func:`dispersion`; the pair
vacuum amplitudes of the ground state are (u_k, v_k) = (cos(theta_k/2),
sin(theta_k/2)) with theta_k = atan2(gamma sin k, h - cos k).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ModelParams",
    "ModeState",
    "mode_grid",
    "dispersion",
    "bogoliubov_angle",
    "ground_state",
    "ground_energy",
    "pair_hamiltonians",
]


@dataclass(frozen=True)
class ModelParams:
    """Static chain plus drive parameters.

    N      : number of spins, even, >= 4
    gamma  : anisotropy in (0, 1]
    h0     : static transverse field (drive base point)
    dh     : drive amplitude, >= 0
    omega  : drive angular frequency, > 0
    """

    N: int
    gamma: float = 1.0
    h0: float = 1.0
    dh: float = 0.0
    omega: float = 2.0 * np.pi

    def __post_init__(self):
        if self.N % 2 != 0 or self.N < 4:
            raise ValueError(f"N must be even and >= 4, got {self.N}")
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError(f"gamma must be in (0, 1], got {self.gamma}")
        if self.dh < 0.0:
            raise ValueError(f"dh must be >= 0, got {self.dh}")
        if self.omega <= 0.0:
            raise ValueError(f"omega must be > 0, got {self.omega}")

    @property
    def period(self) -> float:
        return 2.0 * np.pi / self.omega

    def field(self, t):
        """Instantaneous transverse field h(t) = h0 + dh*sin(omega*t)."""
        return self.h0 + self.dh * np.sin(self.omega * np.asarray(t))

    def rebased(self, h0: float) -> "ModelParams":
        """Same chain and drive, based at a different static field."""
        return ModelParams(self.N, self.gamma, h0, self.dh, self.omega)


def mode_grid(params: ModelParams) -> np.ndarray:
    """Positive momenta k_m = pi*(2m-1)/N, m = 1..N/2, of the even-parity sector."""
    N = params.N
    m = np.arange(1, N // 2 + 1)
    return np.pi * (2 * m - 1) / N


def dispersion(params: ModelParams, k, h=None) -> np.ndarray:
    """Quasiparticle energy eps_k = sqrt((h - cos k)^2 + (gamma sin k)^2)."""
    if h is None:
        h = params.h0
    k = np.asarray(k)
    return np.sqrt((h - np.cos(k)) ** 2 + (params.gamma * np.sin(k)) ** 2)


def bogoliubov_angle(params: ModelParams, k, h=None) -> np.ndarray:
    """Angle theta_k = atan2(gamma sin k, h - cos k), in [0, pi) on the grid."""
    if h is None:
        h = params.h0
    k = np.asarray(k)
    return np.arctan2(params.gamma * np.sin(k), h - np.cos(k))


@dataclass
class ModeState:
    """Pair amplitudes (u_k, v_k) of a BCS-form state over the positive-k grid.

    The state is prod_{k>0} (u_k + v_k c+_k c+_{-k}) |0> in the real-pairing
    gauge; |u_k|^2 + |v_k|^2 = 1 for every mode.
    """

    k: np.ndarray
    u: np.ndarray
    v: np.ndarray
    params: ModelParams = field(repr=False, default=None)

    def __post_init__(self):
        self.k = np.asarray(self.k, dtype=float)
        self.u = np.asarray(self.u, dtype=complex)
        self.v = np.asarray(self.v, dtype=complex)
        if not (self.k.shape == self.u.shape == self.v.shape):
            raise ValueError("k, u, v must have identical shapes")

    @property
    def n_modes(self) -> int:
        return self.k.size

    def norm_defect(self) -> float:
        """Max deviation of |u|^2 + |v|^2 from 1 over the grid."""
        return float(np.max(np.abs(np.abs(self.u) ** 2 + np.abs(self.v) ** 2 - 1.0)))

    def check_normalized(self, tol: float = 1e-12) -> None:
        defect = self.norm_defect()
        if defect > tol:
            raise ValueError(f"mode-state normalization violated: defect {defect:.3e}")

    def occupations(self) -> np.ndarray:
        """Pair occupations |v_k|^2."""
        return np.abs(self.v) ** 2

    def pairing(self) -> np.ndarray:
        """Anomalous amplitudes conj(u_k) * v_k."""
        return np.conj(self.u) * self.v


def ground_state(params: ModelParams, h: float | None = None) -> ModeState:
    """BCS ground state of the static chain at field h (default: params.h0)."""
    k = mode_grid(params)
    theta = bogoliubov_angle(params, k, h)
    return ModeState(k=k, u=np.cos(theta / 2), v=np.sin(theta / 2), params=params)


def ground_energy(params: ModelParams, h: float | None = None) -> float:
    """Ground-state energy -2 * sum_{k>0} eps_k (both +-k members counted)."""
    k = mode_grid(params)
    return float(-2.0 * np.sum(dispersion(params, k, h)))


def pair_hamiltonians(params: ModelParams, h: float | None = None) -> np.ndarray:
    """Static pair-space Hamiltonians H_k(h), shape (N/2, 2, 2), real symmetric."""
    if h is None:
        h = params.h0
    k = mode_grid(params)
    dz = 2.0 * (h - np.cos(k))
    dx = 2.0 * params.gamma * np.sin(k)
    H = np.zeros((k.size, 2, 2))
    H[:, 0, 0] = -dz
    H[:, 1, 1] = dz
    H[:, 0, 1] = -dx
    H[:, 1, 0] = -dx
    return H
