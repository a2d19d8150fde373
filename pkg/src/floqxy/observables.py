"""Physical quantities of a BCS-form mode state.

Local quantities (magnetization, two-site density matrix, concurrence) come
from the 2x2-site Majorana window; the half-chain entropy from the window
spectrum; Loschmidt echo, work and driven fidelity directly from the pair
amplitudes.  Finite-field derivatives re-run the full pipeline (ground state
and drive both re-based) at h +- step.

Conventions pinned against the dense oracle:
  <sigma_z_i>            = -Gamma[2i-1, 2i]
  <sigma_x_i sigma_x_j>  = +Gamma[2i, 2j-1]            (j = i+1)
  <sigma_y_i sigma_y_j>  = -Gamma[2i-1, 2j]
  <sigma_x_i sigma_y_j>  = -Gamma[2i, 2j]
  <sigma_y_i sigma_x_j>  = +Gamma[2i-1, 2j-1]
  <sigma_z_i sigma_z_j>  = Pf of the 4x4 Majorana window
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy.special import xlogy

from .correlations import majorana_correlations
from .floquet import Monodromy, monodromy, stroboscopic_state
from .model import ModelParams, ModeState, dispersion, ground_state

__all__ = [
    "transverse_magnetization",
    "two_site_rdm",
    "concurrence",
    "nearest_neighbor_concurrence",
    "half_chain_entropy",
    "loschmidt_echo",
    "work",
    "driven_fidelity",
    "chi_z",
    "dC_dh",
    "evolved_state",
]

_SX = np.array([[0.0, 1.0], [1.0, 0.0]])
_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]])
_SYSY = np.real(np.kron(1j * _SY, 1j * _SY))


def transverse_magnetization(state: ModeState) -> float:
    """Site-averaged <sigma_z> = (2/N) sum_{k>0} (|v_k|^2 - |u_k|^2)."""
    N = 2 * state.n_modes
    return float((2.0 / N) * np.sum(state.occupations() - np.abs(state.u) ** 2))


def two_site_rdm(state: ModeState, i: int = 1) -> np.ndarray:
    """Density matrix of the nearest-neighbor pair (i, i+1), sigma_z basis.

    Site correlators with a single x or y operator vanish by fermion parity,
    so only eight terms contribute.  A negative eigenvalue below -1e-8 means
    a correlator bug and raises.
    """
    N = 2 * state.n_modes
    if not 1 <= i <= N:
        raise ValueError(f"site {i} outside chain of {N} sites")
    # Translation invariance: evaluate the bulk window (separation 1).
    g = majorana_correlations(state, (1, 2)).gamma
    sz_i = -g[0, 1]
    sz_j = -g[2, 3]
    xx = g[1, 2]
    yy = -g[0, 3]
    xy = -g[1, 3]
    yx = g[0, 2]
    zz = g[0, 1] * g[2, 3] - g[0, 2] * g[1, 3] + g[0, 3] * g[1, 2]

    rho = 0.25 * (
        np.eye(4, dtype=complex)
        + sz_i * np.kron(_SZ, np.eye(2))
        + sz_j * np.kron(np.eye(2), _SZ)
        + xx * np.kron(_SX, _SX)
        + yy * np.kron(_SY, _SY)
        + zz * np.kron(_SZ, _SZ)
        + xy * np.kron(_SX, _SY)
        + yx * np.kron(_SY, _SX)
    )
    lam_min = float(np.min(np.linalg.eigvalsh(rho)))
    if lam_min < -1e-8:
        raise RuntimeError(f"two-site density matrix has eigenvalue {lam_min:.3e}")
    return rho


def concurrence(rho: np.ndarray) -> float:
    """Wootters concurrence max[0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)]."""
    R = rho @ _SYSY @ rho.conj() @ _SYSY
    lam = np.real(np.linalg.eigvals(R))
    lam[(lam < 0) & (lam > -1e-12)] = 0.0
    lam = np.sort(lam)[::-1]
    lam = np.sqrt(np.clip(lam, 0.0, None))
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def nearest_neighbor_concurrence(state: ModeState) -> float:
    return concurrence(two_site_rdm(state))


def _binary_entropy_bits(p: np.ndarray) -> np.ndarray:
    return -(xlogy(p, p) + xlogy(1.0 - p, 1.0 - p)) / np.log(2.0)


def half_chain_entropy(state: ModeState) -> float:
    """Von Neumann entropy (bits) of sites [1, N/2] from the window spectrum."""
    N = 2 * state.n_modes
    corr = majorana_correlations(state, (1, N // 2))
    nu = corr.mode_spectrum()
    if nu.size and float(nu[-1]) > 1.0 + 1e-8:
        raise RuntimeError(f"correlation mode nu = {float(nu[-1]):.12f} exceeds 1")
    nu = np.clip(nu, 0.0, 1.0)
    return float(np.sum(_binary_entropy_bits((1.0 + nu) / 2.0)))


def loschmidt_echo(initial: ModeState, evolved: ModeState):
    """(L, L_k) with L_k = |u_k(0)* u_k(t) + v_k(0)* v_k(t)| and L = prod L_k.

    The product is evaluated as a sum of logs so large chains do not
    underflow prematurely.
    """
    if initial.k.shape != evolved.k.shape:
        raise ValueError("states live on different grids")
    L_k = np.abs(np.conj(initial.u) * evolved.u + np.conj(initial.v) * evolved.v)
    with np.errstate(divide="ignore"):
        log_L = float(np.sum(np.log(L_k)))
    L = float(np.exp(log_L)) if np.isfinite(log_L) else 0.0
    return L, L_k


def work(evolved: ModeState, params: ModelParams, h: float | None = None):
    """(W, W_k): work above the ground state of the base Hamiltonian.

    W_k = 2 eps_k(h) n_k with n_k the Bogoliubov pair excitation probability;
    W = 2 sum_k W_k counts both +-k members.
    """
    if h is None:
        h = params.h0
    gs = ground_state(params, h)
    n_k = np.abs(gs.u * evolved.v - gs.v * evolved.u) ** 2
    if np.any(n_k > 1.0 + 1e-10):
        raise RuntimeError(f"occupation {float(np.max(n_k)):.12f} exceeds 1")
    W_k = 2.0 * dispersion(params, evolved.k, h) * n_k
    return float(2.0 * np.sum(W_k)), W_k


def evolved_state(params: ModelParams, h: float, n: int, tol: float = 1e-10,
                  mono: Monodromy | None = None) -> ModeState:
    """Ground state at h evolved n periods under the drive re-based at h."""
    base = params.rebased(h)
    if mono is None:
        mono = monodromy(base, tol=tol)
    return stroboscopic_state(ground_state(base), mono, n)


def driven_fidelity(params: ModelParams, h: float, delta_h: float = 1e-5,
                    n: int = 0, tol: float = 1e-12):
    """(F, chi_F) of the driven fidelity between pipelines based at h and h+dh.

    chi_F = 2 (1 - F) / delta_h^2, using F(0) = 1 and the evenness of F.
    """
    if delta_h <= 0:
        raise ValueError("delta_h must be positive")
    if n == 0:
        s1 = ground_state(params, h)
        s2 = ground_state(params, h + delta_h)
    else:
        s1 = evolved_state(params, h, n, tol=tol)
        s2 = evolved_state(params, h + delta_h, n, tol=tol)
    overlaps = np.abs(np.conj(s1.u) * s2.u + np.conj(s1.v) * s2.v)
    with np.errstate(divide="ignore"):
        log_F = float(np.sum(np.log(overlaps)))
    F = float(np.exp(log_F)) if np.isfinite(log_F) else 0.0
    if n > 0:
        noise = n * tol * np.sqrt(s1.n_modes)
        if (1.0 - F) < 10.0 * noise:
            warnings.warn(
                f"1 - F = {1.0 - F:.3e} is within 10x the integrator noise "
                f"estimate {noise:.3e}; chi_F is unreliable at delta_h={delta_h:g}",
                RuntimeWarning, stacklevel=2)
    chi_F = 2.0 * (1.0 - F) / delta_h**2
    return F, chi_F


def _observable_at(params: ModelParams, h: float, n: int, fn, tol: float) -> float:
    return fn(evolved_state(params, h, n, tol=tol))


def chi_z(params: ModelParams, h: float, n: int = 0, fd_step: float = 1e-4,
          tol: float = 1e-10) -> float:
    """Transverse susceptibility d<sigma_z>/dh by central differences.

    Both the initial ground state and the drive base move with h.
    """
    if fd_step <= 0:
        raise ValueError("fd_step must be positive")
    if fd_step < 100.0 * tol:
        warnings.warn("fd_step is close to the integrator noise floor",
                      RuntimeWarning, stacklevel=2)
    up = _observable_at(params, h + fd_step, n, transverse_magnetization, tol)
    dn = _observable_at(params, h - fd_step, n, transverse_magnetization, tol)
    return (up - dn) / (2.0 * fd_step)


def dC_dh(params: ModelParams, h: float, n: int = 0, fd_step: float = 1e-4,
          tol: float = 1e-10) -> float:
    """Field derivative of the nearest-neighbor concurrence (same protocol)."""
    if fd_step <= 0:
        raise ValueError("fd_step must be positive")
    up = _observable_at(params, h + fd_step, n, nearest_neighbor_concurrence, tol)
    dn = _observable_at(params, h - fd_step, n, nearest_neighbor_concurrence, tol)
    return (up - dn) / (2.0 * fd_step)
