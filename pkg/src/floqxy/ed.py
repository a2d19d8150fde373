"""Brute-force reference implementation on small chains (N <= 12).

Everything here works with dense/sparse operators in the full 2^N spin
Hilbert space and makes no Gaussian-state assumptions.  It exists to pin
sign conventions and to validate the free-fermion pipeline observable by
observable.

Basis conventions (shared with the spin side of the package):
  * site 1 is the leftmost kron factor, |up> = (1, 0), sigma_z|up> = +|up>;
  * Jordan-Wigner: occupied fermion site <-> spin up, sigma_z_j = 2 n_j - 1,
    c_j = [prod_{l<j} (-sigma_z_l)] sigma^-_j;
  * momentum operators c_k = N^{-1/2} sum_j exp(-i k j) c_j, and the
    real-pairing gauge used by :mod:`floqxy.model` is ct_k = exp(-i pi/4) c_k.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse
from scipy.integrate import solve_ivp

from .model import ModelParams

MAX_SITES = 12

_SX = np.array([[0.0, 1.0], [1.0, 0.0]])
_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]])
_SM = np.array([[0.0, 0.0], [1.0, 0.0]])  # |down><up|
_ID = np.eye(2)


def _check_size(N: int) -> None:
    if N > MAX_SITES:
        raise ValueError(f"dense oracle capped at N <= {MAX_SITES}, got {N}")


def site_operator(op: np.ndarray, site: int, N: int) -> np.ndarray:
    """Dense operator acting with `op` on `site` (1-based) of an N-site chain."""
    _check_size(N)
    mats = [op if l == site else _ID for l in range(1, N + 1)]
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def spin_spin_part(N: int, gamma: float) -> np.ndarray:
    """Field-independent part -sum_i [(1+g)/2 sx sx + (1-g)/2 sy sy], PBC."""
    _check_size(N)
    dim = 2**N
    H = np.zeros((dim, dim))
    for i in range(1, N + 1):
        j = i % N + 1
        sxsx = site_operator(_SX, i, N) @ site_operator(_SX, j, N)
        sysy = np.real(site_operator(_SY, i, N) @ site_operator(_SY, j, N))
        H -= 0.5 * (1.0 + gamma) * sxsx + 0.5 * (1.0 - gamma) * sysy
    return H


def build_hamiltonian(N: int, gamma: float, h: float) -> np.ndarray:
    """Dense Hermitian H = spin_spin_part + h * sum_i sigma_z_i."""
    return spin_spin_part(N, gamma) + h * np.diag(z_total_diagonal(N))


def z_total_diagonal(N: int) -> np.ndarray:
    """Diagonal of sum_i sigma_z_i in the kron basis (site 1 = MSB)."""
    _check_size(N)
    states = np.arange(2**N)
    diag = np.zeros(2**N)
    for i in range(N):
        bit = (states >> (N - 1 - i)) & 1
        diag += np.where(bit == 0, 1.0, -1.0)  # bit 0 <-> |up>, sz = +1
    return diag


def parity_diagonal(N: int) -> np.ndarray:
    """Diagonal of prod_i sigma_z_i (fermion parity for even N)."""
    states = np.arange(2**N)
    ones = np.zeros(2**N, dtype=int)
    for i in range(N):
        ones += (states >> i) & 1
    return np.where(ones % 2 == 0, 1.0, -1.0)


def even_sector_ground_state(N: int, gamma: float, h: float):
    """(energy, state) of the lowest eigenvector in the even-parity sector."""
    H = build_hamiltonian(N, gamma, h)
    mask = parity_diagonal(N) > 0
    idx = np.where(mask)[0]
    Hblock = H[np.ix_(idx, idx)]
    vals, vecs = np.linalg.eigh(Hblock)
    psi = np.zeros(2**N, dtype=complex)
    psi[idx] = vecs[:, 0]
    return float(vals[0]), psi


def ground_state_energy(N: int, gamma: float, h: float) -> float:
    """Global minimum eigenvalue of the dense Hamiltonian."""
    return float(np.linalg.eigvalsh(build_hamiltonian(N, gamma, h))[0])


def evolve(psi: np.ndarray, params: ModelParams, t_final: float,
           rtol: float = 1e-11, atol: float = 1e-13) -> np.ndarray:
    """Evolve a dense state under H(t) = H_xy + h(t) * sum_i sigma_z_i.

    Uses an adaptive high-order integrator; norm drift beyond 1e-8 is a hard
    failure since it signals an accuracy problem, never a recoverable one.
    """
    _check_size(params.N)
    if t_final == 0.0:
        return psi.copy()
    Hxy = sparse.csr_matrix(spin_spin_part(params.N, params.gamma))
    zdiag = z_total_diagonal(params.N)

    def rhs(t, y):
        return -1.0j * (Hxy @ y + params.field(t) * (zdiag * y))

    sol = solve_ivp(rhs, (0.0, t_final), psi.astype(complex), method="DOP853",
                    rtol=rtol, atol=atol, dense_output=False)
    if not sol.success:
        raise RuntimeError(f"dense evolution failed: {sol.message}")
    out = sol.y[:, -1]
    drift = abs(np.linalg.norm(out) - 1.0)
    if drift > 1e-8:
        raise RuntimeError(f"dense evolution norm drift {drift:.3e} exceeds 1e-8")
    return out


def transverse_magnetization(psi: np.ndarray, N: int) -> float:
    """Site-averaged <sigma_z>."""
    return float(np.real(np.vdot(psi, z_total_diagonal(N) * psi))) / N


def two_site_rdm(psi: np.ndarray, i: int, N: int) -> np.ndarray:
    """Reduced density matrix of adjacent sites (i, i+1), sigma_z product basis."""
    if not 1 <= i < N:
        raise ValueError(f"need 1 <= i < N, got i={i}")
    tensor = psi.reshape((2 ** (i - 1), 4, 2 ** (N - i - 1)))
    return np.einsum("ajc,akc->jk", tensor, tensor.conj())


def concurrence(rho: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit density matrix."""
    syy = np.kron(np.real(1j * _SY), np.real(1j * _SY))  # sigma_y x sigma_y, real
    R = rho @ syy @ rho.conj() @ syy
    lam = np.sort(np.real(np.linalg.eigvals(R)))[::-1]
    lam = np.sqrt(np.clip(lam, 0.0, None))
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def half_chain_entropy(psi: np.ndarray, N: int) -> float:
    """Von Neumann entropy (bits) of the first N/2 sites."""
    M = psi.reshape((2 ** (N // 2), 2 ** (N - N // 2)))
    s = np.linalg.svd(M, compute_uv=False)
    p = s**2
    p = p[p > 1e-16]
    return float(-np.sum(p * np.log2(p)))


def loschmidt_echo(psi0: np.ndarray, psi: np.ndarray) -> float:
    return float(abs(np.vdot(psi0, psi)))


def work(psi: np.ndarray, params: ModelParams, e_initial: float) -> float:
    """<H(0)> - E_initial for the evolved state."""
    H0 = build_hamiltonian(params.N, params.gamma, params.h0)
    return float(np.real(np.vdot(psi, H0 @ psi))) - e_initial


def _jw_annihilators(N: int) -> list[np.ndarray]:
    """Dense JW fermion annihilation operators c_j, j = 1..N."""
    _check_size(N)
    ops = []
    for j in range(1, N + 1):
        mats = []
        for l in range(1, N + 1):
            if l < j:
                mats.append(-_SZ)
            elif l == j:
                mats.append(_SM)
            else:
                mats.append(_ID)
        op = mats[0]
        for m in mats[1:]:
            op = np.kron(op, m)
        ops.append(op)
    return ops


def majorana_correlations(psi: np.ndarray, N: int) -> np.ndarray:
    """Full-chain Gamma with <a_m a_n> = delta_mn + i Gamma_mn.

    Majorana ordering a_{2l-1} = c_l + c+_l, a_{2l} = -i (c_l - c+_l).
    """
    cs = _jw_annihilators(N)
    a_vecs = []
    for c in cs:
        cd = c.conj().T
        a_vecs.append((c + cd) @ psi)
        a_vecs.append(-1j * (c - cd) @ psi)
    A = np.array(a_vecs)  # (2N, dim)
    M = A.conj() @ A.T  # <a_m a_n>
    G = (M - np.eye(2 * N)) / 1j
    return np.real(G)


def mode_bilinears(psi: np.ndarray, N: int):
    """Occupations n_k = <c+_k c_k> and pair amplitudes p_k = u*_k v_k.

    p_k is reported in the real-pairing gauge of :mod:`floqxy.model`, i.e.
    p_k = -i <c_{-k} c_k> with plain momentum operators.
    """
    cs = _jw_annihilators(N)
    ks = np.pi * (2 * np.arange(1, N // 2 + 1) - 1) / N
    n_k = np.zeros(N // 2)
    p_k = np.zeros(N // 2, dtype=complex)
    sites = np.arange(1, N + 1)
    for m, k in enumerate(ks):
        ck = sum(np.exp(-1j * k * j) * c for j, c in zip(sites, cs)) / np.sqrt(N)
        cmk = sum(np.exp(1j * k * j) * c for j, c in zip(sites, cs)) / np.sqrt(N)
        ck_psi = ck @ psi
        n_k[m] = np.real(np.vdot(ck_psi, ck_psi))
        p_k[m] = -1j * np.vdot(psi, cmk @ ck_psi)
    return n_k, p_k


def observables_record(psi: np.ndarray, params: ModelParams, psi0: np.ndarray,
                       e_initial: float) -> dict:
    """Every oracle quantity in one pass, keyed like the fast pipeline."""
    N = params.N
    rho = two_site_rdm(psi, 1, N)
    return {
        "sigma_z": transverse_magnetization(psi, N),
        "rdm": rho,
        "concurrence": concurrence(rho),
        "entropy_half": half_chain_entropy(psi, N),
        "loschmidt": loschmidt_echo(psi0, psi),
        "work": work(psi, params, e_initial),
        "gamma_matrix": majorana_correlations(psi, N),
    }
