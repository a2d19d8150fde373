"""One-period propagators, stroboscopic evolution and the Floquet spectrum.

The per-mode propagator of the driven pair Hamiltonian is an SU(2) matrix

    U_k(t) = [[a_k, -conj(b_k)], [b_k, conj(a_k)]],

so only the first column is integrated; the second follows from symmetry
and column normalization makes the stored matrix exactly unitary (the raw
defect is recorded, and integration fails rather than hiding a defect
above the renormalization budget).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import bdg
from .model import ModelParams, ModeState, mode_grid

__all__ = [
    "Monodromy",
    "FloquetSpectrum",
    "monodromy",
    "stroboscopic_state",
    "trajectory",
    "unitary_power",
    "floquet_spectrum",
    "unfold_quasienergies",
    "max_group_velocity",
    "recurrence_time",
    "quasi_degeneracy_gap",
]

RENORM_BUDGET = 1e-9


@dataclass
class Monodromy:
    """One-period propagators U_k(T) for every positive-k mode."""

    params: ModelParams
    k: np.ndarray
    mats: np.ndarray  # (M, 2, 2) complex, exactly SU(2) after normalization
    raw_defect: float
    steps: int
    tol: float
    n_periods: int = 1

    def unitarity_defect(self) -> float:
        """Max-norm deviation of U+ U from the identity."""
        prod = np.einsum("mji,mjl->mil", self.mats.conj(), self.mats)
        return float(np.max(np.abs(prod - np.eye(2))))

    def det_defect(self) -> float:
        dets = self.mats[:, 0, 0] * self.mats[:, 1, 1] - self.mats[:, 0, 1] * self.mats[:, 1, 0]
        return float(np.max(np.abs(np.abs(dets) - 1.0)))


def monodromy(params: ModelParams, tol: float = 1e-10, n_periods: int = 1,
              backend: str | None = None) -> Monodromy:
    """Integrate the BdG equations over n_periods drive periods.

    Raises :class:`floqxy.bdg.IntegrationError` when the tolerance cannot be
    met, and refuses to renormalize a defect larger than 1e-9.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    k = mode_grid(params)
    t_end = n_periods * params.period
    y, info = bdg.integrate_columns(k, params.gamma, params.h0, params.dh,
                                    params.omega, t_end, tol, backend=backend)
    defect = info["defect"]
    if defect > max(tol, RENORM_BUDGET):
        raise bdg.IntegrationError(
            f"unitarity defect {defect:.3e} exceeds tolerance {tol:g}")
    a = y[:, 0]
    b = y[:, 1]
    norm = np.sqrt(np.abs(a) ** 2 + np.abs(b) ** 2)
    a = a / norm
    b = b / norm
    mats = np.empty((k.size, 2, 2), dtype=complex)
    mats[:, 0, 0] = a
    mats[:, 1, 0] = b
    mats[:, 0, 1] = -np.conj(b)
    mats[:, 1, 1] = np.conj(a)
    return Monodromy(params=params, k=k, mats=mats, raw_defect=defect,
                     steps=info["steps"], tol=tol, n_periods=n_periods)


def _su2_eigensystem(mats: np.ndarray):
    """Eigen-decomposition of a stack of SU(2) matrices.

    Returns (lam_plus, vec_plus, vec_minus, degenerate) where lam_plus is the
    eigenvalue with non-positive imaginary part (phase e^{-i phi}, phi in
    [0, pi]) and vec_minus belongs to conj(lam_plus).
    """
    a = mats[:, 0, 0]
    b = mats[:, 1, 0]
    re_a = np.clip(np.real(a), -1.0, 1.0)
    s = np.sqrt(np.clip(1.0 - re_a**2, 0.0, None))
    lam_plus = re_a - 1j * s

    # Two candidate eigenvector formulas; pick the better-conditioned one.
    w1 = np.stack([np.conj(b), a - lam_plus], axis=1)
    w2 = np.stack([lam_plus - np.conj(a), b], axis=1)
    n1 = np.linalg.norm(w1, axis=1)
    n2 = np.linalg.norm(w2, axis=1)
    use1 = n1 >= n2
    vec = np.where(use1[:, None], w1, w2)
    norm = np.where(use1, n1, n2)
    degenerate = norm < 1e-9
    safe = np.where(degenerate, 1.0, norm)
    vec_plus = vec / safe[:, None]
    # Degenerate modes: U = +-identity, any orthonormal pair will do.
    vec_plus[degenerate] = np.array([1.0, 0.0])
    # The orthogonal partner (-conj(y), conj(x)) is the conj(lam) eigenvector.
    vec_minus = np.stack([-np.conj(vec_plus[:, 1]), np.conj(vec_plus[:, 0])], axis=1)
    return lam_plus, vec_plus, vec_minus, degenerate


def unitary_power(mats: np.ndarray, n: int) -> np.ndarray:
    """U^n for a stack of SU(2) matrices.

    Eigen-phases are multiplied for non-degenerate modes; near-degenerate
    ones (|U| ~ +-identity) fall back to binary powering, which is exact up
    to rounding for any n.
    """
    if n == 0:
        return np.broadcast_to(np.eye(2, dtype=complex), mats.shape).copy()
    if n == 1:
        return mats.copy()
    lam, vp, vm, degen = _su2_eigensystem(mats)
    lam_n = lam**n
    out = (lam_n[:, None, None] * np.einsum("mi,mj->mij", vp, vp.conj())
           + np.conj(lam_n)[:, None, None] * np.einsum("mi,mj->mij", vm, vm.conj()))
    if np.any(degen):
        out[degen] = _binary_power(mats[degen], n)
    return out


def _binary_power(mats: np.ndarray, n: int) -> np.ndarray:
    result = np.broadcast_to(np.eye(2, dtype=complex), mats.shape).copy()
    base = mats.copy()
    while n:
        if n & 1:
            result = base @ result
        base = base @ base
        n >>= 1
    return result


def stroboscopic_state(initial: ModeState, mono: Monodromy, n: int) -> ModeState:
    """State after n periods, (u, v)(nT) = U_k(T)^n (u, v)(0)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if initial.k.shape != mono.k.shape or not np.allclose(initial.k, mono.k):
        raise ValueError("mode grids of state and monodromy differ")
    if n == 0:
        return ModeState(k=initial.k, u=initial.u.copy(), v=initial.v.copy(),
                         params=mono.params)
    if n <= 32:
        Un = _binary_power(mono.mats, n)
    else:
        Un = unitary_power(mono.mats, n)
    u = Un[:, 0, 0] * initial.u + Un[:, 0, 1] * initial.v
    v = Un[:, 1, 0] * initial.u + Un[:, 1, 1] * initial.v
    return ModeState(k=initial.k, u=u, v=v, params=mono.params)


def trajectory(initial: ModeState, mono: Monodromy, n_max: int):
    """Yield (n, state) for n = 0..n_max by sequential application of U(T)."""
    state = ModeState(k=initial.k, u=initial.u.copy(), v=initial.v.copy(),
                      params=mono.params)
    yield 0, state
    u, v = initial.u.copy(), initial.v.copy()
    U = mono.mats
    for n in range(1, n_max + 1):
        u, v = U[:, 0, 0] * u + U[:, 0, 1] * v, U[:, 1, 0] * u + U[:, 1, 1] * v
        yield n, ModeState(k=initial.k, u=u.copy(), v=v.copy(), params=mono.params)


@dataclass
class FloquetSpectrum:
    """Per-mode quasienergies folded to [-omega/2, omega/2) and eigenvectors."""

    k: np.ndarray
    omega: float
    mu_plus: np.ndarray
    mu_minus: np.ndarray
    vec_plus: np.ndarray  # (M, 2)
    vec_minus: np.ndarray
    degenerate: np.ndarray = field(repr=False, default=None)


def floquet_spectrum(mono: Monodromy) -> FloquetSpectrum:
    """Quasienergies mu_k+- = -+ (omega/2pi) * principal eigenphase of U_k(T)."""
    omega = mono.params.omega
    lam, vp, vm, degen = _su2_eigensystem(mono.mats)
    phi = np.arccos(np.clip(np.real(lam), -1.0, 1.0))  # in [0, pi]
    mu_plus = phi * omega / (2.0 * np.pi) / mono.n_periods
    return FloquetSpectrum(k=mono.k, omega=omega, mu_plus=mu_plus,
                           mu_minus=-mu_plus, vec_plus=vp, vec_minus=vm,
                           degenerate=degen)


def unfold_quasienergies(spec: FloquetSpectrum, max_zones: int = 64):
    """Continuous quasienergy branch across grid points.

    Starting from the smallest momentum, each step picks the representative
    +-mu_k + l*omega closest to a linear prediction from the previous two
    points.  Returns (branch, ambiguous) where `ambiguous` flags points with
    a closely competing candidate.
    """
    mu = spec.mu_plus
    omega = spec.omega
    ls = np.arange(-max_zones, max_zones + 1) * omega
    branch = np.empty_like(mu)
    ambiguous = np.zeros(mu.size, dtype=bool)
    branch[0] = mu[0]
    slope = 0.0
    for j in range(1, mu.size):
        predicted = branch[j - 1] + slope
        cands = np.concatenate([mu[j] + ls, -mu[j] + ls])
        dist = np.abs(cands - predicted)
        order = np.argsort(dist)
        best = cands[order[0]]
        if dist[order[1]] < 2.0 * dist[order[0]] and dist[order[0]] > 1e-12:
            ambiguous[j] = True
        slope = best - branch[j - 1]
        branch[j] = best
    return branch, ambiguous


def max_group_velocity(spec: FloquetSpectrum) -> float:
    """max_k |d mu / dk| by central differences on the unfolded branch."""
    if spec.k.size < 8:
        raise ValueError("grid too coarse for finite-difference group velocities")
    branch, ambiguous = unfold_quasienergies(spec)
    if np.any(ambiguous):
        warnings.warn("quasienergy branch unfolding is ambiguous at "
                      f"{int(np.sum(ambiguous))} grid points; v_max may be degraded",
                      RuntimeWarning, stacklevel=2)
    v = np.abs(branch[2:] - branch[:-2]) / (spec.k[2:] - spec.k[:-2])
    return float(np.max(v))


def recurrence_time(N: int, v_max: float) -> float:
    """t_rec = N / (2 v_max), in time units (divide by T for cycles)."""
    return N / (2.0 * v_max)


def quasi_degeneracy_gap(spec: FloquetSpectrum) -> np.ndarray:
    """gap(k) = min_l |mu_k+ - mu_k- - l omega|, the inter-band resonance metric."""
    two_mu = 2.0 * spec.mu_plus
    return np.minimum(two_mu, spec.omega - two_mu)


def ground_pair_mixing(mono: Monodromy) -> np.ndarray:
    """Hybridization m(1 - m) of the static ground pair with the Floquet modes.

    m(k) is the weight of the static ground pair on the mu_+ Floquet mode.
    The product m(1-m) peaks at 1/4 on resonantly hybridized (absorbing)
    modes and vanishes both off resonance and at inert exact crossings whose
    drive matrix element is zero, which the bare quasienergy gap cannot tell
    apart.
    """
    from .model import ground_state

    spec = floquet_spectrum(mono)
    gs = ground_state(mono.params)
    m = np.abs(gs.u * np.conj(spec.vec_plus[:, 0])
               + gs.v * np.conj(spec.vec_plus[:, 1])) ** 2
    return m * (1.0 - m)


def resonance_momentum(mono: Monodromy) -> float:
    """Momentum of the dominant lifted quasi-degeneracy (max hybridization)."""
    mix = ground_pair_mixing(mono)
    return float(mono.k[int(np.argmax(mix))])
