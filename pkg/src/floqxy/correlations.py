"""Majorana correlation matrices of BCS-form states via momentum sums.

For a state prod_{k>0} (u_k + v_k c+_k c+_{-k})|0> (real-pairing gauge) the
translation-invariant fermion correlators are, with r = m - l,

    G(r) = <c+_l c_m> = (2/N) sum_{k>0} |v_k|^2 cos(k r)
    F(r) = <c_l c_m>  = -(2/N) sum_{k>0} conj(u_k) v_k sin(k r)

and the Majorana matrix Gamma (convention <a_m a_n> = delta_mn + i Gamma_mn,
a_{2l-1} = c_l + c+_l, a_{2l} = -i(c_l - c+_l)) has the 2x2 site blocks

    Gamma[2l-1, 2m-1] =  2 Im F(r)
    Gamma[2l,   2m  ] = -2 Im F(r)
    Gamma[2l-1, 2m  ] = -(2 Re F(r) + 2 G(r) - delta_lm)
    Gamma[2l,   2m-1] = -(2 Re F(r) - 2 G(r) + delta_lm)

G is real because |v_k|^2 is; F acquires an imaginary part only out of
equilibrium.  All blocks are pinned against the dense oracle in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModeState

__all__ = ["MajoranaCorr", "fermion_correlators", "majorana_correlations"]


@dataclass
class MajoranaCorr:
    """Real antisymmetric correlation matrix restricted to a site window."""

    window: tuple[int, int]  # inclusive 1-based site range [a, b]
    gamma: np.ndarray  # shape (2w, 2w), w = b - a + 1

    def __post_init__(self):
        a, b = self.window
        w = b - a + 1
        if self.gamma.shape != (2 * w, 2 * w):
            raise ValueError("Gamma size does not match window")

    def antisymmetry_defect(self) -> float:
        return float(np.max(np.abs(self.gamma + self.gamma.T)))

    def purity_defect(self) -> float:
        """Max-norm deviation of Gamma^2 from -identity (pure full-chain states)."""
        w2 = self.gamma.shape[0]
        return float(np.max(np.abs(self.gamma @ self.gamma + np.eye(w2))))

    def mode_spectrum(self) -> np.ndarray:
        """Values nu_j >= 0 such that the eigenvalues of Gamma are +-i nu_j."""
        ev = np.linalg.eigvalsh(1j * self.gamma)
        nu = ev[ev.size // 2:]  # the non-negative half of the +-nu pairs
        return nu

    def check(self, tol_antisym: float = 1e-10, tol_nu: float = 1e-10) -> None:
        defect = self.antisymmetry_defect()
        if defect > tol_antisym:
            raise ValueError(f"Gamma antisymmetry defect {defect:.3e}")
        nu = self.mode_spectrum()
        if nu.size and float(nu[-1]) > 1.0 + tol_nu:
            raise ValueError(f"Gamma mode spectrum exceeds 1: {float(nu[-1]):.12f}")


def fermion_correlators(state: ModeState, rmax: int):
    """(G, F) arrays for separations r = 0..rmax."""
    N = 2 * state.n_modes
    r = np.arange(rmax + 1)
    kr = np.outer(state.k, r)
    occ = state.occupations()
    pair = state.pairing()
    G = (2.0 / N) * (occ @ np.cos(kr))
    F = -(2.0 / N) * (pair @ np.sin(kr))
    return G, F


def majorana_correlations(state: ModeState, window: tuple[int, int]) -> MajoranaCorr:
    """Gamma of the state restricted to the contiguous site window [a, b]."""
    a, b = window
    N = 2 * state.n_modes
    if not (1 <= a <= b <= N):
        raise ValueError(f"window {window} outside chain of {N} sites")
    w = b - a + 1
    G, F = fermion_correlators(state, w - 1)

    # Toeplitz blocks over separations; build signed distance tables first.
    idx = np.arange(w)
    rmat = idx[None, :] - idx[:, None]  # r = m - l
    absr = np.abs(rmat)
    sgn = np.sign(rmat)
    Gm = G[absr]  # G is even in r
    Fm = sgn * F[absr]  # F is odd in r
    delta = np.eye(w)

    gamma = np.empty((2 * w, 2 * w))
    gamma[0::2, 0::2] = 2.0 * np.imag(Fm)
    gamma[1::2, 1::2] = -2.0 * np.imag(Fm)
    gamma[0::2, 1::2] = -(2.0 * np.real(Fm) + 2.0 * Gm - delta)
    gamma[1::2, 0::2] = -(2.0 * np.real(Fm) - 2.0 * Gm + delta)
    return MajoranaCorr(window=(a, b), gamma=gamma)
