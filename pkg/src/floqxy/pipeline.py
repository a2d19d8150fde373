"""Simulation pipelines: observable curves over (h, n) grids and FSS datasets.

One pipeline = ground state at a base field, one-period monodromy of the
drive re-based there, stroboscopic powers, observable evaluation.  Field
derivatives (chi_z, dC/dh) and the driven fidelity re-run the pipeline at
shifted base fields; monodromies are reused across all stroboscopic times
of a curve, which makes dense n-scans cheap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import observables as obs
from .floquet import monodromy, trajectory
from .model import ModelParams, ground_state
from .scaling import ScalingDataset

__all__ = [
    "ObservableRecord",
    "SCALAR_KINDS",
    "observable_curve",
    "build_datasets",
    "loschmidt_work_profile",
    "default_h_grid",
]

SCALAR_KINDS = (
    "sigma_z", "chi_z", "concurrence", "dC_dh", "entropy_half",
    "loschmidt", "work", "fidelity", "chi_F",
)

_RANGES = {
    "concurrence": (0.0, 1.0),
    "loschmidt": (0.0, 1.0),
    "fidelity": (0.0, 1.0),
    "work": (-1e-10, np.inf),
}


@dataclass
class ObservableRecord:
    """One scalar sample of the pipeline, as written to the CSV output."""

    kind: str
    N: int
    gamma: float
    h: float
    dh: float
    omega: float
    n: int
    value: float

    def __post_init__(self):
        if self.kind not in SCALAR_KINDS:
            raise ValueError(f"unknown observable kind {self.kind!r}")
        lo, hi = _RANGES.get(self.kind, (-np.inf, np.inf))
        if self.kind == "entropy_half":
            lo, hi = 0.0, self.N / 2 + 1e-9
        if not lo - 1e-9 <= self.value <= hi + 1e-9:
            raise ValueError(f"{self.kind} value {self.value} outside [{lo}, {hi}]")


def _states_over_n(params: ModelParams, h: float, n_list, tol: float):
    """{n: ModeState} sharing one monodromy; n_list need not be contiguous."""
    base = params.rebased(h)
    wanted = sorted(set(int(n) for n in n_list))
    if wanted and wanted[0] < 0:
        raise ValueError("stroboscopic indices must be >= 0")
    init = ground_state(base)
    if not wanted or wanted[-1] == 0:
        return {0: init}
    mono = monodromy(base, tol=tol)
    out = {}
    remaining = set(wanted)
    for n, state in trajectory(init, mono, wanted[-1] if wanted else 0):
        if n in remaining:
            out[n] = state
            remaining.discard(n)
            if not remaining:
                break
    return out


def _plain_evaluator(kind: str):
    if kind == "sigma_z":
        return lambda state, init, params, h: obs.transverse_magnetization(state)
    if kind == "concurrence":
        return lambda state, init, params, h: obs.nearest_neighbor_concurrence(state)
    if kind == "entropy_half":
        return lambda state, init, params, h: obs.half_chain_entropy(state)
    if kind == "loschmidt":
        return lambda state, init, params, h: obs.loschmidt_echo(init, state)[0]
    if kind == "work":
        return lambda state, init, params, h: obs.work(state, params, h)[0]
    raise ValueError(f"{kind!r} is not a plain observable")


def observable_curve(kind: str, params: ModelParams, h: float, n_list,
                     fd_step: float = 1e-4, delta_h: float = 1e-5,
                     tol: float | None = None) -> dict[int, float]:
    """Observable values over stroboscopic times at one base field.

    kind is one of SCALAR_KINDS; derivative kinds use central differences
    with both the initial state and the drive re-based at h +- fd_step.
    """
    if kind not in SCALAR_KINDS:
        raise ValueError(f"unknown observable kind {kind!r}")
    if tol is None:
        tol = 1e-12 if kind in ("fidelity", "chi_F") else 1e-10

    if kind in ("chi_z", "dC_dh"):
        # chi_z curves carry the susceptibility of the field-aligned
        # magnetization -<sigma_z> so the critical feature is a positive peak
        # (d<sigma_z>/dh itself is negative around h_c with our conventions).
        inner = "sigma_z" if kind == "chi_z" else "concurrence"
        sign = -1.0 if kind == "chi_z" else 1.0
        fn = _plain_evaluator(inner)
        up = _states_over_n(params, h + fd_step, n_list, tol)
        dn = _states_over_n(params, h - fd_step, n_list, tol)
        out = {}
        for n in up:
            o_up = fn(up[n], None, params, h + fd_step)
            o_dn = fn(dn[n], None, params, h - fd_step)
            out[n] = sign * (o_up - o_dn) / (2.0 * fd_step)
        return out

    if kind in ("fidelity", "chi_F"):
        s1 = _states_over_n(params, h, n_list, tol)
        s2 = _states_over_n(params, h + delta_h, n_list, tol)
        out = {}
        for n in s1:
            ov = np.abs(np.conj(s1[n].u) * s2[n].u + np.conj(s1[n].v) * s2[n].v)
            with np.errstate(divide="ignore"):
                F = float(np.exp(np.sum(np.log(ov))))
            out[n] = F if kind == "fidelity" else 2.0 * (1.0 - F) / delta_h**2
        return out

    fn = _plain_evaluator(kind)
    states = _states_over_n(params, h, n_list, tol)
    init = states.get(0)
    if init is None:
        init = ground_state(params.rebased(h))
    return {n: fn(state, init, params, h) for n, state in states.items()}


def default_h_grid(N: int, x_window=(-4.0, 4.0), points: int = 25,
                   h_center: float = 1.0) -> np.ndarray:
    """h-grid centered on criticality with fixed span in x = N (h - h_center)."""
    x = np.linspace(x_window[0], x_window[1], points)
    return h_center + x / N


def build_datasets(kind: str, sizes, n_list, gamma: float = 1.0, dh: float = 0.1,
                   omega: float = 2.0 * np.pi, x_window=(-4.0, 4.0), points: int = 25,
                   h_center: float = 1.0, fd_step: float = 1e-4,
                   delta_h: float = 1e-5, tol: float | None = None,
                   executor=None) -> dict[int, ScalingDataset]:
    """FSS datasets {n: ScalingDataset} for the requested observable kind.

    Every (N, h) cell is an independent pipeline; pass a concurrent.futures
    executor to spread cells over workers (results are reassembled in a
    deterministic order either way).
    """
    n_list = sorted(set(int(n) for n in n_list))
    cells = []
    # Largest sizes first: the costliest cells are scheduled before the
    # cheap ones, so a worker pool does not end on a straggler.
    for N in sorted(sizes, reverse=True):
        params = ModelParams(N=int(N), gamma=gamma, h0=h_center, dh=dh, omega=omega)
        for h in default_h_grid(N, x_window, points, h_center):
            cells.append((N, params, float(h)))

    runner = _CellRunner(kind, n_list, fd_step, delta_h, tol)
    if executor is None:
        values = [runner(c) for c in cells]
    else:
        values = list(executor.map(runner, cells))

    drive = {"gamma": gamma, "dh": dh, "omega": omega}
    datasets = {}
    for n in n_list:
        curves = {}
        for (N, _, h), vals in zip(cells, values):
            curves.setdefault(N, []).append((h, vals[n]))
        curves = {N: np.array(pts) for N, pts in curves.items()}
        datasets[n] = ScalingDataset(kind=kind, n=n, curves=curves, drive=drive)
    return datasets


class _CellRunner:
    """Picklable cell evaluator for process pools."""

    def __init__(self, kind, n_list, fd_step, delta_h, tol):
        self.kind = kind
        self.n_list = n_list
        self.fd_step = fd_step
        self.delta_h = delta_h
        self.tol = tol

    def __call__(self, cell):
        N, params, h = cell
        try:
            return observable_curve(self.kind, params, h, self.n_list,
                                    fd_step=self.fd_step, delta_h=self.delta_h,
                                    tol=self.tol)
        except Exception as exc:
            raise RuntimeError(
                f"cell failed: kind={self.kind} N={N} h={h:.6g} "
                f"gamma={params.gamma} dh={params.dh} omega={params.omega}: {exc}"
            ) from exc


def loschmidt_work_profile(params: ModelParams, n: int, tol: float = 1e-10) -> dict:
    """Momentum-resolved Loschmidt echo and work with the Floquet landscape.

    Returns k, L, L_k, W, W_k, the folded quasienergies mu_plus and the
    inter-band quasi-degeneracy gap.
    """
    from .floquet import floquet_spectrum, quasi_degeneracy_gap, stroboscopic_state

    mono = monodromy(params, tol=tol)
    init = ground_state(params)
    state = stroboscopic_state(init, mono, n)
    L, L_k = obs.loschmidt_echo(init, state)
    W, W_k = obs.work(state, params)
    spec = floquet_spectrum(mono)
    return {
        "k": mono.k,
        "n": n,
        "L": L,
        "L_k": L_k,
        "W": W,
        "W_k": W_k,
        "mu_plus": spec.mu_plus,
        "gap": quasi_degeneracy_gap(spec),
    }
