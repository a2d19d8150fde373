"""Experiment execution: simulate, analyze, write outputs.

Each experiment kind produces one observables.csv, one analysis.json and a
manifest.json in the configured output directory.  All cells of a sweep
are independent; with workers > 1 they are spread over a process pool and
reassembled in a fixed order, so results do not depend on the worker count.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import io as fio
from .config import ExperimentConfig, validate_config
from .floquet import (floquet_spectrum, max_group_velocity, monodromy,
                      quasi_degeneracy_gap, recurrence_time, resonance_momentum)
from .model import ModelParams
from .pipeline import build_datasets, loschmidt_work_profile, observable_curve
from .scaling import (breakdown_time, collapse_quality, fit_fs_peak,
                      fit_log_divergence, fit_shift_exponent, linear_fs_scaling,
                      optimize_exponents, per_curve_deviation, refine_peak,
                      xi_scaling_fit)

_ANSATZ_FOR = {
    "concurrence-fss": "concurrence-log",
    "chi-z-fss": "chi_z-log",
    "entropy-fss": "entropy-shift",
    "fidelity-fss": "fidelity-susceptibility",
    "breakdown-scan": "chi_z-log",
    "low-omega": "chi_z-log",
}


def run_experiment(cfg: ExperimentConfig) -> dict:
    """Execute the configured experiment; returns the manifest dictionary."""
    diagnostics = validate_config(cfg)
    os.makedirs(cfg.out_dir, exist_ok=True)
    csv_path = os.path.join(cfg.out_dir, "observables.csv")
    json_path = os.path.join(cfg.out_dir, "analysis.json")
    manifest_path = os.path.join(cfg.out_dir, "manifest.json")

    timings: dict[str, float] = {}
    t_start = time.time()
    executor = None
    try:
        if cfg.workers > 1:
            executor = ProcessPoolExecutor(max_workers=cfg.workers)
        rows, analysis = _dispatch(cfg, executor)
    except Exception as exc:
        for path in (csv_path, json_path):
            if os.path.exists(path):
                os.remove(path)
        fio.write_manifest(manifest_path, cfg.to_dict(), [], {}, {},
                           valid=False, error=str(exc))
        raise
    finally:
        if executor is not None:
            executor.shutdown()

    timings["total"] = time.time() - t_start
    analysis["seed"] = cfg.seed
    fio.write_observables_csv(csv_path, rows)
    fio.write_json(json_path, analysis)

    probe = monodromy(ModelParams(N=min(cfg.sizes), gamma=cfg.gamma,
                                  h0=cfg.h_center, dh=cfg.dh, omega=cfg.omega),
                      tol=cfg.tol or 1e-10)
    integ = {"probe_defect": probe.raw_defect, "probe_steps": probe.steps,
             "tolerance": cfg.tol or 1e-10, "validation": diagnostics}
    fio.write_manifest(manifest_path, cfg.to_dict(), [csv_path, json_path],
                       timings, integ, valid=True)
    with open(manifest_path) as f:
        import json

        return json.load(f)


def _dispatch(cfg: ExperimentConfig, executor):
    if cfg.kind in ("concurrence-fss", "chi-z-fss", "entropy-fss", "fidelity-fss"):
        return _run_fss(cfg, executor)
    if cfg.kind == "breakdown-scan":
        return _run_breakdown(cfg, executor)
    if cfg.kind == "low-omega":
        return _run_low_omega(cfg, executor)
    if cfg.kind == "loschmidt-work":
        return _run_loschmidt_work(cfg)
    if cfg.kind == "fs-offcritical":
        return _run_fs_offcritical(cfg)
    raise ValueError(f"unhandled experiment kind {cfg.kind!r}")


def _dataset_rows(cfg, obs_kind, datasets):
    from .pipeline import ObservableRecord

    rows = []
    for n, ds in datasets.items():
        for N, curve in ds.curves.items():
            for h, value in curve:
                rec = ObservableRecord(kind=obs_kind, N=int(N), gamma=cfg.gamma,
                                       h=float(h), dh=ds.drive.get("dh", cfg.dh),
                                       omega=cfg.omega, n=int(n), value=float(value))
                rows.append(fio.scalar_row(rec.kind, rec.N, rec.gamma, rec.h,
                                           rec.dh, rec.omega, rec.n, rec.value))
    return rows


def _run_fss(cfg: ExperimentConfig, executor):
    obs_kind = cfg.observable_kind()
    ansatz = _ANSATZ_FOR[cfg.kind]
    datasets = build_datasets(obs_kind, cfg.sizes, cfg.n_list, gamma=cfg.gamma,
                              dh=cfg.dh, omega=cfg.omega, x_window=cfg.x_window,
                              points=cfg.points, h_center=cfg.h_center,
                              fd_step=cfg.fd_step, delta_h=cfg.delta_h,
                              tol=cfg.tol, executor=executor)
    rows = _dataset_rows(cfg, obs_kind, datasets)

    analysis: dict = {"kind": cfg.kind, "ansatz": ansatz, "per_n": {}}
    for n, ds in datasets.items():
        entry: dict = {"peaks": {}}
        peaks = []
        for N, curve in ds.curves.items():
            try:
                h_star, y_star = refine_peak(curve)
            except ValueError:
                entry["peaks"][N] = None
                continue
            entry["peaks"][N] = {"h": h_star, "value": y_star}
            peaks.append((N, y_star))
        if len(peaks) >= 3 and cfg.kind != "fidelity-fss":
            slope, intercept, r2 = fit_log_divergence(peaks)
            entry["log_divergence"] = {"slope": slope, "intercept": intercept, "r2": r2}
        if cfg.kind == "fidelity-fss" and len(peaks) >= 3:
            b, r2 = fit_fs_peak(peaks, n)
            entry["peak_law"] = {"b": b, "r2": r2, "quadratic_coefficient": 1 / 32}
        try:
            if cfg.kind == "fidelity-fss":
                res = optimize_exponents(ds, ansatz, (0.4, 1.5), vary="r")
                entry["collapse"] = {"r": res.r, "nu": res.nu, "quality": res.quality,
                                     "identifiable": res.identifiable}
            else:
                res = optimize_exponents(ds, ansatz, (0.7, 1.4), vary="nu")
                entry["collapse"] = {"nu": res.nu, "r": res.r, "quality": res.quality,
                                     "identifiable": res.identifiable}
                entry["quality_at"] = {str(nu): collapse_quality(ds, ansatz, nu=nu)
                                       for nu in (0.8, 1.0, 1.2)}
        except ValueError as exc:
            entry["collapse"] = {"error": str(exc)}
        analysis["per_n"][str(n)] = entry

    shift_points = [(N, info["h"]) for N, info in
                    analysis["per_n"][str(min(cfg.n_list))]["peaks"].items()
                    if info is not None]
    if len(shift_points) >= 4:
        try:
            lam, const, r2 = fit_shift_exponent(shift_points, h_c=1.0)
            analysis["shift_exponent"] = {"lambda": lam, "const": const, "r2": r2}
        except (ValueError, RuntimeError) as exc:
            analysis["shift_exponent"] = {"error": str(exc)}
    return rows, analysis


def _run_breakdown(cfg: ExperimentConfig, executor):
    rows = []
    analysis: dict = {"kind": cfg.kind, "amplitudes": {}}
    T = 2.0 * np.pi / cfg.omega
    for dh in cfg.dh_values:
        datasets = build_datasets("chi_z", cfg.sizes, cfg.n_list, gamma=cfg.gamma,
                                  dh=dh, omega=cfg.omega, x_window=cfg.x_window,
                                  points=cfg.points, h_center=cfg.h_center,
                                  fd_step=cfg.fd_step, tol=cfg.tol,
                                  executor=executor)
        rows.extend(_dataset_rows(cfg, "chi_z", datasets))
        records = breakdown_time(datasets, "chi_z-log", cfg.sizes)
        probe = monodromy(ModelParams(N=max(cfg.sizes), gamma=cfg.gamma,
                                      h0=cfg.h_center, dh=dh, omega=cfg.omega),
                          tol=cfg.tol or 1e-10)
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            vmax = max_group_velocity(floquet_spectrum(probe))
        entry = {"v_max": vmax, "taus": [], "panels": {}}
        for rec in records:
            trec = recurrence_time(rec["N"], vmax)
            entry["taus"].append({
                "N": rec["N"],
                "tau_cycles": rec["tau_cycles"],
                "tau_time": rec["tau_cycles"] * T,
                "t_rec": trec,
                "lower_bound": rec["lower_bound"],
                "threshold": rec["threshold"],
            })
        for n in cfg.n_list[-3:]:
            if n == 0:
                continue
            dev = per_curve_deviation(datasets[n], "chi_z-log")
            entry["panels"][str(n)] = {str(N): v for N, v in dev.items()}
        analysis["amplitudes"][repr(float(dh))] = entry
    return rows, analysis


def _run_low_omega(cfg: ExperimentConfig, executor):
    datasets = build_datasets("chi_z", cfg.sizes, sorted(set(cfg.n_list) | {0, 1}),
                              gamma=cfg.gamma, dh=cfg.dh, omega=cfg.omega,
                              x_window=cfg.x_window, points=cfg.points,
                              h_center=cfg.h_center, fd_step=cfg.fd_step,
                              tol=cfg.tol, executor=executor)
    rows = _dataset_rows(cfg, "chi_z", datasets)
    q0 = collapse_quality(datasets[0], "chi_z-log")
    qualities = {"0": q0}
    for n in sorted(datasets):
        if n == 0:
            continue
        try:
            qualities[str(n)] = collapse_quality(datasets[n], "chi_z-log")
        except ValueError:
            qualities[str(n)] = float("inf")
    threshold = 5.0 * q0
    analysis = {
        "kind": cfg.kind,
        "qualities": qualities,
        "threshold": threshold,
        "lost_after_first_cycle": bool(qualities.get("1", np.inf) >= threshold),
    }
    return rows, analysis


def _run_loschmidt_work(cfg: ExperimentConfig):
    N = max(cfg.sizes)
    params = ModelParams(N=N, gamma=cfg.gamma, h0=cfg.h_center, dh=cfg.dh,
                         omega=cfg.omega)
    rows = []
    n_profile = max(cfg.n_list)
    log_L = {}
    for n in sorted(set(cfg.n_list)):
        prof = loschmidt_work_profile(params, n, tol=cfg.tol or 1e-10)
        rows.append(fio.scalar_row("loschmidt", N, cfg.gamma, cfg.h_center,
                                   cfg.dh, cfg.omega, n, prof["L"]))
        rows.append(fio.scalar_row("work", N, cfg.gamma, cfg.h_center,
                                   cfg.dh, cfg.omega, n, prof["W"]))
        with np.errstate(divide="ignore"):
            log_L[n] = float(np.sum(np.log(prof["L_k"])))
        for j in range(prof["k"].size):
            rows.append(fio.kresolved_row("loschmidt_k", N, cfg.gamma,
                                          cfg.h_center, cfg.dh, cfg.omega,
                                          n, j, float(prof["L_k"][j])))
            if n == n_profile:
                rows.append(fio.kresolved_row("work_k", N, cfg.gamma, cfg.h_center,
                                              cfg.dh, cfg.omega, n, j,
                                              float(prof["W_k"][j])))
    mono = monodromy(params, tol=cfg.tol or 1e-10)
    spec = floquet_spectrum(mono)
    gap = quasi_degeneracy_gap(spec)
    for j in range(spec.k.size):
        rows.append(fio.kresolved_row("floquet_mu", N, cfg.gamma, cfg.h_center,
                                      cfg.dh, cfg.omega, 0, j, float(spec.mu_plus[j])))
        rows.append(fio.kresolved_row("floquet_gap", N, cfg.gamma, cfg.h_center,
                                      cfg.dh, cfg.omega, 0, j, float(gap[j])))

    prof = loschmidt_work_profile(params, n_profile, tol=cfg.tol or 1e-10)
    k = prof["k"]
    ns = np.array([n for n in sorted(log_L) if n > 0])
    ys = np.array([log_L[n] for n in ns])
    slope, intercept = (np.polyfit(ns, ys, 1) if ns.size >= 2 else (np.nan, np.nan))
    analysis = {
        "kind": cfg.kind,
        "n_profile": n_profile,
        "k_argmax_work": float(k[int(np.argmax(prof["W_k"]))]),
        "k_argmin_loschmidt": float(k[int(np.argmin(prof["L_k"]))]),
        "k_resonance": resonance_momentum(mono),
        "grid_spacing": float(k[1] - k[0]),
        "log_loschmidt": {str(n): log_L[n] for n in sorted(log_L)},
        "decay_fit": {"slope": float(slope), "intercept": float(intercept)},
    }
    return rows, analysis


def _run_fs_offcritical(cfg: ExperimentConfig):
    rows = []
    analysis: dict = {"kind": cfg.kind, "linear": {}, "xi_fit": {}}
    for n in sorted(set(cfg.n_list)):
        pts = []
        for N in cfg.sizes:
            params = ModelParams(N=N, gamma=cfg.gamma, h0=cfg.h_fixed, dh=cfg.dh,
                                 omega=cfg.omega)
            chi = observable_curve("chi_F", params, cfg.h_fixed, [n],
                                   delta_h=cfg.delta_h, tol=cfg.tol)[n]
            pts.append((N, chi))
            rows.append(fio.scalar_row("chi_F", N, cfg.gamma, cfg.h_fixed,
                                       cfg.dh, cfg.omega, n, chi))
        slope, intercept, r2 = linear_fs_scaling(pts)
        analysis["linear"][str(n)] = {"slope": slope, "intercept": intercept, "r2": r2}

    N = max(cfg.sizes)
    params = ModelParams(N=N, gamma=cfg.gamma, h0=cfg.h_center, dh=cfg.dh,
                         omega=cfg.omega)
    h_values = cfg.h_values(N) if cfg.h_grid is not None else np.linspace(1.02, 1.30, 19)
    for n in sorted(set(cfg.n_list)):
        pts = []
        for h in h_values:
            chi = observable_curve("chi_F", params, float(h), [n],
                                   delta_h=cfg.delta_h, tol=cfg.tol)[n]
            pts.append((float(h), chi))
            rows.append(fio.scalar_row("chi_F", N, cfg.gamma, float(h),
                                       cfg.dh, cfg.omega, n, chi))
        a, b, r2, window = xi_scaling_fit(pts, n)
        analysis["xi_fit"][str(n)] = {
            "a": a, "b": b, "r2": r2,
            "window": list(window) if window else None,
            "window_width": (window[1] - window[0]) if window else 0.0,
        }
    return rows, analysis
