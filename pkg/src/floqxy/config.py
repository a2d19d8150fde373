"""Experiment configuration: INI files with CLI overrides.

An experiment is one sweep over (N, h, n) cells plus its analysis.  The
file format is plain configparser INI with two sections, [experiment] and
[run]; every key can also be overridden on the command line with
``--set section.key=value``.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field, asdict

import numpy as np

EXPERIMENT_KINDS = (
    "concurrence-fss",
    "chi-z-fss",
    "entropy-fss",
    "fidelity-fss",
    "breakdown-scan",
    "loschmidt-work",
    "fs-offcritical",
    "low-omega",
)

_FSS_OBSERVABLE = {
    "concurrence-fss": "dC_dh",
    "chi-z-fss": "chi_z",
    "entropy-fss": "entropy_half",
    "fidelity-fss": "chi_F",
    "breakdown-scan": "chi_z",
    "low-omega": "chi_z",
}


@dataclass
class ExperimentConfig:
    kind: str = "chi-z-fss"
    sizes: list = field(default_factory=lambda: [128, 256, 512])
    n_list: list = field(default_factory=lambda: [0, 30])
    gamma: float = 1.0
    dh: float = 0.1
    omega: float = 2.0 * np.pi
    h_center: float = 1.0
    x_window: tuple = (-4.0, 4.0)
    points: int = 25
    h_grid: tuple | None = None  # (min, max, count) explicit scan, used by fs-offcritical
    h_fixed: float = 0.95  # off-critical linear-FS base field
    dh_values: list = field(default_factory=lambda: [0.05, 0.1, 0.75])
    fd_step: float = 1e-4
    delta_h: float = 1e-5
    tol: float | None = None
    out_dir: str = "out"
    workers: int = 1
    seed: int = 0
    max_memory_gb: float = 4.0
    max_minutes: float = 120.0

    def observable_kind(self) -> str:
        return _FSS_OBSERVABLE.get(self.kind, "")

    def h_values(self, N: int) -> np.ndarray:
        if self.h_grid is not None:
            lo, hi, count = self.h_grid
            return np.linspace(lo, hi, int(count))
        x = np.linspace(self.x_window[0], self.x_window[1], self.points)
        return self.h_center + x / N

    def to_dict(self) -> dict:
        return asdict(self)


class ConfigError(ValueError):
    pass


def validate_config(cfg: ExperimentConfig) -> list[str]:
    """Sanity checks plus memory and wall-time estimates.

    Returns diagnostics; raises ConfigError on hard violations.
    """
    if cfg.kind not in EXPERIMENT_KINDS:
        raise ConfigError(
            f"unknown experiment kind {cfg.kind!r}; valid kinds: {', '.join(EXPERIMENT_KINDS)}")
    if not cfg.sizes:
        raise ConfigError("size list is empty")
    for N in cfg.sizes:
        if N % 2 != 0 or N < 4:
            raise ConfigError(f"sizes must be even and >= 4, got {N}")
    if not cfg.n_list:
        raise ConfigError("n list is empty")
    if min(cfg.n_list) < 0:
        raise ConfigError("stroboscopic indices must be >= 0")
    if cfg.tol is not None and cfg.tol <= 0:
        raise ConfigError("tolerance must be > 0")
    if cfg.fd_step <= 0 or cfg.delta_h <= 0:
        raise ConfigError("finite-difference steps must be > 0")
    if cfg.points < 15 and cfg.h_grid is None and cfg.kind.endswith("fss"):
        raise ConfigError("FSS curves need at least 15 h-samples")
    if cfg.workers < 1:
        raise ConfigError("workers must be >= 1")

    diagnostics = []
    n_max = max(cfg.n_list)
    nmax_size = max(cfg.sizes)
    cells = len(cfg.sizes) * (cfg.h_grid[2] if cfg.h_grid else cfg.points)
    # Entropy windows hold a (N x N) real matrix and its eigensolve workspace.
    mem_gb = (nmax_size**2 * 8 * 3) / 1e9
    diagnostics.append(f"peak memory estimate: {mem_gb:.3f} GB (N={nmax_size} window eigensolve)")
    if mem_gb > cfg.max_memory_gb:
        raise ConfigError(
            f"estimated memory {mem_gb:.2f} GB exceeds budget {cfg.max_memory_gb} GB")
    # One pipeline ~ one adaptive one-period integration; entropy adds eigensolves.
    pipelines = cells * (2 if cfg.kind in ("chi-z-fss", "concurrence-fss",
                                           "fidelity-fss", "breakdown-scan",
                                           "low-omega") else 1)
    if cfg.kind == "breakdown-scan":
        pipelines *= max(len(cfg.dh_values), 1)
    est_s = pipelines * 0.2 * (nmax_size / 512) * max(1.0, 2 * np.pi / cfg.omega)
    if cfg.kind == "entropy-fss":
        est_s += cells * len(cfg.n_list) * (nmax_size / 256) ** 3 * 0.01
    diagnostics.append(f"wall-time estimate: {est_s / 60:.1f} min on one worker")
    if est_s / 60 > cfg.max_minutes:
        raise ConfigError(
            f"estimated wall time {est_s / 60:.0f} min exceeds budget {cfg.max_minutes:.0f} min")
    diagnostics.append(f"cells: {cells}, pipelines: {pipelines}, n_max: {n_max}")
    return diagnostics


def _parse_list(text: str, typ):
    return [typ(tok.strip()) for tok in text.split(",") if tok.strip()]


def config_from_mapping(mapping: dict) -> ExperimentConfig:
    cfg = ExperimentConfig()
    exp = mapping.get("experiment", {})
    run = mapping.get("run", {})
    for key, raw in exp.items():
        if key == "kind":
            cfg.kind = raw.strip()
        elif key == "sizes":
            cfg.sizes = _parse_list(raw, int)
        elif key == "n_list":
            cfg.n_list = _parse_list(raw, int)
        elif key in ("gamma", "dh", "omega", "h_center", "fd_step", "delta_h", "h_fixed"):
            setattr(cfg, key, float(raw))
        elif key == "x_window":
            vals = _parse_list(raw, float)
            if len(vals) != 2:
                raise ConfigError("x_window needs two values")
            cfg.x_window = (vals[0], vals[1])
        elif key == "points":
            cfg.points = int(raw)
        elif key == "h_grid":
            vals = _parse_list(raw, float)
            if len(vals) != 3:
                raise ConfigError("h_grid needs min, max, count")
            cfg.h_grid = (vals[0], vals[1], int(vals[2]))
        elif key == "dh_values":
            cfg.dh_values = _parse_list(raw, float)
        elif key == "tol":
            cfg.tol = float(raw)
        else:
            raise ConfigError(f"unknown [experiment] key {key!r}")
    for key, raw in run.items():
        if key == "out_dir":
            cfg.out_dir = raw.strip()
        elif key in ("workers", "seed"):
            setattr(cfg, key, int(raw))
        elif key in ("max_memory_gb", "max_minutes"):
            setattr(cfg, key, float(raw))
        else:
            raise ConfigError(f"unknown [run] key {key!r}")
    return cfg


def load_config(path: str) -> ExperimentConfig:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"config file {path!r} not found")
    mapping = {section: dict(parser.items(section)) for section in parser.sections()}
    return config_from_mapping(mapping)


def apply_overrides(cfg: ExperimentConfig, overrides: list[str]) -> ExperimentConfig:
    """Apply ``section.key=value`` strings on top of an existing config."""
    mapping = {"experiment": {}, "run": {}}
    for item in overrides:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigError(f"override {item!r} is not of the form section.key=value")
        target, value = item.split("=", 1)
        section, key = target.split(".", 1)
        if section not in mapping:
            raise ConfigError(f"unknown section {section!r}")
        mapping[section][key.strip()] = value
    # Re-serialize the current config and layer the overrides on top.
    base = config_to_ini(cfg)
    parser = configparser.ConfigParser()
    parser.read_string(base)
    for section, items in mapping.items():
        for key, value in items.items():
            parser.set(section, key, value)
    full = {section: dict(parser.items(section)) for section in parser.sections()}
    return config_from_mapping(full)


def config_to_ini(cfg: ExperimentConfig) -> str:
    parser = configparser.ConfigParser()
    parser["experiment"] = {
        "kind": cfg.kind,
        "sizes": ", ".join(str(N) for N in cfg.sizes),
        "n_list": ", ".join(str(n) for n in cfg.n_list),
        "gamma": repr(cfg.gamma),
        "dh": repr(cfg.dh),
        "omega": repr(cfg.omega),
        "h_center": repr(cfg.h_center),
        "x_window": f"{cfg.x_window[0]!r}, {cfg.x_window[1]!r}",
        "points": str(cfg.points),
        "fd_step": repr(cfg.fd_step),
        "delta_h": repr(cfg.delta_h),
        "h_fixed": repr(cfg.h_fixed),
        "dh_values": ", ".join(repr(x) for x in cfg.dh_values),
    }
    if cfg.h_grid is not None:
        parser["experiment"]["h_grid"] = f"{cfg.h_grid[0]!r}, {cfg.h_grid[1]!r}, {cfg.h_grid[2]}"
    if cfg.tol is not None:
        parser["experiment"]["tol"] = repr(cfg.tol)
    parser["run"] = {
        "out_dir": cfg.out_dir,
        "workers": str(cfg.workers),
        "seed": str(cfg.seed),
        "max_memory_gb": repr(cfg.max_memory_gb),
        "max_minutes": repr(cfg.max_minutes),
    }
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()
