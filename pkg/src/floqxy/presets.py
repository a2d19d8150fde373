"""Experiment presets mirroring the headline figures, at desk scale.

Each preset is a plain mapping accepted by ``config_from_mapping``; sizes
and grids are chosen so a preset finishes in minutes on a laptop while
keeping the scaling structure intact.  Command-line overrides can push any
of them back to publication scale.
"""

from __future__ import annotations

from .config import ExperimentConfig, config_from_mapping

PRESETS: dict[str, dict] = {
    "fig1": {
        "experiment": {
            "kind": "concurrence-fss",
            "sizes": "128, 256, 512",
            "n_list": "0, 30",
            "gamma": "1.0",
            "dh": "0.1",
            "omega": "6.283185307179586",
            "points": "25",
        },
        "description": "Concurrence-derivative FSS after 30 cycles of 1 + 0.1 sin(2 pi t)",
    },
    "chi-z": {
        "experiment": {
            "kind": "chi-z-fss",
            "sizes": "128, 256, 512",
            "n_list": "0, 30",
            "dh": "0.1",
            "omega": "6.283185307179586",
            "points": "25",
        },
        "description": "Transverse-susceptibility FSS, same drive as fig1",
    },
    "fig2": {
        "experiment": {
            "kind": "fidelity-fss",
            "sizes": "64, 128, 256, 512",
            "n_list": "0, 5, 10, 15",
            "dh": "0.1",
            "omega": "6.283185307179586",
            "points": "31",
            "x_window": "-2.0, 1.0",
        },
        "description": "Driven fidelity susceptibility: peak law and r(nT) collapse",
    },
    "fig3": {
        "experiment": {
            "kind": "breakdown-scan",
            "sizes": "128, 160, 192",
            "n_list": ", ".join(str(n) for n in range(0, 46)),
            "dh_values": "0.025, 0.05, 0.1, 0.25, 0.5, 0.75",
            "omega": "4.0",
            "points": "25",
        },
        "description": "Breakdown time of the chi_z collapse vs drive amplitude at omega = 4",
    },
    "fig3-panels": {
        "experiment": {
            "kind": "breakdown-scan",
            "sizes": "128, 160, 192, 224, 256",
            "n_list": ", ".join(str(n) for n in range(0, 13)),
            "dh_values": "0.75",
            "omega": "4.0",
            "points": "31",
            "x_window": "-6.0, 6.0",
        },
        "description": "Strong-drive collapse panels (smallest size departs first)",
    },
    "fig4": {
        "experiment": {
            "kind": "loschmidt-work",
            "sizes": "512",
            "n_list": ", ".join(str(n) for n in range(0, 11)),
            "dh": "0.1",
            "omega": "2.0",
        },
        "description": "k-resolved work and Loschmidt echo over the Floquet spectrum",
    },
    "entropy": {
        "experiment": {
            "kind": "entropy-fss",
            "sizes": "128, 256",
            "n_list": "0, 8, 16, 24, 30, 40, 56",
            "dh": "0.1",
            "omega": "6.283185307179586",
            "points": "25",
        },
        "description": "Half-chain entropy FSS window and volume-law crossover",
    },
    "fs-offcritical": {
        "experiment": {
            "kind": "fs-offcritical",
            "sizes": "256, 512, 1024, 2048",
            "n_list": "0, 25",
            "dh": "0.1",
            "omega": "6.283185307179586",
            "h_fixed": "0.95",
            "h_grid": "1.02, 1.30, 19",
        },
        "description": "Extensive FS scaling at h = 0.95 and the xi = 1/ln h fit window",
    },
    "low-omega": {
        "experiment": {
            "kind": "low-omega",
            "sizes": "128, 256",
            "n_list": "0, 1",
            "dh": "0.1",
            "omega": "0.5",
            "points": "25",
        },
        "description": "Slow-drive failure mode: collapse lost after one cycle",
    },
}


def preset_names() -> list[str]:
    return sorted(PRESETS)


def load_preset(name: str) -> ExperimentConfig:
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(preset_names())}")
    return config_from_mapping({k: v for k, v in PRESETS[name].items() if k != "description"})
