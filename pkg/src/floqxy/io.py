"""Deterministic output files: observables CSV, analysis JSON, run manifest.

Rows are sorted on a fixed key before writing and floats are serialized
with shortest round-trip repr, so identical configurations produce
byte-identical files regardless of worker count.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os

CSV_HEADER = ["kind", "N", "gamma", "h", "dh", "omega", "n",
              "value", "value_k_index", "value_k"]


def scalar_row(kind, N, gamma, h, dh, omega, n, value) -> dict:
    return {"kind": kind, "N": N, "gamma": gamma, "h": h, "dh": dh,
            "omega": omega, "n": n, "value": value,
            "value_k_index": "", "value_k": ""}


def kresolved_row(kind, N, gamma, h, dh, omega, n, k_index, value_k) -> dict:
    return {"kind": kind, "N": N, "gamma": gamma, "h": h, "dh": dh,
            "omega": omega, "n": n, "value": "",
            "value_k_index": k_index, "value_k": value_k}


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _sort_key(row):
    return (row["kind"], row["N"], row["dh"], row["h"], row["n"],
            row["value_k_index"] if row["value_k_index"] != "" else -1)


def write_observables_csv(path: str, rows: list[dict]) -> None:
    rows = sorted(rows, key=_sort_key)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow([_fmt(row[col]) for col in CSV_HEADER])


def _jsonify(obj):
    import numpy as np

    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        obj = obj.item()
    if isinstance(obj, float):
        if obj != obj:  # NaN: strict JSON has no spelling for it
            return None
        if obj in (float("inf"), float("-inf")):
            return "inf" if obj > 0 else "-inf"
    return obj


def write_json(path: str, payload: dict) -> None:
    with open(path, "w") as f:
        json.dump(_jsonify(payload), f, indent=2, sort_keys=True)
        f.write("\n")


def sha256_of(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(path: str, config_dict: dict, outputs: list[str],
                   timings: dict, diagnostics: dict, valid: bool = True,
                   error: str | None = None) -> None:
    from . import __version__
    from .bdg import BACKEND

    manifest = {
        "config": config_dict,
        "version": __version__,
        "backend": BACKEND,
        "timings_s": timings,
        "integrator": diagnostics,
        "valid": valid,
        "outputs": {os.path.basename(p): sha256_of(p) for p in outputs if os.path.exists(p)},
    }
    if error is not None:
        manifest["error"] = error
    write_json(path, manifest)
