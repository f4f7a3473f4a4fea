"""Parameter checkpoints: a JSON manifest plus a flat float64 binary blob.

The manifest carries a versioned header with every tensor's name, shape and
offset into the blob, so checkpoints stay readable without this package.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .optim import ParamSet

FORMAT_NAME = "evguard-params"
FORMAT_VERSION = 1


def _paths(stem: str | Path) -> tuple[Path, Path]:
    stem = Path(stem)
    if stem.suffix in {".json", ".bin"}:
        stem = stem.with_suffix("")
    return stem.with_suffix(".json"), stem.with_suffix(".bin")


def save_params(params: ParamSet, stem: str | Path, meta: dict | None = None) -> Path:
    """Write <stem>.json and <stem>.bin; returns the manifest path."""
    manifest_path, blob_path = _paths(stem)
    entries = []
    offset = 0
    chunks = []
    for name, p in params.items():
        arr = np.ascontiguousarray(p.data, dtype="<f8")
        entries.append(
            {"name": name, "shape": list(arr.shape), "offset": offset, "size": arr.size}
        )
        offset += arr.size
        chunks.append(arr.tobytes())
    manifest = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "dtype": "float64",
        "byteorder": "little",
        "total_size": offset,
        "tensors": entries,
    }
    if meta:
        manifest["meta"] = meta
    manifest_path.parent.mkdir(parents=True, exist_ok=True)
    with open(manifest_path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(blob_path, "wb") as fh:
        fh.write(b"".join(chunks))
    return manifest_path


def load_params(stem: str | Path) -> tuple[ParamSet, dict]:
    """Read a checkpoint back into a fresh ParamSet; returns (params, meta)."""
    manifest_path, blob_path = _paths(stem)
    with open(manifest_path) as fh:
        manifest = json.load(fh)
    if manifest.get("format") != FORMAT_NAME:
        raise ValueError(f"not a {FORMAT_NAME} checkpoint: {manifest_path}")
    if manifest.get("version") != FORMAT_VERSION:
        raise ValueError(f"unsupported checkpoint version {manifest.get('version')}")
    blob = np.fromfile(blob_path, dtype="<f8")
    if blob.size != manifest["total_size"]:
        raise ValueError(
            f"blob size {blob.size} does not match manifest total {manifest['total_size']}"
        )
    params = ParamSet()
    for entry in manifest["tensors"]:
        lo = entry["offset"]
        hi = lo + entry["size"]
        params.add(entry["name"], blob[lo:hi].reshape(entry["shape"]))
    return params, manifest.get("meta", {})
