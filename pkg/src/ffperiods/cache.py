"""Versioned, checksummed on-disk caches for class inventories, character tables and Bessel tables.

Each entry is a pair ``<kind>-<digest>.json`` (header) and ``<kind>-<digest>.npz``
(payload).  The header records the format version, the cache key and the
sha256 of the payload bytes; a mismatch on load raises CacheCorrupted.
"""

from __future__ import annotations

import hashlib
import io
import json
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import chartable
from .chartable import CharacterTable
from .cyclotomic import cyclotomic_field
from .matgroup import MatrixGroup

CACHE_FORMAT = 1


class CacheCorrupted(RuntimeError):
    pass


def _digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()


def field_descriptor(field) -> dict:
    return {"p": field.p, "k": field.k, "modulus": list(field.modulus)}


def class_inventory(G: MatrixGroup) -> dict:
    """Representative encodings, class sizes and invariant factors, in class order."""
    reps = G.classes.reps
    return {
        "group": G.name,
        "order": G.order,
        "field": field_descriptor(G.field),
        "reps": [int(c) for c in G.codes[reps]],
        "sizes": [int(s) for s in G.classes.sizes],
        "invariants": [[list(f) for f in inv] for inv in G.class_invariants],
    }


def inventory_hash(G: MatrixGroup) -> str:
    cached = getattr(G, "_inventory_hash", None)
    if cached is None:
        cached = _digest(class_inventory(G))
        G._inventory_hash = cached
    return cached


@dataclass
class DiskCache:
    root: Path

    def __post_init__(self):
        self.root = Path(self.root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0

    def _paths(self, kind: str, key: dict) -> tuple[Path, Path]:
        name = f"{kind}-{_digest({'format': CACHE_FORMAT, 'key': key})[:24]}"
        return self.root / f"{name}.json", self.root / f"{name}.npz"

    def save(self, kind: str, key: dict, arrays: dict, meta: dict | None = None) -> None:
        head_path, data_path = self._paths(kind, key)
        buf = io.BytesIO()
        np.savez(buf, **arrays)
        payload = buf.getvalue()
        header = {"format": CACHE_FORMAT, "kind": kind, "key": key, "meta": meta or {},
                  "sha256": hashlib.sha256(payload).hexdigest()}
        tmp = data_path.with_suffix(".npz.tmp")
        tmp.write_bytes(payload)
        os.replace(tmp, data_path)
        head_path.write_text(json.dumps(header, sort_keys=True, indent=1))

    def load(self, kind: str, key: dict) -> tuple[dict, dict] | None:
        head_path, data_path = self._paths(kind, key)
        if not head_path.exists() or not data_path.exists():
            self.misses += 1
            return None
        header = json.loads(head_path.read_text())
        if header.get("format") != CACHE_FORMAT or header.get("key") != key:
            self.misses += 1
            return None
        payload = data_path.read_bytes()
        if hashlib.sha256(payload).hexdigest() != header["sha256"]:
            raise CacheCorrupted(f"checksum mismatch in {data_path}")
        with np.load(io.BytesIO(payload)) as z:
            arrays = {k: z[k] for k in z.files}
        self.hits += 1
        return header.get("meta", {}), arrays

    # -- typed entries -----------------------------------------------------------------
    def save_context(self, ctx) -> None:
        inv = class_inventory(ctx.G)
        key = {"n": ctx.n, **ctx.tower.descriptor}
        self.save("context", key, {"reps": np.array(inv["reps"]), "sizes": np.array(inv["sizes"])},
                  {"inventory": inventory_hash(ctx.G), "invariants": inv["invariants"]})

    def check_context(self, ctx) -> bool:
        """True when a stored context inventory exists and matches; raises on corruption."""
        got = self.load("context", {"n": ctx.n, **ctx.tower.descriptor})
        if got is None:
            return False
        meta, _ = got
        if meta.get("inventory") != inventory_hash(ctx.G):
            raise CacheCorrupted("stored class inventory differs from the rebuilt context")
        return True

    def _table_key(self, G: MatrixGroup, seed: int) -> dict:
        return {"inventory": inventory_hash(G), "seed": seed}

    def load_table(self, G: MatrixGroup, seed: int) -> CharacterTable | None:
        got = self.load("table", self._table_key(G, seed))
        if got is None:
            return None
        meta, arrays = got
        return CharacterTable(G, cyclotomic_field(int(meta["m"])), arrays["values"], int(meta["prime"]),
                              seed)

    def save_table(self, table: CharacterTable) -> None:
        self.save("table", self._table_key(table.group, table.seed), {"values": table.values},
                  {"m": table.K.m, "prime": table.prime, "group": table.group.name})

    def _bessel_key(self, setup, mode: str, scalings) -> dict:
        return {"inventory": inventory_hash(setup.G), "mode": mode,
                "scale": int(setup.psi.scale),
                "scalings": None if scalings is None else [int(t) for t in scalings],
                "m": setup.K.m}

    def load_bessels(self, setup, mode: str, scalings):
        from .gelfand_graev import BesselTable

        got = self.load("bessel", self._bessel_key(setup, mode, scalings))
        if got is None:
            return None
        _, arrays = got
        return [BesselTable(setup, int(i), v, int(d))
                for i, v, d in zip(arrays["index"], arrays["values"], arrays["denom"])]

    def save_bessels(self, setup, mode: str, scalings, tables) -> None:
        arrays = {"index": np.array([b.char_index for b in tables], dtype=np.int64),
                  "values": np.stack([b.values for b in tables]) if tables else np.zeros((0, 0, 0)),
                  "denom": np.array([b.denom for b in tables], dtype=np.int64)}
        self.save("bessel", self._bessel_key(setup, mode, scalings), arrays)


def use_disk_cache(cache: DiskCache | None) -> None:
    """Route character-table construction through ``cache`` (None disables)."""
    chartable.DISK_CACHE = cache
