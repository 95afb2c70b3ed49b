"""Snapshot datasets: in-memory model, bit-exact persistence, CSV ingestion.

A snapshot is one projective measurement of every site in the diagonal
basis, stored as L binary values (1 = spin-up / occupied, 0 = down /
empty).  A SnapshotSet bundles M such records with provenance metadata
and is the interchange object between samplers, experimental data and
the estimators.

File format ("QSNP", documented in docs/format.md):

    magic   4 bytes   b"QSNP"
    version u16 LE    currently 1
    hlen    u32 LE    metadata header length in bytes
    header  hlen bytes  canonical JSON (sorted keys, compact separators)
    payload M records of ceil(L/8) bytes, little-endian bit order
            (site 0 = least significant bit of byte 0)

Round-trips are bit-identical by construction.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, CorruptedDataError, DataError, FormatError
from .model import BoundaryCondition

MAGIC = b"QSNP"
VERSION = 1


class Basis(enum.Enum):
    SPIN_Z = "spin_z"
    OCCUPATION = "occupation"


class Source(enum.Enum):
    SSE = "sse"
    EXACT = "exact"
    EXTERNAL = "external"


def canonical_json(obj) -> str:
    """Deterministic JSON text: sorted keys, no whitespace."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


@dataclass(frozen=True)
class SnapshotSet:
    """M measurement records of an L-site chain plus provenance.

    `bits` is an (M, L) uint8 array in {0, 1}; it is marked read-only so
    sets can be shared freely.  `model_metadata` and `seed_info` are
    JSON-serializable dicts.
    """

    L: int
    basis: Basis
    bc: BoundaryCondition
    source: Source
    bits: np.ndarray
    model_metadata: dict = field(default_factory=dict)
    seed_info: dict = field(default_factory=dict)

    def __post_init__(self):
        arr = np.ascontiguousarray(self.bits, dtype=np.uint8)
        if arr.ndim != 2 or arr.shape[1] != self.L:
            raise DataError(
                f"snapshot array must be (M, {self.L}), got shape {arr.shape}"
            )
        if arr.size and arr.max() > 1:
            raise DataError("snapshot values must be binary")
        arr.setflags(write=False)
        object.__setattr__(self, "bits", arr)

    @property
    def M(self) -> int:
        return self.bits.shape[0]

    def __len__(self) -> int:
        return self.M

    def metadata_dict(self) -> dict:
        return {
            "L": self.L,
            "M": self.M,
            "basis": self.basis.value,
            "bc": self.bc.value,
            "source": self.source.value,
            "model_metadata": self.model_metadata,
            "seed_info": self.seed_info,
        }


# -- binary persistence ---------------------------------------------------


def write_set(sset: SnapshotSet, path) -> None:
    header = canonical_json(sset.metadata_dict()).encode("utf-8")
    packed = np.packbits(sset.bits, axis=1, bitorder="little")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(VERSION.to_bytes(2, "little"))
        fh.write(len(header).to_bytes(4, "little"))
        fh.write(header)
        fh.write(packed.tobytes())


def read_set(path) -> SnapshotSet:
    raw = Path(path).read_bytes()
    if len(raw) < 10:
        raise CorruptedDataError(f"{path}: file too short for a QSNP header", len(raw))
    if raw[:4] != MAGIC:
        raise FormatError(f"{path}: bad magic {raw[:4]!r}, expected {MAGIC!r}")
    version = int.from_bytes(raw[4:6], "little")
    if version != VERSION:
        raise FormatError(f"{path}: unsupported format version {version}")
    hlen = int.from_bytes(raw[6:10], "little")
    if len(raw) < 10 + hlen:
        raise CorruptedDataError(f"{path}: truncated metadata header", len(raw))
    try:
        meta = json.loads(raw[10 : 10 + hlen].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: metadata header is not valid JSON: {exc}") from exc
    try:
        L = int(meta["L"])
        M = int(meta["M"])
        basis = Basis(meta["basis"])
        bc = BoundaryCondition(meta["bc"])
        source = Source(meta["source"])
    except (KeyError, ValueError) as exc:
        raise FormatError(f"{path}: bad metadata field: {exc}") from exc

    rec = (L + 7) // 8
    expected = 10 + hlen + M * rec
    if len(raw) != expected:
        raise CorruptedDataError(
            f"{path}: payload size mismatch, expected {expected} bytes total",
            len(raw),
        )
    packed = np.frombuffer(raw, dtype=np.uint8, offset=10 + hlen).reshape(M, rec)
    bits = np.unpackbits(packed, axis=1, count=L, bitorder="little")
    return SnapshotSet(
        L=L,
        basis=basis,
        bc=bc,
        source=source,
        bits=bits,
        model_metadata=meta.get("model_metadata", {}),
        seed_info=meta.get("seed_info", {}),
    )


# -- CSV import/export ----------------------------------------------------


def export_csv(sset: SnapshotSet, path, header: bool = True) -> None:
    """One snapshot per row, L comma-separated binary values."""
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            fh.write(",".join(f"site{j}" for j in range(sset.L)) + "\n")
        for row in sset.bits:
            fh.write(",".join("1" if b else "0" for b in row) + "\n")


def _looks_like_header(tokens: list[str]) -> bool:
    for t in tokens:
        if t.strip() not in ("0", "1"):
            return True
    return False


def ingest_csv(path, L: int, basis: Basis, bc: BoundaryCondition, provenance_text: str) -> SnapshotSet:
    """Read external snapshot data; malformed rows are rejected by line number."""
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    start = 0
    # skip an optional header row
    for lineno, line in enumerate(lines):
        if line.strip():
            if _looks_like_header(line.strip().split(",")):
                start = lineno + 1
            break
    for lineno in range(start, len(lines)):
        line = lines[lineno].strip()
        if not line:
            continue
        tokens = [t.strip() for t in line.split(",")]
        if len(tokens) != L:
            raise DataError(
                f"{path}: line {lineno + 1}: expected {L} values, got {len(tokens)}"
            )
        try:
            values = [int(t) for t in tokens]
        except ValueError:
            raise DataError(f"{path}: line {lineno + 1}: non-numeric token") from None
        if any(v not in (0, 1) for v in values):
            raise DataError(f"{path}: line {lineno + 1}: non-binary value")
        rows.append(values)
    if not rows:
        raise DataError(f"{path}: no snapshot rows found")
    return SnapshotSet(
        L=L,
        basis=basis,
        bc=bc,
        source=Source.EXTERNAL,
        bits=np.array(rows, dtype=np.uint8),
        model_metadata={"provenance": provenance_text},
        seed_info={},
    )


# -- dataset surgery ------------------------------------------------------


def split_halves(sset: SnapshotSet, seed: int) -> tuple[SnapshotSet, SnapshotSet]:
    """Random disjoint halves of the dataset (sizes ceil(M/2), floor(M/2)).

    A seeded uniform permutation is applied first so that residual Monte
    Carlo autocorrelation cannot correlate the two pseudo-copies.
    """
    if sset.M < 2:
        raise DataError(f"cannot split a set with M={sset.M} < 2")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(sset.M)
    cut = (sset.M + 1) // 2
    halves = []
    for k, idx in enumerate((perm[:cut], perm[cut:])):
        info = dict(sset.seed_info)
        info["split"] = {"seed": int(seed), "half": k, "parent_M": int(sset.M)}
        halves.append(
            replace(sset, bits=sset.bits[np.sort(idx)], seed_info=info)
        )
    return halves[0], halves[1]


def take_first(sset: SnapshotSet, m: int) -> SnapshotSet:
    """First m records (e.g. to study limited-data behavior)."""
    if not 1 <= m <= sset.M:
        raise DataError(f"cannot take {m} of {sset.M} snapshots")
    info = dict(sset.seed_info)
    info["subset"] = {"first": int(m), "parent_M": int(sset.M)}
    return replace(sset, bits=sset.bits[:m], seed_info=info)


def concatenate(sets: list[SnapshotSet]) -> SnapshotSet:
    """Concatenate sets with identical geometry (chain outputs, in order)."""
    if not sets:
        raise DataError("nothing to concatenate")
    first = sets[0]
    for s in sets[1:]:
        if (s.L, s.basis, s.bc, s.source) != (first.L, first.basis, first.bc, first.source):
            raise DataError("cannot concatenate snapshot sets with mismatched metadata")
    bits = np.concatenate([s.bits for s in sets], axis=0)
    return replace(first, bits=bits)
