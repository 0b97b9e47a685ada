"""Binary snapshot of a trained classifier.

Layout (all little-endian):

    magic   4 bytes  b"AKWS"
    u32     format version (currently 1)
    u32     E   expansion size
    u32     C   registered class count
    u32     d   pre-expansion feature dimension
    u64     expansion seed
    u8      activation (0 = identity, 1 = relu)
    f64     gamma
    u32     tasks seen
    u32     registry entry count, then per entry: u32 class id, u32 column
    f64[]   weights, E*C values row-major
    f64[]   autocorrelation matrix, E*E values row-major
"""

import struct
from dataclasses import dataclass

import numpy as np

from .classifier import Afam, AnalyticClassifier
from .errors import SnapshotFormatError

MAGIC = b"AKWS"
FORMAT_VERSION = 1

_ACTIVATION_CODE = {"identity": 0, "relu": 1}
_ACTIVATION_NAME = {v: k for k, v in _ACTIVATION_CODE.items()}


@dataclass(frozen=True)
class SnapshotMeta:
    """Expansion provenance stored alongside the classifier."""

    dim: int
    seed: int
    activation: str


def dump_snapshot(c: AnalyticClassifier, meta: SnapshotMeta) -> bytes:
    e, n_classes = c.weights.shape
    parts = [
        MAGIC,
        struct.pack("<IIII", FORMAT_VERSION, e, n_classes, meta.dim),
        struct.pack("<Q", meta.seed & 0xFFFFFFFFFFFFFFFF),
        struct.pack("<B", _ACTIVATION_CODE[meta.activation]),
        struct.pack("<d", c.afam.gamma),
        struct.pack("<I", c.tasks_seen),
        struct.pack("<I", len(c.class_registry)),
    ]
    for cid, col in c.class_registry.items():
        parts.append(struct.pack("<II", cid, col))
    parts.append(np.ascontiguousarray(c.weights, dtype="<f8").tobytes())
    parts.append(np.ascontiguousarray(c.afam.matrix, dtype="<f8").tobytes())
    return b"".join(parts)


def load_snapshot(blob: bytes) -> tuple[AnalyticClassifier, SnapshotMeta]:
    if blob[:4] != MAGIC:
        raise SnapshotFormatError("bad magic; not a classifier snapshot")
    off = 4
    version, e, n_classes, dim = struct.unpack_from("<IIII", blob, off)
    off += 16
    if version != FORMAT_VERSION:
        raise SnapshotFormatError(f"unsupported snapshot version {version}")
    (seed,) = struct.unpack_from("<Q", blob, off)
    off += 8
    (act_code,) = struct.unpack_from("<B", blob, off)
    off += 1
    if act_code not in _ACTIVATION_NAME:
        raise SnapshotFormatError(f"unknown activation code {act_code}")
    (gamma,) = struct.unpack_from("<d", blob, off)
    off += 8
    tasks_seen, reg_count = struct.unpack_from("<II", blob, off)
    off += 8
    registry = {}
    for _ in range(reg_count):
        cid, col = struct.unpack_from("<II", blob, off)
        off += 8
        registry[cid] = col
    need = 8 * (e * n_classes + e * e)
    if len(blob) - off != need:
        raise SnapshotFormatError(
            f"payload size mismatch: expected {need} matrix bytes, got {len(blob) - off}"
        )
    weights = np.frombuffer(blob, dtype="<f8", count=e * n_classes, offset=off).reshape(e, n_classes).copy()
    off += 8 * e * n_classes
    afam = np.frombuffer(blob, dtype="<f8", count=e * e, offset=off).reshape(e, e).copy()
    clf = AnalyticClassifier(
        weights=weights,
        afam=Afam(matrix=afam, gamma=gamma),
        class_registry=registry,
        tasks_seen=tasks_seen,
    )
    return clf, SnapshotMeta(dim=dim, seed=seed, activation=_ACTIVATION_NAME[act_code])


def save_snapshot(path, c: AnalyticClassifier, meta: SnapshotMeta) -> None:
    with open(path, "wb") as fh:
        fh.write(dump_snapshot(c, meta))


def read_snapshot(path) -> tuple[AnalyticClassifier, SnapshotMeta]:
    with open(path, "rb") as fh:
        return load_snapshot(fh.read())
