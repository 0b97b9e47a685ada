import struct

import numpy as np
import pytest

from akws import LabelMatrix, recalibrate, update
from akws.errors import SnapshotFormatError
from akws.snapshot import (
    SnapshotMeta,
    dump_snapshot,
    load_snapshot,
    read_snapshot,
    save_snapshot,
)


def tiny_classifier():
    clf = recalibrate(np.eye(2), LabelMatrix(np.eye(2), (3, 9)), 1.0)
    return clf, SnapshotMeta(dim=2, seed=42, activation="relu")


def test_round_trip(tmp_path):
    clf, meta = tiny_classifier()
    clf = update(clf, np.array([[1.0, 2.0]]), LabelMatrix(np.array([[1.0]]), (11,)))
    path = tmp_path / "clf.bin"
    save_snapshot(path, clf, meta)
    back, back_meta = read_snapshot(path)
    assert np.array_equal(back.weights, clf.weights)
    assert np.array_equal(back.afam.matrix, clf.afam.matrix)
    assert back.afam.gamma == clf.afam.gamma
    assert back.class_registry == clf.class_registry
    assert back.tasks_seen == clf.tasks_seen
    assert back_meta == meta


def test_exact_byte_layout():
    from akws.classifier import Afam, AnalyticClassifier

    # exact matrix values, independent of any solver rounding
    clf = AnalyticClassifier(
        weights=0.5 * np.eye(2),
        afam=Afam(matrix=0.5 * np.eye(2), gamma=1.0),
        class_registry={3: 0, 9: 1},
        tasks_seen=1,
    )
    meta = SnapshotMeta(dim=2, seed=42, activation="relu")
    blob = dump_snapshot(clf, meta)
    expected = b"".join(
        [
            b"AKWS",
            struct.pack("<IIII", 1, 2, 2, 2),  # version, E, C, d
            struct.pack("<Q", 42),
            struct.pack("<B", 1),  # relu
            struct.pack("<d", 1.0),
            struct.pack("<I", 1),  # tasks seen
            struct.pack("<I", 2),  # registry entries
            struct.pack("<II", 3, 0),
            struct.pack("<II", 9, 1),
            np.asarray(0.5 * np.eye(2)).astype("<f8").tobytes(),  # weights
            np.asarray(0.5 * np.eye(2)).astype("<f8").tobytes(),  # afam
        ]
    )
    assert blob == expected


def test_serialization_deterministic():
    clf, meta = tiny_classifier()
    assert dump_snapshot(clf, meta) == dump_snapshot(clf, meta)


def test_element_count_matches_serialized_payload():
    clf, meta = tiny_classifier()
    clf = update(clf, np.zeros((0, 2)), LabelMatrix(np.zeros((0, 1)), (4,)))
    blob = dump_snapshot(clf, meta)
    e, c = clf.weights.shape
    header = 4 + 16 + 8 + 1 + 8 + 4 + 4 + 8 * len(clf.class_registry)
    matrix_doubles = (len(blob) - header) // 8
    assert matrix_doubles == e * e + e * c
    assert clf.state_elements() == e * e + e * c + len(clf.class_registry)


def test_bad_magic_rejected():
    clf, meta = tiny_classifier()
    blob = bytearray(dump_snapshot(clf, meta))
    blob[0] = ord("X")
    with pytest.raises(SnapshotFormatError):
        load_snapshot(bytes(blob))


def test_bad_version_rejected():
    clf, meta = tiny_classifier()
    blob = bytearray(dump_snapshot(clf, meta))
    blob[4] = 9
    with pytest.raises(SnapshotFormatError):
        load_snapshot(bytes(blob))


def test_truncated_payload_rejected():
    clf, meta = tiny_classifier()
    blob = dump_snapshot(clf, meta)
    with pytest.raises(SnapshotFormatError):
        load_snapshot(blob[:-8])


def test_identity_activation_code(tmp_path):
    clf, _ = tiny_classifier()
    meta = SnapshotMeta(dim=2, seed=0, activation="identity")
    blob = dump_snapshot(clf, meta)
    _, back_meta = load_snapshot(blob)
    assert back_meta.activation == "identity"
