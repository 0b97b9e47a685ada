import numpy as np
import pytest

from akws import (
    LabeledDataset,
    SynthSpec,
    gen_synth,
    gen_synth_split,
    load_features,
    load_manifest,
    rectifier_scramble,
    save_features,
    write_manifest,
)
from akws.errors import DataError, ParseError

from oracles import nearest_centroid_fit, nearest_centroid_predict


class TestGenSynth:
    def test_deterministic(self):
        spec = SynthSpec(3, 10, 4, 5.0, 0.5, seed=7)
        a = gen_synth(spec)
        b = gen_synth(spec)
        assert np.array_equal(a.features, b.features)
        assert np.array_equal(a.labels, b.labels)

    def test_zero_noise_samples_equal_class_mean(self):
        spec = SynthSpec(3, 5, 4, 5.0, 0.0, seed=1)
        ds = gen_synth(spec)
        for c in range(3):
            rows = ds.features[ds.labels == c]
            assert np.all(rows == rows[0])
            assert np.isclose(np.linalg.norm(rows[0]), 5.0)

    def test_nearest_centroid_separates_holdout(self):
        spec = SynthSpec(2, 50, 8, 10.0, 0.1, seed=1)
        train, test = gen_synth_split(spec, 25)
        classes, centroids = nearest_centroid_fit(train.features, train.labels)
        pred = nearest_centroid_predict(classes, centroids, test.features)
        assert np.mean(pred == test.labels) >= 0.99

    def test_more_classes_than_dims_keeps_anchor_norms(self):
        spec = SynthSpec(7, 3, 2, 4.0, 0.0, seed=3)
        ds = gen_synth(spec)
        means = np.stack([ds.features[ds.labels == c][0] for c in range(7)])
        assert np.allclose(np.linalg.norm(means, axis=1), 4.0)
        # anchors must be pairwise distinct
        gaps = [np.linalg.norm(means[i] - means[j]) for i in range(7) for j in range(i + 1, 7)]
        assert min(gaps) > 1e-6

    def test_split_reuses_train_stream(self):
        spec = SynthSpec(3, 8, 4, 5.0, 1.0, seed=9)
        train, test = gen_synth_split(spec, 4)
        assert np.array_equal(train.features, gen_synth(spec).features)
        assert test.n == 12

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            SynthSpec(1, 10, 4, 5.0, 0.5, seed=0)
        with pytest.raises(ValueError):
            SynthSpec(3, 10, 4, 0.0, 0.5, seed=0)
        with pytest.raises(ValueError):
            SynthSpec(3, 10, 4, 5.0, -0.1, seed=0)


class TestRectifierScramble:
    def test_deterministic_and_nonnegative(self):
        ds = gen_synth(SynthSpec(3, 10, 4, 5.0, 1.0, seed=2))
        a = rectifier_scramble(ds, 6, seed=11)
        b = rectifier_scramble(ds, 6, seed=11)
        assert np.array_equal(a.features, b.features)
        assert a.features.shape == (30, 6)
        assert np.all(a.features >= 0.0)
        assert np.array_equal(a.labels, ds.labels)

    def test_same_map_for_train_and_test(self):
        train, test = gen_synth_split(SynthSpec(3, 10, 4, 5.0, 1.0, seed=2), 5)
        both = LabeledDataset(
            np.vstack([train.features, test.features]),
            np.concatenate([train.labels, test.labels]),
        )
        joint = rectifier_scramble(both, 6, seed=11)
        apart = rectifier_scramble(train, 6, seed=11)
        assert np.array_equal(joint.features[: train.n], apart.features)


class TestFeatureCsv:
    def test_round_trip(self, tmp_path):
        ds = gen_synth(SynthSpec(3, 7, 5, 5.0, 1.0, seed=4))
        path = tmp_path / "feats.csv"
        save_features(ds, path)
        back = load_features(path)
        assert np.array_equal(back.features, ds.features)
        assert np.array_equal(back.labels, ds.labels)

    def test_hand_fixture(self, tmp_path):
        path = tmp_path / "hand.csv"
        path.write_text("label,f0,f1\n0,1.5,-2.0\n1,0.25,3.0\n0,-1.0,0.0\n")
        ds = load_features(path)
        assert np.array_equal(ds.features, np.array([[1.5, -2.0], [0.25, 3.0], [-1.0, 0.0]]))
        assert ds.labels.tolist() == [0, 1, 0]

    def test_wrong_arity_reports_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("label,f0,f1\n0,1.0,2.0\n1,3.0\n")
        with pytest.raises(ParseError) as exc:
            load_features(path)
        assert exc.value.line == 3

    def test_non_finite_rejected(self, tmp_path):
        path = tmp_path / "nan.csv"
        path.write_text("label,f0\n0,nan\n")
        with pytest.raises(DataError):
            load_features(path)

    def test_bad_label_and_header(self, tmp_path):
        path = tmp_path / "lab.csv"
        path.write_text("label,f0\nx,1.0\n")
        with pytest.raises(ParseError) as exc:
            load_features(path)
        assert exc.value.line == 2
        path2 = tmp_path / "hdr.csv"
        path2.write_text("f0,f1\n1.0,2.0\n")
        with pytest.raises(ParseError) as exc2:
            load_features(path2)
        assert exc2.value.line == 1

    def test_negative_label_rejected(self, tmp_path):
        path = tmp_path / "neg.csv"
        path.write_text("label,f0\n-1,1.0\n")
        with pytest.raises(ParseError):
            load_features(path)


class TestManifest:
    def test_round_trip(self, tmp_path):
        entries = [
            {"id": 0, "classes": [0, 1], "train": "t0.csv", "test": "e0.csv"},
            {"id": 1, "classes": [2], "train": "t1.csv", "test": "e1.csv"},
        ]
        path = tmp_path / "manifest.json"
        write_manifest(path, entries)
        tasks = load_manifest(path)
        assert [t["id"] for t in tasks] == [0, 1]
        assert tasks[0]["classes"] == [0, 1]
        assert tasks[1]["train"].endswith("t1.csv")

    def test_missing_key_rejected(self, tmp_path):
        path = tmp_path / "manifest.json"
        path.write_text('{"tasks": [{"id": 0, "classes": [0]}]}')
        with pytest.raises(ParseError):
            load_manifest(path)

    def test_invalid_json_rejected(self, tmp_path):
        path = tmp_path / "manifest.json"
        path.write_text("{nope")
        with pytest.raises(ParseError):
            load_manifest(path)
