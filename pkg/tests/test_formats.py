import json
import struct

import numpy as np
import pytest

from eegedge import formats
from eegedge.classifier import ClassifierParams, EpochMetrics
from eegedge.errors import FormatError
from eegedge.signal_core import EegSample


def f32_sample(rng, c=3, length=7, label=1):
    return EegSample(rng.standard_normal((c, length)).astype(np.float32).astype(np.float64), label=label)


class TestEegb:
    def test_header_layout(self, tmp_path, rng):
        s = f32_sample(rng, 2, 3, label=4)
        path = formats.write_eegb(tmp_path / "a.eegb", [s])
        blob = path.read_bytes()
        assert blob[:4] == b"EEGB"
        assert struct.unpack_from("<IIII", blob, 4) == (1, 2, 3, 4)
        np.testing.assert_array_equal(np.frombuffer(blob[20:], "<f4").reshape(2, 3), s.data)
        assert len(blob) == 20 + 4 * 6

    def test_roundtrip_bit_exact(self, tmp_path, rng):
        samples = [f32_sample(rng, label=i % 3) for i in range(5)] + [f32_sample(rng, label=None)]
        path = formats.write_eegb(tmp_path / "a.eegb", samples)
        back = formats.read_eegb(path)
        assert [s.label for s in back] == [s.label for s in samples]
        for a, b in zip(samples, back):
            assert a.data.astype("<f4").tobytes() == b.data.astype("<f4").tobytes()
        again = formats.write_eegb(tmp_path / "b.eegb", back)
        assert again.read_bytes() == path.read_bytes()

    def test_unlabeled_sentinel(self, tmp_path, rng):
        path = formats.write_eegb(tmp_path / "a.eegb", [f32_sample(rng, label=None)])
        assert struct.unpack_from("<I", path.read_bytes(), 16)[0] == 0xFFFFFFFF

    def test_corrupt_magic_reports_file_and_offset(self, tmp_path, rng):
        path = formats.write_eegb(tmp_path / "a.eegb", [f32_sample(rng), f32_sample(rng)])
        blob = bytearray(path.read_bytes())
        second = 20 + 4 * 21
        blob[second:second + 4] = b"XXXX"
        path.write_bytes(bytes(blob))
        with pytest.raises(FormatError) as info:
            formats.read_eegb(path)
        assert info.value.offset == second
        assert "a.eegb" in str(info.value) and f"offset {second}" in str(info.value)

    def test_truncated(self, tmp_path, rng):
        path = formats.write_eegb(tmp_path / "a.eegb", [f32_sample(rng)])
        path.write_bytes(path.read_bytes()[:-3])
        with pytest.raises(FormatError, match="truncated"):
            formats.read_eegb(path)


class TestCsv:
    def test_roundtrip_with_label(self, tmp_path, rng):
        s = EegSample(rng.standard_normal((3, 5)), label=2)
        back = formats.read_csv_sample(formats.write_csv_sample(tmp_path / "s.csv", s))
        assert back.label == 2
        np.testing.assert_array_equal(back.data, s.data)

    def test_unlabeled(self, tmp_path):
        (tmp_path / "s.csv").write_text("1,2,3\n4,5,6\n")
        s = formats.read_csv_sample(tmp_path / "s.csv")
        assert s.label is None and s.data.shape == (2, 3)

    def test_ragged_rows(self, tmp_path):
        (tmp_path / "s.csv").write_text("1,2,3\n4,5\n")
        with pytest.raises(FormatError):
            formats.read_csv_sample(tmp_path / "s.csv")

    def test_directory_dataset(self, tmp_path, rng):
        for i in range(10):
            formats.write_csv_sample(tmp_path / f"s{i:02d}.csv", EegSample(rng.standard_normal((2, 4)), label=i % 2))
        ds = formats.load_dataset(tmp_path)
        assert len(ds) == 10 and ds.num_classes == 2


class TestImages:
    def test_pgm_pixels(self, tmp_path, rng):
        img = rng.random((6, 9))
        img[0, 0], img[0, 1], img[0, 2] = 0.0, 1.0, 0.5 / 255
        path = formats.write_pgm(tmp_path / "x.pgm", img)
        assert path.read_bytes().startswith(b"P5\n9 6\n255\n")
        back = formats.read_pgm(path)
        np.testing.assert_array_equal(back, np.floor(img * 255 + 0.5))
        assert back[0, 2] == 1

    def test_raw_roundtrip(self, tmp_path, rng):
        t = rng.random((3, 4, 5)).astype(np.float32)
        path, side = formats.write_raw(tmp_path / "t.f32", t)
        assert json.loads(side.read_text()) == {"shape": [3, 4, 5]}
        np.testing.assert_array_equal(formats.read_raw(path), t)


class TestCheckpoint:
    def test_roundtrip_bit_exact(self, tmp_path):
        p = ClassifierParams.random(11, 4, scale=3.0, seed=2)
        path = formats.write_checkpoint(tmp_path / "c.eegw", p)
        blob = path.read_bytes()
        assert blob[:4] == b"EEGW" and struct.unpack_from("<III", blob, 4) == (1, 11, 4)
        assert len(blob) == 16 + 8 * (44 + 4)
        back = formats.read_checkpoint(path)
        assert back.weights.tobytes() == p.weights.tobytes()
        assert back.bias.tobytes() == p.bias.tobytes()

    def test_bad_magic(self, tmp_path):
        (tmp_path / "c.eegw").write_bytes(b"NOPE" + bytes(12))
        with pytest.raises(FormatError, match="magic"):
            formats.read_checkpoint(tmp_path / "c.eegw")

    def test_metrics_csv(self, tmp_path):
        hist = [EpochMetrics(1, 0.5, 0.25), EpochMetrics(2, 0.125, 1.0)]
        path = formats.write_metrics(tmp_path / "m.csv", hist)
        assert path.read_text().splitlines()[0] == "epoch,train_loss,val_acc"
        assert formats.read_metrics(path) == hist
