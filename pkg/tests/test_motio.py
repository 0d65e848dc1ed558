import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from trackkit.geometry import BoundingBox
from trackkit.motio import (
    GtEntry,
    ParseError,
    SequenceMeta,
    parse_detections,
    parse_gt,
    parse_tracks,
    per_frame_features,
    read_embeddings,
    write_detections,
    write_embeddings,
    write_gt,
    write_tracks,
)
from trackkit.tracker import TrackRecord


class TestParseDetections:
    def test_single_row(self):
        frames = parse_detections(io.StringIO("1,-1,10,20,30,60,0.9,-1,-1,-1\n"))
        assert list(frames) == [1]
        box, conf = frames[1][0]
        assert (box.top, box.left, box.bottom, box.right) == (20, 10, 80, 40)
        assert conf == 0.9

    def test_empty_stream(self):
        assert parse_detections(io.StringIO("")) == {}

    def test_negative_size_errors_with_line(self):
        with pytest.raises(ParseError) as err:
            parse_detections(io.StringIO("1,-1,10,20,-5,60,0.9,-1,-1,-1\n"))
        assert err.value.line == 1

    def test_malformed_row(self):
        with pytest.raises(ParseError) as err:
            parse_detections(io.StringIO("1,-1,10,20,30,60,0.9,-1,-1,-1\n2,-1,oops,0,1,1,1\n"))
        assert err.value.line == 2

    def test_too_few_fields(self):
        with pytest.raises(ParseError):
            parse_detections(io.StringIO("1,-1,10,20\n"))

    def test_within_frame_order_preserved(self):
        text = "2,-1,50,0,10,10,1,-1,-1,-1\n1,-1,0,0,10,10,1,-1,-1,-1\n2,-1,5,0,10,10,1,-1,-1,-1\n"
        frames = parse_detections(io.StringIO(text))
        assert list(frames) == [1, 2]
        assert [b.left for b, _ in frames[2]] == [50, 5]


class TestTracksRoundTrip:
    def test_single_record(self):
        rec = TrackRecord(frame=1, id=3, box=BoundingBox(20, 10, 80, 40))
        assert write_tracks([rec]) == "1,3,10,20,30,60,1,-1,-1,-1\n"

    def test_empty(self):
        assert write_tracks([]) == ""
        assert parse_tracks(io.StringIO("")) == []

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(0, 40))
    def test_roundtrip_random(self, seed, n):
        rng = np.random.default_rng(seed)
        records = []
        used = set()
        for _ in range(n):
            frame = int(rng.integers(1, 20))
            tid = int(rng.integers(1, 10))
            if (frame, tid) in used:
                continue
            used.add((frame, tid))
            left, top = rng.uniform(0, 500, size=2)
            w, h = rng.uniform(0, 100, size=2)
            records.append(TrackRecord(frame=frame, id=tid, box=BoundingBox.from_ltwh(left, top, w, h)))
        text = write_tracks(records)
        back = parse_tracks(io.StringIO(text))
        assert back == sorted(records, key=lambda r: (r.frame, r.id))
        assert write_tracks(back) == text


class TestGt:
    def test_roundtrip(self):
        entries = [
            GtEntry(frame=1, id=2, box=BoundingBox(20, 10, 80, 40), visibility=0.75),
            GtEntry(frame=1, id=1, box=BoundingBox(0, 0, 10, 10)),
        ]
        text = write_gt(entries)
        back = parse_gt(io.StringIO(text))
        assert back == sorted(entries, key=lambda e: (e.frame, e.id))

    def test_filters_non_pedestrian_rows(self):
        text = (
            "1,1,0,0,10,10,1,1,1\n"
            "1,2,0,0,10,10,0,1,1\n"   # consider-flag 0
            "1,3,0,0,10,10,1,7,1\n"   # class 7 (static person)
        )
        entries = parse_gt(io.StringIO(text))
        assert [e.id for e in entries] == [1]

    def test_short_rows_accepted(self):
        entries = parse_gt(io.StringIO("1,1,0,0,10,10\n"))
        assert len(entries) == 1
        assert entries[0].visibility == 1.0


class TestEmbeddings:
    def test_empty(self):
        data = write_embeddings({}, dim=4)
        assert read_embeddings(data) == {}

    def test_single_record(self):
        e1 = np.array([1.0, 0.0, 0.0, 0.0])
        data = write_embeddings({(1, 0): e1}, dim=4)
        out = read_embeddings(data, expected_dim=4)
        np.testing.assert_array_equal(out[(1, 0)], e1)

    def test_bad_magic(self):
        with pytest.raises(ParseError):
            read_embeddings(b"NOPE" + b"\x00" * 20)

    def test_bad_version(self):
        data = bytearray(write_embeddings({}, dim=4))
        data[4] = 99
        with pytest.raises(ParseError):
            read_embeddings(bytes(data))

    def test_dim_mismatch(self):
        data = write_embeddings({}, dim=4)
        with pytest.raises(ParseError):
            read_embeddings(data, expected_dim=8)

    def test_corrupt_norm_rejected(self):
        v = np.array([0.5, 0.0, 0.0, 0.0])  # norm far from 1
        data = write_embeddings({(1, 0): v}, dim=4)
        with pytest.raises(ParseError):
            read_embeddings(data)

    def test_slight_drift_renormalized(self):
        v = np.array([1.0 + 5e-5, 0.0, 0.0, 0.0])
        data = write_embeddings({(1, 0): v}, dim=4)
        out = read_embeddings(data)
        assert np.linalg.norm(out[(1, 0)]) == pytest.approx(1.0, abs=1e-9)

    def test_duplicate_key_rejected(self):
        import struct

        e1 = np.array([1.0, 0.0, 0.0, 0.0], dtype="<f4")
        rec = struct.pack("<II", 1, 0) + e1.tobytes()
        data = b"SSEB" + struct.pack("<HHI", 1, 4, 2) + rec + rec
        with pytest.raises(ParseError):
            read_embeddings(data)

    def test_truncated(self):
        data = write_embeddings({(1, 0): np.array([1.0, 0, 0, 0])}, dim=4)
        with pytest.raises(ParseError):
            read_embeddings(data[:-3])

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(0, 30), st.integers(1, 16))
    def test_roundtrip_random_unit_vectors(self, seed, n, dim):
        rng = np.random.default_rng(seed)
        feats = {}
        for _ in range(n):
            key = (int(rng.integers(1, 50)), int(rng.integers(0, 20)))
            v = rng.standard_normal(dim)
            v = (v / np.linalg.norm(v)).astype(np.float32).astype(np.float64)
            feats[key] = v
        data = write_embeddings(feats, dim=dim)
        out = read_embeddings(data, expected_dim=dim)
        assert set(out) == set(feats)
        for key in feats:
            np.testing.assert_array_equal(out[key], feats[key])
        assert write_embeddings(out, dim=dim) == data

    def test_per_frame_grouping(self):
        feats = {(2, 1): np.array([1.0, 0]), (1, 0): np.array([0, 1.0]), (2, 0): np.array([1.0, 0])}
        grouped = per_frame_features(feats)
        assert set(grouped) == {1, 2}
        assert set(grouped[2]) == {0, 1}


class TestSequenceMeta:
    def test_validation(self):
        SequenceMeta(name="x", frame_count=10, fps=30, image_width=100, image_height=100)
        with pytest.raises(ValueError):
            SequenceMeta(name="x", frame_count=0, fps=30, image_width=100, image_height=100)
