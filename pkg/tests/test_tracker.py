import numpy as np
import pytest

from trackkit.association import AssocConfig
from trackkit.features import accumulate, normalize
from trackkit.geometry import BoundingBox
from trackkit.tracker import Detection, Tracker, TrackerConfig, TrackState, run_sequence

DIM = 8


def unit(axis, dim=DIM):
    v = np.zeros(dim)
    v[axis] = 1.0
    return v


def det(x, axis, conf=1.0, y=0.0, feat=None):
    return Detection(
        box=BoundingBox(top=y, left=x, bottom=y + 50, right=x + 30),
        confidence=conf,
        feature=unit(axis) if feat is None else feat,
    )


def small_cfg(**kwargs):
    return TrackerConfig(embedding_dim=DIM, **kwargs)


class TestStep:
    def test_cold_start_sequential_ids(self):
        tr = Tracker(small_cfg())
        out = tr.step(1, [det(0, 0), det(200, 1)])
        assert [tid for tid, _ in out] == [1, 2]

    def test_low_confidence_dropped(self):
        tr = Tracker(small_cfg())
        out = tr.step(1, [det(0, 0, conf=0.3)])
        assert out == []
        assert tr.tracks == []

    def test_matched_track_updates_feature(self):
        tr = Tracker(small_cfg())
        f_old = unit(0)
        f_new = normalize(unit(0) + 0.3 * unit(1))  # close enough to pass tau1
        tr.step(1, [det(0, 0)])
        tr.step(2, [det(2, 0, feat=f_new)])
        expected = accumulate(f_old, f_new, 0.4)
        np.testing.assert_allclose(tr.tracks[0].feature, expected, atol=1e-12)
        assert tr.tracks[0].box.left == 2

    def test_unmatched_track_becomes_lost(self):
        tr = Tracker(small_cfg())
        tr.step(1, [det(0, 0)])
        tr.step(2, [])
        assert tr.tracks[0].state is TrackState.LOST
        assert tr.tracks[0].frames_since_seen == 1

    def test_lost_track_discarded_after_max_age(self):
        tr = Tracker(small_cfg(max_lost_age=3))
        tr.step(1, [det(0, 0)])
        for f in range(2, 5):
            tr.step(f, [])
        assert len(tr.tracks) == 1  # frames_since_seen == 3, still held
        tr.step(5, [])
        assert tr.tracks == []

    def test_lost_31_frames_gone_with_default_config(self):
        tr = Tracker(small_cfg())
        tr.step(1, [det(0, 0)])
        for f in range(2, 32):
            tr.step(f, [])
        assert len(tr.tracks) == 1
        tr.step(32, [])
        assert tr.tracks == []

    def test_reacquisition_restores_tracked_state(self):
        tr = Tracker(small_cfg())
        tr.step(1, [det(0, 0)])
        tr.step(2, [])
        assert tr.tracks[0].state is TrackState.LOST
        out = tr.step(3, [det(2, 0)])
        assert [tid for tid, _ in out] == [1]
        assert tr.tracks[0].state is TrackState.TRACKED
        assert tr.tracks[0].frames_since_seen == 0

    def test_max_lost_age_zero_kills_immediately(self):
        tr = Tracker(small_cfg(max_lost_age=0))
        tr.step(1, [det(0, 0)])
        tr.step(2, [])
        assert tr.tracks == []
        out = tr.step(3, [det(2, 0)])
        assert [tid for tid, _ in out] == [2]  # fresh id, never recycled

    def test_frame_index_must_increase(self):
        tr = Tracker(small_cfg())
        tr.step(5, [])
        with pytest.raises(ValueError):
            tr.step(5, [])
        with pytest.raises(ValueError):
            tr.step(4, [])

    def test_dim_mismatch_rejected(self):
        tr = Tracker(small_cfg())
        bad = Detection(box=BoundingBox(0, 0, 50, 30), confidence=1.0, feature=unit(0, dim=4))
        with pytest.raises(ValueError):
            tr.step(1, [bad])

    def test_ids_never_recycled(self):
        tr = Tracker(small_cfg(max_lost_age=0))
        seen = set()
        for f in range(1, 8):
            dets = [det(0, 0)] if f % 2 == 1 else []
            for tid, _ in tr.step(f, dets):
                seen.add(tid)
        assert seen == {1, 2, 3, 4}

    def test_one_detection_one_track(self):
        tr = Tracker(small_cfg())
        tr.step(1, [det(0, 0), det(5, 0)])
        out = tr.step(2, [det(2, 0)])
        assert len(out) == 1


class TestRunSequence:
    def test_empty(self):
        assert run_sequence([], small_cfg()) == []

    def test_deterministic(self):
        frames = [
            (1, [det(0, 0), det(200, 1)]),
            (2, [det(3, 0), det(203, 1)]),
            (3, [det(6, 0)]),
            (4, [det(9, 0), det(209, 1)]),
        ]
        a = run_sequence(frames, small_cfg())
        b = run_sequence(frames, small_cfg())
        assert a == b

    def test_online_prefix_property(self):
        frames = [
            (1, [det(0, 0), det(200, 1)]),
            (2, [det(3, 0), det(203, 1)]),
            (3, [det(6, 0)]),
            (4, [det(9, 0), det(209, 1)]),
        ]
        full = run_sequence(frames, small_cfg())
        prefix = run_sequence(frames[:2], small_cfg())
        assert prefix == [r for r in full if r.frame <= 2]
