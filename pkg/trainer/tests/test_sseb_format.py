import struct

import numpy as np
import pytest

from pretext.sseb import write_sseb


class TestWriteSseb:
    def test_header_layout(self):
        blob = write_sseb({}, dim=8)
        assert blob[:4] == b"SSEB"
        version, dim, count = struct.unpack_from("<HHI", blob, 4)
        assert (version, dim, count) == (1, 8, 0)
        assert len(blob) == 12

    def test_record_layout(self):
        v = np.array([1.0, 0.0, 0.0], dtype=np.float32)
        blob = write_sseb({(3, 1): v}, dim=3)
        assert len(blob) == 12 + 8 + 12
        frame, idx = struct.unpack_from("<II", blob, 12)
        assert (frame, idx) == (3, 1)
        back = np.frombuffer(blob, dtype="<f4", count=3, offset=20)
        np.testing.assert_array_equal(back, v)

    def test_records_sorted_by_key(self):
        v = np.zeros(2, dtype=np.float32)
        v[0] = 1.0
        blob = write_sseb({(2, 0): v, (1, 1): v, (1, 0): v}, dim=2)
        keys = []
        off = 12
        for _ in range(3):
            keys.append(struct.unpack_from("<II", blob, off))
            off += 8 + 8
        assert keys == [(1, 0), (1, 1), (2, 0)]

    def test_wrong_dim_rejected(self):
        with pytest.raises(ValueError):
            write_sseb({(1, 0): np.zeros(3, dtype=np.float32)}, dim=4)
