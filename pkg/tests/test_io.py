import unittest

import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from ngsi._internal.io import BinaryReader, BinaryWriter  # noqa: E402
from ngsi.exceptions import ModelFormatError  # noqa: E402


class TestBinaryReader(unittest.TestCase):
    def test_read_primitives_le(self) -> None:
        data = bytes([0x04, 0x03, 0x02, 0x01, 0x08, 0x07, 0x06, 0x05, 0x04, 0x03, 0x02, 0x01])
        r = BinaryReader(data)
        self.assertEqual(r.read_u32(), 0x01020304)
        self.assertEqual(r.read_u64(), 0x0102030405060708)
        self.assertTrue(r.at_end())

    def test_short_read_reports_offset(self) -> None:
        r = BinaryReader(b"\x01\x00")
        with self.assertRaises(ModelFormatError) as cm:
            r.read_u32()
        self.assertEqual(cm.exception.offset, 0)

    def test_cursor_offset(self) -> None:
        r = BinaryReader(b"abcdef", cursor=2)
        self.assertEqual(r.tell(), 2)
        self.assertEqual(r.remaining(), 4)
        self.assertEqual(r.read_bytes(2), b"cd")

    def test_invalid_utf8_fails(self) -> None:
        r = BinaryReader(b"\xff\xfe")
        with self.assertRaises(ModelFormatError):
            r.read_utf8(2)

    def test_f32_array_is_little_endian_and_writable(self) -> None:
        data = np.array([1.5, -2.0, 0.25], dtype="<f4").tobytes()
        a = BinaryReader(data).read_f32_array((3,))
        self.assertEqual(a.dtype, np.float32)
        np.testing.assert_array_equal(a, [1.5, -2.0, 0.25])
        a[0] = 0.0  # must not alias the input buffer

    def test_f32_array_truncated(self) -> None:
        with self.assertRaises(ModelFormatError):
            BinaryReader(b"\x00" * 7).read_f32_array((2,))


class TestBinaryWriter(unittest.TestCase):
    def test_writer_matches_reader(self) -> None:
        w = BinaryWriter()
        w.write_u32(7)
        w.write_u64(1 << 40)
        w.write_utf8("W_z")
        w.write_f32_array(np.arange(6, dtype=np.float32).reshape(2, 3))

        r = BinaryReader(w.getvalue())
        self.assertEqual(r.read_u32(), 7)
        self.assertEqual(r.read_u64(), 1 << 40)
        self.assertEqual(r.read_utf8(r.read_u32()), "W_z")
        np.testing.assert_array_equal(r.read_f32_array((2, 3)), np.arange(6).reshape(2, 3))
        self.assertTrue(r.at_end())


if __name__ == "__main__":
    unittest.main()
