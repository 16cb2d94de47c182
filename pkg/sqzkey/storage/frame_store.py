"""
SQZF frame files

Layout: magic b"SQZF", u8 version, u64 n, then alice_x, alice_p, bob_X, bob_P
as contiguous little-endian float64 arrays.
"""

import logging
import struct
from pathlib import Path
from typing import Iterable, List, Union

import numpy as np

from sqzkey.errors import FrameFormatError
from sqzkey.simulation.frames import SampleFrame

logger = logging.getLogger(__name__)

MAGIC = b"SQZF"
VERSION = 1
HEADER = struct.Struct("<4sBQ")
_DTYPE = np.dtype("<f8")


def encode_frame(frame: SampleFrame) -> bytes:
    arrays = (frame.alice_x, frame.alice_p, frame.bob_x, frame.bob_p)
    body = b"".join(np.ascontiguousarray(a, dtype=_DTYPE).tobytes() for a in arrays)
    return HEADER.pack(MAGIC, VERSION, frame.n) + body


def decode_frame(data: bytes) -> SampleFrame:
    if len(data) < HEADER.size:
        raise FrameFormatError(f"file too short for the SQZF header ({len(data)} bytes)")
    magic, version, n = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FrameFormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise FrameFormatError(f"unsupported SQZF version {version}")
    expected = HEADER.size + 4 * n * _DTYPE.itemsize
    if len(data) != expected:
        raise FrameFormatError(f"expected {expected} bytes for n={n}, got {len(data)}")
    if n < 1:
        raise FrameFormatError("frame holds no symbols")
    body = np.frombuffer(data, dtype=_DTYPE, offset=HEADER.size).reshape(4, n).astype(float)
    return SampleFrame(body[0], body[1], body[2], body[3])


class FrameStore:
    """Directory of SQZF frame files named frame_00000.sqzf, frame_00001.sqzf, ..."""

    def __init__(self, directory: Union[str, Path]):
        self.directory = Path(directory)
        self._initialize_store()

    def _initialize_store(self):
        """Create the frame directory"""
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            logger.debug("frame store ready at %s", self.directory)
        except OSError as e:
            print(f"❌ Frame store initialization failed: {e}")
            raise

    def path_for(self, index: int) -> Path:
        return self.directory / f"frame_{index:05d}.sqzf"

    def save(self, frame: SampleFrame, index: int) -> Path:
        path = self.path_for(index)
        path.write_bytes(encode_frame(frame))
        return path

    def save_all(self, frames: Iterable[SampleFrame]) -> List[Path]:
        paths = [self.save(frame, i) for i, frame in enumerate(frames)]
        print(f"✅ Saved {len(paths)} frames to {self.directory}")
        return paths

    @staticmethod
    def load(path: Union[str, Path]) -> SampleFrame:
        return decode_frame(Path(path).read_bytes())

    def load_all(self) -> List[SampleFrame]:
        return [self.load(p) for p in sorted(self.directory.glob("frame_*.sqzf"))]
