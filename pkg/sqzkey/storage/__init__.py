"""
Frame files and CSV output
"""

from sqzkey.storage.csv_writer import format_value, read_csv, render_csv, write_csv
from sqzkey.storage.frame_store import FrameStore, decode_frame, encode_frame

__all__ = ["FrameStore", "decode_frame", "encode_frame", "format_value", "read_csv", "render_csv", "write_csv"]
