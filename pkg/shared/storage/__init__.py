from .files import (
    atomic_writer,
    decode_array,
    encode_array,
    read_csv,
    read_json,
    write_csv,
    write_json,
)

__all__ = [
    "atomic_writer",
    "decode_array",
    "encode_array",
    "read_csv",
    "read_json",
    "write_csv",
    "write_json",
]
