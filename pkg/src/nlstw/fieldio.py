"""Binary field files.

Little-endian layout: magic "NLSW", u16 version (=1), u16 dim N, N x u32
sizes, N x f64 spacings, f64 r0, u8 cutoff-construction id, then
sizes-product complex values as (re, im) f64 pairs with the last axis
fastest. Round trips are bit-exact.
"""

import struct

import numpy as np

from .grid import ComplexField, Grid

MAGIC = b"NLSW"
VERSION = 1


class FieldFormatError(ValueError):
    pass


def save_field(path, field: ComplexField, r0: float, phi_id: int = 1):
    g = field.grid
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<HH", VERSION, g.dim))
        fh.write(struct.pack("<%dI" % g.dim, *g.sizes))
        fh.write(struct.pack("<%dd" % g.dim, *g.spacings))
        fh.write(struct.pack("<dB", float(r0), int(phi_id)))
        flat = np.ascontiguousarray(field.values)
        pairs = np.empty(flat.shape + (2,), dtype="<f8")
        pairs[..., 0] = flat.real
        pairs[..., 1] = flat.imag
        fh.write(pairs.tobytes(order="C"))


def load_field(path):
    """Returns (field, r0, phi_id)."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != MAGIC:
            raise FieldFormatError("bad magic %r" % magic)
        version, dim = struct.unpack("<HH", fh.read(4))
        if version != VERSION:
            raise FieldFormatError("unsupported version %d" % version)
        sizes = struct.unpack("<%dI" % dim, fh.read(4 * dim))
        spacings = struct.unpack("<%dd" % dim, fh.read(8 * dim))
        r0, phi_id = struct.unpack("<dB", fh.read(9))
        count = int(np.prod(sizes)) * 2
        raw = np.frombuffer(fh.read(count * 8), dtype="<f8")
        if raw.size != count:
            raise FieldFormatError("truncated field data")
    pairs = raw.reshape(tuple(sizes) + (2,))
    values = pairs[..., 0] + 1j * pairs[..., 1]
    return ComplexField(Grid(sizes, spacings), values), r0, phi_id
