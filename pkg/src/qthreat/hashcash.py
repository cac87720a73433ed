"""Hashcash proof-of-work over 80-byte block headers.

Header layout (little-endian, 80 bytes)::

    offset  size  field
    0       4     version      uint32
    4       32    prev_hash    raw bytes
    36      32    merkle_root  raw bytes
    68      4     timestamp    uint32
    72      4     bits         uint32 (compact target encoding)
    76      4     nonce        uint32

The digest is SHA-256 applied twice and compared with the target as a
big-endian integer. Bitcoin itself reads the digest little-endian, so
headers mined here are not valid mainnet blocks.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass, replace
from fractions import Fraction

HEADER_FORMAT = "<I32s32sIII"
HEADER_SIZE = struct.calcsize(HEADER_FORMAT)
NONCE_OFFSET = 76
NONCE_SPACE = 2**32
MAX_TARGET = 2**256 - 1
DIFFICULTY_ONE = 2**224

assert HEADER_SIZE == 80


def sha256d(data: bytes) -> bytes:
    return hashlib.sha256(hashlib.sha256(data).digest()).digest()


@dataclass(frozen=True)
class BlockHeader:
    version: int
    prev_hash: bytes
    merkle_root: bytes
    timestamp: int
    bits: int
    nonce: int

    def __post_init__(self):
        for name in ("version", "timestamp", "bits", "nonce"):
            value = getattr(self, name)
            if not 0 <= value < 2**32:
                raise ValueError(f"{name} must be a 32-bit unsigned integer, got {value!r}")
        for name in ("prev_hash", "merkle_root"):
            if len(getattr(self, name)) != 32:
                raise ValueError(f"{name} must be exactly 32 bytes")

    def serialize(self) -> bytes:
        return struct.pack(
            HEADER_FORMAT, self.version, self.prev_hash, self.merkle_root, self.timestamp, self.bits, self.nonce
        )

    @classmethod
    def deserialize(cls, data: bytes) -> "BlockHeader":
        if len(data) != HEADER_SIZE:
            raise ValueError(f"block header must be {HEADER_SIZE} bytes, got {len(data)}")
        return cls(*struct.unpack(HEADER_FORMAT, data))

    def hash(self) -> bytes:
        return sha256d(self.serialize())


@dataclass(frozen=True)
class Target:
    t: int

    def __post_init__(self):
        if not 1 <= self.t <= MAX_TARGET:
            raise ValueError("target must lie in [1, 2**256 - 1]")

    @property
    def difficulty(self) -> float:
        return target_to_difficulty(self)


def difficulty_to_target(D) -> Target:
    """``floor(2**224 / D)``, clamped to the largest 256-bit value."""
    if not D > 0:
        raise ValueError(f"difficulty must be positive, got {D!r}")
    frac = Fraction(D) if not isinstance(D, Fraction) else D
    t = (DIFFICULTY_ONE * frac.denominator) // frac.numerator
    return Target(min(max(t, 1), MAX_TARGET))


def target_to_difficulty(target: Target | int) -> float:
    t = target.t if isinstance(target, Target) else target
    if t < 1:
        raise ValueError("target must be >= 1")
    return float(Fraction(DIFFICULTY_ONE, t))


def expected_hashes(D: float) -> float:
    return D * NONCE_SPACE


def target_from_bits(bits: int) -> Target:
    """Decode the compact ``bits`` field (8-bit exponent, 23-bit mantissa)."""
    exponent = bits >> 24
    mantissa = bits & 0x007FFFFF
    if bits & 0x00800000:
        raise ValueError("negative compact targets are not valid")
    if exponent <= 3:
        t = mantissa >> (8 * (3 - exponent))
    else:
        t = mantissa << (8 * (exponent - 3))
    return Target(t)


def bits_from_target(target: Target | int) -> int:
    """Encode a target in compact form; precision beyond 3 bytes is truncated."""
    t = target.t if isinstance(target, Target) else target
    size = (t.bit_length() + 7) // 8
    if size <= 3:
        mantissa = t << (8 * (3 - size))
    else:
        mantissa = t >> (8 * (size - 3))
    if mantissa & 0x00800000:
        mantissa >>= 8
        size += 1
    return (size << 24) | mantissa


def digest_value(digest: bytes) -> int:
    return int.from_bytes(digest, "big")


def hashcash_verify(header: BlockHeader, target: Target) -> bool:
    return digest_value(header.hash()) <= target.t


@dataclass(frozen=True)
class MineResult:
    header: BlockHeader | None
    attempts: int

    @property
    def found(self) -> bool:
        return self.header is not None


def _scan(template: BlockHeader, t: int, start: int, stop: int, timestamp_bits: int) -> tuple[int | None, int]:
    """Scan positions ``start..stop`` of the (timestamp lsb, nonce) order.

    Position ``i`` maps to nonce ``i % 2**32`` and timestamp low bits ``i // 2**32``.
    """
    raw = bytearray(template.serialize())
    ts_mask = (1 << timestamp_bits) - 1
    ts_high = template.timestamp & ~ts_mask & 0xFFFFFFFF
    pack_into = struct.pack_into
    sha = hashlib.sha256
    pos = start
    while pos < stop:
        ts_low, nonce = divmod(pos, NONCE_SPACE)
        pack_into("<I", raw, 68, ts_high | ts_low)
        prefix = sha(bytes(raw[:64]))
        tail_fixed = bytes(raw[64:76])
        end = min(stop, (ts_low + 1) * NONCE_SPACE)
        for n in range(nonce, nonce + (end - pos)):
            h = prefix.copy()
            h.update(tail_fixed + n.to_bytes(4, "little"))
            if int.from_bytes(sha(h.digest()).digest(), "big") <= t:
                return ts_low * NONCE_SPACE + n, ts_low * NONCE_SPACE + n - start + 1
        pos = end
    return None, stop - start


def _scan_job(args):
    return _scan(*args)


def hashcash_mine(
    template: BlockHeader,
    target: Target,
    nonce_start: int = 0,
    nonce_count: int | None = None,
    timestamp_bits: int = 0,
    workers: int = 1,
) -> MineResult:
    """Find the first header in scan order whose digest is at most ``target``.

    The nonce varies fastest and the template's own nonce is ignored. Each of
    the ``2**timestamp_bits`` settings of the timestamp's low bits is tried
    with ``nonce_count`` nonces from ``nonce_start`` (default: the rest of
    the 32-bit range). ``attempts`` counts hashes up to and including the
    solution, in scan order, whatever ``workers`` is.
    """
    if not 0 <= nonce_start < NONCE_SPACE:
        raise ValueError("nonce_start must be a 32-bit value")
    if nonce_count is None:
        nonce_count = NONCE_SPACE - nonce_start
    if nonce_count < 1 or nonce_start + nonce_count > NONCE_SPACE:
        raise ValueError("nonce range must lie within the 32-bit nonce space")
    if not 0 <= timestamp_bits <= 32:
        raise ValueError("timestamp_bits must lie in [0, 32]")

    ts_mask = (1 << timestamp_bits) - 1
    base = replace(template, timestamp=template.timestamp & ~ts_mask & 0xFFFFFFFF)
    if nonce_start == 0 and nonce_count == NONCE_SPACE:
        segments = [(0, NONCE_SPACE << timestamp_bits)]
    else:
        segments = (
            (ts * NONCE_SPACE + nonce_start, ts * NONCE_SPACE + nonce_start + nonce_count)
            for ts in range(1 << timestamp_bits)
        )

    attempts = 0
    for start, stop in segments:
        pos, used = _mine_segment(base, target.t, start, stop, timestamp_bits, workers)
        attempts += used
        if pos is not None:
            ts_low, nonce = divmod(pos, NONCE_SPACE)
            header = replace(base, timestamp=base.timestamp | ts_low, nonce=nonce)
            return MineResult(header, attempts)
    return MineResult(None, attempts)


def _mine_segment(base, t, start, stop, timestamp_bits, workers):
    if workers <= 1:
        return _scan(base, t, start, stop, timestamp_bits)
    from concurrent.futures import ProcessPoolExecutor

    # rounds of equal chunks; the lowest hit in a round is the serial answer
    chunk = 1 << 16
    with ProcessPoolExecutor(max_workers=workers) as pool:
        pos = start
        while pos < stop:
            bounds = []
            for _ in range(workers):
                if pos >= stop:
                    break
                bounds.append((pos, min(stop, pos + chunk)))
                pos = bounds[-1][1]
            results = pool.map(_scan_job, [(base, t, a, b, timestamp_bits) for a, b in bounds])
            for (a, _), (hit, _) in zip(bounds, results):
                if hit is not None:
                    return hit, hit - start + 1
    return None, stop - start
