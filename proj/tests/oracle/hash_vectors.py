#!/usr/bin/env python3
"""Independent oracle for the keyed-hash test vectors.

Reimplements the canonical encoding documented in include/shp/hashing.hpp
with hashlib only, and prints the expected bit strings that are frozen into
tests/test_core.cpp. Run: python3 tests/oracle/hash_vectors.py
"""
import hashlib
import struct


def key_block(key: bytes, tag: bytes) -> bytes:
    return struct.pack(">I", len(key)) + key + tag


def first_bits(digest: bytes, n: int) -> str:
    return "".join(str((digest[i // 8] >> (7 - i % 8)) & 1) for i in range(n))


def deskew(value: int, subchannel: int, key: bytes, n: int, iteration: int) -> str:
    msg = key_block(key, b"dk") + struct.pack(">q", value) + struct.pack(">II", subchannel, iteration)
    return first_bits(hashlib.sha256(msg).digest(), n)


def watchdog(bits: str, key: bytes) -> int:
    packed = bytearray((len(bits) + 7) // 8)
    for i, b in enumerate(bits):
        if b == "1":
            packed[i // 8] |= 0x80 >> (i % 8)
    msg = key_block(key, b"wd") + struct.pack(">I", len(bits)) + bytes(packed)
    return int(first_bits(hashlib.sha256(msg).digest(), 6), 2)


def subchannel(payload: bytes, key: bytes, bits: int) -> int:
    msg = key_block(key, b"sc") + payload
    return int(first_bits(hashlib.sha256(msg).digest(), bits), 2)


if __name__ == "__main__":
    # InputValue rounded to 4 decimal places: 2.3456 s = 2345600 us.
    print("deskew(2345600, 0, 'test', 8, 0)  =", deskew(2345600, 0, b"test", 8, 0))
    print("deskew(2345600, 0, 'test', 8, 1)  =", deskew(2345600, 0, b"test", 8, 1))
    print("deskew(2345600, 3, 'test', 13, 0) =", deskew(2345600, 3, b"test", 13, 0))
    print("deskew(0, 0, '', 16, 0)           =", deskew(0, 0, b"", 16, 0))
    print("watchdog('10110011', 'test')      =", watchdog("10110011", b"test"))
    print("subchannel iphash 192.168.1.7 K/4 =", subchannel(bytes([192, 168, 1, 7]), b"K", 4))
    print("subchannel clockhash 5000000 K/4  =",
          subchannel(struct.pack(">q", 5000000), b"K", 4))
