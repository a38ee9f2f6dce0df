"""Deterministic 64-bit hashing for all seeded draws.

One fixed mixing function backs every pseudo-random decision in the code
base (dataset shuffles, synthetic detector draws, augmentation choices) so
results are reproducible across platforms and, if ever needed, across
language ports. No use of Python's ``random`` module anywhere.

The primitive is the splitmix64 finalizer:

    mix64(x) = finalize(x + 0x9E3779B97F4A7C15)

with finalize(z):
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9   (mod 2^64)
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB   (mod 2^64)
    return z ^ (z >> 31)

Reference vectors (asserted in the test suite):
    mix64(0) == 0xE220A8397B1DCDAF
    mix64(1) == 0x910A2DEC89025CC1

Composite inputs are absorbed chunk-wise: ``hash_parts(*parts)`` starts
from a fixed init constant and for each part folds 64-bit chunks with
``state = mix64(state ^ chunk)``. Integers are taken mod 2^64; strings are
UTF-8 encoded; byte strings absorb their length followed by 8-byte
little-endian chunks (zero padded).
"""

from __future__ import annotations

from typing import Iterator

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_INIT = 0x8AFA4F4DA1B1B1B5


def mix64(x: int) -> int:
    """splitmix64 finalizer over one 64-bit value."""
    z = (x + _GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def _absorb(state: int, chunk: int) -> int:
    return mix64(state ^ (chunk & _MASK))


def hash_parts(*parts: int | str | bytes) -> int:
    """Hash a sequence of ints / strings / bytes to one 64-bit value."""
    state = _INIT
    for part in parts:
        if isinstance(part, int):
            state = _absorb(state, part)
        else:
            data = part.encode("utf-8") if isinstance(part, str) else part
            state = _absorb(state, len(data))
            for i in range(0, len(data), 8):
                chunk = int.from_bytes(data[i : i + 8].ljust(8, b"\0"), "little")
                state = _absorb(state, chunk)
    return state


def unit_interval(h: int) -> float:
    """Map a 64-bit hash to [0, 1)."""
    return (h & _MASK) / 2.0**64


def unit_draw(*parts: int | str | bytes) -> float:
    """Convenience: hash the parts and map to [0, 1)."""
    return unit_interval(hash_parts(*parts))


class HashStream:
    """Counter-mode stream of 64-bit draws derived from a base hash.

    Draw ``i`` is ``hash_parts(base, i)``; the instance just tracks the
    counter. Streams with the same base produce identical sequences.
    """

    def __init__(self, *parts: int | str | bytes):
        self._base = hash_parts(*parts)
        self._counter = 0

    def next_u64(self) -> int:
        h = hash_parts(self._base, self._counter)
        self._counter += 1
        return h

    def next_unit(self) -> float:
        return unit_interval(self.next_u64())

    def next_below(self, bound: int) -> int:
        """Draw an integer in [0, bound). Modulo bias is < 2^-50 for desk-scale bounds."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        return self.next_u64() % bound

    def hex_id(self) -> str:
        """Two draws concatenated to a 128-bit lowercase hex identifier."""
        return f"{self.next_u64():016x}{self.next_u64():016x}"

    def shuffled(self, items: list) -> list:
        """Fisher-Yates shuffle driven by this stream; returns a new list."""
        out = list(items)
        for i in range(len(out) - 1, 0, -1):
            j = self.next_below(i + 1)
            out[i], out[j] = out[j], out[i]
        return out


def stream_ids(*parts: int | str | bytes) -> Iterator[str]:
    """Endless deterministic 128-bit hex ids (used for reproducible runs)."""
    stream = HashStream(*parts)
    while True:
        yield stream.hex_id()
