"""Deterministic random streams for reproducible experiments.

Every randomized operation in the library takes an explicit ``RngState``.
The same seed and the same call sequence always produce the same outputs,
and independent trials get independent child streams via ``spawn()``.
"""

from __future__ import annotations

import hashlib
import random


class RngState:
    """Seeded pseudo-random stream with deterministic child derivation."""

    __slots__ = ("seed", "path", "_rand")

    def __init__(self, seed: int, path: tuple[int, ...] = ()) -> None:
        self.seed = seed
        self.path = path
        material = repr((seed, path)).encode()
        self._rand = random.Random(
            int.from_bytes(hashlib.sha256(material).digest()[:8], "big")
        )

    def spawn(self, index: int) -> "RngState":
        """Independent child stream for trial `index` (same seed, longer path)."""
        return RngState(self.seed, self.path + (index,))

    def random(self) -> float:
        return self._rand.random()

    def randrange(self, n: int) -> int:
        return self._rand.randrange(n)

    def bit(self) -> int:
        return self._rand.getrandbits(1)

    def bytes(self, n: int) -> bytes:
        return self._rand.getrandbits(8 * n).to_bytes(n, "big") if n else b""

    def bits(self, n: int) -> list[int]:
        """n independent fair bits."""
        return [self._rand.getrandbits(1) for _ in range(n)]

    def __repr__(self) -> str:
        return f"RngState(seed={self.seed}, path={self.path})"
