"""Deterministic sampling helpers.

Everything here draws from random.Random exclusively through getrandbits,
with rejection sampling on top.  The Mersenne Twister bit stream is stable
across CPython versions, while the higher-level sampling methods
(randint, shuffle, sample) are documented as implementation details; using
only getrandbits keeps generated instance streams byte-reproducible.
"""

from __future__ import annotations

from random import Random


def rand_below(rng: Random, n: int) -> int:
    """Uniform integer in [0, n)."""
    if n <= 0:
        raise ValueError("rand_below needs n >= 1")
    k = (n - 1).bit_length()
    if k == 0:
        return 0
    while True:
        r = rng.getrandbits(k)
        if r < n:
            return r


def rand_unit(rng: Random) -> float:
    """Uniform float in [0, 1) with 53 bits of precision."""
    return rng.getrandbits(53) / (1 << 53)


def shuffled(rng: Random, items: list) -> list:
    """Fisher-Yates shuffle into a new list."""
    out = list(items)
    for i in range(len(out) - 1, 0, -1):
        j = rand_below(rng, i + 1)
        out[i], out[j] = out[j], out[i]
    return out


def sample_distinct(rng: Random, population: list, k: int) -> list:
    """k distinct elements via partial Fisher-Yates, order random."""
    if k > len(population):
        raise ValueError("sample larger than population")
    pool = list(population)
    out = []
    for i in range(k):
        j = i + rand_below(rng, len(pool) - i)
        pool[i], pool[j] = pool[j], pool[i]
        out.append(pool[i])
    return out
