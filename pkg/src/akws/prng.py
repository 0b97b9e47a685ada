"""Deterministic pseudo-random stream used to build expansion matrices.

The generator is pinned down exactly so that an expansion built from a
given seed is bit-identical across runs and implementations:

* the 256-bit xoshiro256** state is seeded with four successive outputs
  of splitmix64 applied to the user seed;
* each 64-bit output is mapped to a double via ``(x >> 11) * 2**-53``;
* standard normals come from the Box-Muller transform on consecutive
  uniform pairs ``(u1, u2)``, with ``u1`` shifted into ``(0, 1]`` so the
  logarithm is always finite:

      r  = sqrt(-2 ln u1),  theta = 2 pi u2
      z0 = r cos(theta),    z1 = r sin(theta)

  Pairs are consumed in order; an odd request discards the final ``z1``.
"""

import math

import numpy as np

_MASK64 = 0xFFFFFFFFFFFFFFFF
_DOUBLE_SCALE = 2.0 ** -53


def splitmix64_next(state: int) -> tuple[int, int]:
    """Advance a splitmix64 state; returns (new_state, output)."""
    state = (state + 0x9E3779B97F4A7C15) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return state, z ^ (z >> 31)


class Xoshiro256StarStar:
    """xoshiro256** stream seeded through splitmix64."""

    def __init__(self, seed: int):
        sm = seed & _MASK64
        state = []
        for _ in range(4):
            sm, out = splitmix64_next(sm)
            state.append(out)
        self._s = state

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s
        x = (s1 * 5) & _MASK64
        result = (((x << 7) | (x >> 57)) & _MASK64) * 9 & _MASK64
        t = (s1 << 17) & _MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) | (s3 >> 19)) & _MASK64
        self._s = [s0, s1, s2, s3]
        return result

    def uniforms(self, count: int) -> np.ndarray:
        """`count` doubles in [0, 1), one per 64-bit draw."""
        nxt = self.next_u64
        return np.array([(nxt() >> 11) for _ in range(count)], dtype=np.float64) * _DOUBLE_SCALE

    def normals(self, count: int) -> np.ndarray:
        """`count` standard normals via Box-Muller on consecutive pairs."""
        pairs = (count + 1) // 2
        u = self.uniforms(2 * pairs)
        u1 = u[0::2] + _DOUBLE_SCALE  # shift [0,1) -> (0,1]
        u2 = u[1::2]
        r = np.sqrt(-2.0 * np.log(u1))
        theta = (2.0 * math.pi) * u2
        out = np.empty(2 * pairs)
        out[0::2] = r * np.cos(theta)
        out[1::2] = r * np.sin(theta)
        return out[:count]


def normal_matrix(rows: int, cols: int, seed: int) -> np.ndarray:
    """Seeded standard-normal matrix, filled in row-major order."""
    stream = Xoshiro256StarStar(seed)
    return stream.normals(rows * cols).reshape(rows, cols)
