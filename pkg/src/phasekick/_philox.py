"""Philox4x32-10 counter-based generator (scalar and numpy-vectorised).

Every random draw in the Monte Carlo engine is a pure function of
``(seed, step, trajectory)``: the 64-bit seed is the key and the counter is
``(step, traj_lo, traj_hi, 0)``.  One call yields two uniforms in [0, 1).
"""

from __future__ import annotations

import numpy as np

M0 = 0xD2511F53
M1 = 0xCD9E8D57
W0 = 0x9E3779B9
W1 = 0xBB67AE85
MASK32 = 0xFFFFFFFF
ROUNDS = 10
INV_2_53 = 1.0 / 9007199254740992.0


def philox4x32(ctr: tuple[int, int, int, int], key: tuple[int, int]) -> tuple[int, int, int, int]:
    c0, c1, c2, c3 = ctr
    k0, k1 = key
    for r in range(ROUNDS):
        if r:
            k0 = (k0 + W0) & MASK32
            k1 = (k1 + W1) & MASK32
        p0 = M0 * c0
        p1 = M1 * c2
        c0, c1, c2, c3 = (
            ((p1 >> 32) ^ c1 ^ k0) & MASK32,
            p1 & MASK32,
            ((p0 >> 32) ^ c3 ^ k1) & MASK32,
            p0 & MASK32,
        )
    return c0, c1, c2, c3


def to_unit(hi: int, lo: int) -> float:
    """53-bit uniform in [0, 1) from two 32-bit words."""
    return ((hi >> 5) * 67108864 + (lo >> 6)) * INV_2_53


def uniforms(seed: int, step: int, traj: int) -> tuple[float, float]:
    x0, x1, x2, x3 = philox4x32(
        (step & MASK32, traj & MASK32, (traj >> 32) & MASK32, 0),
        (seed & MASK32, (seed >> 32) & MASK32),
    )
    return to_unit(x0, x1), to_unit(x2, x3)


def philox4x32_vec(c0, c1, c2, c3, k0: int, k1: int):
    """Vectorised rounds over uint64 arrays holding 32-bit values."""
    m0, m1, mask = np.uint64(M0), np.uint64(M1), np.uint64(MASK32)
    s32 = np.uint64(32)
    for r in range(ROUNDS):
        if r:
            k0 = (k0 + W0) & MASK32
            k1 = (k1 + W1) & MASK32
        p0 = c0 * m0
        p1 = c2 * m1
        c0, c1, c2, c3 = (
            (p1 >> s32) ^ c1 ^ np.uint64(k0),
            p1 & mask,
            (p0 >> s32) ^ c3 ^ np.uint64(k1),
            p0 & mask,
        )
    return c0, c1, c2, c3


def uniforms_vec(seed: int, step: int, trajs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Two uniform arrays for ``step`` across the trajectory indices ``trajs``."""
    trajs = np.asarray(trajs, dtype=np.uint64)
    n = trajs.shape[0]
    x0, x1, x2, x3 = philox4x32_vec(
        np.full(n, step & MASK32, dtype=np.uint64),
        trajs & np.uint64(MASK32),
        trajs >> np.uint64(32),
        np.zeros(n, dtype=np.uint64),
        seed & MASK32,
        (seed >> 32) & MASK32,
    )
    scale = np.uint64(67108864)
    u1 = ((x0 >> np.uint64(5)) * scale + (x1 >> np.uint64(6))).astype(np.float64) * INV_2_53
    u2 = ((x2 >> np.uint64(5)) * scale + (x3 >> np.uint64(6))).astype(np.float64) * INV_2_53
    return u1, u2
