import numpy as np
import pytest

from phasekick import _philox

# Random123 known-answer vectors for philox4x32_10.
KAT = [
    ((0, 0, 0, 0), (0, 0), (0x6627E8D5, 0xE169C58D, 0xBC57AC4C, 0x9B00DBD8)),
    ((0xFFFFFFFF,) * 4, (0xFFFFFFFF,) * 2, (0x408F276D, 0x41C83B0E, 0xA20BC7C6, 0x6D5451FD)),
    (
        (0x243F6A88, 0x85A308D3, 0x13198A2E, 0x03707344),
        (0xA4093822, 0x299F31D0),
        (0xD16CFE09, 0x94FDCCEB, 0x5001E420, 0x24126EA1),
    ),
]


@pytest.mark.parametrize("ctr, key, expected", KAT)
def test_known_answers_scalar(ctr, key, expected):
    assert _philox.philox4x32(ctr, key) == expected


@pytest.mark.parametrize("ctr, key, expected", KAT)
def test_known_answers_vectorised(ctr, key, expected):
    cols = [np.array([c], dtype=np.uint64) for c in ctr]
    out = _philox.philox4x32_vec(*cols, *key)
    assert tuple(int(x[0]) for x in out) == expected


def test_vector_and_scalar_uniforms_agree():
    seed = 0xDEADBEEF12345678
    trajs = np.array([0, 1, 2, 8191, 8192, 2**33 + 5], dtype=np.uint64)
    for step in (0, 1, 17):
        u1, u2 = _philox.uniforms_vec(seed, step, trajs)
        for i, t in enumerate(trajs):
            assert (u1[i], u2[i]) == _philox.uniforms(seed, step, int(t))


def test_uniforms_look_uniform():
    u1, u2 = _philox.uniforms_vec(42, 3, np.arange(200_000, dtype=np.uint64))
    for u in (u1, u2):
        assert u.min() >= 0.0 and u.max() < 1.0
        assert abs(u.mean() - 0.5) < 5 * (1 / np.sqrt(12 * len(u)))
        counts = np.histogram(u, bins=20, range=(0, 1))[0]
        chi2 = ((counts - len(u) / 20) ** 2 / (len(u) / 20)).sum()
        assert chi2 < 45  # 19 dof, p ~ 1e-3
    assert abs(np.corrcoef(u1, u2)[0, 1]) < 0.01
