"""Pure numpy implementation of the Monte Carlo block kernels.

Used when the compiled ``_kernels`` extension is unavailable.  Both return an
``(n_steps, 4)`` array of per-step sums over the block's trajectories:
``sum cos(Theta)``, ``sum sin(Theta)``, ``sum cos^2``, ``sum sin^2`` where
``Theta`` is the cumulative kick angle.
"""

import numpy as np

from ._philox import uniforms_vec

_PAD = 2.0  # above any uniform, so padded table slots are never selected


def _accumulate(out, i, total):
    c = np.cos(total)
    s = np.sin(total)
    out[i, 0] = c.sum()
    out[i, 1] = s.sum()
    out[i, 2] = (c * c).sum()
    out[i, 3] = (s * s).sum()


def markov_block(seed, t_start, t_count, n_steps, angles, init_state,
                 comp_cum, row_ptr, atom_state, atom_cum):
    angles = np.asarray(angles, dtype=np.float64)
    comp_cum = np.asarray(comp_cum, dtype=np.float64)
    row_ptr = np.asarray(row_ptr, dtype=np.int64)
    n_comp = comp_cum.shape[0]
    n_rows = row_ptr.shape[0] - 1
    n_states = n_rows // n_comp

    row_len = np.diff(row_ptr)
    width = int(row_len.max())
    cum_tab = np.full((n_rows, width), _PAD)
    state_tab = np.zeros((n_rows, width), dtype=np.int64)
    for r in range(n_rows):
        lo, hi = row_ptr[r], row_ptr[r + 1]
        cum_tab[r, : hi - lo] = atom_cum[lo:hi]
        state_tab[r, : hi - lo] = atom_state[lo:hi]

    trajs = np.arange(t_start, t_start + t_count, dtype=np.uint64)
    state = np.full(t_count, init_state, dtype=np.int64)
    total = np.zeros(t_count)
    out = np.zeros((n_steps, 4))
    for i in range(n_steps):
        u1, u2 = uniforms_vec(seed, i, trajs)
        comp = np.minimum((u1[:, None] >= comp_cum[None, :]).sum(axis=1), n_comp - 1)
        row = comp * n_states + state
        k = (u2[:, None] >= cum_tab[row]).sum(axis=1)
        k = np.minimum(k, row_len[row] - 1)
        state = state_tab[row, k]
        total += angles[state]
        _accumulate(out, i, total)
    return out


def gaussian_block(seed, t_start, t_count, n_steps, sigma, correlated):
    trajs = np.arange(t_start, t_start + t_count, dtype=np.uint64)
    total = np.zeros(t_count)
    first = None
    out = np.zeros((n_steps, 4))
    for i in range(n_steps):
        if correlated:
            if first is None:
                u1, u2 = uniforms_vec(seed, 0, trajs)
                first = sigma * (np.sqrt(-2.0 * np.log(1.0 - u1)) * np.cos(2.0 * np.pi * u2))
            total = (i + 1) * first
        else:
            u1, u2 = uniforms_vec(seed, i, trajs)
            total = total + sigma * (np.sqrt(-2.0 * np.log(1.0 - u1)) * np.cos(2.0 * np.pi * u2))
        _accumulate(out, i, total)
    return out
