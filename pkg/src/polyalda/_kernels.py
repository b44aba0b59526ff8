"""Jit-compiled inner loops for the collapsed Gibbs samplers.

Every kernel consumes pre-drawn uniforms in a fixed order, so results are
bit-identical across runs and independent of whether the jit is warm. Topic
draws use cumulative-sum inversion with a single uniform per draw.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _draw(probs_cum: np.ndarray, k: int, u: float) -> int:
    """Index of the first cumulative cell exceeding u (u already scaled)."""
    for j in range(k):
        if u < probs_cum[j]:
            return j
    return k - 1


@njit(cache=True)
def gibbs_sweep_kernel(tokens, doc_ids, z, n_dk, n_kv, n_k, alpha, beta, beta_sum, uniforms):
    """One full collapsed-Gibbs sweep over all token positions, in place."""
    k_topics = n_k.shape[0]
    cum = np.empty(k_topics, dtype=np.float64)
    for i in range(tokens.shape[0]):
        d = doc_ids[i]
        v = tokens[i]
        k = z[i]
        n_dk[d, k] -= 1
        n_kv[k, v] -= 1
        n_k[k] -= 1
        total = 0.0
        for j in range(k_topics):
            total += (n_dk[d, j] + alpha[j]) * (n_kv[j, v] + beta[v]) / (n_k[j] + beta_sum)
            cum[j] = total
        k = _draw(cum, k_topics, uniforms[i] * total)
        z[i] = k
        n_dk[d, k] += 1
        n_kv[k, v] += 1
        n_k[k] += 1


@njit(cache=True)
def left_to_right_position(tokens, t, z, n, phi, alpha, alpha_sum, n_particles, uniforms):
    """One position of the sequential held-out evaluator, in the shared chain.

    Every particle re-samples the assignments of the earlier positions and
    adds its predictive mass for token t; the position is then assigned once.
    Returns the summed predictive mass (divide by the particle count outside).
    Consumes exactly n_particles * t + 1 uniforms.
    """
    k_topics = alpha.shape[0]
    cum = np.empty(k_topics, dtype=np.float64)
    ui = 0
    p_t = 0.0
    w = tokens[t]
    for _ in range(n_particles):
        for tp in range(t):
            v = tokens[tp]
            n[z[tp]] -= 1
            total = 0.0
            for j in range(k_topics):
                total += (n[j] + alpha[j]) * phi[j, v]
                cum[j] = total
            k = _draw(cum, k_topics, uniforms[ui] * total)
            ui += 1
            z[tp] = k
            n[k] += 1
        contrib = 0.0
        for j in range(k_topics):
            contrib += phi[j, w] * (n[j] + alpha[j])
        p_t += contrib / (t + alpha_sum)
    total = 0.0
    for j in range(k_topics):
        total += (n[j] + alpha[j]) * phi[j, w]
        cum[j] = total
    k = _draw(cum, k_topics, uniforms[ui] * total)
    z[t] = k
    n[k] += 1
    return p_t


@njit(cache=True)
def doc_inference_kernel(tokens, phi, alpha, n_sweeps, uniforms):
    """Collapsed inference over one document with frozen topic-term weights.

    Assignments start uniformly at random, then ``n_sweeps`` Gibbs sweeps
    with conditional (n_excl + alpha_k) * phi[k, v]. Returns the final
    per-topic assignment counts.
    """
    k_topics = alpha.shape[0]
    length = tokens.shape[0]
    z = np.empty(length, dtype=np.int32)
    n = np.zeros(k_topics, dtype=np.int64)
    cum = np.empty(k_topics, dtype=np.float64)
    ui = 0
    for t in range(length):
        k = int(uniforms[ui] * k_topics)
        ui += 1
        if k >= k_topics:
            k = k_topics - 1
        z[t] = k
        n[k] += 1
    for _ in range(n_sweeps):
        for t in range(length):
            v = tokens[t]
            n[z[t]] -= 1
            total = 0.0
            for j in range(k_topics):
                total += (n[j] + alpha[j]) * phi[j, v]
                cum[j] = total
            k = _draw(cum, k_topics, uniforms[ui] * total)
            ui += 1
            z[t] = k
            n[k] += 1
    return n
