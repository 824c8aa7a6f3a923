"""Vectorized fallback kernel.

Mirrors the compiled kernel operation for operation: same formulas, same
association, so SINRs and outage flags are bit-identical between the two
backends. Chunk moments use the two-pass form here (the compiled kernel
accumulates online), which is why continuous means may differ between
backends in the last few ulps while flag counts never do.
"""

from __future__ import annotations

import numpy as np


def accumulate_chunk(
    g_ccu: np.ndarray,
    g_ceu: np.ndarray,
    g_relay: np.ndarray,
    rho: float,
    p_n: float,
    p_f: float,
    p_total: float,
    alpha: float,
    delta: float,
    eta: float,
    psi1: float,
    psi2: float,
    psi3: float,
    ehs: bool,
):
    """Chunk statistics: (n, means[5], m2[5], esc/p_relay co-moment, counts[3]).

    Continuous metric order: c_x1, c_x2, c_x3, esc_total, p_relay.
    Count order: out_x1, out_x2_ccu, out_x3_ceu.
    """
    rg_ccu = rho * g_ccu
    rg_ceu = rho * g_ceu
    snr_x2 = p_n * rg_ccu
    sinr_x3_ccu = p_f * rg_ccu / (p_n * rg_ccu + 1.0)
    sinr_x3_dir = p_f * rg_ceu / (p_n * rg_ceu + 1.0)
    p_coef = eta * rho * (2.0 * alpha / (1.0 - alpha) + delta)
    p_relay = p_coef * g_ccu
    snr_relay = p_relay * g_relay
    if ehs:
        snr_x1 = rg_ceu * p_total
        combined = sinr_x3_dir + snr_relay
    else:
        snr_x1 = np.zeros_like(rg_ceu)
        combined = np.maximum(sinr_x3_dir, snr_relay)

    half = (1.0 - alpha) / 2.0
    c_x1 = alpha * np.log2(1.0 + snr_x1)
    c_x2 = half * np.log2(1.0 + snr_x2)
    c_x3 = half * np.log2(1.0 + combined)
    esc = (c_x1 + c_x2) + c_x3

    ccu_ok = sinr_x3_ccu >= psi3
    out_x1 = snr_x1 < psi1
    out_x2 = ~(ccu_ok & (snr_x2 >= psi2))
    out_x3 = ~(ccu_ok & (combined >= psi3))

    n = g_ccu.shape[0]
    means = np.empty(5, dtype=np.float64)
    m2 = np.empty(5, dtype=np.float64)
    for i, arr in enumerate((c_x1, c_x2, c_x3, esc, p_relay)):
        mean = float(arr.mean())
        means[i] = mean
        m2[i] = float(np.sum((arr - mean) ** 2))
    com = float(np.sum((esc - means[3]) * (p_relay - means[4])))
    counts = np.array(
        [np.count_nonzero(out_x1), np.count_nonzero(out_x2), np.count_nonzero(out_x3)],
        dtype=np.int64,
    )
    return n, means, m2, com, counts
