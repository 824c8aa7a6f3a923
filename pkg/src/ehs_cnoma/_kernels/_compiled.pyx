"""Compiled chunk kernel: per-trial physics plus online moment accumulation.

Formulas and operation order match numpy_impl exactly (the build disables
floating point contraction), so SINRs and outage flags agree bit for bit
with the vectorized fallback. Moments are accumulated online in one pass.
"""

import numpy as np

from libc.math cimport log2


def accumulate_chunk(double[::1] g_ccu, double[::1] g_ceu, double[::1] g_relay,
                     double rho, double p_n, double p_f, double p_total,
                     double alpha, double delta, double eta,
                     double psi1, double psi2, double psi3, bint ehs):
    """Chunk statistics: (n, means[5], m2[5], esc/p_relay co-moment, counts[3]).

    Continuous metric order: c_x1, c_x2, c_x3, esc_total, p_relay.
    Count order: out_x1, out_x2_ccu, out_x3_ceu.
    """
    cdef Py_ssize_t n = g_ccu.shape[0]
    cdef double p_coef = eta * rho * (2.0 * alpha / (1.0 - alpha) + delta)
    cdef double half = (1.0 - alpha) / 2.0
    cdef double[5] mean
    cdef double[5] m2
    cdef double[5] x
    cdef double com = 0.0
    cdef long long cnt_x1 = 0, cnt_x2 = 0, cnt_x3 = 0
    cdef Py_ssize_t i, j
    cdef double rg_ccu, rg_ceu, snr_x2, sinr_x3_ccu, sinr_x3_dir
    cdef double p_relay, snr_relay, snr_x1, combined
    cdef double c1, c2, c3, esc, d, k, d_esc
    cdef bint ccu_ok

    for j in range(5):
        mean[j] = 0.0
        m2[j] = 0.0

    for i in range(n):
        rg_ccu = rho * g_ccu[i]
        rg_ceu = rho * g_ceu[i]
        snr_x2 = p_n * rg_ccu
        sinr_x3_ccu = p_f * rg_ccu / (p_n * rg_ccu + 1.0)
        sinr_x3_dir = p_f * rg_ceu / (p_n * rg_ceu + 1.0)
        p_relay = p_coef * g_ccu[i]
        snr_relay = p_relay * g_relay[i]
        if ehs:
            snr_x1 = rg_ceu * p_total
            combined = sinr_x3_dir + snr_relay
        else:
            snr_x1 = 0.0
            combined = sinr_x3_dir if sinr_x3_dir > snr_relay else snr_relay

        c1 = alpha * log2(1.0 + snr_x1)
        c2 = half * log2(1.0 + snr_x2)
        c3 = half * log2(1.0 + combined)
        esc = (c1 + c2) + c3

        ccu_ok = sinr_x3_ccu >= psi3
        if snr_x1 < psi1:
            cnt_x1 += 1
        if not (ccu_ok and snr_x2 >= psi2):
            cnt_x2 += 1
        if not (ccu_ok and combined >= psi3):
            cnt_x3 += 1

        x[0] = c1
        x[1] = c2
        x[2] = c3
        x[3] = esc
        x[4] = p_relay
        k = <double> (i + 1)
        d_esc = x[3] - mean[3]  # pre-update delta feeds the co-moment
        for j in range(5):
            d = x[j] - mean[j]
            mean[j] += d / k
            m2[j] += d * (x[j] - mean[j])
        com += d_esc * (x[4] - mean[4])

    means_out = np.empty(5, dtype=np.float64)
    m2_out = np.empty(5, dtype=np.float64)
    for j in range(5):
        means_out[j] = mean[j]
        m2_out[j] = m2[j]
    counts = np.array([cnt_x1, cnt_x2, cnt_x3], dtype=np.int64)
    return n, means_out, m2_out, com, counts
