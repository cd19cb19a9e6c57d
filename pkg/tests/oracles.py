"""Independent brute-force oracles used to cross-check the fast kernels.

These stay deliberately naive (explicit loops, float64) and share no code
with the implementations they certify.
"""

import numpy as np


def conv1d_naive(x, w, b, stride=1, pad=0, dil=1):
    c_out, c_in, k = w.shape
    t = x.shape[1]
    xp = np.zeros((c_in, t + 2 * pad))
    xp[:, pad : pad + t] = x
    t_out = (t + 2 * pad - dil * (k - 1) - 1) // stride + 1
    out = np.zeros((c_out, t_out))
    for o in range(c_out):
        for tt in range(t_out):
            acc = 0.0
            for i in range(c_in):
                for j in range(k):
                    acc += float(w[o, i, j]) * float(xp[i, tt * stride + j * dil])
            out[o, tt] = acc + float(b[o])
    return out


def conv_transpose1d_naive(x, w, b, stride=1, pad=0, dil=1):
    # weight layout [out, in, k]; scatter-accumulate semantics
    c_out, c_in, k = w.shape
    t = x.shape[1]
    t_full = (t - 1) * stride + dil * (k - 1) + 1
    full = np.zeros((c_out, t_full))
    for i in range(c_in):
        for tt in range(t):
            for o in range(c_out):
                for j in range(k):
                    full[o, tt * stride + j * dil] += float(w[o, i, j]) * float(x[i, tt])
    out = full[:, pad : t_full - pad] if pad else full
    for o in range(c_out):
        out[o] += float(b[o])
    return out


def conv2d_naive(x, w, b, stride=(1, 1), pad=(0, 0), dil=(1, 1)):
    c_out, c_in, kf, kt = w.shape
    f, t = x.shape[1], x.shape[2]
    xp = np.zeros((c_in, f + 2 * pad[0], t + 2 * pad[1]))
    xp[:, pad[0] : pad[0] + f, pad[1] : pad[1] + t] = x
    f_out = (f + 2 * pad[0] - dil[0] * (kf - 1) - 1) // stride[0] + 1
    t_out = (t + 2 * pad[1] - dil[1] * (kt - 1) - 1) // stride[1] + 1
    out = np.zeros((c_out, f_out, t_out))
    for o in range(c_out):
        for ff in range(f_out):
            for tt in range(t_out):
                acc = 0.0
                for i in range(c_in):
                    for jf in range(kf):
                        for jt in range(kt):
                            acc += float(w[o, i, jf, jt]) * float(
                                xp[i, ff * stride[0] + jf * dil[0], tt * stride[1] + jt * dil[1]]
                            )
                out[o, ff, tt] = acc + float(b[o])
    return out


def conv_transpose2d_naive(x, w, b, stride=(1, 1), pad=(0, 0), dil=(1, 1)):
    c_out, c_in, kf, kt = w.shape
    f, t = x.shape[1], x.shape[2]
    f_full = (f - 1) * stride[0] + dil[0] * (kf - 1) + 1
    t_full = (t - 1) * stride[1] + dil[1] * (kt - 1) + 1
    full = np.zeros((c_out, f_full, t_full))
    for i in range(c_in):
        for ff in range(f):
            for tt in range(t):
                v = float(x[i, ff, tt])
                for o in range(c_out):
                    for jf in range(kf):
                        for jt in range(kt):
                            full[o, ff * stride[0] + jf * dil[0], tt * stride[1] + jt * dil[1]] += (
                                float(w[o, i, jf, jt]) * v
                            )
    out = full[:, pad[0] : f_full - pad[0] or None, pad[1] : t_full - pad[1] or None]
    for o in range(c_out):
        out[o] += float(b[o])
    return out


def dft_naive(x):
    """Direct O(n^2) DFT of a real 1D signal; returns the n//2+1 low bins."""
    n = len(x)
    k = np.arange(n // 2 + 1)[:, None]
    t = np.arange(n)[None, :]
    ker = np.exp(-2j * np.pi * k * t / n)
    return ker @ np.asarray(x, dtype=np.float64)


def rel_err(got, want):
    """Max absolute deviation relative to the reference tensor's scale."""
    want = np.asarray(want, dtype=np.float64)
    scale = max(np.max(np.abs(want)), 1e-12)
    return np.max(np.abs(np.asarray(got, dtype=np.float64) - want)) / scale
