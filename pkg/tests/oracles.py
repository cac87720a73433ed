"""Independent reference computations used by the tests.

These deliberately avoid the package code: arbitrary-precision root finding
with mpmath for the distillation schedule, closed-form logarithms for the
circuit distance, and hashlib directly for digests.
"""

import hashlib

import mpmath as mp

mp.mp.dps = 40


def layer_distance(p_tol, p_g):
    """Real d on the decreasing branch of 192 d (100 p)^((d+1)/2) = p_tol / 2."""
    p_g = mp.mpf(p_g)
    base = 100 * p_g
    f = lambda d: mp.log(192 * d) + (d + 1) / 2 * mp.log(base) - mp.log(mp.mpf(p_tol) / 2)
    peak = max(mp.mpf(1), -2 / mp.log(base))
    if f(peak) <= 0:
        return peak
    return mp.findroot(f, (peak, mp.mpf(10_000)), solver="anderson")


def schedule(n_T, p_g):
    p_tol = 1 / mp.mpf(n_T)
    out = []
    while p_tol < 10 * mp.mpf(p_g):
        out.append(layer_distance(p_tol, p_g))
        p_tol = (p_tol / 70) ** (mp.mpf(1) / 3)
    return [float(d) for d in out]


def circuit_distance(n_C, p_g):
    d = 2 * mp.log(1 / mp.mpf(n_C)) / mp.log(80 * mp.mpf(p_g)) - 1
    return max(1.0, float(d))


def sha256d_hex(data: bytes) -> str:
    return hashlib.sha256(hashlib.sha256(data).digest()).hexdigest()
