"""Pure-Python permanent kernels, used when ``mhd._kernels`` is not built."""
import numpy as np


def ryser(a):
    """Permanent of a square matrix by Ryser's formula with Gray-code order.

    perm(A) = (-1)^n sum_{S} (-1)^{|S|} prod_i sum_{j in S} a_ij
    """
    a = np.ascontiguousarray(a, dtype=np.float64)
    n = a.shape[0]
    if n == 0:
        return 1.0
    sums = np.zeros(n)
    acc = 0.0
    prev = 0
    for k in range(1, 1 << n):
        g = k ^ (k >> 1)
        diff = g ^ prev
        col = diff.bit_length() - 1
        if g & diff:
            sums += a[:, col]
        else:
            sums -= a[:, col]
        prev = g
        term = float(np.prod(sums))
        acc += -term if bin(g).count("1") & 1 else term
    return -acc if n & 1 else acc
