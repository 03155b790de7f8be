"""Independent oracles used by the transport and NIST tests.

These deliberately avoid the library's own code paths: the transport
oracles solve the coupling problem directly (LP, permutation enumeration,
or assignment on an upsampled instance), and the bit helpers generate
reference streams from first principles.
"""
import itertools
import math

import numpy as np
from scipy.optimize import linear_sum_assignment, linprog


def lp_wasserstein1(xs, ys):
    """Exact LP over couplings with the empirical marginals (Eq.-style
    brute force: minimize sum lambda_ij |x_i - y_j|)."""
    xv, xc = np.unique(np.asarray(xs, dtype=np.int64), return_counts=True)
    yv, yc = np.unique(np.asarray(ys, dtype=np.int64), return_counts=True)
    p, q = xc / xc.sum(), yc / yc.sum()
    nx, ny = len(xv), len(yv)
    cost = np.abs(xv[:, None] - yv[None, :]).astype(float).ravel()
    a_eq = np.zeros((nx + ny, nx * ny))
    for i in range(nx):
        a_eq[i, i * ny:(i + 1) * ny] = 1.0
    for j in range(ny):
        a_eq[nx + j, j::ny] = 1.0
    res = linprog(cost, A_eq=a_eq, b_eq=np.concatenate([p, q]),
                  bounds=(0, None), method="highs")
    assert res.success, res.message
    return float(res.fun)


def perm_wasserstein1(xs, ys):
    """Brute force over all couplings of two equal-size samples.

    With uniform atom masses the LP optimum sits at a permutation
    (Birkhoff), so enumerating permutations is the exact minimum.
    """
    xs, ys = np.asarray(xs, dtype=np.int64), np.asarray(ys, dtype=np.int64)
    assert xs.shape == ys.shape
    m = xs.shape[0]
    best = math.inf
    for perm in itertools.permutations(range(m)):
        best = min(best, np.abs(xs[list(perm)] - ys).sum())
    return best / m


def perm_wasserstein1_batch(x_block, y_block):
    """Vectorized permutation brute force over many equal-size pairs."""
    m = x_block.shape[1]
    perms = np.array(list(itertools.permutations(range(m))))
    best = np.full(x_block.shape[0], np.iinfo(np.int32).max, dtype=np.int32)
    y16 = y_block.astype(np.int16)
    for perm in perms:
        cost = np.abs(x_block[:, perm].astype(np.int16) - y16).sum(
            axis=1, dtype=np.int32)
        np.minimum(best, cost, out=best)
    return best / m


def assignment_wasserstein1(xs, ys):
    """Exact W1 for unequal sizes: replicate both samples to the lcm size
    and solve the assignment problem (Jonker-Volgenant, independent of the
    CDF-integral code path)."""
    xs, ys = np.asarray(xs, dtype=np.int64), np.asarray(ys, dtype=np.int64)
    size = math.lcm(xs.shape[0], ys.shape[0])
    xr = np.repeat(xs, size // xs.shape[0])
    yr = np.repeat(ys, size // ys.shape[0])
    cost = np.abs(xr[:, None] - yr[None, :])
    ri, ci = linear_sum_assignment(cost)
    return float(cost[ri, ci].sum()) / size


def all_multisets(max_size, n_values):
    """All sorted value tuples of sizes 1..max_size over 0..n_values-1,
    grouped by size."""
    groups = {}
    for m in range(1, max_size + 1):
        groups[m] = np.array(
            list(itertools.combinations_with_replacement(range(n_values), m)),
            dtype=np.int8,
        )
    return groups


def reference_bits(name, nbits):
    """First nbits of the binary expansion of a mathematical constant
    (integer part included), as the reference suite's data files do."""
    import gmpy2

    gmpy2.get_context().precision = nbits + 64
    value = {"e": gmpy2.exp(1), "pi": gmpy2.const_pi(),
             "sqrt2": gmpy2.sqrt(2)}[name]
    mant, _ = value.as_mantissa_exp()
    digits = bin(int(mant))[2:]
    assert len(digits) >= nbits
    return np.frombuffer(digits[:nbits].encode(), dtype=np.uint8) - ord("0")
