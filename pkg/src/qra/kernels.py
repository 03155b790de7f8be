"""Bit-stream kernel dispatch.

The compiled extension carries the kernels where a scalar loop beats
vectorized numpy (pattern counting, GF(2) ranks, per-block run scans);
the remaining two are pure-numpy ops that are already memory-bound and
stay that way even when the extension is present.  Without the extension
everything falls back to numpy.  ``QRA_PURE_PYTHON=1`` forces the
fallback; ``benchmarks/bench_kernels.py`` compares the two.
"""
import os

import numpy as np

from . import _bitkernels_py

if os.environ.get("QRA_PURE_PYTHON"):
    _compiled = None
else:
    try:
        from . import _bitkernels as _compiled  # type: ignore[attr-defined]
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"

# kernels where the scalar compiled loop wins; the rest stay on numpy
_COMPILED_WINS = ("longest_runs", "gf2_ranks", "pattern_counts")


def _impl_of(name: str):
    if _compiled is not None and name in _COMPILED_WINS:
        return getattr(_compiled, name)
    return getattr(_bitkernels_py, name)


def _as_bits(a):
    b = np.ascontiguousarray(a, dtype=np.uint8)
    if b.ndim != 1:
        raise ValueError("expected a 1-D bit array")
    return b


def transitions(bits) -> int:
    return int(_impl_of("transitions")(_as_bits(bits)))


def longest_runs(bits, block_len: int):
    if block_len < 1:
        raise ValueError("block_len must be >= 1")
    return np.asarray(_impl_of("longest_runs")(_as_bits(bits), block_len),
                      dtype=np.int64)


def gf2_ranks(bits, q: int):
    if not 1 <= q <= 64:
        raise ValueError("q must be in 1..64")
    return np.asarray(_impl_of("gf2_ranks")(_as_bits(bits), q), dtype=np.int64)


def template_counts(bits, template, block_len: int):
    t = _as_bits(template)
    if block_len < t.shape[0]:
        raise ValueError("block_len must be >= template length")
    return np.asarray(_impl_of("template_counts")(_as_bits(bits), t, block_len),
                      dtype=np.int64)


def pattern_counts(bits, m: int):
    if not 1 <= m <= 25:
        raise ValueError("pattern width m must be in 1..25")
    b = _as_bits(bits)
    if b.shape[0] < m:
        raise ValueError("stream must be at least m bits long")
    return np.asarray(_impl_of("pattern_counts")(b, m), dtype=np.int64)
