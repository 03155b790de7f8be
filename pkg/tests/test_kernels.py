"""Backend equivalence and naive-oracle checks for the bit kernels."""
import numpy as np
import pytest

from qra import _bitkernels_py as py_impl
from qra import kernels

try:
    from qra import _bitkernels as cy_impl
except ImportError:
    cy_impl = None

BACKENDS = [pytest.param(py_impl, id="python")]
if cy_impl is not None:
    BACKENDS.append(pytest.param(cy_impl, id="cython"))


@pytest.fixture(scope="module")
def stream():
    rng = np.random.default_rng(42)
    return (rng.random(300000) < 0.5).astype(np.uint8)


def naive_longest_run(block):
    best = cur = 0
    for b in block:
        cur = cur + 1 if b else 0
        best = max(best, cur)
    return best


def naive_rank(mat):
    # rank = log2 of the row-span size
    span = {0}
    for row in mat:
        v = int("".join(map(str, row)), 2)
        span |= {s ^ v for s in span}
    return int(np.log2(len(span)))


@pytest.mark.parametrize("impl", BACKENDS)
def test_transitions(impl, stream):
    expect = int(np.count_nonzero(np.diff(stream.astype(np.int8))))
    assert impl.transitions(stream) == expect


@pytest.mark.parametrize("impl", BACKENDS)
def test_longest_runs_vs_naive(impl):
    rng = np.random.default_rng(0)
    bits = (rng.random(4096) < 0.7).astype(np.uint8)
    got = np.asarray(impl.longest_runs(bits, 128))
    want = [naive_longest_run(bits[i * 128:(i + 1) * 128]) for i in range(32)]
    assert got.tolist() == want


@pytest.mark.parametrize("impl", BACKENDS)
def test_gf2_ranks_vs_span_oracle(impl):
    rng = np.random.default_rng(1)
    for q in (3, 5, 8):
        bits = (rng.random(q * q * 50) < 0.5).astype(np.uint8)
        got = np.asarray(impl.gf2_ranks(bits, q))
        want = [naive_rank(bits[k * q * q:(k + 1) * q * q].reshape(q, q))
                for k in range(50)]
        assert got.tolist() == want


@pytest.mark.parametrize("impl", BACKENDS)
def test_template_counts_vs_naive(impl):
    rng = np.random.default_rng(2)
    bits = (rng.random(2000) < 0.6).astype(np.uint8)
    tpl = np.array([1, 1, 0, 1], dtype=np.uint8)
    got = np.asarray(impl.template_counts(bits, tpl, 100))
    want = []
    for k in range(20):
        block = bits[k * 100:(k + 1) * 100]
        want.append(sum(1 for j in range(97)
                        if np.array_equal(block[j:j + 4], tpl)))
    assert got.tolist() == want


@pytest.mark.parametrize("impl", BACKENDS)
@pytest.mark.parametrize("m", [1, 2, 3, 7])
def test_pattern_counts_vs_naive(impl, m):
    rng = np.random.default_rng(3)
    bits = (rng.random(500) < 0.5).astype(np.uint8)
    got = np.asarray(impl.pattern_counts(bits, m))
    aug = np.concatenate([bits, bits[: m - 1]]) if m > 1 else bits
    want = np.zeros(1 << m, dtype=int)
    for i in range(500):
        v = 0
        for j in range(m):
            v = (v << 1) | int(aug[i + j])
        want[v] += 1
    assert got.tolist() == want.tolist()
    assert got.sum() == 500


@pytest.mark.skipif(cy_impl is None, reason="compiled kernels not built")
def test_backends_agree(stream):
    assert py_impl.transitions(stream) == cy_impl.transitions(stream)
    for fn, args in [
        ("longest_runs", (stream, 10 ** 4)),
        ("gf2_ranks", (stream, 32)),
        ("template_counts", (stream, np.ones(9, dtype=np.uint8), 1032)),
        ("pattern_counts", (stream, 16)),
    ]:
        a = np.asarray(getattr(py_impl, fn)(*args))
        b = np.asarray(getattr(cy_impl, fn)(*args))
        assert np.array_equal(a, b), fn


def test_dispatch_validates_arguments(stream):
    with pytest.raises(ValueError):
        kernels.pattern_counts(stream, 0)
    with pytest.raises(ValueError):
        kernels.pattern_counts(stream[:3], 5)
    with pytest.raises(ValueError):
        kernels.gf2_ranks(stream, 65)
    with pytest.raises(ValueError):
        kernels.template_counts(stream, np.ones(9, dtype=np.uint8), 4)
