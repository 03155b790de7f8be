import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qra import dataset, haar, transport
from qra.errors import DegenerateSpectrumWarning, ShapeMismatch
from qra.transport import LabeledSample

from _oracles import (assignment_wasserstein1, lp_wasserstein1,
                      perm_wasserstein1)


def ls(values, n=8, label="s"):
    return LabeledSample(label=label, values=np.asarray(values, dtype=np.uint64),
                         n_qubits=n)


# metric basics -----------------------------------------------------------
def test_identical_samples_distance_zero():
    assert transport.wasserstein1(ls([3, 1, 4]), ls([4, 3, 1])) == 0.0


def test_spec_pair_examples_with_lp_oracle():
    x, y = ls([0, 0]), ls([1, 3])
    assert transport.wasserstein1(x, y) == pytest.approx(2.0, abs=1e-12)
    assert lp_wasserstein1([0, 0], [1, 3]) == pytest.approx(2.0, abs=1e-9)

    x, y = ls([0, 2]), ls([1, 1])
    assert transport.wasserstein1(x, y) == pytest.approx(1.0, abs=1e-12)
    assert lp_wasserstein1([0, 2], [1, 1]) == pytest.approx(1.0, abs=1e-9)


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        transport.wasserstein1(ls([1], n=4), ls([1], n=5))


def test_symmetry_exact():
    rng = np.random.default_rng(0)
    for _ in range(20):
        x = ls(rng.integers(0, 256, rng.integers(1, 30)))
        y = ls(rng.integers(0, 256, rng.integers(1, 30)))
        assert transport.wasserstein1(x, y) == transport.wasserstein1(y, x)


def test_triangle_inequality_random_triples():
    rng = np.random.default_rng(1)
    for _ in range(30):
        a, b, c = (ls(rng.integers(0, 256, rng.integers(1, 25))) for _ in range(3))
        dab = transport.wasserstein1(a, b)
        dbc = transport.wasserstein1(b, c)
        dac = transport.wasserstein1(a, c)
        assert dac <= dab + dbc + 1e-9


# oracle equivalence -------------------------------------------------------
def test_matches_lp_oracle_random_instances():
    rng = np.random.default_rng(2)
    for _ in range(60):
        xs = rng.integers(0, 8, rng.integers(1, 7))
        ys = rng.integers(0, 8, rng.integers(1, 7))
        got = transport.wasserstein1(ls(xs, n=3), ls(ys, n=3))
        assert got == pytest.approx(lp_wasserstein1(xs, ys), abs=1e-9)


def test_matches_permutation_brute_force_equal_sizes():
    rng = np.random.default_rng(3)
    for m in (2, 3, 4, 5):
        for _ in range(20):
            xs, ys = rng.integers(0, 8, m), rng.integers(0, 8, m)
            got = transport.wasserstein1(ls(xs, n=3), ls(ys, n=3))
            assert got == pytest.approx(perm_wasserstein1(xs, ys), abs=1e-12)


def test_matches_assignment_oracle_unequal_sizes():
    rng = np.random.default_rng(4)
    for _ in range(40):
        mx, my = rng.integers(1, 7), rng.integers(1, 7)
        xs, ys = rng.integers(0, 8, mx), rng.integers(0, 8, my)
        got = transport.wasserstein1(ls(xs, n=3), ls(ys, n=3))
        assert got == pytest.approx(assignment_wasserstein1(xs, ys), abs=1e-9)


# invariances ---------------------------------------------------------------
@settings(max_examples=60, deadline=None)
@given(xs=st.lists(st.integers(0, 200), min_size=1, max_size=12),
       ys=st.lists(st.integers(0, 200), min_size=1, max_size=12),
       c=st.integers(0, 50))
def test_translation_invariance(xs, ys, c):
    base = transport.wasserstein1(ls(xs), ls(ys))
    shifted = transport.wasserstein1(ls([v + c for v in xs]),
                                     ls([v + c for v in ys]))
    assert shifted == pytest.approx(base, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(xs=st.lists(st.integers(0, 60), min_size=1, max_size=10),
       ys=st.lists(st.integers(0, 60), min_size=1, max_size=10),
       k=st.integers(0, 4))
def test_scaling_homogeneity(xs, ys, k):
    base = transport.wasserstein1(ls(xs), ls(ys))
    scaled = transport.wasserstein1(ls([v * k for v in xs]),
                                    ls([v * k for v in ys]))
    assert scaled == pytest.approx(k * base, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(xs=st.lists(st.integers(0, 100), min_size=1, max_size=10),
       c=st.integers(0, 40))
def test_translation_of_one_sample_bounded_by_c(xs, c):
    base = transport.wasserstein1(ls(xs), ls([v + c for v in xs]))
    assert base <= c + 1e-9
    # non-interleaved supports are moved by exactly |c|
    hi = [v + max(xs) + c + 1 for v in xs]
    d = transport.wasserstein1(ls(xs), ls(hi))
    lo_gap = min(hi) - max(xs)
    assert d >= lo_gap - 1e-9


def test_large_values_near_53_bits_exact():
    big = 2 ** 53 - 1
    x = ls([0, big], n=53)
    y = ls([big, big], n=53)
    assert transport.wasserstein1(x, y) == pytest.approx(big / 2)


# distance matrices -----------------------------------------------------------
def test_distance_matrix_identical_pair():
    s = ls([1, 2, 3], label="a")
    t = ls([1, 2, 3], label="b")
    dm = transport.distance_matrix([s, t])
    assert np.array_equal(dm.d, np.zeros((2, 2)))


def test_distance_matrix_symmetric_zero_diag():
    rng = np.random.default_rng(5)
    samples = [ls(rng.integers(0, 256, 40), label=f"s{i}") for i in range(4)]
    dm = transport.distance_matrix(samples)
    assert dm.d.shape == (4, 4)
    assert np.array_equal(dm.d, dm.d.T)
    assert np.all(np.diag(dm.d) == 0)
    dm.validate()


def test_distance_matrix_normalization():
    a, b = ls([0, 0], label="a"), ls([8, 16], label="b")
    dm = transport.distance_matrix([a, b], normalize=True)
    assert dm.d[0, 1] == pytest.approx(12 / 256)
    assert dm.normalized


def test_distance_matrix_requires_common_width():
    with pytest.raises(ShapeMismatch):
        transport.distance_matrix([ls([1], n=4), ls([1], n=5)])


def test_cue_closer_to_classical_than_to_biased():
    # small-scale version of the ordering claim (full scale in acceptance)
    cue = haar.sample_cue_bitstrings(8, 50000, seed=6,
                                     mode=haar.SamplingMode.FIXED_UNITARY)
    cl = dataset.generate_classical(8, 50000, seed=7)
    bi = dataset.generate_classical(8, 50000, seed=8, p1=0.486)
    sc = LabeledSample.from_bitarray(cue)
    d_cl = transport.wasserstein1(sc, LabeledSample.from_bitarray(cl))
    d_bi = transport.wasserstein1(sc, LabeledSample.from_bitarray(bi))
    assert d_cl < d_bi


# embedding ---------------------------------------------------------------
def _dm(labels, mat):
    return transport.DistanceMatrix(labels=tuple(labels),
                                    d=np.asarray(mat, dtype=float),
                                    normalized=False, n_qubits=4)


def test_embed_equilateral_triangle():
    dm = _dm("abc", [[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    emb = transport.embed_2d(dm)
    pts = np.array([[x, y] for _, x, y in emb])
    for i in range(3):
        for j in range(i + 1, 3):
            assert np.linalg.norm(pts[i] - pts[j]) == pytest.approx(1.0, abs=1e-9)
    assert emb.residual < 1e-9


def test_embed_collinear_metric():
    dm = _dm("abc", [[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    with pytest.warns(DegenerateSpectrumWarning):
        emb = transport.embed_2d(dm)
    ys = [y for _, _, y in emb]
    assert np.max(np.abs(ys)) < 1e-9


def test_embed_recovers_planar_configuration():
    rng = np.random.default_rng(9)
    pts = rng.random((4, 2)) * 10
    d = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
    emb = transport.embed_2d(_dm("abcd", d))
    rec = np.array([[x, y] for _, x, y in emb])
    drec = np.linalg.norm(rec[:, None, :] - rec[None, :, :], axis=2)
    assert np.sqrt(np.mean((drec - d) ** 2)) < 1e-9
    assert emb.residual < 1e-9


def test_embed_orientation_is_deterministic():
    dm = _dm("abcd", [[0, 2, 3, 1], [2, 0, 2, 2], [3, 2, 0, 2.5], [1, 2, 2.5, 0]])
    e1 = transport.embed_2d(dm)
    e2 = transport.embed_2d(dm)
    assert e1.points == e2.points
    (x0, y0), (x1, y1) = e1.points[0][1:], e1.points[1][1:]
    assert (x0, y0) == (0.0, 0.0)
    assert x1 > 0 and abs(y1) < 1e-12


def test_embed_needs_three_points():
    with pytest.raises(ValueError):
        transport.embed_2d(_dm("ab", [[0, 1], [1, 0]]))
