"""Wasserstein-1 distances between integer-decoded bit-string samples.

In one dimension the optimal-transport problem has a closed form: for
equal sample sizes it is the mean absolute difference of the sorted
samples, in general the integral of the absolute difference of the two
empirical CDFs.  Both paths are exact and deterministic, which is what
makes the brute-force LP equivalence tests meaningful.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .dataset import BitArray, rows_as_integers
from .errors import DegenerateSpectrumWarning, ShapeMismatch


@dataclass(frozen=True)
class LabeledSample:
    """Integer-decoded sample rows under a display label."""

    label: str
    values: np.ndarray = field(repr=False)
    n_qubits: int = 0

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=np.uint64)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("values must be a non-empty 1-D array")
        if self.n_qubits < 64 and v.size and int(v.max()) >> self.n_qubits:
            raise ValueError(f"values must be < 2**{self.n_qubits}")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @classmethod
    def from_bitarray(cls, a: BitArray, label: str | None = None) -> "LabeledSample":
        return cls(label=label or a.meta.label or "sample",
                   values=rows_as_integers(a), n_qubits=a.n_qubits)

    def sorted_values(self) -> np.ndarray:
        return np.sort(self.values)


@dataclass(frozen=True)
class DistanceMatrix:
    labels: tuple
    d: np.ndarray
    normalized: bool
    n_qubits: int

    def validate(self, tol: float = 1e-9):
        """Check metric axioms (symmetry, zero diagonal, triangle inequality)."""
        d = self.d
        scale = max(1.0, float(d.max())) if d.size else 1.0
        if not np.allclose(d, d.T, atol=tol * scale):
            raise ValueError("distance matrix not symmetric")
        if np.any(np.abs(np.diag(d)) > tol * scale):
            raise ValueError("nonzero diagonal")
        if np.any(d < -tol * scale):
            raise ValueError("negative distance")
        k = d.shape[0]
        for m in range(k):
            if np.any(d > d[:, m][:, None] + d[m, :][None, :] + tol * scale):
                raise ValueError("triangle inequality violated")


@dataclass(frozen=True)
class Embedding:
    points: tuple  # of (label, x, y)
    residual: float

    def __iter__(self):
        return iter(self.points)


def _abs_diff(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # exact |a - b| for uint64 without signed overflow
    return (np.maximum(a, b) - np.minimum(a, b)).astype(np.float64)


def wasserstein1(x: LabeledSample, y: LabeledSample) -> float:
    """Order-1 Wasserstein distance between two integer samples."""
    if x.n_qubits != y.n_qubits:
        raise ShapeMismatch(f"samples have different widths: "
                            f"{x.n_qubits} vs {y.n_qubits}")
    xs, ys = x.sorted_values(), y.sorted_values()
    return _w1_sorted(xs, ys)


def _w1_sorted(xs: np.ndarray, ys: np.ndarray) -> float:
    if xs.shape[0] == ys.shape[0]:
        return float(np.mean(_abs_diff(xs, ys)))
    # unequal sizes: exact integral of |F_x - F_y| over merged breakpoints
    t = np.union1d(xs, ys)
    fx = np.searchsorted(xs, t, side="right") / xs.shape[0]
    fy = np.searchsorted(ys, t, side="right") / ys.shape[0]
    dt = (t[1:] - t[:-1]).astype(np.float64)
    return float(np.sum(np.abs(fx[:-1] - fy[:-1]) * dt))


def distance_matrix(samples, normalize: bool = False) -> DistanceMatrix:
    """All-pairs Wasserstein-1 distances (each sample sorted once)."""
    samples = list(samples)
    if len(samples) < 2:
        raise ValueError("need at least two samples")
    n = samples[0].n_qubits
    if any(s.n_qubits != n for s in samples):
        raise ShapeMismatch("all samples must share n_qubits")
    sorted_vals = [s.sorted_values() for s in samples]
    k = len(samples)
    d = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            d[i, j] = d[j, i] = _w1_sorted(sorted_vals[i], sorted_vals[j])
    if normalize:
        d = d / float(2 ** n)
    dm = DistanceMatrix(labels=tuple(s.label for s in samples), d=d,
                        normalized=normalize, n_qubits=n)
    dm.validate()
    return dm


def embed_2d(dm: DistanceMatrix) -> Embedding:
    """Classical MDS embedding of a distance matrix into the plane.

    Orientation is fixed for deterministic output: the first point sits at
    the origin, the second on the positive x-axis, and the first point off
    that axis has positive y.  When fewer than two positive eigenvalues
    exist the missing coordinates are zero (points on a line) and a
    DegenerateSpectrumWarning is issued.
    """
    d = dm.d
    k = d.shape[0]
    if k < 3:
        raise ValueError("need >= 3 points for a 2-D embedding")
    h = np.eye(k) - np.ones((k, k)) / k
    b = -0.5 * h @ (d ** 2) @ h
    evals, evecs = np.linalg.eigh(b)
    order = np.argsort(evals)[::-1]
    evals, evecs = evals[order], evecs[:, order]
    n_pos = int(np.count_nonzero(evals > max(1e-12, 1e-12 * abs(evals[0]))))
    if n_pos < 2:
        warnings.warn("fewer than two positive eigenvalues; embedding is collinear",
                      DegenerateSpectrumWarning, stacklevel=2)
    coords = np.zeros((k, 2))
    for axis in range(min(2, n_pos)):
        coords[:, axis] = evecs[:, axis] * np.sqrt(evals[axis])
    coords = _orient(coords)
    emb = coords[:, None, :] - coords[None, :, :]
    residual = float(np.sqrt(np.mean((np.linalg.norm(emb, axis=2) - d) ** 2)))
    points = tuple((lbl, float(xy[0]), float(xy[1]))
                   for lbl, xy in zip(dm.labels, coords))
    return Embedding(points=points, residual=residual)


def _orient(coords: np.ndarray) -> np.ndarray:
    out = coords - coords[0]
    # rotate so point 1 lands on the positive x-axis
    v = out[1]
    norm = np.hypot(v[0], v[1])
    if norm > 0:
        c, s = v[0] / norm, v[1] / norm
        rot = np.array([[c, s], [-s, c]])
        out = out @ rot.T
    # reflect so the first point with |y| > tol has y > 0
    scale = max(1.0, float(np.abs(out).max()))
    for row in out:
        if abs(row[1]) > 1e-12 * scale:
            if row[1] < 0:
                out[:, 1] = -out[:, 1]
            break
    return out
