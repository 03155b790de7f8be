"""Haar-measure (CUE) unitary sampling and derived statistics.

Unitaries are drawn by QR-factoring a matrix of i.i.d. standard complex
Gaussians and multiplying Q by the phases of R's diagonal.  The phase
correction is what makes the distribution exactly Haar; plain QR output is
biased (the regression tests check both facts).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .dataset import BitArray, OutcomeHistogram, SampleMeta, Source, rows_as_integers
from .errors import DimensionTooLarge, DomainError, NonUnitary, ShapeMismatch

MAX_QUBITS = 12  # N = 4096, the practical desk limit for dense unitaries
UNITARITY_TOL = 1e-10

#: published linear cross-entropy fidelity of the 53-qubit experiment;
#: recorded for reference, not reproducible without supercomputer amplitudes.
GOOGLE_XEB_N53 = 0.00224


class SamplingMode(enum.Enum):
    FRESH_UNITARY_PER_SHOT = "fresh"
    FIXED_UNITARY = "fixed"


@dataclass(frozen=True)
class UnitarySample:
    """A sampled unitary with its output amplitudes on |0...0>."""

    n_qubits: int
    unitary: np.ndarray = field(repr=False)
    amplitudes: np.ndarray = field(repr=False)
    probs: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    @classmethod
    def from_unitary(cls, n_qubits: int, u: np.ndarray) -> "UnitarySample":
        u = np.asarray(u, dtype=np.complex128)
        amps = u[:, 0].copy()
        probs = np.abs(amps) ** 2
        return cls(n_qubits=n_qubits, unitary=u, amplitudes=amps, probs=probs)


@dataclass(frozen=True)
class EmpiricalDensity:
    """Normalized histogram over the scaled variable u = N * p."""

    grid: np.ndarray
    density: np.ndarray
    sample_count: int

    def integral(self) -> float:
        return float(np.sum(self.density * np.diff(self.grid)))


def _check_qubits(n: int):
    if not 1 <= n <= MAX_QUBITS:
        raise DimensionTooLarge(f"sampler supports 1 <= n <= {MAX_QUBITS}, got {n}")


def _haar_batch(dim: int, count: int, rng, phase_fix: bool = True) -> np.ndarray:
    """Stack of `count` Haar unitaries of size dim (phase_fix=False is the
    known-biased plain-QR variant, kept for regression tests)."""
    z = (rng.standard_normal((count, dim, dim))
         + 1j * rng.standard_normal((count, dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    if phase_fix:
        d = np.einsum("kii->ki", r)
        q = q * (d / np.abs(d))[:, None, :]
    return q


def sample_cue_unitary(n: int, seed: int) -> UnitarySample:
    """Draw one Haar unitary on U(2**n) with its outcome distribution."""
    _check_qubits(n)
    rng = np.random.default_rng(seed)
    u = _haar_batch(1 << n, 1, rng)[0]
    return UnitarySample.from_unitary(n, u)


def sample_cue_unitaries(n: int, count: int, seed: int,
                         chunk: int = 256) -> list[UnitarySample]:
    """Draw `count` independent Haar unitaries (batched QR, spawned seeds)."""
    _check_qubits(n)
    dim = 1 << n
    chunk = max(1, min(chunk, (1 << 24) // (dim * dim) or 1))
    streams = np.random.SeedSequence(seed).spawn((count + chunk - 1) // chunk)
    out = []
    for i, ss in enumerate(streams):
        take = min(chunk, count - i * chunk)
        for u in _haar_batch(dim, take, np.random.default_rng(ss)):
            out.append(UnitarySample.from_unitary(n, u))
    return out


def sample_bitstrings_from_unitary(us: UnitarySample, rows: int, seed: int,
                                   label: str = "") -> BitArray:
    """Draw `rows` measurement outcomes from a fixed unitary's distribution.

    Inverse-CDF sampling over the cumulative outcome probabilities.
    """
    if rows < 1:
        raise ValueError("rows must be >= 1")
    rng = np.random.default_rng(seed)
    cdf = np.cumsum(us.probs)
    cdf[-1] = 1.0
    x = np.searchsorted(cdf, rng.random(rows), side="right")
    return _outcomes_to_bitarray(x, us.n_qubits, seed, SamplingMode.FIXED_UNITARY, label)


def _outcomes_to_bitarray(x, n, seed, mode, label=""):
    shifts = np.arange(n - 1, -1, -1, dtype=np.uint64)
    bits = ((x.astype(np.uint64)[:, None] >> shifts) & np.uint64(1)).astype(np.uint8)
    meta = SampleMeta(
        n_qubits=n, seed=seed, source=Source.CUE_SAMPLER,
        label=label or f"cue_n{n}_{mode.value}_s{seed}",
    )
    return BitArray(meta=meta, bits=bits)


def sample_cue_bitstrings(n: int, rows: int, seed: int,
                          mode: SamplingMode = SamplingMode.FRESH_UNITARY_PER_SHOT,
                          label: str = "") -> BitArray:
    """Generate measurement bit-strings from random circular-ensemble unitaries.

    FIXED_UNITARY draws one Haar unitary and samples all rows from its
    outcome distribution (the experiment's setup).  FRESH_UNITARY_PER_SHOT
    resamples the unitary for every row; since only the first column matters
    for a |0...0> input, each row's outcome distribution is taken from an
    independent uniformly-random state vector (a normalized complex Gaussian
    vector, which is exactly the first column of a Haar unitary).
    """
    _check_qubits(n)
    if rows < 1:
        raise ValueError("rows must be >= 1")
    mode = SamplingMode(mode)
    if mode is SamplingMode.FIXED_UNITARY:
        us = sample_cue_unitary(n, seed)
        return sample_bitstrings_from_unitary(us, rows, seed + 1, label=label)
    dim = 1 << n
    rng = np.random.default_rng(seed)
    out = np.empty(rows, dtype=np.int64)
    chunk = max(1, (1 << 23) // dim)
    for s in range(0, rows, chunk):
        e = min(s + chunk, rows)
        z = rng.standard_normal((e - s, dim)) + 1j * rng.standard_normal((e - s, dim))
        p = np.abs(z) ** 2
        p /= p.sum(axis=1, keepdims=True)
        cdf = np.cumsum(p, axis=1)
        cdf[:, -1] = 1.0
        u = rng.random(e - s)
        out[s:e] = (cdf < u[:, None]).sum(axis=1)
    return _outcomes_to_bitarray(out, n, seed, mode, label)


def cue_eigvec_density(u, dim: int | None = None):
    """Density of the scaled overlap u = N * p for a Haar-random state.

    For finite N this is ((N-1)/N) * (1 - u/N)**(N-2) on 0 <= u <= N; with
    ``dim=None`` the large-N limit exp(-u) is returned.  Accepts scalars or
    arrays.
    """
    u_arr = np.asarray(u, dtype=np.float64)
    if np.any(u_arr < 0):
        raise DomainError("u must be >= 0")
    if dim is None:
        out = np.exp(-u_arr)
    else:
        if dim < 2:
            raise DomainError("dim must be >= 2")
        if np.any(u_arr > dim):
            raise DomainError(f"u must be <= N = {dim}")
        with np.errstate(divide="ignore", invalid="ignore"):
            log_term = (dim - 2) * np.log1p(-u_arr / dim)
        out = (dim - 1) / dim * np.where(u_arr == dim, 0.0 if dim > 2 else 1.0,
                                         np.exp(log_term))
    return float(out) if np.isscalar(u) else out


def empirical_density(h: OutcomeHistogram, bins: int) -> EmpiricalDensity:
    """Histogram of u = N * p_x over all outcomes, normalized to unit area."""
    if bins < 2:
        raise ValueError("bins must be >= 2")
    dim = 1 << h.n_qubits
    u = dim * h.probabilities
    top = float(u.max())
    grid = np.linspace(0.0, top if top > 0 else 1.0, bins + 1)
    density, _ = np.histogram(u, bins=grid, density=True)
    return EmpiricalDensity(grid=grid, density=density, sample_count=dim)


def xeb_fidelity(sample: BitArray, probs) -> float:
    """Linear cross-entropy fidelity 2**n * mean(p(x_i)) - 1.

    Scores observed rows against a supplied outcome distribution; 1 for
    ideal sampling from that distribution's circular-ensemble state, 0 for
    uniform sampling.
    """
    probs = np.asarray(probs, dtype=np.float64)
    n = sample.n_qubits
    if probs.shape != (1 << n,):
        raise ShapeMismatch(f"probs must have length 2**{n}, got {probs.shape}")
    if abs(float(probs.sum()) - 1.0) > 1e-8:
        raise ValueError("probs must sum to 1 within 1e-8")
    x = rows_as_integers(sample).astype(np.int64)
    return float((1 << n) * probs[x].mean() - 1.0)


def unitary_eigenphases(samples) -> np.ndarray:
    """All eigenvalue phases (in (-pi, pi]) of a sequence of unitaries.

    Raises NonUnitary when any eigenvalue modulus strays beyond 1e-8 from 1.
    """
    return np.angle(_unit_eigenvalues(samples))


def _unit_eigenvalues(samples) -> np.ndarray:
    samples = list(samples)
    if not samples:
        raise ValueError("need at least one unitary sample")
    values = []
    for us in samples:
        w = np.linalg.eigvals(us.unitary)
        err = np.max(np.abs(np.abs(w) - 1.0))
        if err > 1e-8:
            raise NonUnitary(f"eigenvalue modulus deviates by {err:.3e}")
        values.append(w)
    return np.concatenate(values)


def eigenphase_rows(samples):
    """(re, im, phase) rows of every eigenvalue, for CSV export."""
    w = _unit_eigenvalues(samples)
    return [(float(z.real), float(z.imag), float(np.angle(z))) for z in w]
