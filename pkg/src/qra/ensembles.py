"""Random-matrix ensembles sliced from bit arrays.

Three views of the same M x n sample: entrywise means (heat maps and
per-qubit bias), complex spectra of square bit matrices against the Girko
circle law, and Wishart spectra of rectangular blocks against the
Marchenko-Pastur density.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dataset import BitArray
from .errors import EigenFailure, TooFewRows

OUTLIER_MARGIN = 0.2  # bulk/outlier split: |lambda| > radius * (1 + margin)
MP_BULK_TOL = 0.05    # slack added to the MP support when splitting bulk
WISHART_SIGMA2 = 0.25  # variance of the centered half-shifted entries Z/2


@dataclass(frozen=True)
class SquareEnsemble:
    """Consecutive n x n blocks sliced row-wise from a bit array."""

    n: int
    matrices: np.ndarray = field(repr=False)  # (count, n, n) uint8

    @property
    def count(self) -> int:
        return self.matrices.shape[0]


@dataclass(frozen=True)
class HeatMap:
    n: int
    mean_matrix: np.ndarray
    column_means: np.ndarray
    p1: float


@dataclass(frozen=True)
class ColumnBiasReport:
    column_means: np.ndarray
    p1: float
    threshold: float
    flagged: tuple


@dataclass(frozen=True)
class ComplexSpectrum:
    """Eigenvalues of scaled square bit matrices, split into bulk/outliers."""

    eigenvalues: np.ndarray
    disk_radius: float
    outliers: np.ndarray
    per_matrix: np.ndarray = field(default=None, repr=False)  # (count, n)

    @property
    def bulk(self) -> np.ndarray:
        limit = self.disk_radius * (1.0 + OUTLIER_MARGIN)
        return self.eigenvalues[np.abs(self.eigenvalues) <= limit]


@dataclass(frozen=True)
class RealSpectrum:
    """Wishart eigenvalues with the Marchenko-Pastur bulk partition."""

    eigenvalues: np.ndarray
    bulk: np.ndarray
    outliers: np.ndarray
    gamma: float
    sigma2: float
    block_tops: np.ndarray  # largest eigenvalue of each block


def slice_square(a: BitArray) -> SquareEnsemble:
    """Slice consecutive n-row blocks into square matrices (leftover dropped)."""
    n = a.n_qubits
    count = a.rows // n
    if count < 1:
        raise TooFewRows(f"need at least n={n} rows, got {a.rows}")
    m = a.bits[: count * n].reshape(count, n, n)
    return SquareEnsemble(n=n, matrices=m)


def heatmap(a: BitArray) -> HeatMap:
    """Entrywise mean (n/M) * sum(X_k) plus per-qubit one-fractions."""
    ens = slice_square(a)
    n = a.n_qubits
    mean_matrix = ens.matrices.sum(axis=0, dtype=np.int64) * (n / a.rows)
    column_means = a.bits.mean(axis=0)
    return HeatMap(n=n, mean_matrix=mean_matrix,
                   column_means=column_means, p1=a.one_fraction())


def column_bias_report(a: BitArray, sigmas: float = 4.0) -> ColumnBiasReport:
    """Flag qubit columns whose one-fraction strays > sigmas standard errors
    from the overall fraction (the stripe detector)."""
    means = a.bits.mean(axis=0)
    p1 = a.one_fraction()
    threshold = sigmas * math.sqrt(max(p1 * (1 - p1), 0.0) / a.rows)
    flagged = tuple(int(j) for j in np.nonzero(np.abs(means - p1) > threshold)[0])
    return ColumnBiasReport(column_means=means, p1=p1,
                            threshold=threshold, flagged=flagged)


def mean_shift(x: np.ndarray) -> np.ndarray:
    """Z = 2X - J: map {0,1} entries to {-1,+1}."""
    x = np.asarray(x)
    if x.size and (x.min() < 0 or x.max() > 1):
        raise ValueError("entries must be in {0,1}")
    return (2 * x.astype(np.int8) - 1).astype(np.int8)


def ginibre_spectrum(e: SquareEnsemble, count: int | None = None,
                     shifted: bool = False) -> ComplexSpectrum:
    """Complex eigenvalues of the first `count` matrices, scaled by 1/sqrt(n).

    Unshifted mode diagonalizes X_k / sqrt(n): the bulk fills a disk of
    radius 1/2 and each matrix contributes one large real outlier from its
    nonzero mean.  Shifted mode diagonalizes (2 X_k - J) / (2 sqrt(n)),
    which centers the entries and removes the outlier while keeping the
    same bulk radius.
    """
    if e.n < 2:
        raise ValueError("need n >= 2 for a meaningful spectrum")
    if count is None:
        count = e.count
    if not 1 <= count <= e.count:
        raise ValueError(f"count must be in 1..{e.count}, got {count}")
    mats = e.matrices[:count].astype(np.float64)
    if shifted:
        mats = (2.0 * mats - 1.0) / 2.0
    mats /= math.sqrt(e.n)
    try:
        eig = np.linalg.eigvals(mats)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(str(exc)) from exc
    radius = 0.5
    flat = eig.reshape(-1)
    outliers = flat[np.abs(flat) > radius * (1.0 + OUTLIER_MARGIN)]
    return ComplexSpectrum(eigenvalues=flat, disk_radius=radius,
                           outliers=outliers, per_matrix=eig)


def mp_bounds(gamma: float, sigma2: float) -> tuple[float, float]:
    """Marchenko-Pastur support edges sigma^2 (1 +/- sqrt(gamma))^2."""
    if not 0 < gamma <= 1:
        raise ValueError("gamma must be in (0, 1]")
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    root = math.sqrt(gamma)
    return sigma2 * (1 - root) ** 2, sigma2 * (1 + root) ** 2


def mp_density(lam, gamma: float, sigma2: float):
    """Marchenko-Pastur density, zero outside the support."""
    lo, hi = mp_bounds(gamma, sigma2)
    lam_arr = np.asarray(lam, dtype=np.float64)
    with np.errstate(invalid="ignore", divide="ignore"):
        inside = (lam_arr >= lo) & (lam_arr <= hi) & (lam_arr > 0)
        rho = np.where(
            inside,
            np.sqrt(np.abs((hi - lam_arr) * (lam_arr - lo)))
            / (2 * np.pi * gamma * sigma2 * np.where(lam_arr > 0, lam_arr, 1.0)),
            0.0,
        )
    return float(rho) if np.isscalar(lam) else rho


def wishart_spectrum(a: BitArray, gamma: float,
                     sigma2: float = WISHART_SIGMA2,
                     tol: float = MP_BULK_TOL) -> RealSpectrum:
    """Eigenvalues of W = X^t X / p over consecutive p x n blocks.

    p = round(n / gamma); eigenvalues within [lower - tol, upper + tol] of
    the Marchenko-Pastur support (at the centered variance sigma2 = 1/4)
    form the bulk, the rest are outliers.  Each block carries one large
    outlier near n/4 from the all-ones mean component.
    """
    if not 0 < gamma <= 1:
        raise ValueError("gamma must be in (0, 1]")
    n = a.n_qubits
    p_rows = round(n / gamma)
    nblocks = a.rows // p_rows
    if nblocks < 1:
        raise TooFewRows(f"need at least p={p_rows} rows, got {a.rows}")
    blocks = a.bits[: nblocks * p_rows].reshape(nblocks, p_rows, n).astype(np.float64)
    w = np.einsum("kpi,kpj->kij", blocks, blocks) / p_rows
    try:
        eig = np.linalg.eigvalsh(w)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(str(exc)) from exc
    block_tops = eig.max(axis=1)
    flat = np.sort(eig.reshape(-1))
    lo, hi = mp_bounds(gamma, sigma2)
    in_bulk = (flat >= lo - tol) & (flat <= hi + tol)
    return RealSpectrum(eigenvalues=flat, bulk=flat[in_bulk],
                        outliers=flat[~in_bulk], gamma=gamma, sigma2=sigma2,
                        block_tops=block_tops)
