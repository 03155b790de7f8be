"""Bit-string sample files and the M x n bit-array data model.

A sample is a text file with one measured bit-string per line (ASCII '0'/'1',
leftmost character = qubit 0).  Measurement files are named
``measurements_n<N>_m<M>_s<S>_e<E>_p<PATTERN>.txt``; generated samples carry
synthetic metadata instead.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import BadRow, EmptyFile, MalformedName, TooWide

HISTOGRAM_MAX_QUBITS = 30  # dense count array capped at 2**30 entries
_NAME_RE = re.compile(r"measurements_n(\d+)_m(\d+)_s(\d+)_e(\d+)_p(\w+)\.txt$")


class CouplerPattern(enum.Enum):
    EFGH = "EFGH"
    ABCDCDAB = "ABCDCDAB"
    OTHER = "OTHER"


class Source(enum.Enum):
    GOOGLE_FILE = "google_file"
    CLASSICAL_PRNG = "classical_prng"
    CUE_SAMPLER = "cue_sampler"


@dataclass(frozen=True)
class SampleMeta:
    """Provenance of a bit-string sample."""

    n_qubits: int
    cycles: int = 0
    seed: int = 0
    elided: int = 0
    pattern: CouplerPattern = CouplerPattern.OTHER
    pattern_text: str = ""
    source: Source = Source.CLASSICAL_PRNG
    label: str = ""

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")

    def with_label(self, label: str) -> "SampleMeta":
        return replace(self, label=label)


@dataclass(frozen=True)
class BitArray:
    """An immutable M x n matrix of bits plus its provenance."""

    meta: SampleMeta
    bits: np.ndarray = field(repr=False)

    def __post_init__(self):
        b = np.ascontiguousarray(self.bits, dtype=np.uint8)
        if b.ndim != 2 or b.shape[0] < 1:
            raise ValueError("bits must be a non-empty 2-D array")
        if b.shape[1] != self.meta.n_qubits:
            raise ValueError(
                f"row length {b.shape[1]} != meta.n_qubits {self.meta.n_qubits}"
            )
        if b.size and b.max() > 1:
            raise ValueError("bit matrix entries must be 0 or 1")
        b.flags.writeable = False
        object.__setattr__(self, "bits", b)

    @property
    def rows(self) -> int:
        return self.bits.shape[0]

    @property
    def n_qubits(self) -> int:
        return self.bits.shape[1]

    def one_fraction(self) -> float:
        return float(self.bits.mean())


@dataclass(frozen=True)
class OutcomeHistogram:
    """Dense outcome counts b_x for x in [0, 2**n)."""

    n_qubits: int
    counts: np.ndarray = field(repr=False)
    total: int = 0

    def __post_init__(self):
        c = np.asarray(self.counts, dtype=np.int64)
        if c.shape != (1 << self.n_qubits,):
            raise ValueError("counts length must be 2**n_qubits")
        if c.min() < 0:
            raise ValueError("counts must be non-negative")
        total = int(c.sum())
        object.__setattr__(self, "counts", c)
        object.__setattr__(self, "total", total)

    @property
    def probabilities(self) -> np.ndarray:
        """Empirical p_x = b_x / M."""
        return self.counts / self.total


def parse_meta(filename: str) -> SampleMeta:
    """Extract metadata from a measurement-file name.

    Raises MalformedName when the name does not match the scheme, which
    signals a non-measurement file needing explicit metadata.
    """
    m = _NAME_RE.search(filename)
    if m is None:
        raise MalformedName(f"not a measurement file name: {filename!r}")
    n, cycles, seed, elided, pat = m.groups()
    try:
        pattern = CouplerPattern(pat)
    except ValueError:
        pattern = CouplerPattern.OTHER
    return SampleMeta(
        n_qubits=int(n),
        cycles=int(cycles),
        seed=int(seed),
        elided=int(elided),
        pattern=pattern,
        pattern_text=pat,
        source=Source.GOOGLE_FILE,
        label=f"n{n}_m{cycles}_s{seed}_e{elided}_p{pat}",
    )


def load_bitarray(path, meta: SampleMeta | None = None) -> BitArray:
    """Read a sample file into a BitArray.

    Lines are stripped of surrounding whitespace/CRLF; blank lines are
    skipped.  Each remaining line must be exactly n characters of '0'/'1'.
    When ``meta`` is omitted it is parsed from the file name.
    """
    path = str(path)
    if meta is None:
        meta = parse_meta(path)
    n = meta.n_qubits
    rows = []
    with open(path, "r") as fh:
        for line_no, line in enumerate(fh, start=1):
            s = line.strip()
            if not s:
                continue
            if len(s) != n or s.strip("01"):
                raise BadRow(line_no, f"line {line_no}: expected {n} chars of 0/1, got {s!r}")
            rows.append(s)
    if not rows:
        raise EmptyFile(f"no bit-string rows in {path}")
    flat = np.frombuffer("".join(rows).encode("ascii"), dtype=np.uint8) - ord("0")
    return BitArray(meta=meta, bits=flat.reshape(len(rows), n))


def write_bitarray(a: BitArray, path) -> None:
    """Write the canonical sample format (one bit-string per line, LF)."""
    digits = (a.bits + ord("0")).astype(np.uint8)
    with open(path, "wb") as fh:
        for row in digits:
            fh.write(row.tobytes())
            fh.write(b"\n")


def generate_classical(n: int, rows: int, seed: int, p1: float = 0.5,
                       label: str = "") -> BitArray:
    """Sample a bit array with i.i.d. Bernoulli(p1) entries.

    Deterministic for a fixed (n, rows, seed, p1); the generator is a
    128-bit-state PCG64 stream.
    """
    if n < 1 or rows < 1:
        raise ValueError("need n >= 1 and rows >= 1")
    if not 0.0 <= p1 <= 1.0:
        raise ValueError(f"p1 must be a probability, got {p1}")
    rng = np.random.default_rng(seed)
    bits = (rng.random((rows, n)) < p1).astype(np.uint8)
    meta = SampleMeta(
        n_qubits=n,
        seed=seed,
        source=Source.CLASSICAL_PRNG,
        label=label or f"classical_n{n}_M{rows}_s{seed}" + (f"_p{p1:g}" if p1 != 0.5 else ""),
    )
    return BitArray(meta=meta, bits=bits)


def rows_as_integers(a: BitArray) -> np.ndarray:
    """Decode each row as a big-endian integer (leftmost bit most significant).

    Returns a uint64 vector of length M, order preserved.
    """
    n = a.n_qubits
    if n > 64:
        raise TooWide(f"n={n} exceeds 64-bit integer decoding")
    out = np.zeros(a.rows, dtype=np.uint64)
    for j in range(n):
        out = (out << np.uint64(1)) | a.bits[:, j].astype(np.uint64)
    return out


def to_histogram(a: BitArray) -> OutcomeHistogram:
    """Count outcome occurrences b_x over all 2**n outcomes.

    Dense counting is capped at n <= 30: beyond that the histogram-based
    analyses stop being meaningful at desk scale anyway, since any feasible
    M leaves nearly all outcomes unobserved.
    """
    n = a.n_qubits
    if n > HISTOGRAM_MAX_QUBITS:
        raise TooWide(f"dense histogram needs n <= {HISTOGRAM_MAX_QUBITS}, got n={n}")
    x = rows_as_integers(a).astype(np.int64)
    counts = np.bincount(x, minlength=1 << n)
    return OutcomeHistogram(n_qubits=n, counts=counts)


def histogram_rows(h: OutcomeHistogram):
    """Yield (x, count, p) rows for CSV export."""
    p = h.probabilities
    for x in range(h.counts.shape[0]):
        yield x, int(h.counts[x]), float(p[x])
