"""Randomness audit toolkit for quantum random-circuit bit-string samples.

Subpackages mirror the analysis pipeline: ``dataset`` owns the M x n
bit-array model and file formats, ``haar`` samples circular-ensemble
unitaries and scores cross-entropy fidelity, ``ensembles`` computes heat
maps and random-matrix spectra, ``nist`` runs the statistical battery,
``transport`` measures Wasserstein-1 distances, and ``cli`` ties it all
together.
"""
from . import errors
from .dataset import (
    BitArray,
    CouplerPattern,
    OutcomeHistogram,
    SampleMeta,
    Source,
    generate_classical,
    load_bitarray,
    parse_meta,
    rows_as_integers,
    to_histogram,
    write_bitarray,
)
from .errors import QraError
from .haar import (
    EmpiricalDensity,
    SamplingMode,
    UnitarySample,
    cue_eigvec_density,
    eigenphase_rows,
    empirical_density,
    sample_cue_bitstrings,
    sample_cue_unitaries,
    sample_cue_unitary,
    unitary_eigenphases,
    xeb_fidelity,
)
from .ensembles import (
    ColumnBiasReport,
    ComplexSpectrum,
    HeatMap,
    RealSpectrum,
    SquareEnsemble,
    column_bias_report,
    ginibre_spectrum,
    heatmap,
    mean_shift,
    mp_bounds,
    mp_density,
    slice_square,
    wishart_spectrum,
)
from .nist import BitStream, TestId, TestReport, Verdict, run_battery
from .transport import (
    DistanceMatrix,
    Embedding,
    LabeledSample,
    distance_matrix,
    embed_2d,
    wasserstein1,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
