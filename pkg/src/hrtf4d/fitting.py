"""Weighted least-squares fitting of 4D basis coefficients to magnitude data.

One large system covers all frequency-direction samples at once: row k of the
design matrix holds every basis function evaluated at sample k, and the
weighted normal equations (X^T W X) a = X^T W h are solved for the
coefficient vector a. The default solver scales rows by sqrt(w) and uses an
orthogonal factorization, which is better conditioned than forming the
normal equations explicitly; the explicit path is kept as a cross-check.
"""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .basis import BasisConfig, evaluate_matrix, index_set
from .dataset import MagnitudeSet
from .errors import (
    DimensionMismatchError,
    DomainError,
    ManifestError,
    MemoryBudgetError,
    UnderdeterminedError,
)

COEFF_FORMAT_VERSION = 1
COEFF_ORDERING = "lex(n,l,m)"


class SamplePoint(NamedTuple):
    """One frequency-direction sample: azimuth, inclination (rad), frequency (Hz)."""

    phi: float
    theta: float
    f: float


@dataclass(frozen=True)
class WeightSpec:
    """Frequency limits of full weight; samples outside get weight < 1."""

    f_l: float = 20.0
    f_u: float = 20000.0

    def __post_init__(self):
        if not 0 <= self.f_l < self.f_u:
            raise DomainError(f"need 0 <= f_l < f_u, got ({self.f_l}, {self.f_u})")


@dataclass
class CoefficientSet:
    """Fitted coefficients, ordered like index_set(config), plus provenance."""

    config: BasisConfig
    ear: str
    subject_id: str
    coeffs: np.ndarray = field(repr=False)
    fit_metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=float)
        expected = len(index_set(self.config))
        if self.coeffs.shape != (expected,):
            raise DimensionMismatchError(
                f"{self.coeffs.size} coefficients for a basis of size {expected}"
            )


def weight(f, spec: WeightSpec, fs):
    """Least-squares weight of a sample at frequency f.

    Zero below f_l, one on [f_l, f_u], then a slow cosine roll-off
    cos(2 (f - f_u) / (fs - f_u) * pi) above f_u, clamped at zero.
    """
    if f < spec.f_l:
        return 0.0
    if f <= spec.f_u:
        return 1.0
    return max(0.0, math.cos(2.0 * (f - spec.f_u) / (fs - spec.f_u) * math.pi))


def _weights(freqs, spec: WeightSpec, fs):
    freqs = np.asarray(freqs, dtype=float)
    w = np.ones_like(freqs)
    w[freqs < spec.f_l] = 0.0
    high = freqs > spec.f_u
    w[high] = np.maximum(
        0.0, np.cos(2.0 * (freqs[high] - spec.f_u) / (fs - spec.f_u) * np.pi)
    )
    return w


def _sample_arrays(samples):
    arr = np.asarray(samples, dtype=float)
    if arr.size == 0:
        return np.empty(0), np.empty(0), np.empty(0)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise DimensionMismatchError(f"samples must be K x 3, got shape {arr.shape}")
    return arr[:, 0], arr[:, 1], arr[:, 2]


def assemble_design_matrix(config: BasisConfig, samples, mem_budget_gb=4.0):
    """Dense K x N design matrix; entry (k, j) is basis function j at sample k.

    Raises MemoryBudgetError before allocating if the matrix alone would
    exceed ``mem_budget_gb``.
    """
    phi, theta, f = _sample_arrays(samples)
    n_funcs = len(index_set(config))
    needed = phi.size * n_funcs * 8
    if needed > mem_budget_gb * 2**30:
        raise MemoryBudgetError(
            f"design matrix {phi.size} x {n_funcs} needs {needed / 2**30:.2f} GiB, "
            f"budget is {mem_budget_gb} GiB"
        )
    if phi.size:
        if theta.min() < 0 or theta.max() > math.pi:
            raise DomainError("inclination outside [0, pi]")
        if f.min() < 0 or f.max() > config.fs / 2:
            raise DomainError(f"frequency outside [0, {config.fs / 2}]")
    return evaluate_matrix(config, phi, theta, f)


def grid_samples(mags: MagnitudeSet):
    """Direction-major (K, 3) sample array covering the full magnitude grid."""
    az = np.array([d.azimuth for d in mags.directions])
    incl = np.array([d.inclination for d in mags.directions])
    n_f = mags.freqs.size
    return np.column_stack(
        [
            np.repeat(az, n_f),
            np.repeat(incl, n_f),
            np.tile(mags.freqs, az.size),
        ]
    )


def fit(
    config: BasisConfig,
    mags: MagnitudeSet,
    spec: WeightSpec = WeightSpec(),
    solver="qr",
    mem_budget_gb=4.0,
) -> CoefficientSet:
    """Fit basis coefficients to a magnitude set by weighted least squares.

    Zero-weight samples are dropped before assembly (they cannot influence
    the solution). ``solver`` is ``"qr"`` (orthogonal factorization of the
    sqrt(w)-scaled system) or ``"normal"`` (explicit normal equations).
    """
    if solver not in ("qr", "normal"):
        raise ValueError(f"unknown solver {solver!r}")
    if abs(mags.fs - config.fs) > 1e-9:
        raise DimensionMismatchError(
            f"magnitude set fs {mags.fs} does not match basis fs {config.fs}"
        )
    samples = grid_samples(mags)
    h = mags.magnitudes.reshape(-1)
    w = np.tile(_weights(mags.freqs, spec, config.fs), len(mags.directions))
    keep = w > 0
    n_funcs = len(index_set(config))
    if keep.sum() < n_funcs:
        raise UnderdeterminedError(
            f"{int(keep.sum())} weighted samples cannot determine {n_funcs} coefficients"
        )
    design = assemble_design_matrix(config, samples[keep], mem_budget_gb)
    sqrt_w = np.sqrt(w[keep])
    a = design * sqrt_w[:, None]
    b = sqrt_w * h[keep]
    if solver == "qr":
        coeffs, _, rank, svals = np.linalg.lstsq(a, b, rcond=None)
        if rank < n_funcs:
            raise UnderdeterminedError(
                f"weighted design has rank {rank} < {n_funcs} coefficients"
            )
        cond = float(svals[0] / svals[-1])
    else:
        gram = a.T @ a
        rhs = a.T @ b
        try:
            coeffs = np.linalg.solve(gram, rhs)
        except np.linalg.LinAlgError as exc:
            raise UnderdeterminedError(f"normal equations singular: {exc}") from exc
        cond = float(math.sqrt(np.linalg.cond(gram)))
    residual = float(np.linalg.norm(a @ coeffs - b))
    return CoefficientSet(
        config=config,
        ear=mags.ear,
        subject_id=mags.subject_id,
        coeffs=coeffs,
        fit_metadata={
            "f_l": spec.f_l,
            "f_u": spec.f_u,
            "solver": solver,
            "weighted_residual": residual,
            "condition": cond,
            "n_samples_used": int(keep.sum()),
        },
    )


def decode(cs: CoefficientSet, queries, mem_budget_gb=4.0):
    """Reconstruct magnitudes at arbitrary (phi, theta, f) query points.

    Returns the raw weighted sum; values may be negative (clamping is an
    evaluation-time concern).
    """
    design = assemble_design_matrix(cs.config, queries, mem_budget_gb)
    return design @ cs.coeffs


def save_coefficients(cs: CoefficientSet, path):
    """Write a coefficient set as an interchange JSON document."""
    doc = {
        "format_version": COEFF_FORMAT_VERSION,
        "subject_id": cs.subject_id,
        "ear": cs.ear,
        "family": cs.config.family.value,
        "L": cs.config.L,
        "eta": cs.config.eta,
        "fs_hz": cs.config.fs,
        "weight": {
            "f_l": cs.fit_metadata.get("f_l", WeightSpec().f_l),
            "f_u": cs.fit_metadata.get("f_u", WeightSpec().f_u),
        },
        "ordering": COEFF_ORDERING,
        "coeffs": [float(c) for c in cs.coeffs],
        "fit": {
            k: cs.fit_metadata[k]
            for k in ("solver", "weighted_residual", "condition", "n_samples_used")
            if k in cs.fit_metadata
        },
    }
    Path(path).write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")


def load_coefficients(path) -> CoefficientSet:
    """Read a coefficient JSON written by save_coefficients."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise ManifestError(f"cannot read coefficient file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ManifestError(f"coefficient file {path} is not valid JSON: {exc}") from exc
    if doc.get("format_version") != COEFF_FORMAT_VERSION:
        raise ValueError(
            f"unsupported coefficient format {doc.get('format_version')!r} in {path}"
        )
    if doc.get("ordering") != COEFF_ORDERING:
        raise ValueError(f"unsupported coefficient ordering {doc.get('ordering')!r}")
    config = BasisConfig(
        family=doc["family"], L=doc["L"], eta=doc["eta"], fs=doc["fs_hz"]
    )
    meta = {"f_l": doc["weight"]["f_l"], "f_u": doc["weight"]["f_u"]}
    meta.update(doc.get("fit", {}))
    return CoefficientSet(
        config=config,
        ear=doc["ear"],
        subject_id=doc["subject_id"],
        coeffs=np.asarray(doc["coeffs"], dtype=float),
        fit_metadata=meta,
    )
