"""Loading HRIR measurement sets and converting them to magnitude spectra.

Measurement sets are described by a small JSON manifest referencing two CSV
matrices (one impulse response per row, one row per direction):

    {
      "subject_id": "pp55",
      "fs_hz": 44100.0,
      "directions": [[az_deg, elevation_deg], ...],
      "left_csv": "left.csv",
      "right_csv": "right.csv"
    }

Directions are stored on disk as azimuth/elevation in degrees (elevation +90
at the top); in memory they become azimuth/inclination in radians with
inclination theta = pi/2 - elevation.
"""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatchError, ManifestError


class Direction(NamedTuple):
    """Direction on the sphere: azimuth in [0, 2 pi), inclination in [0, pi]
    (inclination 0 points up)."""

    azimuth: float
    inclination: float


def direction_from_degrees(az_deg, el_deg):
    """Build a Direction from azimuth/elevation in degrees."""
    if not -90.0 <= el_deg <= 90.0:
        raise ManifestError(f"elevation {el_deg} outside [-90, 90] degrees")
    return Direction(math.radians(az_deg % 360.0), math.radians(90.0 - el_deg))


def direction_to_degrees(d: Direction):
    """Return (azimuth_deg, elevation_deg) for a Direction."""
    return math.degrees(d.azimuth), 90.0 - math.degrees(d.inclination)


@dataclass
class HrirSet:
    """Per-subject head-related impulse responses for both ears."""

    subject_id: str
    fs: float
    directions: list
    left: np.ndarray
    right: np.ndarray

    def __post_init__(self):
        if self.fs <= 0:
            raise ManifestError(f"sampling frequency must be positive, got {self.fs}")
        if len(self.directions) == 0:
            raise ManifestError("direction list is empty")
        d = len(self.directions)
        if self.left.shape != self.right.shape or self.left.ndim != 2:
            raise DimensionMismatchError(
                f"ear matrices disagree: left {self.left.shape}, right {self.right.shape}"
            )
        if self.left.shape[0] != d:
            raise DimensionMismatchError(
                f"{d} directions but {self.left.shape[0]} impulse-response rows"
            )
        if self.left.shape[1] % 2 != 0:
            raise ManifestError(f"impulse-response length {self.left.shape[1]} is odd")


@dataclass
class MagnitudeSet:
    """One-sided linear magnitude spectra on a direction-by-frequency grid."""

    subject_id: str
    ear: str
    fs: float
    directions: list
    freqs: np.ndarray = field(repr=False)
    magnitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.ear not in ("left", "right"):
            raise ValueError(f"ear must be 'left' or 'right', got {self.ear!r}")
        if self.magnitudes.shape != (len(self.directions), self.freqs.size):
            raise DimensionMismatchError(
                f"magnitude matrix {self.magnitudes.shape} does not match "
                f"{len(self.directions)} directions x {self.freqs.size} bins"
            )
        if np.any(self.magnitudes < 0):
            raise ValueError("magnitudes must be non-negative")
        if np.any(np.diff(self.freqs) <= 0):
            raise ValueError("frequency bins must be strictly increasing")


def load_hrir(manifest_path) -> HrirSet:
    """Parse a manifest JSON plus its CSV matrices into an HrirSet."""
    path = Path(manifest_path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ManifestError(f"manifest {path} is not valid JSON: {exc}") from exc
    missing = [
        k
        for k in ("subject_id", "fs_hz", "directions", "left_csv", "right_csv")
        if k not in doc
    ]
    if missing:
        raise ManifestError(f"manifest {path} missing fields: {', '.join(missing)}")
    raw_dirs = doc["directions"]
    if not isinstance(raw_dirs, list) or not raw_dirs:
        raise ManifestError(f"manifest {path} has an empty direction list")
    try:
        directions = [direction_from_degrees(az, el) for az, el in raw_dirs]
    except (TypeError, ValueError) as exc:
        raise ManifestError(f"bad direction entry in {path}: {exc}") from exc
    ears = {}
    for key in ("left_csv", "right_csv"):
        csv_path = path.parent / doc[key]
        try:
            ears[key] = np.loadtxt(csv_path, delimiter=",", ndmin=2, dtype=float)
        except OSError as exc:
            raise ManifestError(f"cannot read {csv_path}: {exc}") from exc
        except ValueError as exc:
            raise ManifestError(f"malformed CSV {csv_path}: {exc}") from exc
    return HrirSet(
        subject_id=str(doc["subject_id"]),
        fs=float(doc["fs_hz"]),
        directions=directions,
        left=ears["left_csv"],
        right=ears["right_csv"],
    )


def magnitude_spectra(hrirs: HrirSet, ear: str) -> MagnitudeSet:
    """One-sided magnitude of the DFT of each impulse response; phase discarded."""
    if ear not in ("left", "right"):
        raise ValueError(f"ear must be 'left' or 'right', got {ear!r}")
    data = hrirs.left if ear == "left" else hrirs.right
    t = data.shape[1]
    return MagnitudeSet(
        subject_id=hrirs.subject_id,
        ear=ear,
        fs=hrirs.fs,
        directions=list(hrirs.directions),
        freqs=np.arange(t // 2 + 1) * (hrirs.fs / t),
        magnitudes=np.abs(np.fft.rfft(data, axis=1)),
    )


def flip_right_ear(dirs):
    """Mirror directions across the median (sagittal) plane: phi -> 2 pi - phi."""
    return [
        Direction((2.0 * math.pi - d.azimuth) % (2.0 * math.pi), d.inclination)
        for d in dirs
    ]


def hearing_range_mask(freqs, f_l=20.0, f_u=20000.0):
    """Boolean mask selecting bins with f_l <= f <= f_u (bounds inclusive)."""
    freqs = np.asarray(freqs, dtype=float)
    return (freqs >= f_l) & (freqs <= f_u)
