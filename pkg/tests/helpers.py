"""Shared test utilities: direction grids, quadrature rules, synthetic data."""

import json
import math

import numpy as np

from hrtf4d.basis import BasisConfig, evaluate_matrix, index_set
from hrtf4d.dataset import Direction, MagnitudeSet
from hrtf4d.fitting import grid_samples

FS = 44100.0


def fibonacci_directions(n):
    """n roughly equidistributed directions covering the full sphere."""
    i = np.arange(n)
    golden = math.pi * (3.0 - math.sqrt(5.0))
    z = 1.0 - 2.0 * (i + 0.5) / n
    theta = np.arccos(z)
    phi = np.mod(golden * i, 2.0 * math.pi)
    return [Direction(float(p), float(t)) for p, t in zip(phi, theta)]


def bin_freqs(fs=FS, t=256):
    return np.arange(t // 2 + 1) * (fs / t)


def gauss_legendre(n):
    """Nodes/weights on [-1, 1], exact for polynomials of degree <= 2n - 1."""
    return np.polynomial.legendre.leggauss(n)


def gauss_chebyshev2(n):
    """Nodes/weights for int_{-1}^{1} h(u) sqrt(1 - u^2) du."""
    k = np.arange(1, n + 1)
    u = np.cos(k * np.pi / (n + 1))
    w = np.pi / (n + 1) * np.sin(k * np.pi / (n + 1)) ** 2
    return u, w


def synth_magnitudes(config: BasisConfig, n_dirs, freqs, seed=0, margin=0.5):
    """Magnitude set lying exactly in the basis span, with known coefficients.

    Data is shifted to be strictly positive by adding a multiple of the
    constant basis function, so the expected coefficients stay exact.
    Returns (mags, expected_coeffs).
    """
    rng = np.random.default_rng(seed)
    dirs = fibonacci_directions(n_dirs)
    coeffs = rng.standard_normal(len(index_set(config)))
    mags_stub = MagnitudeSet(
        "synth", "left", config.fs, dirs, freqs, np.zeros((n_dirs, freqs.size))
    )
    samples = grid_samples(mags_stub)
    design = evaluate_matrix(config, samples[:, 0], samples[:, 1], samples[:, 2])
    values = design @ coeffs
    const_col = float(design[0, 0])  # column 0 is the constant function
    shift = max(0.0, -values.min()) + margin
    coeffs = coeffs.copy()
    coeffs[0] += shift / const_col
    mags = MagnitudeSet(
        "synth",
        "left",
        config.fs,
        dirs,
        freqs,
        (values + shift).reshape(n_dirs, freqs.size),
    )
    return mags, coeffs


def smooth_magnitudes(n_dirs, freqs, fs=FS, seed=1, ear="left", subject="smooth"):
    """Smooth, strictly positive magnitude data not lying in any tested span."""
    rng = np.random.default_rng(seed)
    dirs = fibonacci_directions(n_dirs)
    az = np.array([d.azimuth for d in dirs])
    incl = np.array([d.inclination for d in dirs])
    fr = freqs / fs  # in [0, 0.5]
    a, b, c, d0, e = rng.uniform(0.5, 2.0, size=5)
    base = (
        1.5
        + a * np.outer(np.sin(incl) * np.cos(az), np.cos(2 * np.pi * fr))
        + b * np.outer(np.cos(incl), np.sin(3 * np.pi * fr))
        + c * np.outer(np.sin(2 * az) * np.sin(incl) ** 2, fr * (1 - fr))
        + d0 * np.outer(np.ones_like(az), np.exp(-8.0 * (fr - 0.25) ** 2))
        + e * np.outer(np.sin(incl) * np.sin(az), fr**2)
    )
    mags = np.abs(base) + 0.05
    return MagnitudeSet(subject, ear, fs, dirs, freqs, mags)


def write_manifest(dir_path, hrir_left, hrir_right, directions_deg, fs=FS,
                   subject="testsub"):
    """Write a manifest JSON plus CSV matrices; returns the manifest path."""
    left_csv = dir_path / "left.csv"
    right_csv = dir_path / "right.csv"
    np.savetxt(left_csv, hrir_left, delimiter=",", fmt="%.17g")
    np.savetxt(right_csv, hrir_right, delimiter=",", fmt="%.17g")
    manifest = dir_path / "manifest.json"
    manifest.write_text(
        json.dumps(
            {
                "subject_id": subject,
                "fs_hz": fs,
                "directions": [[float(a), float(e)] for a, e in directions_deg],
                "left_csv": "left.csv",
                "right_csv": "right.csv",
            }
        )
    )
    return manifest


def directions_to_degrees(dirs):
    return [
        (math.degrees(d.azimuth), 90.0 - math.degrees(d.inclination)) for d in dirs
    ]
