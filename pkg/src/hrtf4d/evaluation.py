"""Reconstruction-error analysis: MSE aggregates, subject representatives,
configuration sweeps and Pareto frontiers.

All error figures use the energy-normalized mean square error in linear
magnitude scale, as a percentage. Negative reconstructed magnitudes have no
physical meaning and are clamped to zero before comparison; samples whose
frequency lies outside the hearing range (20 Hz - 20 kHz by default) are
excluded everywhere.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .basis import BasisConfig, BasisFamily, count_hsh, count_scs
from .dataset import (
    MagnitudeSet,
    direction_to_degrees,
    flip_right_ear,
    hearing_range_mask,
)
from .errors import DimensionMismatchError, ZeroDenominatorError
from .fitting import CoefficientSet, WeightSpec, decode, fit, grid_samples


@dataclass
class ErrorReport:
    """MSE aggregates for one fitted configuration."""

    config: BasisConfig
    ear: str  # "left", "right" or "both" (ear-averaged aggregates)
    overall_mse: float
    mse_by_frequency: list
    mse_by_direction: Optional[list] = None


@dataclass
class SweepEntry:
    family: str
    L: int
    eta: float
    n_coeffs: Optional[int]
    mse_percent: Optional[float]
    error: Optional[str] = None


@dataclass
class SweepResult:
    entries: list = field(default_factory=list)


def mse(decoded, reference, mask=None):
    """Energy-normalized squared error in percent, negative decodes clamped.

    100 * sum |max(decoded, 0) - reference|^2 / sum |reference|^2 over the
    masked-in samples.
    """
    decoded = np.asarray(decoded, dtype=float)
    reference = np.asarray(reference, dtype=float)
    if decoded.shape != reference.shape:
        raise DimensionMismatchError(
            f"decoded {decoded.shape} vs reference {reference.shape}"
        )
    if mask is not None:
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != reference.shape:
            raise DimensionMismatchError(f"mask shape {mask.shape} does not match data")
        decoded = decoded[mask]
        reference = reference[mask]
    denom = float(np.sum(reference * reference))
    if denom == 0.0:
        raise ZeroDenominatorError("reference energy is zero under the mask")
    err = np.maximum(decoded, 0.0) - reference
    return 100.0 * float(np.sum(err * err)) / denom


def _decoded_grid(cs: CoefficientSet, mags: MagnitudeSet, mem_budget_gb=4.0):
    if abs(cs.config.fs - mags.fs) > 1e-9:
        raise DimensionMismatchError(
            f"coefficient fs {cs.config.fs} does not match data fs {mags.fs}"
        )
    values = decode(cs, grid_samples(mags), mem_budget_gb)
    return values.reshape(mags.magnitudes.shape)


def overall_mse(cs: CoefficientSet, mags: MagnitudeSet, f_l=20.0, f_u=20000.0):
    """Single-value MSE over all directions and in-range frequency bins."""
    decoded = _decoded_grid(cs, mags)
    col_mask = hearing_range_mask(mags.freqs, f_l, f_u)
    mask = np.broadcast_to(col_mask, decoded.shape)
    return mse(decoded, mags.magnitudes, mask)


def mse_by_frequency(cs: CoefficientSet, mags: MagnitudeSet, f_l=20.0, f_u=20000.0):
    """Per-frequency-bin MSE averaged over all directions.

    Returns a list of (frequency_hz, mse_percent); out-of-range bins are
    omitted.
    """
    decoded = _decoded_grid(cs, mags)
    keep = hearing_range_mask(mags.freqs, f_l, f_u)
    return [
        (float(mags.freqs[k]), mse(decoded[:, k], mags.magnitudes[:, k]))
        for k in np.nonzero(keep)[0]
    ]


def _per_direction(cs, mags, f_l, f_u):
    decoded = _decoded_grid(cs, mags)
    keep = hearing_range_mask(mags.freqs, f_l, f_u)
    return [
        mse(decoded[d, keep], mags.magnitudes[d, keep])
        for d in range(len(mags.directions))
    ]


def _direction_key(d):
    return (round(d.azimuth, 9), round(d.inclination, 9))


def mse_by_direction(
    cs_left: CoefficientSet,
    cs_right: CoefficientSet,
    mags_left: MagnitudeSet,
    mags_right: MagnitudeSet,
    f_l=20.0,
    f_u=20000.0,
):
    """Per-direction MSE averaged over in-range frequencies and both ears.

    Right-ear directions are mirrored across the median plane before
    aggregation, so left and right contributions line up at the same
    relative direction; values are averaged where mirrored directions match.
    """
    if len(mags_left.directions) != len(mags_right.directions):
        raise DimensionMismatchError("ears measured on different direction grids")
    left_vals = _per_direction(cs_left, mags_left, f_l, f_u)
    right_vals = _per_direction(cs_right, mags_right, f_l, f_u)
    flipped = flip_right_ear(mags_right.directions)
    buckets = {}
    order = []
    for d, v in zip(mags_left.directions, left_vals):
        key = _direction_key(d)
        buckets.setdefault(key, (d, []))[1].append(v)
        order.append(key)
    for d, v in zip(flipped, right_vals):
        key = _direction_key(d)
        if key not in buckets:
            buckets[key] = (d, [])
            order.append(key)
        buckets[key][1].append(v)
    out = []
    seen = set()
    for key in order:
        if key in seen:
            continue
        seen.add(key)
        d, vals = buckets[key]
        out.append((d, float(np.mean(vals))))
    return out


def direction_map_difference(map_a, map_b):
    """Elementwise difference of two per-direction MSE maps (a minus b)."""
    b_by_key = {_direction_key(d): v for d, v in map_b}
    out = []
    for d, v in map_a:
        key = _direction_key(d)
        if key not in b_by_key:
            raise DimensionMismatchError(f"direction {d} missing from second map")
        out.append((d, v - b_by_key[key]))
    return out


def ard_are(mse_table):
    """Average relative difference and error of per-subject MSE vs the mean.

    ``mse_table`` is subjects x configurations. For each subject, the signed
    relative deviation of its MSE from the cross-subject mean is averaged
    over configurations (ARD); ARE averages the absolute deviations.
    Both are percentages.
    """
    table = np.asarray(mse_table, dtype=float)
    if table.ndim != 2 or table.shape[0] < 2 or table.shape[1] < 1:
        raise DimensionMismatchError(
            f"need a subjects x configs table with >= 2 subjects, got {table.shape}"
        )
    mean = table.mean(axis=0)
    if np.any(mean == 0):
        raise ZeroDenominatorError("cross-subject mean MSE is zero for some config")
    rel = (table - mean) / mean * 100.0
    return rel.mean(axis=1), np.abs(rel).mean(axis=1)


def pareto_frontier(result: SweepResult) -> SweepResult:
    """Undominated sweep entries, minimizing both coefficient count and MSE.

    An entry is dominated if some other entry is no worse on both criteria
    and strictly better on at least one. Failed entries (no MSE) are ignored.
    Output is sorted by coefficient count ascending.
    """
    ok = [e for e in result.entries if e.mse_percent is not None]
    ok.sort(key=lambda e: (e.n_coeffs, e.mse_percent))
    front = []
    best_mse = best_n = None
    for e in ok:
        if best_mse is None or e.mse_percent < best_mse:
            best_mse, best_n = e.mse_percent, e.n_coeffs
            front.append(e)
        elif e.mse_percent == best_mse and e.n_coeffs == best_n:
            front.append(e)  # exact duplicate of the current best: not dominated
    return SweepResult(entries=front)


def basis_size(family, L, eta):
    """Coefficient count for a family/order combination."""
    family = BasisFamily(family)
    if family is BasisFamily.HSH:
        return count_hsh(L, eta)
    return count_scs(L, eta)


def sweep(
    mags_left: MagnitudeSet,
    mags_right: MagnitudeSet,
    families,
    L_list,
    eta_list,
    spec: WeightSpec = WeightSpec(),
    mem_budget_gb=4.0,
) -> SweepResult:
    """Fit every (family, L, eta) combination and record ear-averaged MSE.

    Entries whose fit fails (memory budget, rank, invalid orders) are kept
    with an error marker so partial sweeps stay usable. Entries are
    independent of each other; order of results follows the input grids.
    """
    entries = []
    for family in families:
        for L in L_list:
            for eta in eta_list:
                try:
                    n_coeffs = basis_size(family, L, eta)
                except Exception:
                    n_coeffs = None
                try:
                    config = BasisConfig(
                        family=family, L=L, eta=eta, fs=mags_left.fs
                    )
                    per_ear = []
                    for mags in (mags_left, mags_right):
                        cs = fit(config, mags, spec, mem_budget_gb=mem_budget_gb)
                        per_ear.append(overall_mse(cs, mags, spec.f_l, spec.f_u))
                    entry = SweepEntry(
                        family=BasisFamily(family).value,
                        L=int(L),
                        eta=float(eta),
                        n_coeffs=n_coeffs,
                        mse_percent=float(np.mean(per_ear)),
                    )
                except Exception as exc:
                    entry = SweepEntry(
                        family=str(family),
                        L=int(L),
                        eta=float(eta),
                        n_coeffs=n_coeffs,
                        mse_percent=None,
                        error=f"{type(exc).__name__}: {exc}",
                    )
                entries.append(entry)
    return SweepResult(entries=entries)


def _fmt(x):
    return repr(float(x))


def write_mse_by_frequency_csv(rows, path):
    """CSV emitter: freq_hz, mse_percent."""
    lines = ["freq_hz,mse_percent"]
    lines += [f"{_fmt(f)},{_fmt(v)}" for f, v in rows]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def write_mse_by_direction_csv(rows, path):
    """CSV emitter: azimuth_deg, elevation_deg, mse_percent."""
    lines = ["azimuth_deg,elevation_deg,mse_percent"]
    for d, v in rows:
        az, el = direction_to_degrees(d)
        lines.append(f"{_fmt(az)},{_fmt(el)},{_fmt(v)}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def write_sweep_csv(result: SweepResult, path):
    """CSV emitter: family, L, eta, n_coeffs, mse_percent, pareto_flag, error."""
    front = {id(e) for e in pareto_frontier(result).entries}
    lines = ["family,L,eta,n_coeffs,mse_percent,pareto_flag,error"]
    for e in result.entries:
        n = "" if e.n_coeffs is None else str(e.n_coeffs)
        v = "" if e.mse_percent is None else _fmt(e.mse_percent)
        flag = 1 if id(e) in front else 0
        err = e.error or ""
        lines.append(f'{e.family},{e.L},{_fmt(e.eta)},{n},{v},{flag},"{err}"')
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
