"""Four families of 4D basis functions for magnitude directivity data.

Each basis function factors into a real spherical harmonic Y_l^m over
direction and a one-dimensional factor over frequency:

* ``hsh``    -- hyperspherical harmonics on the 3-sphere; frequency is mapped
  linearly onto the angle psi in [0, pi/2] (0 Hz at the hyperpole, Nyquist at
  the hyperequator) and only functions symmetric about the hyperequator
  (even n - l) are retained.
* ``shfs``   -- Y_l^m times a cosine Fourier series in frequency.
* ``shfbs``  -- Y_l^m times a Fourier-Bessel series J_0(mu_n 2f/fs).
* ``shrfbs`` -- the Fourier-Bessel series mirrored in frequency, so that
  variability grows toward high frequencies.

Index sets are ordered lexicographically by (n, l, m) so coefficient vectors
are interchangeable between implementations.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .special import bessel_j0, bessel_j0_root, gegenbauer_table, real_sh, sh_table


class BasisFamily(str, Enum):
    HSH = "hsh"
    SHFS = "shfs"
    SHFBS = "shfbs"
    SHRFBS = "shrfbs"


class BasisIndex(NamedTuple):
    """Identifies one 4D basis function: frequency order n, SH degree l, SH order m."""

    n: int
    l: int
    m: int


@dataclass(frozen=True)
class BasisConfig:
    """Basis family plus the orders that fully determine it.

    ``L`` caps both SH degree and order (l_max = m_max = L). ``eta`` is the
    frequency approximation order: for the spherindrical families it equals
    n_max and must be a non-negative integer; for hyperspherical harmonics
    n_max = 2 eta, so eta may take half-integer values.
    """

    family: BasisFamily
    L: int
    eta: float
    fs: float

    def __post_init__(self):
        object.__setattr__(self, "family", BasisFamily(self.family))
        if self.L < 0 or self.L != int(self.L):
            raise DomainError(f"L must be a non-negative integer, got {self.L}")
        object.__setattr__(self, "L", int(self.L))
        if self.fs <= 0:
            raise DomainError(f"sampling frequency must be positive, got {self.fs}")
        steps = 2.0 * self.eta if self.family is BasisFamily.HSH else float(self.eta)
        if self.eta < 0 or abs(steps - round(steps)) > 1e-9:
            kind = "multiple of 0.5" if self.family is BasisFamily.HSH else "integer"
            raise DomainError(
                f"eta must be a non-negative {kind} for {self.family.value}, got {self.eta}"
            )
        object.__setattr__(self, "eta", float(self.eta))

    @property
    def n_max(self) -> int:
        if self.family is BasisFamily.HSH:
            return int(round(2.0 * self.eta))
        return int(round(self.eta))


def psi_of_f(f, fs):
    """Map frequency in [0, fs/2] linearly onto the angle psi = pi f / fs."""
    if f < 0 or f > fs / 2:
        raise DomainError(f"frequency {f} outside [0, {fs / 2}]")
    return math.pi * f / fs


def count_scs(L, eta):
    """Number of basis functions for the spherindrical families: (L+1)^2 (eta+1)."""
    L, eta = _check_orders(L, eta, half_steps=False)
    return (L + 1) ** 2 * (eta + 1)


def count_hsh(L, eta):
    """Number of retained hyperspherical harmonics for given L and eta.

    Counts (n, l, m) with n <= 2 eta, l <= min(n, L), |m| <= l and n - l
    even; eta may be a half-integer.
    """
    L, eta = _check_orders(L, eta, half_steps=True)
    n_max = int(round(2 * eta))
    total = 0
    for n in range(n_max + 1):
        for l in range(min(n, L) + 1):
            if (n - l) % 2 == 0:
                total += 2 * l + 1
    return total


def _check_orders(L, eta, half_steps):
    if L < 0 or L != int(L):
        raise DomainError(f"L must be a non-negative integer, got {L}")
    steps = 2.0 * eta if half_steps else float(eta)
    if eta < 0 or abs(steps - round(steps)) > 1e-9:
        kind = "multiple of 0.5" if half_steps else "integer"
        raise DomainError(f"eta must be a non-negative {kind}, got {eta}")
    return int(L), (float(eta) if half_steps else int(round(eta)))


def matched_eta(L, eta_scs):
    """Half-step eta for which the retained-HSH count best matches count_scs.

    Scans eta in steps of 0.5 and returns the value minimizing the absolute
    count difference, breaking ties toward the larger eta.
    """
    target = count_scs(L, eta_scs)
    best_eta, best_gap = 0.0, abs(count_hsh(L, 0) - target)
    k = 0
    while True:
        k += 1
        eta_m = 0.5 * k
        count = count_hsh(L, eta_m)
        gap = abs(count - target)
        if gap <= best_gap:
            best_eta, best_gap = eta_m, gap
        elif count > target:
            break  # counts only grow from here, so the gap can only widen
    return best_eta


def hsh_index_set(n_max, L=None):
    """Retained (hyperequator-symmetric) HSH indices up to n_max, lex ordered."""
    cap = n_max if L is None else L
    out = []
    for n in range(n_max + 1):
        for l in range(min(n, cap) + 1):
            if (n - l) % 2 == 0:
                out.extend(BasisIndex(n, l, m) for m in range(-l, l + 1))
    return out


def index_set(config: BasisConfig):
    """Ordered list of BasisIndex for a configuration (ascending (n, l, m))."""
    if config.family is BasisFamily.HSH:
        return hsh_index_set(config.n_max, config.L)
    out = []
    for n in range(config.n_max + 1):
        for l in range(config.L + 1):
            out.extend(BasisIndex(n, l, m) for m in range(-l, l + 1))
    return out


def _hsh_log_prefactor(n, l):
    # 2^l l! sqrt(2 (n+1) (n-l)! / (pi (n+l+1)!)), evaluated in log space so
    # that high orders (n_max ~ 140) cannot overflow
    return (
        l * math.log(2.0)
        + math.lgamma(l + 1)
        + 0.5
        * (
            math.log(2.0 * (n + 1))
            + math.lgamma(n - l + 1)
            - math.log(math.pi)
            - math.lgamma(n + l + 2)
        )
    )


def hsh(n, l, m, phi, theta, psi):
    """Real hyperspherical harmonic Z_nlm at (phi, theta, psi), orthonormal
    over the 3-sphere with measure sin^2(psi) sin(theta)."""
    if n < 0 or l < 0 or l > n or abs(m) > l:
        raise DomainError(f"invalid HSH indices n={n}, l={l}, m={m}")
    if psi < 0 or psi > math.pi:
        raise DomainError(f"psi {psi} outside [0, pi]")
    pref = math.exp(_hsh_log_prefactor(n, l))
    radial = pref * math.sin(psi) ** l * gegenbauer_table(n - l, l + 1, [math.cos(psi)])[n - l, 0]
    return radial * real_sh(l, m, phi, theta)


def hsh_matrix(indices, phi, theta, psi):
    """Matrix of HSH values: entry (k, j) = Z_{indices[j]}(phi_k, theta_k, psi_k)."""
    phi = np.asarray(phi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    psi = np.asarray(psi, dtype=float)
    l_max = max((ix.l for ix in indices), default=0)
    n_max = max((ix.n for ix in indices), default=0)
    sh = sh_table(l_max, phi, theta)
    psi_u, inv = np.unique(psi, return_inverse=True)
    cos_u, sin_u = np.cos(psi_u), np.sin(psi_u)
    radial = {}
    for l in range(l_max + 1):
        geg = gegenbauer_table(n_max - l, l + 1, cos_u)
        sin_l = sin_u**l
        for n in range(l, n_max + 1, 2):
            radial[(n, l)] = math.exp(_hsh_log_prefactor(n, l)) * sin_l * geg[n - l]
    out = np.empty((phi.size, len(indices)))
    for j, (n, l, m) in enumerate(indices):
        out[:, j] = radial[(n, l)][inv] * sh[:, l * l + l + m]
    return out


def _scs_radial_table(config, f_unique):
    """Frequency factors per order n at unique frequencies, shape (n_max+1, U)."""
    ratio = f_unique / config.fs
    out = np.empty((config.n_max + 1, f_unique.size))
    out[0] = 1.0
    for n in range(1, config.n_max + 1):
        if config.family is BasisFamily.SHFS:
            out[n] = np.cos(math.pi * n * ratio)
        elif config.family is BasisFamily.SHFBS:
            out[n] = bessel_j0(bessel_j0_root(n) * 2.0 * ratio)
        else:  # SHRFBS
            out[n] = bessel_j0(bessel_j0_root(n) * np.abs(1.0 - 2.0 * ratio))
    return out


def evaluate_matrix(config: BasisConfig, phi, theta, f):
    """Dense basis matrix over sample arrays; columns follow index_set order.

    Frequency-dependent factors are computed once per unique frequency, which
    makes direction-by-frequency product grids cheap.
    """
    phi = np.asarray(phi, dtype=float)
    theta = np.asarray(theta, dtype=float)
    f = np.asarray(f, dtype=float)
    indices = index_set(config)
    if phi.size == 0:
        return np.empty((0, len(indices)))
    if config.family is BasisFamily.HSH:
        return hsh_matrix(indices, phi, theta, math.pi * f / config.fs)
    sh = sh_table(config.L, phi, theta)
    f_unique, inv = np.unique(f, return_inverse=True)
    radial = _scs_radial_table(config, f_unique)
    out = np.empty((phi.size, len(indices)))
    for j, (n, l, m) in enumerate(indices):
        out[:, j] = radial[n][inv] * sh[:, l * l + l + m]
    return out


def eval_basis(config: BasisConfig, index: BasisIndex, phi, theta, f):
    """Value of one basis function at a single (phi, theta, f) point."""
    n, l, m = index
    if n < 0 or n > config.n_max or l < 0 or l > config.L or abs(m) > l:
        raise DomainError(f"index {tuple(index)} outside basis {config.family.value}")
    if f < 0 or f > config.fs / 2:
        raise DomainError(f"frequency {f} outside [0, {config.fs / 2}]")
    if config.family is BasisFamily.HSH:
        if l > n or (n - l) % 2 != 0:
            raise DomainError(
                f"index {tuple(index)} violates HSH constraints (l <= n, n - l even)"
            )
        return hsh(n, l, m, phi, theta, psi_of_f(f, config.fs))
    y = real_sh(l, m, phi, theta)
    if n == 0:
        return y  # n = 0 is the constant-in-frequency branch in every family
    if config.family is BasisFamily.SHFS:
        return y * math.cos(math.pi * n * f / config.fs)
    if config.family is BasisFamily.SHFBS:
        return y * bessel_j0(bessel_j0_root(n) * 2.0 * f / config.fs)
    return y * bessel_j0(bessel_j0_root(n) * abs(1.0 - 2.0 * f / config.fs))
