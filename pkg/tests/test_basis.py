"""Basis families: index sets, counts, eta matching and pointwise evaluation."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hrtf4d.basis import (
    BasisConfig,
    BasisFamily,
    BasisIndex,
    count_hsh,
    count_scs,
    eval_basis,
    evaluate_matrix,
    hsh,
    hsh_index_set,
    hsh_matrix,
    index_set,
    matched_eta,
    psi_of_f,
)
from hrtf4d.errors import DomainError
from hrtf4d.special import real_sh

from helpers import gauss_chebyshev2, gauss_legendre

FS = 44100.0

# (L, eta) -> (N_SCS, N_HSH, eta_m, N_HSHm)
REFERENCE_COUNTS = {
    (4, 16): (425, 385, 17.5, 420),
    (4, 32): (825, 785, 33.5, 820),
    (4, 64): (1625, 1585, 65.5, 1620),
    (6, 16): (833, 721, 18.5, 840),
    (6, 32): (1617, 1505, 34.5, 1624),
    (6, 64): (3185, 3073, 66.5, 3192),
    (9, 16): (1700, 1365, 19.5, 1720),
    (9, 32): (3300, 2965, 35.5, 3320),
    (9, 64): (6500, 6165, 67.5, 6520),
}


# ------------------------------------------------------------ psi mapping


def test_psi_of_f_values():
    assert psi_of_f(0.0, FS) == 0.0
    assert psi_of_f(FS / 2, FS) == pytest.approx(math.pi / 2, abs=1e-15)
    assert psi_of_f(FS / 4, FS) == pytest.approx(math.pi / 4, abs=1e-15)


def test_psi_of_f_domain():
    with pytest.raises(DomainError):
        psi_of_f(-1.0, FS)
    with pytest.raises(DomainError):
        psi_of_f(FS / 2 + 1.0, FS)


# ------------------------------------------------------------- index sets


def test_index_set_shfs_minimal():
    cfg = BasisConfig("shfs", 0, 1, FS)
    assert index_set(cfg) == [BasisIndex(0, 0, 0), BasisIndex(1, 0, 0)]


def test_index_set_hsh_enumerated_by_hand():
    cfg = BasisConfig("hsh", 1, 1, FS)  # n_max = 2
    assert index_set(cfg) == [
        BasisIndex(0, 0, 0),
        BasisIndex(1, 1, -1),
        BasisIndex(1, 1, 0),
        BasisIndex(1, 1, 1),
        BasisIndex(2, 0, 0),
    ]


def test_index_set_hsh_table_size():
    assert len(index_set(BasisConfig("hsh", 4, 16, FS))) == 385


def test_index_set_is_lexicographic():
    for cfg in (BasisConfig("hsh", 3, 4.5, FS), BasisConfig("shfbs", 3, 5, FS)):
        idx = index_set(cfg)
        assert idx == sorted(idx)


def test_index_set_lengths_match_counts_small_exhaustive():
    for L in range(0, 17):
        for two_eta in range(0, 21):
            assert len(index_set(BasisConfig("hsh", L, two_eta / 2, FS))) == count_hsh(
                L, two_eta / 2
            )
            assert len(index_set(BasisConfig("shfs", L, two_eta, FS))) == count_scs(
                L, two_eta
            )


@given(L=st.integers(0, 16), two_eta=st.integers(0, 140))
@settings(max_examples=60, deadline=None)
def test_index_set_lengths_match_counts_sampled(L, two_eta):
    assert len(index_set(BasisConfig("hsh", L, two_eta / 2, FS))) == count_hsh(
        L, two_eta / 2
    )
    if two_eta <= 70:
        assert len(index_set(BasisConfig("shrfbs", L, two_eta, FS))) == count_scs(
            L, two_eta
        )


def test_hsh_index_parity_filter():
    for ix in index_set(BasisConfig("hsh", 4, 8, FS)):
        assert (ix.n - ix.l) % 2 == 0
        assert ix.l <= min(ix.n, 4)
        assert abs(ix.m) <= ix.l


# ------------------------------------------------------------------ counts


def test_count_scs_reference_rows():
    for (L, eta), (n_scs, _, _, _) in REFERENCE_COUNTS.items():
        assert count_scs(L, eta) == n_scs
    assert count_scs(0, 0) == 1


def test_count_hsh_reference_rows():
    for (L, eta), (_, n_hsh, eta_m, n_hshm) in REFERENCE_COUNTS.items():
        assert count_hsh(L, eta) == n_hsh
        assert count_hsh(L, eta_m) == n_hshm


def test_matched_eta_reference_rows():
    for (L, eta), (_, _, eta_m, _) in REFERENCE_COUNTS.items():
        assert matched_eta(L, eta) == eta_m


def test_count_ratio_trend():
    # retained-HSH basis is always smaller, and the gap closes as eta grows
    for L in (1, 4, 9):
        ratios = [count_hsh(L, eta) / count_scs(L, eta) for eta in range(1, 65)]
        assert all(r < 1.0 for r in ratios)
        assert all(b >= a - 1e-12 for a, b in zip(ratios, ratios[1:]))
        assert ratios[-1] > ratios[0]


def test_count_domain_errors():
    with pytest.raises(DomainError):
        count_scs(-1, 4)
    with pytest.raises(DomainError):
        count_scs(2, 4.5)
    with pytest.raises(DomainError):
        count_hsh(2, 4.25)


# ------------------------------------------------------------- evaluation


def test_eval_basis_constant_hsh():
    cfg = BasisConfig("hsh", 2, 2, FS)
    val = eval_basis(cfg, BasisIndex(0, 0, 0), 1.0, 2.0, 0.0)
    assert val == pytest.approx(math.sqrt(2.0) / (2.0 * math.pi), abs=1e-14)


def test_eval_basis_reduces_to_sh():
    rng = np.random.default_rng(3)
    for fam, f_const in (("shfs", 0.0), ("shrfbs", FS / 2)):
        cfg = BasisConfig(fam, 3, 4, FS)
        for _ in range(20):
            n = int(rng.integers(0, 5))
            l = int(rng.integers(0, 4))
            m = int(rng.integers(-l, l + 1))
            phi = float(rng.uniform(0, 2 * np.pi))
            theta = float(rng.uniform(0, np.pi))
            got = eval_basis(cfg, BasisIndex(n, l, m), phi, theta, f_const)
            assert got == pytest.approx(real_sh(l, m, phi, theta), abs=1e-12)


def test_eval_basis_shfbs_vanishes_at_nyquist():
    cfg = BasisConfig("shfbs", 2, 3, FS)
    for n in (1, 2, 3):
        assert abs(eval_basis(cfg, BasisIndex(n, 1, 0), 0.3, 1.0, FS / 2)) < 1e-10


def test_eval_basis_shfbs_n0_is_sh_at_all_freqs():
    cfg = BasisConfig("shfbs", 2, 3, FS)
    for f in (0.0, 5000.0, FS / 2):
        got = eval_basis(cfg, BasisIndex(0, 2, 1), 0.9, 1.1, f)
        assert got == pytest.approx(real_sh(2, 1, 0.9, 1.1), abs=1e-14)


def test_eval_basis_domain_errors():
    cfg = BasisConfig("hsh", 2, 2, FS)
    with pytest.raises(DomainError):
        eval_basis(cfg, BasisIndex(1, 0, 0), 0.0, 0.0, 100.0)  # n - l odd
    with pytest.raises(DomainError):
        eval_basis(cfg, BasisIndex(2, 3, 0), 0.0, 0.0, 100.0)  # l > L
    with pytest.raises(DomainError):
        eval_basis(cfg, BasisIndex(2, 2, 0), 0.0, 0.0, FS)  # f beyond Nyquist
    scs = BasisConfig("shfs", 2, 2, FS)
    with pytest.raises(DomainError):
        eval_basis(scs, BasisIndex(3, 0, 0), 0.0, 0.0, 100.0)  # n > eta


def test_eval_basis_matches_matrix_path():
    rng = np.random.default_rng(9)
    for fam in ("hsh", "shfs", "shfbs", "shrfbs"):
        cfg = BasisConfig(fam, 2, 3 if fam != "hsh" else 3.5, FS)
        idx = index_set(cfg)
        phi = rng.uniform(0, 2 * np.pi, 6)
        theta = rng.uniform(0, np.pi, 6)
        f = rng.uniform(0, FS / 2, 6)
        mat = evaluate_matrix(cfg, phi, theta, f)
        for j in (0, len(idx) // 2, len(idx) - 1):
            for k in range(6):
                assert mat[k, j] == pytest.approx(
                    eval_basis(cfg, idx[j], phi[k], theta[k], f[k]), rel=1e-12, abs=1e-13
                )


def test_hsh_hyperequator_symmetry():
    # retained functions are exactly the ones symmetric about psi = pi/2
    rng = np.random.default_rng(17)
    indices = hsh_index_set(16, 4)
    for _ in range(40):
        phi = float(rng.uniform(0, 2 * np.pi))
        theta = float(rng.uniform(0, np.pi))
        psi = float(rng.uniform(0, np.pi / 2))
        for ix in (indices[0], indices[7], indices[len(indices) // 2], indices[-1]):
            a = hsh(ix.n, ix.l, ix.m, phi, theta, psi)
            b = hsh(ix.n, ix.l, ix.m, phi, theta, math.pi - psi)
            assert abs(a - b) < 1e-12


def test_dropped_hsh_indices_are_antisymmetric():
    for n, l in ((1, 0), (2, 1), (3, 0), (5, 2)):
        a = hsh(n, l, 0, 0.4, 1.2, 0.8)
        b = hsh(n, l, 0, 0.4, 1.2, math.pi - 0.8)
        assert abs(a + b) < 1e-12


def hsh_gram(n_max):
    """Gram matrix of the retained HSHs over an exact product quadrature."""
    indices = hsh_index_set(n_max)
    u_psi, w_psi = gauss_chebyshev2(n_max + 2)
    x_th, w_th = gauss_legendre(n_max + 2)
    n_az = 2 * n_max + 2
    phi = 2.0 * np.pi * np.arange(n_az) / n_az
    w_az = 2.0 * np.pi / n_az

    psi_g, theta_g, phi_g = np.meshgrid(
        np.arccos(u_psi), np.arccos(x_th), phi, indexing="ij"
    )
    w_g = (
        w_psi[:, None, None] * w_th[None, :, None] * w_az * np.ones_like(phi_g)
    ).ravel()
    mat = hsh_matrix(indices, phi_g.ravel(), theta_g.ravel(), psi_g.ravel())
    return mat.T @ (mat * w_g[:, None]), len(indices)


def test_hsh_gram_identity():
    gram, n = hsh_gram(12)
    assert n == 455
    assert np.max(np.abs(gram - np.eye(n))) < 1e-7


# ---------------------------------------------------------------- configs


def test_basis_config_validation():
    with pytest.raises(DomainError):
        BasisConfig("shfs", 2, 2.5, FS)  # SCS eta must be integer
    with pytest.raises(DomainError):
        BasisConfig("hsh", 2, 2.25, FS)  # HSH eta in half steps
    with pytest.raises(DomainError):
        BasisConfig("hsh", -1, 2, FS)
    with pytest.raises(DomainError):
        BasisConfig("hsh", 2, 2, 0.0)
    with pytest.raises(ValueError):
        BasisConfig("nope", 2, 2, FS)
    assert BasisConfig("hsh", 2, 2.5, FS).n_max == 5
    assert BasisConfig("shfbs", 2, 7, FS).n_max == 7
