import logging

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cptlab import blockalg
from cptlab.analysis import (
    conjugation_pairing_defect,
    gamma_potential,
    gamma_sweep,
    h1_spec,
    hausdorff_distance,
    invertibility_probe,
    perturbation_report,
    reality_report,
    sector_analysis,
    susy_check,
)
from cptlab.cptmodel import build_family
from cptlab.exactalg import I, Poly
from cptlab.lattice import make_grid

points = st.lists(
    st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
    min_size=1, max_size=8,
)


def test_pairing_defect_examples():
    assert conjugation_pairing_defect([1 + 2j, 1 - 2j, 3]) == 0.0
    assert conjugation_pairing_defect([1 + 2j]) == pytest.approx(4.0)
    with pytest.raises(ValueError):
        conjugation_pairing_defect([])


@given(points)
def test_pairing_defect_zero_for_closed_sets(w):
    w = np.array(w)
    assert conjugation_pairing_defect(np.concatenate([w, w.conj()])) == 0.0


@given(points, points)
def test_hausdorff_symmetric(a, b):
    assert hausdorff_distance(a, b) == hausdorff_distance(b, a)
    assert hausdorff_distance(a, a) == 0.0


def test_gamma_potential_at_one_is_h1_minus_i_nu():
    for mu, nu in ((1, 1), (2, 0.5), (0.75, -1.25)):
        assert gamma_potential(mu, nu, 1) == h1_spec(mu, nu).V - Poly([I * h1_spec(mu, nu).alpha.coeff(1)])


def test_supercharge_block_identities():
    assert all(blockalg.supercharge_identities().values())
    assert len(blockalg.supercharge_identities()) == 9


def test_block_algebra_detects_noncommutation():
    f, fs = blockalg.letter("F"), blockalg.letter("Fs")
    assert blockalg.nc_mul(f, fs) != blockalg.nc_mul(fs, f)
    assert blockalg.nc_mul(f, blockalg.letter("Fi")) == blockalg.ONE


def test_reality_product_mode_small_grid():
    r = reality_report(1, 1, 0, make_grid(6.0, 201), "product", m=4)
    assert r.max_im <= 1e-10
    assert r.pairing_defect <= 1e-4
    assert r.mode == "product" and len(r.eigenvalues) == 4


def test_reality_requires_mu():
    with pytest.raises(ValueError):
        reality_report(0, 1, 0, make_grid(6.0, 21))


def test_susy_h1_and_free():
    g = make_grid(5.0, 101)
    rep = susy_check(h1_spec(1, 1), g)
    assert not rep.inverse_singular
    assert rep.inverse_charge_residual <= 1e-10
    assert rep.isospectrality_defect <= 1e-6
    assert all(rep.structural.values())
    free = susy_check(build_family(Poly([]), Poly([])), g)
    assert free.inverse_singular and free.inverse_charge_residual is None
    assert free.min_abs_eigenvalue_F <= 1e-12


def test_invertibility_probe_floor():
    rows = invertibility_probe(1, 1, 6.0, [101, 201, 401])
    assert [n for n, _ in rows] == [101, 201, 401]
    values = [v for _, v in rows]
    assert min(values) > 0.7
    assert max(values) - min(values) < 5e-3


@pytest.fixture(scope="module")
def sectors_small():
    g = make_grid(5.0, 151)
    return {nu: sector_analysis(1, nu, g, m=30) for nu in (0.4, 0.2, 0.1, 0.05, 0.0)}


def test_sector_identity_and_ratios(sectors_small):
    for nu, rep in sectors_small.items():
        assert rep.identity_residual <= 1e-12
        if nu:
            assert rep.ratio_checks and rep.ratio_max_error <= 1e-6
            assert len(rep.ratio_checks) + rep.guarded_pairs == 30 * 30


def test_sector_cross_norm_scales_with_nu(sectors_small):
    cross = [sectors_small[nu].cross_norm for nu in (0.4, 0.2, 0.1, 0.05)]
    assert all(a > b for a, b in zip(cross, cross[1:]))
    # linear in nu to leading order
    assert cross[0] / cross[-1] == pytest.approx(8.0, rel=0.01)
    hermitian = sectors_small[0.0]
    assert hermitian.cross_norm <= 1e-10 * hermitian.same_norm


def test_sector_basis_orthonormal(sectors_small):
    u = sectors_small[0.2].basis
    assert np.allclose(u.conj().T @ u, np.eye(u.shape[1]), atol=1e-12)
    assert np.all(np.abs(sectors_small[0.2].Lambda) > 0)


def test_sector_smallest_selection():
    g = make_grid(5.0, 101)
    big = sector_analysis(1, 0.2, g, m=10)
    small = sector_analysis(1, 0.2, g, m=10, select="smallest")
    assert np.min(np.abs(big.Lambda)) >= np.max(np.abs(small.Lambda))
    assert small.identity_residual <= 1e-12


@pytest.fixture(scope="module")
def perturb_small():
    return perturbation_report(1, 1, make_grid(5.0, 201), n_levels=3)


def test_perturbation_first_order(perturb_small):
    assert [r.level for r in perturb_small] == [0, 1, 2]
    for r in perturb_small:
        assert r.rs1_discrepancy <= 1e-6
        assert r.biorthogonal_norm > 1e-10


def test_perturbation_second_order(perturb_small):
    for r in perturb_small:
        assert r.rs2_discrepancy <= 1e-3
        assert r.truncation == 201


def test_perturbation_truncation_and_validation():
    g = make_grid(5.0, 101)
    rows = perturbation_report(1, 1, g, n_levels=1, truncation=8)
    assert rows[0].truncation == 8
    with pytest.raises(ValueError):
        perturbation_report(1, 1, g, fd_step=0)
    with pytest.raises(ValueError):
        perturbation_report(0, 1, g)


def test_perturbation_skips_self_orthogonal(monkeypatch, caplog):
    import cptlab.analysis as an

    monkeypatch.setattr(an, "BIORTH_TOL", 1e300)
    with caplog.at_level(logging.WARNING, logger="cptlab.analysis"):
        rows = an.perturbation_report(1, 1, make_grid(4.0, 41), n_levels=2)
    assert rows == []
    assert "skipped" in caplog.text


def test_gamma_sweep():
    rep = gamma_sweep(1, 1, make_grid(5.0, 101), [0.0, 0.5, 1.0], m=3, im_threshold=1e-6)
    assert rep.gamma == [0.0, 0.5, 1.0]
    assert rep.flagged == [False, True, True]
    assert all(len(row) == 3 for row in rep.eigenvalues)
    with pytest.raises(ValueError):
        gamma_sweep(1, 1, make_grid(5.0, 21), [1.0, 0.5])
    with pytest.raises(ValueError):
        gamma_sweep(1, 1, make_grid(5.0, 21), [])
