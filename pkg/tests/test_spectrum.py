import json

import numpy as np
import pytest

from edgelab.errors import NoMidGapState
from edgelab.hamiltonian import HoppingProfile, bloch_h1, coeffs_type1, h1_first_order
from edgelab.lattice import InterfaceKind
from edgelab.spectrum import (
    edge_curves,
    perturbation_m0,
    perturbation_matrix,
    supercell_spectrum,
    write_slope_json,
    write_spectrum_csv,
)
from edgelab.transfer import build_type1_zero_modes, matching_c_star, p_eigen

MIXED = HoppingProfile(60, 60, 30, -30, 50.0)


def test_preconditions():
    with pytest.raises(ValueError):
        supercell_spectrum(InterfaceKind.TYPE_I, MIXED, None, [0.0], N=10)
    with pytest.raises(ValueError):
        supercell_spectrum(InterfaceKind.TYPE_I, MIXED, None, [0.0], N=24, margin=6)


def test_chiral_symmetry_and_localization_range():
    kg = np.linspace(-np.pi, np.pi, 7)
    table = supercell_spectrum(InterfaceKind.TYPE_II, MIXED, None, kg, N=24)
    for i in range(len(kg)):
        ev = table.eigenvalues[i]
        assert np.abs(ev + ev[::-1]).max() < 1e-9 * np.abs(ev).max()
    assert table.localization.min() >= -1e-12
    assert table.localization.max() <= 1.0 + 1e-12


def test_homogeneous_material_keeps_continuum_and_has_no_midgap():
    hom = HoppingProfile(60, 60, 0, 0, 60.0)
    table = supercell_spectrum(InterfaceKind.TYPE_I, hom, None, [0.0, 0.8], N=40)
    for i in range(2):
        kept = table.eigenvalues[i][table.kept[i]]
        assert kept.size > 0.9 * table.eigenvalues.shape[1]  # extended states survive
        assert kept.min() < -2.5 * 60 and kept.max() > 2.5 * 60
    kept0 = table.eigenvalues[0][table.kept[0]]
    assert kept0.min() < -3 * 60 + 2  # band bottom -3b reached at k = 0
    with pytest.raises(NoMidGapState):
        edge_curves(table)


def test_crossing_and_gapped_cases():
    kg = np.array([-0.1, 0.0, 0.1])
    table = supercell_spectrum(InterfaceKind.TYPE_II, MIXED, None, kg, N=60)
    curves = edge_curves(table)
    assert curves.min_abs_at_zero < 1e-6 * 60
    assert np.all(curves.e_plus[[0, 2]] > 0.1)

    same = HoppingProfile(60, 60, 30, 30, 50.0)
    table = supercell_spectrum(InterfaceKind.TYPE_II, same, None, kg, N=60)
    vals = table.eigenvalues[1][table.kept[1]]
    assert np.abs(vals).min() > 1.0


def test_edge_branches_symmetric_in_k():
    kg = np.array([-0.3, -0.15, 0.0, 0.15, 0.3])
    table = supercell_spectrum(InterfaceKind.TYPE_II, MIXED, None, kg, N=40)
    curves = edge_curves(table)
    assert abs(curves.e_plus[0] - curves.e_plus[4]) < 1e-9
    assert abs(curves.e_plus[1] - curves.e_plus[3]) < 1e-9
    assert abs(curves.e_minus[1] - curves.e_minus[3]) < 1e-9


def test_kept_extended_states_respect_bulk_gap():
    kg = np.array([0.0, 0.9])
    table = supercell_spectrum(InterfaceKind.TYPE_I, MIXED, None, kg, N=40)
    N = table.half_width
    # recompute eigenvectors to classify which kept states are extended
    for i, k in enumerate(kg):
        H = bloch_h1(table.profile, k, N).matrix
        evals, evecs = np.linalg.eigh(H)
        cells = (np.abs(evecs) ** 2).reshape(2 * N + 1, 6, -1).sum(axis=1)
        near_interface = cells[N - 10:N + 11].sum(axis=0)
        for j in range(len(evals)):
            if table.kept[i, j] and near_interface[j] < 0.5:
                assert abs(evals[j]) >= 30.0 - 0.05 * 30.0


def test_geometric_convergence_with_supercell_size():
    profile = HoppingProfile(60, 60, 6, -6, 50.0)
    tuned = profile.with_c(matching_c_star(profile))
    rate2 = max(p_eigen(60, 6, 0).lambda1.real, 1.0 / p_eigen(60, -6, 0).lambda2.real)
    vals = {}
    for N in (20, 28, 36):
        table = supercell_spectrum(InterfaceKind.TYPE_I, tuned, None, [0.0], N=N, margin=4)
        vals[N] = np.abs(table.eigenvalues[0][table.kept[0]]).min()
    predicted = rate2**8  # eight extra cells per side between successive N
    assert vals[28] / vals[20] == pytest.approx(predicted, rel=0.1)
    assert vals[36] / vals[28] == pytest.approx(predicted, rel=0.1)


def test_m0_structure_and_slope_positive():
    tuned = MIXED.with_c(matching_c_star(MIXED))
    m0 = perturbation_m0(InterfaceKind.TYPE_I, tuned)
    assert abs(m0[0, 0]) < 1e-12 and abs(m0[1, 1]) < 1e-12
    assert m0[1, 0] == pytest.approx(-m0[0, 1], abs=1e-12)
    assert abs(m0[0, 1].real) < 1e-12  # purely imaginary off-diagonal
    assert abs(m0[0, 1].imag) > 0


def test_m0_against_explicit_sum():
    # independent route: the displayed sum with d and c weights over the mode
    tuned = MIXED.with_c(matching_c_star(MIXED))
    mode_a, mode_b = build_type1_zero_modes(tuned)
    m0 = perturbation_m0(InterfaceKind.TYPE_I, tuned, (mode_a, mode_b))
    acc = 0.0
    ns = sorted(mode_a.amplitudes)
    for n in ns:
        row = coeffs_type1(tuned, n)
        u5 = mode_a.amplitudes[n][4].real
        u6 = mode_a.amplitudes[n][5].real
        u4n1 = mode_a.amplitudes[n + 1][3].real if n + 1 in mode_a.amplitudes else 0.0
        acc += row.d * u5 * u5 - row.c * u6 * u4n1
    assert m0[0, 1].imag == pytest.approx(acc, rel=1e-10)


def test_m0_matrix_route_matches_dense_operator():
    tuned = MIXED.with_c(matching_c_star(MIXED))
    mode_a, mode_b = build_type1_zero_modes(tuned)
    m0 = perturbation_m0(InterfaceKind.TYPE_I, tuned, (mode_a, mode_b))
    L = max(abs(n) for n in mode_a.amplitudes)
    H1 = h1_first_order(tuned, L)
    va = mode_a.as_vector(L)
    vb = mode_b.as_vector(L)
    assert m0[0, 1] == pytest.approx(np.vdot(va, H1 @ vb), rel=1e-10)


@pytest.mark.parametrize("kind,profile", [
    (InterfaceKind.TYPE_I, MIXED.with_c(matching_c_star(MIXED))),
    (InterfaceKind.TYPE_II, MIXED),
])
def test_slope_matches_finite_difference(kind, profile):
    report = perturbation_matrix(kind, profile, N=60)
    assert report.slope > 0
    assert report.rel_gap < 0.01
    # Richardson step: halving h must stay consistent
    half = perturbation_matrix(kind, profile, N=60, h=5e-4)
    assert abs(half.fd_slope - report.slope) <= abs(report.fd_slope - report.slope) + 1e-6 * report.slope


def test_threaded_sweep_matches_serial(monkeypatch):
    kg = np.linspace(-1.0, 1.0, 5)
    serial = supercell_spectrum(InterfaceKind.TYPE_II, MIXED, None, kg, N=24)
    monkeypatch.setenv("EDGELAB_THREADS", "4")
    threaded = supercell_spectrum(InterfaceKind.TYPE_II, MIXED, None, kg, N=24)
    assert np.array_equal(serial.eigenvalues, threaded.eigenvalues)
    assert np.array_equal(serial.localization, threaded.localization)


def test_writers_are_deterministic(tmp_path):
    kg = np.array([0.0, 0.5])
    table = supercell_spectrum(InterfaceKind.TYPE_II, MIXED, None, kg, N=24)
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_spectrum_csv(table, p1)
    write_spectrum_csv(table, p2)
    assert p1.read_bytes() == p2.read_bytes()
    header = p1.read_text().splitlines()[0]
    assert header == "k,eig_index,energy,localization,kept"
    report = perturbation_matrix(InterfaceKind.TYPE_II, MIXED, N=40)
    j1 = tmp_path / "s.json"
    write_slope_json(report, j1)
    payload = json.loads(j1.read_text())
    assert set(payload) >= {"slope", "fd_slope", "rel_gap", "m0_01_im"}
