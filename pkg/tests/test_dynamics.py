import numpy as np
import pytest

from edgelab.dynamics import (
    DomainSpec,
    build_domain,
    evolve,
    initial_wavepacket,
    interface_mass,
    make_bend_partition,
    rho_bound,
    transmission,
    WavepacketState,
)
from edgelab.errors import StepTooLarge
from edgelab.hamiltonian import HoppingProfile
from edgelab.lattice import InterfaceKind
from edgelab.spectrum import perturbation_m0
from edgelab.transfer import matching_c_star

MIXED = HoppingProfile(60, 60, 30, -30, 50.0)


def small_domain(kind=InterfaceKind.TYPE_II, bend=None, extent=(24, 24), profile=MIXED):
    return build_domain(DomainSpec(kind, extent, profile, bend=bend))


def test_extent_validation():
    with pytest.raises(ValueError):
        build_domain(DomainSpec(InterfaceKind.TYPE_I, (10, 30), MIXED))


def test_domain_matrix_real_symmetric_and_bond_weights():
    dom = small_domain(InterfaceKind.TYPE_I, extent=(24, 24))
    H = dom.hamiltonian
    assert (abs(H - H.T)).max() == 0.0
    assert np.abs(H.data.imag).max() == 0.0 if np.iscomplexobj(H.data) else True
    # intracell bond (1, cell)-(5, cell) deep in the + material
    m, n = 3, 5
    assert H[dom.index(m, n, 1), dom.index(m, n, 5)] == -60.0
    # intercell d-bond within + material: (2, cell) couples across v_a
    assert H[dom.index(m, n, 2), dom.index(m + 1, n, 5)] == -(60.0 + 30.0)
    # crossing c-bond between rows n = -1 and n = 0: weight -c
    assert H[dom.index(m, 0, 4), dom.index(m, -1, 3)] == -50.0
    # minus-side intercell bond
    assert H[dom.index(m, -4, 2), dom.index(m + 1, -4, 5)] == -(60.0 - 30.0)


def test_row_degree_at_most_three():
    dom = small_domain()
    degree = np.diff(dom.hamiltonian.indptr)
    assert degree.max() <= 3


def test_evolve_trivial_cases():
    dom = small_domain()
    rng = np.random.default_rng(5)
    amps = rng.normal(size=dom.positions.shape[0]) + 0j
    amps /= np.linalg.norm(amps)
    state = WavepacketState(domain=dom, amplitudes=amps)
    frozen = evolve(state, 0.0 * dom.hamiltonian, 0.01, 50)
    assert np.abs(frozen.amplitudes - amps).max() == 0.0

    E = 3.7
    one = WavepacketState(domain=dom, amplitudes=np.array([1.0 + 0j]))
    out = evolve(one, np.array([[E]]), 1e-3, 1000)
    assert abs(out.amplitudes[0] - np.exp(-1j * E * 1.0)) < 1e-10


def test_step_rule_enforced():
    dom = small_domain()
    state = WavepacketState(domain=dom, amplitudes=np.zeros(dom.positions.shape[0], dtype=complex))
    rho = rho_bound(dom.hamiltonian)
    with pytest.raises(StepTooLarge):
        evolve(state, dom.hamiltonian, 0.6 / rho, 1)


def test_initial_packet_norm_localization_and_velocity():
    dom = build_domain(DomainSpec(InterfaceKind.TYPE_II, (48, 30), MIXED))
    st = initial_wavepacket(dom, MIXED, center_m=-6.0, width=8.0, direction=+1)
    assert st.norm() == pytest.approx(1.0, abs=1e-12)
    assert interface_mass(st, 5.0) >= 0.90

    m0 = perturbation_m0(InterfaceKind.TYPE_II, MIXED)
    slope = abs(m0[0, 1].imag)
    H = dom.hamiltonian
    dt = 0.1 / rho_bound(H)
    T = 0.4
    out = evolve(st, H, dt, int(round(T / dt)))

    def com_m(state):
        mass = state.domain.cell_mass(state.amplitudes)
        mm = np.repeat(state.domain.m_range, len(state.domain.n_range))
        return float((mass * mm).sum() / mass.sum())

    v = (com_m(out) - com_m(st)) / out.time
    assert v > 0
    assert v == pytest.approx(slope, rel=0.10)


def test_norm_energy_conservation_and_reversibility():
    dom = build_domain(DomainSpec(InterfaceKind.TYPE_II, (40, 26), MIXED))
    st = initial_wavepacket(dom, MIXED, center_m=-4.0, width=6.0, direction=+1)
    H = dom.hamiltonian
    dt = 0.1 / rho_bound(H)
    steps = int(round(1.0 / dt))
    fwd = evolve(st, H, dt, steps)
    assert abs(fwd.norm() - 1.0) < 1e-6
    assert abs(fwd.energy() - st.energy()) < 1e-6 * max(1.0, abs(st.energy()) + 60.0)
    back = evolve(fwd, H, -dt, steps)
    assert np.abs(back.amplitudes - st.amplitudes).max() < 1e-5


def test_interface_mass_bounds():
    dom = small_domain()
    uniform = np.ones(dom.positions.shape[0], dtype=complex)
    st = WavepacketState(domain=dom, amplitudes=uniform)
    assert interface_mass(st, 1e6) == pytest.approx(1.0)
    frac0 = interface_mass(st, 0.0)
    assert 0.0 < frac0 < 1.0


def test_material_maps_for_bends():
    spec = DomainSpec(InterfaceKind.TYPE_II, (30, 30), MIXED, bend=(4, +1))
    # straight part keeps the half-space split; past the bend line it flips
    assert spec.material(-10, 0) == 1
    assert spec.material(-10, -1) == -1
    assert spec.material(10, 0) == -1  # beyond the 60-degree line
    assert spec.material(2, 3) == 1
    spec_i = DomainSpec(InterfaceKind.TYPE_I, (30, 30), MIXED, bend=(4, +1))
    assert spec_i.material(-10, -3) == -1
    assert spec_i.material(6, -3) == 1  # second leg side
    assert spec_i.material(-10, 2) == 1


def test_transmission_partition_and_sum_rule():
    prof = MIXED
    dom = build_domain(DomainSpec(InterfaceKind.TYPE_II, (40, 40), prof, bend=(8, +1)))
    st = initial_wavepacket(dom, prof, center_m=-8.0, width=5.0, direction=+1)
    part = make_bend_partition(dom)
    tr, rf, rs = transmission(st, part)
    assert tr == pytest.approx(0.0, abs=5e-3)  # packet starts on the incoming leg
    assert tr + rf + rs == pytest.approx(1.0, abs=1e-9)
    H = dom.hamiltonian
    dt = 0.1 / rho_bound(H)
    state = st
    for _ in range(3):
        state = evolve(state, H, dt, 200)
        tr, rf, rs = transmission(state, part)
        assert tr + rf + rs == pytest.approx(1.0, abs=1e-9)


def test_partition_requires_bend():
    dom = small_domain()
    with pytest.raises(ValueError):
        make_bend_partition(dom)


def test_record_run_writes_artifacts(tmp_path):
    dom = build_domain(DomainSpec(InterfaceKind.TYPE_II, (30, 24), MIXED))
    st = initial_wavepacket(dom, MIXED, center_m=0.0, width=5.0, direction=+1)
    from edgelab.dynamics import record_run

    manifest = record_run(dom, st, t_final=0.05, out_dir=tmp_path, stride=100,
                          config={"label": "smoke"})
    assert (tmp_path / "manifest.json").exists()
    assert (tmp_path / "snapshot_0000.csv").exists()
    series = manifest["series"]
    assert abs(series["norm"][-1] - 1.0) < 1e-8
    assert len(series["time"]) == len(series["interface_mass"])


@pytest.mark.parametrize("kind", [InterfaceKind.TYPE_I, InterfaceKind.TYPE_II])
@pytest.mark.parametrize("k", [0.0, 0.83])
def test_bloch_reduction_consistency(kind, k):
    # a k-quasiperiodic state on the 2D domain must reproduce the reduced
    # chain operator on interior cells: H_full (e^{ikm} phi_n) = e^{ikm} (H(k) phi)_n
    from edgelab.hamiltonian import bloch_h1, bloch_h2, chain_index

    dom = build_domain(DomainSpec(kind, (26, 26), MIXED))
    N = 12
    build = bloch_h1 if kind is InterfaceKind.TYPE_I else bloch_h2
    Hk = build(MIXED, k, N).matrix

    rng = np.random.default_rng(17)
    phi = rng.normal(size=(2 * N + 1, 6)) + 1j * rng.normal(size=(2 * N + 1, 6))
    chain_out = (Hk @ phi.reshape(-1)).reshape(2 * N + 1, 6)

    amps = np.zeros(dom.positions.shape[0], dtype=complex)
    for m in dom.m_range:
        for n in dom.n_range:
            amps[dom.index(int(m), int(n), 1):dom.index(int(m), int(n), 1) + 6] = (
                np.exp(1j * k * m) * phi[n + N])
    out = dom.hamiltonian @ amps
    for m in dom.m_range[3:-3]:
        for n in dom.n_range[3:-3]:
            i = dom.index(int(m), int(n), 1)
            expected = np.exp(1j * k * m) * chain_out[int(n) + N]
            assert np.abs(out[i:i + 6] - expected).max() < 1e-10 * np.abs(Hk).max()


def test_type1_domain_packet_moves(tmp_path):
    tuned = HoppingProfile(60, 60, 30, 30, 50.0)
    tuned = tuned.with_c(matching_c_star(tuned))
    dom = build_domain(DomainSpec(InterfaceKind.TYPE_I, (48, 26), tuned))
    st = initial_wavepacket(dom, tuned, center_m=-8.0, width=6.0, direction=+1)
    assert interface_mass(st, 5.0) > 0.9
    H = dom.hamiltonian
    dt = 0.1 / rho_bound(H)
    out = evolve(st, H, dt, int(round(0.25 / dt)))
    mass = out.domain.cell_mass(out.amplitudes)
    mm = np.repeat(out.domain.m_range, len(out.domain.n_range))
    assert (mass * mm).sum() > -7.0  # moved toward +m
