"""Wavepacket dynamics on finite 2D domains.

A domain is a rectangle of cells in the interface frame with a two-valued
material map; the assembled Hamiltonian applies the interface bond rule
(intracell b, intercell b + delta, c across the material boundary) with open
outer edges.  Time evolution of i dPhi/dt = H Phi uses classic RK4; domains
are sized so packets never reach the outer edge, keeping the evolution
norm-conserving to RK4 accuracy.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .errors import StepTooLarge
from .hamiltonian import HoppingProfile
from .lattice import (
    InterfaceKind,
    SiteIndex,
    frame_to_cell,
    cell_to_frame,
    frame_vectors,
    neighbors,
    site_position,
)
from .spectrum import perturbation_m0
from .transfer import build_type1_zero_modes, build_type2_zero_modes

__all__ = [
    "DomainSpec",
    "Domain",
    "WavepacketState",
    "build_domain",
    "initial_wavepacket",
    "evolve",
    "rho_bound",
    "interface_mass",
    "transmission",
    "make_bend_partition",
    "record_run",
]


@dataclass(frozen=True)
class DomainSpec:
    """Finite patch of the interface system.

    ``extent`` counts cells along (v_a, v_b); the patch is centered on the
    interface unless ``origin`` fixes the lower corner (m_lo, n_lo).  A bend
    is (vertex_m, turn): the material boundary follows n = 0 up to the
    vertex cell and then turns 60 degrees onto a rotation-equivalent
    interface direction; turn = +1 and turn = -1 pick the two mirror-image
    continuations.
    """

    kind: InterfaceKind
    extent: tuple[int, int]
    profile: HoppingProfile
    bend: tuple[int, int] | None = None
    origin: tuple[int, int] | None = None

    def material(self, m: int, n: int) -> int:
        """Piecewise material map; the bent boundary is the rotation image of
        the straight one, so both legs are interfaces of the same kind."""
        if self.bend is None:
            return 1 if n >= 0 else -1
        mb, turn = self.bend
        if self.kind is InterfaceKind.TYPE_I:
            if turn >= 0:
                return 1 if (n >= 0 or m >= mb) else -1
            return 1 if (n >= 0 and m - n <= mb) else -1
        if turn >= 0:
            return 1 if (n >= 0 and 3 * (m - mb) + n <= 0) else -1
        return 1 if (n >= 0 or 3 * (m - mb) + 2 * n >= 0) else -1


@dataclass
class Domain:
    """Assembled finite system: sparse Hamiltonian plus geometry tables."""

    spec: DomainSpec
    m_range: np.ndarray
    n_range: np.ndarray
    positions: np.ndarray
    hamiltonian: sp.csr_matrix
    sigma: np.ndarray
    cell_interface_dist: np.ndarray
    vertex_position: np.ndarray | None
    leg_directions: tuple[np.ndarray, np.ndarray] | None

    @property
    def n_cells(self) -> tuple[int, int]:
        return len(self.m_range), len(self.n_range)

    def index(self, m: int, n: int, j: int) -> int:
        im = m - self.m_range[0]
        i_n = n - self.n_range[0]
        return (im * len(self.n_range) + i_n) * 6 + (j - 1)

    def cell_of(self, flat: int) -> tuple[int, int, int]:
        cell, j = divmod(flat, 6)
        im, i_n = divmod(cell, len(self.n_range))
        return self.m_range[0] + im, self.n_range[0] + i_n, j + 1

    def cell_mass(self, amplitudes: np.ndarray) -> np.ndarray:
        return np.abs(amplitudes.reshape(-1, 6)) ** 2 @ np.ones(6)


def _bond_weight(profile: HoppingProfile, intracell: bool, s1: int, s2: int) -> float:
    if s1 != s2:
        # a bond crossing the interface is always intercell
        return profile.c
    b = profile.b_plus if s1 > 0 else profile.b_minus
    if intracell:
        return b
    return b + (profile.delta_plus if s1 > 0 else profile.delta_minus)


def build_domain(spec: DomainSpec) -> Domain:
    """Enumerate sites, assemble the sparse real-symmetric Hamiltonian, and
    precompute interface geometry used by the diagnostics."""
    Ma, Mb = spec.extent
    if Ma < 20 or Mb < 20:
        raise ValueError("domain extents must be at least 20x20 cells")
    if spec.origin is not None:
        m_lo, n_lo = spec.origin
    else:
        m_lo, n_lo = -(Ma // 2), -(Mb // 2)
    m_range = np.arange(m_lo, m_lo + Ma)
    n_range = np.arange(n_lo, n_lo + Mb)
    va, vb = frame_vectors(spec.kind)

    sigma = np.empty((Ma, Mb), dtype=int)
    for im, m in enumerate(m_range):
        for i_n, n in enumerate(n_range):
            sigma[im, i_n] = spec.material(m, n)

    def inside(m, n):
        return m_lo <= m < m_lo + Ma and n_lo <= n < n_lo + Mb

    n_sites = Ma * Mb * 6
    positions = np.empty((n_sites, 2))
    rows, cols, vals = [], [], []
    interface_cells: set[tuple[int, int]] = set()

    for im, m in enumerate(m_range):
        for i_n, n in enumerate(n_range):
            p, q = frame_to_cell(spec.kind, int(m), int(n))
            base = (im * Mb + i_n) * 6
            s1 = sigma[im, i_n]
            for j in range(1, 7):
                site = SiteIndex(j, (p, q))
                positions[base + j - 1] = site_position(site)
                for nb in neighbors(site):
                    m2, n2 = cell_to_frame(spec.kind, *nb.cell)
                    if not inside(m2, n2):
                        continue
                    i2 = ((m2 - m_lo) * Mb + (n2 - n_lo)) * 6 + (nb.j - 1)
                    i1 = base + j - 1
                    if i1 >= i2:
                        continue  # each bond once; symmetrize below
                    s2 = sigma[m2 - m_lo, n2 - n_lo]
                    w = _bond_weight(spec.profile, nb.cell == (p, q), s1, s2)
                    rows.append(i1)
                    cols.append(i2)
                    vals.append(-w)
                    if s1 != s2:
                        interface_cells.add((int(m), int(n)))
                        interface_cells.add((int(m2), int(n2)))

    upper = sp.coo_matrix((vals, (rows, cols)), shape=(n_sites, n_sites))
    H = (upper + upper.T).tocsr()

    cell_centers = np.array([
        [m, n] for m in m_range for n in n_range
    ]) @ np.vstack([va, vb])
    if interface_cells:
        ipos = np.array([m * va + n * vb for m, n in sorted(interface_cells)])
        diff = cell_centers[:, None, :] - ipos[None, :, :]
        dist = np.sqrt((diff**2).sum(axis=2)).min(axis=1)
    else:
        dist = np.full(len(cell_centers), np.inf)

    vertex = None
    legs = None
    if spec.bend is not None:
        mb, turn = spec.bend
        vertex = mb * va
        d1 = va / np.linalg.norm(va)  # packets arrive traveling toward +m
        if spec.kind is InterfaceKind.TYPE_I:
            leg2 = -vb if turn >= 0 else va + vb
        else:
            leg2 = -va + 3.0 * vb if turn >= 0 else 2.0 * va - 3.0 * vb
        legs = (d1, leg2 / np.linalg.norm(leg2))

    return Domain(spec=spec, m_range=m_range, n_range=n_range, positions=positions,
                  hamiltonian=H, sigma=sigma, cell_interface_dist=dist,
                  vertex_position=vertex, leg_directions=legs)


@dataclass
class WavepacketState:
    """Complex amplitude per site at a given time."""

    domain: Domain
    amplitudes: np.ndarray
    time: float = 0.0
    norm0: float = 1.0

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def energy(self) -> float:
        return float(np.real(np.vdot(self.amplitudes, self.domain.hamiltonian @ self.amplitudes)))


def initial_wavepacket(domain: Domain, profile: HoppingProfile, center_m: float,
                       width: float, direction: int) -> WavepacketState:
    """Zero-mode transverse profile times a Gaussian envelope along the
    interface; ``direction`` selects the sign of the group velocity through
    the corresponding eigenvector of the crossing matrix."""
    kind = domain.spec.kind
    build = build_type1_zero_modes if kind is InterfaceKind.TYPE_I else build_type2_zero_modes
    modes = build(profile)
    m0 = perturbation_m0(kind, profile, modes)
    evals, evecs = np.linalg.eigh(m0)
    coeff = evecs[:, 1] if direction > 0 else evecs[:, 0]
    mode_a, mode_b = modes

    chi: dict[int, np.ndarray] = {}
    for n in set(mode_a.amplitudes) | set(mode_b.amplitudes):
        row = np.zeros(6, dtype=complex)
        if n in mode_a.amplitudes:
            row += coeff[0] * mode_a.amplitudes[n]
        if n in mode_b.amplitudes:
            row += coeff[1] * mode_b.amplitudes[n]
        chi[n] = row

    amps = np.zeros(domain.positions.shape[0], dtype=complex)
    env = np.exp(-((domain.m_range - center_m) ** 2) / (2.0 * width**2))
    for im, m in enumerate(domain.m_range):
        if env[im] < 1e-18:
            continue
        for n, row in chi.items():
            if domain.n_range[0] <= n <= domain.n_range[-1]:
                base = domain.index(int(m), int(n), 1)
                amps[base:base + 6] += env[im] * row
    amps /= np.linalg.norm(amps)
    return WavepacketState(domain=domain, amplitudes=amps, time=0.0, norm0=1.0)


def rho_bound(H) -> float:
    """Cheap spectral-radius bound: maximum absolute row sum."""
    return float(np.max(np.abs(H).sum(axis=1)))


def evolve(state: WavepacketState, H, dt: float, steps: int) -> WavepacketState:
    """Classic RK4 for dPhi/dt = -i H Phi; requires |dt| * rho(H) <= 0.5."""
    if abs(dt) * rho_bound(H) > 0.5:
        raise StepTooLarge("dt * rho(H) exceeds 0.5")
    y = state.amplitudes.astype(complex, copy=True)
    for _ in range(steps):
        k1 = -1j * (H @ y)
        k2 = -1j * (H @ (y + 0.5 * dt * k1))
        k3 = -1j * (H @ (y + 0.5 * dt * k2))
        k4 = -1j * (H @ (y + dt * k3))
        y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return WavepacketState(domain=state.domain, amplitudes=y,
                           time=state.time + dt * steps, norm0=state.norm0)


def interface_mass(state: WavepacketState, tube_radius: float) -> float:
    """Fraction of squared amplitude within ``tube_radius`` cell pitches of
    the interface (distance measured between cell centers)."""
    mass = state.domain.cell_mass(state.amplitudes)
    total = mass.sum()
    sel = state.domain.cell_interface_dist <= tube_radius + 1e-9
    return float(mass[sel].sum() / total)


def make_bend_partition(domain: Domain) -> np.ndarray:
    """Label every site 0 (incoming leg), 1 (outgoing leg) or 2 (residual)
    by projecting onto the two interface rays from the bend vertex."""
    if domain.vertex_position is None:
        raise ValueError("partition requires a bent domain")
    d1, d2 = domain.leg_directions
    u = domain.positions - domain.vertex_position[None, :]
    s_in = u @ (-d1)
    s_out = u @ d2
    labels = np.full(len(u), 2, dtype=np.int8)
    labels[(s_in > 0) & (s_in >= s_out)] = 0
    labels[(s_out > 0) & (s_out > s_in)] = 1
    return labels


def transmission(state: WavepacketState, partition: np.ndarray) -> tuple[float, float, float]:
    """(transmitted, reflected, residual) mass fractions; they sum to 1."""
    mass = np.abs(state.amplitudes) ** 2
    total = mass.sum()
    transmitted = mass[partition == 1].sum() / total
    reflected = mass[partition == 0].sum() / total
    residual = mass[partition == 2].sum() / total
    return float(transmitted), float(reflected), float(residual)


def record_run(domain: Domain, state: WavepacketState, t_final: float,
               out_dir, stride: int = 200, dt: float | None = None,
               config: dict | None = None) -> dict:
    """Evolve to t_final, writing |amplitude|^2 snapshots every ``stride``
    steps plus a JSON manifest with the diagnostic time series."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    H = domain.hamiltonian
    rho = rho_bound(H)
    if dt is None:
        dt = 0.1 / rho
    steps_total = max(1, math.ceil(t_final / dt))
    partition = make_bend_partition(domain) if domain.spec.bend is not None else None

    series = {"time": [], "norm": [], "energy": [], "interface_mass": []}
    if partition is not None:
        series.update({"transmitted": [], "reflected": [], "residual": []})

    def sample(st: WavepacketState, snap_idx: int):
        series["time"].append(st.time)
        series["norm"].append(st.norm())
        series["energy"].append(st.energy())
        series["interface_mass"].append(interface_mass(st, 5.0))
        if partition is not None:
            t, r, rest = transmission(st, partition)
            series["transmitted"].append(t)
            series["reflected"].append(r)
            series["residual"].append(rest)
        path = out / f"snapshot_{snap_idx:04d}.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "y", "abs2"])
            for pos, amp in zip(st.domain.positions, st.amplitudes):
                w.writerow([f"{pos[0]:.17g}", f"{pos[1]:.17g}", f"{abs(amp)**2:.17g}"])

    snap = 0
    sample(state, snap)
    done = 0
    while done < steps_total:
        chunk = min(stride, steps_total - done)
        state = evolve(state, H, dt, chunk)
        done += chunk
        snap += 1
        sample(state, snap)

    manifest = {
        "dt": dt,
        "steps": steps_total,
        "rho_bound": rho,
        "series": series,
        "config": config or {},
    }
    with open(out / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest
