"""Supercell spectra of both interface types.

Reproduces the three spectrum families at desk scale and writes the
filtered tables as CSV (columns k, eig_index, energy, localization, kept):

  * type I at the tuned coupling c*: mid-gap branches crossing at k = 0;
  * type I at a generic coupling: gapped mid-gap branches, no crossing;
  * type II at c = 50: crossing exactly when the detunings have opposite
    signs, empty gap otherwise.

Run:  python3 demos/03_supercell_spectra.py   (about a minute)
"""

import numpy as np

from edgelab.hamiltonian import HoppingProfile
from edgelab.lattice import InterfaceKind
from edgelab.spectrum import edge_curves, supercell_spectrum, write_spectrum_csv
from edgelab.transfer import matching_c_star

N = 40
kg = np.linspace(-np.pi, np.pi, 81)


def describe(tag, kind, profile):
    table = supercell_spectrum(kind, profile, None, kg, N=N)
    fname = f"spectrum_{tag}.csv"
    write_spectrum_csv(table, fname)
    mins = [np.abs(table.eigenvalues[i][table.kept[i]]).min() for i in range(len(kg))]
    i0 = len(kg) // 2
    print(f"  {tag}: min kept |E| over k = {min(mins):.3e}, at k=0: {mins[i0]:.3e} -> {fname}")
    return table


print("type I, tuned c* (crossing expected):")
for dp, dm in [(30.0, 30.0), (30.0, -30.0), (-30.0, -30.0)]:
    profile = HoppingProfile(60, 60, dp, dm, 50.0)
    tuned = profile.with_c(matching_c_star(profile))
    table = describe(f"type1_tuned_{dp:+.0f}{dm:+.0f}", InterfaceKind.TYPE_I, tuned)
    curves = edge_curves(table)
    h = kg[len(kg) // 2 + 1]
    print(f"      branch slopes near 0: {curves.e_plus[len(kg)//2+1]/h:+.2f} / "
          f"{curves.e_minus[len(kg)//2+1]/h:+.2f}")

print("\ntype I, generic c = 50 (no crossing):")
for dp, dm in [(30.0, 30.0), (30.0, -30.0), (-30.0, -30.0)]:
    describe(f"type1_generic_{dp:+.0f}{dm:+.0f}", InterfaceKind.TYPE_I,
             HoppingProfile(60, 60, dp, dm, 50.0))

print("\ntype II, c = 50 (crossing iff detunings have opposite signs):")
for dp, dm in [(30.0, -30.0), (30.0, 30.0)]:
    describe(f"type2_{dp:+.0f}{dm:+.0f}", InterfaceKind.TYPE_II,
             HoppingProfile(60, 60, dp, dm, 50.0))
