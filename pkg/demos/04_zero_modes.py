"""Exact zero modes and the slope of the crossing.

Builds both zero modes of each interface type from the transfer recursions
(no eigensolver involved), shows their decay and sign structure, and
compares the degenerate-perturbation slope of the crossing against a
finite difference of the supercell branch.

Run:  python3 demos/04_zero_modes.py
"""

import numpy as np

from edgelab.hamiltonian import HoppingProfile
from edgelab.lattice import InterfaceKind
from edgelab.spectrum import perturbation_matrix
from edgelab.transfer import (
    build_type1_zero_modes,
    build_type2_zero_modes,
    matching_c_star,
    q_eigen,
)

profile = HoppingProfile(60, 60, 30, -30, 50.0)

print("type II, deltas (+30, -30), c = 50:")
mode_a, mode_b = build_type2_zero_modes(profile)
print(f"  residuals: A {mode_a.residual:.2e}, B {mode_b.residual:.2e}")
print(f"  support: A {mode_a.support()}, B {mode_b.support()}")
print("  mode A cell pattern (0,0,0,x,0,-x); x ratios across the interface:")
mu3 = q_eigen(60, 30).mu3
for n in (-3, -2, -1, 0, 1, 2):
    x = mode_a.amplitudes[n][3].real
    print(f"    n={n:+d}: x = {x:+.6f}")
print(f"  plus-side geometric decay x_n/x_n+1 = {mu3} (the Q eigenvalue)")
print("  mode B cell pattern (y,z,y,0,0,0) with y < 0 throughout")

tuned = profile.with_c(matching_c_star(profile))
print(f"\ntype I, same deltas, tuned c* = {tuned.c:.6f}:")
u_a, u_b = build_type1_zero_modes(tuned)
print(f"  residuals: A {u_a.residual:.2e}, B {u_b.residual:.2e}")
print("  even-pair decay is geometric in the propagation eigenvalue;")
print("  sign structure u6_n u4_n+1 < 0 makes the crossing slope positive:")
for n in (-2, -1, 0, 1, 2):
    u = u_a.amplitudes[n]
    print(f"    n={n:+d}: (u4, u5, u6) = ({u[3].real:+.5f}, {u[4].real:+.5f}, {u[5].real:+.5f})")

print("\ncrossing slopes |E'(0)| with finite-difference cross-check (N = 60):")
for kind, prof, tag in ((InterfaceKind.TYPE_I, tuned, "type I tuned"),
                        (InterfaceKind.TYPE_II, profile, "type II")):
    rep = perturbation_matrix(kind, prof, N=60)
    print(f"  {tag}: slope {rep.slope:.6f}, fd {rep.fd_slope:.6f}, "
          f"relative gap {rep.rel_gap:.2e}")
