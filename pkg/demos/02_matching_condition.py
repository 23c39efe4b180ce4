"""Zigzag-type (type-I) interfaces: the matching condition for zero modes.

A type-I junction hosts zero-energy edge states only when the coupling c
across the interface solves (b+ + d+)(b- + d-) f1(+) f1(-) = c^2, where f1
is the slope of the decaying eigenvector of the propagation matrix.  The
tuned coupling works for topologically distinct AND identical material
pairs, so this interface cannot by itself certify topology.

Run:  python3 demos/02_matching_condition.py
"""

import numpy as np

from edgelab.hamiltonian import HoppingProfile
from edgelab.lattice import InterfaceKind
from edgelab.spectrum import supercell_spectrum
from edgelab.transfer import matching_c_star, p_eigen, type1_zero_exists

b = 60.0
print(f"b = {b} on both sides; scanning detuning sign patterns\n")
for dp, dm in [(30.0, 30.0), (30.0, -30.0), (-30.0, -30.0)]:
    profile = HoppingProfile(b, b, dp, dm, 50.0)
    f1p = p_eigen(b, dp, 0.0).f1
    f1m = p_eigen(b, dm, 0.0).f1
    c_star = matching_c_star(profile)
    print(f"deltas ({dp:+.0f}, {dm:+.0f}):")
    print(f"  f1(+) = {f1p:+.6f}, f1(-) = {f1m:+.6f}  ->  c* = {c_star:.6f}")
    print(f"  alignment at c = 50   : {type1_zero_exists(profile, 50.0, 0.0)}")
    print(f"  alignment at c = c*   : {type1_zero_exists(profile, c_star, 0.0)}")

    # confirm with a supercell kernel check at k = 0
    tuned = profile.with_c(c_star)
    table = supercell_spectrum(InterfaceKind.TYPE_I, tuned, None, [0.0], N=60)
    e0 = np.abs(table.eigenvalues[0][table.kept[0]]).min()
    print(f"  supercell min|E(0)| at c*: {e0:.2e}\n")
