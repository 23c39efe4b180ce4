"""Bulk band structure of the homogeneous material.

Walks through the 6x6 Bloch Hamiltonian: the zone-center spectrum in closed
form, the double Dirac point at eps = 0, the gap law |E| >= |eps|, and the
band inversion between contracted (eps < 0) and dilated (eps > 0) materials.

Run:  python3 demos/01_bulk_bands.py
"""

import numpy as np
from scipy.linalg import subspace_angles

from edgelab.bulk import (
    band_inversion,
    bulk_bands,
    default_k_path,
    dirac_slope,
    gamma_eigs,
    gamma_eigs_closed_form,
    write_bands_csv,
)

b = 5.0
print(f"intracell hopping b = {b}")
for eps in (-2.0, 0.0, 2.0):
    ev = gamma_eigs(b, eps)
    print(f"  eps = {eps:+.0f}: zone-center spectrum {np.round(ev, 10)}")
    assert np.allclose(ev, gamma_eigs_closed_form(b, eps), atol=1e-10)
print("  (closed form: -(3b+eps), -|eps| x2, +|eps| x2, 3b+eps)")

print("\ndouble Dirac point at eps = 0:")
slope = dirac_slope(b)
print(f"  four bands touch zero linearly, fitted slope {slope:.6f} "
      f"(isotropic to < 1%)")

print("\ngap law on the path Gamma -> M -> K -> Gamma (eps = 2):")
bands = bulk_bands(b, 2.0, default_k_path(120))
print(f"  lower bands top out at {bands[:, :3].max():+.4f}, "
      f"upper bands bottom at {bands[:, 3:].min():+.4f}")
write_bands_csv(bands, "bulk_bands_eps2.csv")
print("  full path written to bulk_bands_eps2.csv")

print("\nband inversion across eps -> -eps:")
lo_p, up_p = band_inversion(b, 2.0)
lo_m, up_m = band_inversion(b, -2.0)
swap = max(np.max(subspace_angles(lo_p, up_m)), np.max(subspace_angles(up_p, lo_m)))
print(f"  principal angle between lower(+2) and upper(-2) subspaces: {swap:.2e}")
print("  the degenerate pairs swap exactly; this marks the two materials as")
print("  topologically distinct.")
