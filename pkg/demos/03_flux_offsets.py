"""Sensitivity of the couplings to flux-bias offsets.

All loops are nominally biased at half a flux quantum.  Real hardware has
static flux offsets, so the interesting questions are: how fast do the
couplings move when the coupler bias drifts, and what happens when the qubit
biases drift too (common-mode drift, or frozen random offsets)?

Offsets below are in units of the flux quantum; 1e-3 is one milli-Phi_0.
"""

import numpy as np

from fluxcoupler.analysis import Truncations, sweep_flux
from fluxcoupler.circuit import reference_circuit

TRUNC = Truncations(qubit_states=40, coupler_states=30, n_keep=8)
p = reference_circuit(beta_c=0.43)
m = 1e-3


def show(res, title):
    print(title)
    print(f"{'offset (mPhi0)':>15} {'J2 (MHz)':>10} {'J4 (MHz)':>10}")
    for row in res.rows:
        if row["spectral_status"] != "ok":
            print(f"{row['flux_offset'] / m:15.2f}  {row['spectral_status']}")
            continue
        print(f"{row['flux_offset'] / m:15.2f} "
              f"{row['spectral_J2'] / 1e6:10.2f} "
              f"{row['spectral_J4'] / 1e6:10.2f}")
    print()


grid = np.linspace(-2 * m, 2 * m, 9)

# coupler-only drift: the couplings are exactly even in the coupler offset at
# the qubit degeneracy point, so the leading sensitivity is quadratic
show(sweep_flux(p, grid, trunc=TRUNC), "coupler offset only")

# common-mode drift: the same offset applied to every loop moves the qubits
# off their degeneracy points, which is far more damaging
show(sweep_flux(p, np.linspace(-m, m, 5), common_mode=True, trunc=TRUNC),
     "common-mode offset (all loops)")

# frozen random qubit offsets with a swept coupler bias
offsets = np.array([1.0, 1.5, -2.1, 3.0]) * m
show(sweep_flux(p, np.linspace(-m, m, 5), qubit_offsets=offsets, trunc=TRUNC),
     f"coupler sweep with fixed qubit offsets {offsets / m} mPhi0")

print("tilting the qubit loops breaks the degeneracy of the two circulating-")
print("current states; the effective model acquires longitudinal fields and")
print("the fitted couplings move by tens of percent per milli-Phi_0, which is")
print("why per-qubit flux compensation matters much more than coupler drift.")
