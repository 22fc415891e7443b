"""Anatomy of the low-lying spectrum at the operating point.

Four flux qubits share a common rf-SQUID coupler.  With the coupler bias held
at half a flux quantum, virtual excitations of the coupler dress the 16-state
qubit manifold and split it according to an effective Ising model with
one- through four-local terms.  This script diagonalizes the full circuit,
identifies the coupler-ground manifold by eigenvector occupation, and fits
the generalized Ising model to the 16 levels.
"""

import numpy as np

from fluxcoupler.analysis import Truncations, spectral_point
from fluxcoupler.circuit import derive_unitless, reference_circuit, validate_regime

u = derive_unitless(reference_circuit(beta_c=0.43))
report = validate_regime(u)
print("unitless parameters at the reference point")
print(f"  alpha        = {np.mean(u.alpha):.5f}")
print(f"  xi_c         = {u.xi_c:.6f}")
print(f"  beta_c       = {u.beta_c:.3f}")
print(f"  E_Ltilde_c   = {u.E_Ltilde_c / 1e12:.4f} THz")
print(f"  regime flags : double well {report.qubit_double_well}, "
      f"single well {report.coupler_single_well}, "
      f"hierarchy {report.hierarchy}")
print()

cs, gaps, spec, omega = spectral_point(u, Truncations())
lv = spec.eigenvalues - spec.eigenvalues[0]
ground = spec.coupler_ground_levels(16)

print(f"bare qubit splitting   : {omega[0] / 1e9:.4f} GHz")
print(f"coupler-ground manifold ({len(ground)} levels, GHz above ground):")
for k, e in enumerate((ground - ground[0]) / 1e9):
    print(f"  {k:2d}  {e:8.4f}")
print()
print("fitted effective Ising model (MHz):")
print(f"  J1 = {cs.J1 / 1e6:9.3f}    J2 = {cs.J2 / 1e6:9.3f}")
print(f"  J3 = {cs.J3 / 1e6:9.3f}    J4 = {cs.J4 / 1e6:9.3f}")
print(f"  rms fit residual = {cs.residual / 1e6:.3f} MHz")
print()
print("a large residual flags model mismatch: at this screening strength the")
print("coupler hybridizes with the qubits and a pure Ising form cannot")
print("reproduce the manifold; compare demo 02 at weaker screening.")
print()
print(f"subspace separation: delta_gap = {gaps.delta_gap / 1e9:.3f} GHz, "
      f"delta_max = {gaps.delta_max / 1e9:.3f} GHz "
      f"(separated by >= {gaps.threshold}x: {gaps.valid})")
