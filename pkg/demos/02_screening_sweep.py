"""Coupling strengths versus coupler screening parameter beta_c.

The coupler screening parameter beta_c = 2 pi L_c I_cc / Phi_0 controls how
strongly virtual coupler excitations mediate multi-qubit interactions.  This
script sweeps beta_c, extracts the fitted couplings at each point, and prints
the trend, including the growth of the fit residual as the coupler softens
and the Ising description degrades.
"""

import numpy as np

from fluxcoupler.analysis import Truncations, sweep_beta
from fluxcoupler.circuit import reference_circuit

TRUNC = Truncations(qubit_states=40, coupler_states=30, n_keep=8)
grid = np.round(np.arange(0.05, 0.61, 0.05), 3)

res = sweep_beta(reference_circuit(), grid, TRUNC)

print(f"{'beta_c':>7} {'J2 (MHz)':>10} {'J4 (MHz)':>10} "
      f"{'residual (MHz)':>15} {'delta_gap (GHz)':>16}")
for row in res.rows:
    if row["spectral_status"] != "ok":
        print(f"{row['beta_c']:7.2f}  {row['spectral_status']}")
        continue
    print(f"{row['beta_c']:7.2f} {row['spectral_J2'] / 1e6:10.2f} "
          f"{row['spectral_J4'] / 1e6:10.2f} "
          f"{row['spectral_residual'] / 1e6:15.2f} "
          f"{row['delta_gap'] / 1e9:16.3f}")

print()
print("the two-local coupling J2 grows steadily in magnitude with beta_c,")
print("while the fitted J4 stays small; the residual column shows where the")
print("16-level manifold stops being describable by any Ising model at all.")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ok = [r for r in res.rows if r["spectral_status"] == "ok"]
    b = [r["beta_c"] for r in ok]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(b, [r["spectral_J2"] / 1e6 for r in ok], "o-", label="J2")
    ax.plot(b, [r["spectral_J4"] / 1e6 for r in ok], "s-", label="J4")
    ax.set_xlabel(r"$\beta_c$")
    ax.set_ylabel("coupling (MHz)")
    ax.legend()
    fig.tight_layout()
    fig.savefig("screening_sweep.png", dpi=150)
    print("wrote screening_sweep.png")
except ImportError:
    pass
