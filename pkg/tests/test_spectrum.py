import numpy as np
import pytest

from fluxcoupler.circuit import derive_unitless, reference_circuit
from fluxcoupler.hamiltonian import (IsingModel, assemble_full,
                                     assemble_ising_model, build_coupler,
                                     build_qubit_bare, qubit_phase,
                                     reduce_qubit)
from fluxcoupler.spectrum import (eigendecompose, extract_couplings,
                                  gap_diagnostics, two_excitation_splitting)


def _spec_of(model: IsingModel):
    return eigendecompose(assemble_ising_model(model))


def test_eigendecompose_rejects_non_hermitian():
    m = IsingModel.symmetric(1.0, J2=0.1)
    H = assemble_ising_model(m)
    H.data = H.data + np.triu(np.ones_like(H.data), 1) * 0.5
    with pytest.raises(ValueError):
        eigendecompose(H)


def test_eigendecompose_sorted_and_labeled():
    s = _spec_of(IsingModel.symmetric(2.0, J2=0.3, J4=0.1))
    assert np.all(np.diff(s.eigenvalues) >= 0)
    # pure qubit-space spectrum: everything is coupler-ground
    assert np.all(s.subspace_label)
    assert len(s.coupler_ground_levels(16)) == 16


@pytest.mark.parametrize("J1,J2,J3,J4", [
    (0.0, -0.1455, 0.0, 0.291),
    (0.02, -0.3, 0.005, 0.05),
    (0.0, 0.0, 0.0, 0.2),
])
def test_fit_round_trip(J1, J2, J3, J4):
    omega = np.full(4, 2.9)
    m = IsingModel.symmetric(2.9, J1=J1, J2=J2, J3=J3, J4=J4, shift=0.7)
    cs = extract_couplings(_spec_of(m), omega)
    assert cs.provenance == "spectral_fit"
    assert cs.residual < 1e-7
    # the spectrum is even under a global X flip (odd-weight Z strings change
    # sign), so the J1/J3 direction is quadratically flat near zero and those
    # two recover less sharply than the even couplings
    for name, want, tol in [("J1", J1, 5e-4), ("J2", J2, 1e-6),
                            ("J3", J3, 5e-4), ("J4", J4, 1e-6)]:
        assert getattr(cs, name) == pytest.approx(want, abs=tol)
    assert cs.shift == pytest.approx(0.7, abs=1e-6)


def test_fit_without_three_local():
    m = IsingModel.symmetric(2.9, J2=-0.2, J4=0.1)
    cs = extract_couplings(_spec_of(m), np.full(4, 2.9), fit_J3=False)
    assert cs.J3 == 0.0
    assert cs.J2 == pytest.approx(-0.2, abs=1e-8)
    assert cs.J4 == pytest.approx(0.1, abs=1e-8)


def test_fit_noise_robustness():
    # perturb the spectrum at the 1e-6 level; recovered couplings move by a
    # comparable amount, not catastrophically
    rng = np.random.default_rng(3)
    m = IsingModel.symmetric(2.9, J2=-0.15, J4=0.29)
    s = _spec_of(m)
    s.eigenvalues = s.eigenvalues + rng.normal(scale=1e-6, size=16)
    cs = extract_couplings(s, np.full(4, 2.9))
    assert cs.J4 == pytest.approx(0.29, abs=1e-4)
    assert cs.J2 == pytest.approx(-0.15, abs=1e-4)
    assert cs.residual < 1e-5


def test_fit_residual_threshold_diagnostic():
    # a spectrum the Ising model cannot reproduce: random symmetric levels
    rng = np.random.default_rng(11)
    m = IsingModel.symmetric(2.9, J2=-0.15)
    s = _spec_of(m)
    s.eigenvalues = np.sort(s.eigenvalues + rng.normal(scale=0.3, size=16))
    cs = extract_couplings(s, np.full(4, 2.9), residual_threshold=0.01)
    assert cs.residual > 0.01
    assert "model_mismatch" in cs.diagnostics


def test_two_excitation_four_local_pattern():
    # omega/2 sum X + J4 ZZZZ is exactly block diagonal by excitation number
    # parity; the two-excitation block splits into +-J4 pairs: {3, 3}
    m = IsingModel.symmetric(5.0, J4=0.5)
    out = two_excitation_splitting(_spec_of(m), np.full(4, 5.0))
    assert out["degeneracies"] == [3, 3]
    assert out["distance"] == pytest.approx(2 * 0.5, rel=1e-9)


def test_two_excitation_two_local_pattern():
    # first-order degenerate theory: octahedron adjacency spectrum {4, 0^3, -2^2}
    m = IsingModel.symmetric(500.0, J2=0.1)
    out = two_excitation_splitting(_spec_of(m), np.full(4, 500.0),
                                   cluster_tol=1e-3)
    assert out["degeneracies"] == [1, 2, 3]
    assert out["distance"] == pytest.approx(6 * 0.1, rel=1e-3)


def test_two_excitation_degenerate_limit():
    m = IsingModel.symmetric(3.0)
    out = two_excitation_splitting(_spec_of(m), np.full(4, 3.0))
    assert out["degeneracies"] == [6]
    assert out["distance"] == pytest.approx(0.0, abs=1e-9)


def test_two_excitation_requires_equal_frequencies():
    m = IsingModel.symmetric(3.0, J4=0.1)
    m.omega = np.array([3.0, 3.0, 3.0, 3.3])
    with pytest.raises(ValueError, match="equal qubit frequencies"):
        two_excitation_splitting(_spec_of(m), m.omega)


def test_two_excitation_mixing_refusal():
    # couplings comparable to the splitting scramble the sector: the
    # identification must refuse rather than silently mislabel
    m = IsingModel.symmetric(1.0, J2=0.8, J4=0.9, J1=0.5)
    with pytest.raises(RuntimeError, match="not identifiable"):
        two_excitation_splitting(_spec_of(m), np.full(4, 1.0))


def test_gap_diagnostics_pure_qubit_space():
    gd = gap_diagnostics(_spec_of(IsingModel.symmetric(2.9, J2=-0.1)))
    assert np.isinf(gd.delta_gap)
    assert gd.valid


def test_gap_diagnostics_product_space():
    u = derive_unitless(reference_circuit(beta_c=0.2))
    qubits = [reduce_qubit(build_qubit_bare(u, j, 50), qubit_phase(u, j, 50))
              for j in range(4)]
    coupler = build_coupler(u, 40)
    s = eigendecompose(assemble_full(qubits, coupler, u, 8))
    gd = gap_diagnostics(s)
    # 16 coupler-ground levels identified, separated from the excited set
    assert np.sum(s.subspace_label) >= 16
    assert gd.delta_gap > 0
    assert gd.delta_max > 0
    assert gd.valid == (gd.delta_gap > gd.threshold * gd.delta_max)
