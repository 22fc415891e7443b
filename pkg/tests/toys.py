"""Small exactly-solvable toy systems shared between test modules."""

import numpy as np

from fluxcoupler.circuit import derive_unitless, reference_circuit
from fluxcoupler.hamiltonian import (OperatorMatrix, build_coupler,
                                     build_qubit_bare, coupler_phase_from_basis,
                                     kron_all, qubit_phase, reduce_qubit)
from fluxcoupler.swt import pauli_decompose, swt_effective_block

_I2 = np.eye(2)
_Z = np.diag([1.0, -1.0])


def one_qubit_toy_error(alpha_eff, phi_cx=0.05, phi_jx=0.005, beta_c=0.2,
                        n_c=30):
    """|| H_eff - exact low block || for a single qubit + exact coupler.

    The coupling strength is E * alpha_eff * phi2 * phi_c; the exact low block
    comes from symmetric (Loewdin) orthonormalization of the projected exact
    eigenvectors, which matches the block-off-diagonal-generator convention of
    the engine.  Small flux biases keep the comparison generic: at the exactly
    symmetric point parity selection cancels all odd expansion orders.
    """
    u = derive_unitless(reference_circuit(beta_c=beta_c))
    u.phi_cx = phi_cx
    u.phi_jx = np.full(4, phi_jx)
    q = reduce_qubit(build_qubit_bare(u, 0, 50), qubit_phase(u, 0, 50))
    c = build_coupler(u, n_c)
    ev_c, vec_c = np.linalg.eigh(c.data)
    e_c = ev_c - ev_c[0]
    phi_c = vec_c.T @ coupler_phase_from_basis(u, n_c) @ vec_c
    h0 = np.concatenate([np.diag(q.h2)[0] + e_c, np.diag(q.h2)[1] + e_c])
    V = np.kron(q.phi2, phi_c) * u.E_Ltilde_c * alpha_eff
    block0 = np.array([(i % n_c) == 0 for i in range(2 * n_c)])
    h_eff = swt_effective_block(h0, V, block0)

    H = np.diag(h0) + V
    ev, vec = np.linalg.eigh(H)
    w = np.sum(vec[block0, :] ** 2, axis=0)
    idx = np.argsort(w)[::-1][:2]
    W = vec[:, idx][block0, :]
    gw, gv = np.linalg.eigh(W.T @ W)
    X = W @ gv @ np.diag(gw ** -0.5) @ gv.T
    h_exact = X @ np.diag(ev[idx]) @ X.T
    return np.linalg.norm(h_eff - h_exact)


def linear_coupler_toy(g, delta, omega=0.0, n_c=25):
    """Four qubits linearly coupled to one harmonic mode, through the engine.

    In the persistent-current frame: H0 = sum_j (omega/2) X_j + delta a^dag a
    and V = g sum_j Z_j (a + a^dag).  The engine works in the energy basis
    (H0 diagonal, coupling operator = flip); the returned low block is rotated
    back to the pc frame before Pauli decomposition.

    For omega = 0 the model is exactly solvable by a coupler displacement:
    E(z) = -g^2 (sum_j z_j)^2 / delta, pure constant + two-local content.

    Returns (model dict, residual) from the Pauli decomposition.
    """
    dims = 16 * n_c
    h0 = np.zeros(dims)
    for idx in range(dims):
        c, rem = idx % n_c, idx // n_c
        bits = [(rem >> (3 - j)) & 1 for j in range(4)]
        h0[idx] = omega * sum(bits) + delta * c
    a = np.zeros((n_c, n_c))
    k = np.arange(1, n_c)
    a[k - 1, k] = np.sqrt(k)
    x = a + a.T
    ops0 = [_I2] * 4 + [np.eye(n_c)]

    # pc-frame Z_j is the flip operator in the qubit energy basis
    flip = np.array([[0.0, 1.0], [1.0, 0.0]])
    V = np.zeros((dims, dims))
    for j in range(4):
        ops = list(ops0)
        ops[j] = flip
        ops[4] = g * x
        V += kron_all(ops)
    block0 = np.array([(i % n_c) == 0 for i in range(dims)])
    block = swt_effective_block(h0, V, block0)
    # rotate energy basis -> pc frame (Hadamard per qubit maps flip -> Z)
    had = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    U = kron_all([had] * 4)
    h_eff = OperatorMatrix(U.T @ block @ U, "ising_pc", (2, 2, 2, 2))
    return pauli_decompose(h_eff)
