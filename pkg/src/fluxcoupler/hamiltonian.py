"""Operator assembly.

Bare coupler and qubit Hamiltonians in truncated oscillator bases, the
two-level qubit reduction, the 4-qubit (x) coupler product-space Hamiltonian,
and the generalized Ising target model used for fitting.

All assembled operators carry units of Hz (energy/h).
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .oscillator import ladder, cosine_matrix

PAIRS = list(itertools.combinations(range(4), 2))
TRIPLES = list(itertools.combinations(range(4), 3))

_I2 = np.eye(2)
_X = np.array([[0.0, 1.0], [1.0, 0.0]])
_Z = np.diag([1.0, -1.0])


@dataclass
class OperatorMatrix:
    data: np.ndarray
    basis: str            # 'oscillator', 'coupler_eigen', 'qubit_2level', 'product', 'ising_pc'
    dims: tuple           # subsystem dimensions, product equals matrix size
    units: str = "Hz"

    def __post_init__(self):
        self.data = np.asarray(self.data)
        n = self.data.shape[0]
        if self.data.shape != (n, n):
            raise ValueError("operator must be square")
        if int(np.prod(self.dims)) != n:
            raise ValueError("basis dims inconsistent with matrix dimension")
        herm_err = np.linalg.norm(self.data - self.data.conj().T)
        if herm_err > 1e-12 * max(np.linalg.norm(self.data), 1.0):
            raise ValueError("operator not Hermitian within tolerance")


def kron_all(ops):
    out = ops[0]
    for o in ops[1:]:
        out = np.kron(out, o)
    return out


def _oscillator_ops(xi, stiffness, n_trunc):
    """Quadratic-part oscillator basis for H/E_L = 4 xi^2 q^2/2 + stiffness phi^2/2.

    Returns (number operator contribution as the diagonal harmonic part, phi).
    The harmonic frequency is 2 xi sqrt(stiffness) and the phi matrix scale is
    r = sqrt(xi / sqrt(stiffness)).
    """
    w0 = 2.0 * xi * np.sqrt(stiffness)
    r = np.sqrt(xi / np.sqrt(stiffness))
    a = ladder(n_trunc)
    phi = r * (a + a.T)
    h_harm = w0 * np.diag(np.arange(n_trunc) + 0.5)
    return h_harm, phi, r


def build_coupler(u, n_trunc=40):
    """Bare coupler H_c = E_Ltilde_c (4 xi_c^2 q^2/2 + (phi - phi_cx)^2/2 + beta_c cos phi).

    Expressed in the oscillator basis of the quadratic part.  Refuses
    beta_c >= 1 (the harmonic expansion frame is invalid there).
    """
    if u.beta_c >= 1:
        raise ValueError("beta_c >= 1: coupler harmonic frame invalid")
    if n_trunc < 10:
        raise ValueError("n_trunc >= 10 required for the coupler")
    h_harm, phi, r = _oscillator_ops(u.xi_c, 1.0, n_trunc)
    h = h_harm + u.beta_c * cosine_matrix(n_trunc, r) \
        - u.phi_cx * phi + 0.5 * u.phi_cx**2 * np.eye(n_trunc)
    return OperatorMatrix(u.E_Ltilde_c * h, "oscillator", (n_trunc,))


def coupler_phase(u, n_trunc=40):
    """phi operator of the coupler in the same oscillator basis as build_coupler."""
    _, phi, _ = _oscillator_ops(u.xi_c, 1.0, n_trunc)
    return OperatorMatrix(phi, "oscillator", (n_trunc,), units="dimensionless")


def build_qubit_bare(u, j, n_trunc=50):
    """Bare qubit H_j = E_Lj (4 xi^2 q^2/2 + (1+alpha^2)(phi - phi_jx)^2/2 + beta cos phi)."""
    xi = float(u.xi_j[j])
    alpha = float(u.alpha[j])
    beta = float(u.beta_j[j])
    phi_x = float(u.phi_jx[j])
    if beta <= 1:
        raise ValueError("beta_j <= 1: no double well, qubit regime violated")
    c = 1.0 + alpha**2
    h_harm, phi, r = _oscillator_ops(xi, c, n_trunc)
    h = h_harm + beta * cosine_matrix(n_trunc, r) \
        - c * phi_x * phi + 0.5 * c * phi_x**2 * np.eye(n_trunc)
    return OperatorMatrix(float(u.E_Lj[j]) * h, "oscillator", (n_trunc,))


def qubit_phase(u, j, n_trunc=50):
    """phi operator of qubit j, matching build_qubit_bare's basis."""
    c = 1.0 + float(u.alpha[j])**2
    _, phi, _ = _oscillator_ops(float(u.xi_j[j]), c, n_trunc)
    return OperatorMatrix(phi, "oscillator", (n_trunc,), units="dimensionless")


@dataclass
class ReducedQubit:
    h2: np.ndarray          # 2x2, Hz, trace removed, diagonal in energy basis
    phi2: np.ndarray        # 2x2 phase operator in the same basis
    s_effective: float      # |off-diagonal phi element| at zero offset
    omega: float            # splitting (Hz)
    gauge_warning: bool


def reduce_qubit(h: OperatorMatrix, phi: OperatorMatrix) -> ReducedQubit:
    """Project a bare qubit onto its two lowest eigenstates.

    The eigenvector gauge is fixed so the off-diagonal phi element is real and
    non-negative, making all downstream coupling signs deterministic.
    """
    ev, vec = np.linalg.eigh(h.data)
    gauge_warning = bool(abs(ev[2] - ev[1]) < 1e-9 * max(abs(ev[2]), 1.0))
    v2 = vec[:, :2]
    phi2 = v2.T @ phi.data @ v2
    if phi2[0, 1] < 0:
        v2 = v2 @ np.diag([1.0, -1.0])
        phi2 = v2.T @ phi.data @ v2
    h2 = np.diag(ev[:2] - np.mean(ev[:2]))
    return ReducedQubit(h2=h2, phi2=phi2, s_effective=abs(phi2[0, 1]),
                        omega=float(ev[1] - ev[0]), gauge_warning=gauge_warning)


def assemble_full(qubits, coupler: OperatorMatrix, u, n_keep=8):
    """Product-space Hamiltonian on 2^4 x n_keep dimensions.

    H = sum_j H_j + H_c
        + E_Ltilde_c [ sum_{i<j} alpha_i alpha_j phi_i phi_j
                       + sum_j alpha_j phi_c phi_j ]
    with the coupler expressed in its own eigenbasis (n_keep states kept) and
    each qubit in its two-level reduction.  The direct term runs over each
    unordered pair once.
    """
    if len(qubits) != 4:
        raise ValueError("need exactly four reduced qubits")
    n_c = coupler.dims[0]
    if n_keep > n_c:
        raise ValueError("n_keep exceeds coupler truncation")
    ev_c, vec_c = np.linalg.eigh(coupler.data)
    e_c = ev_c[:n_keep] - ev_c[0]
    phi_c_full = coupler_phase_from_basis(u, n_c)
    phi_c = (vec_c.T @ phi_c_full @ vec_c)[:n_keep, :n_keep]

    dims = (2, 2, 2, 2, n_keep)
    eye_c = np.eye(n_keep)
    ops0 = [_I2] * 4 + [eye_c]

    def embed(slot_ops):
        ops = list(ops0)
        for slot, op in slot_ops:
            ops[slot] = op
        return kron_all(ops)

    H = np.zeros((16 * n_keep, 16 * n_keep))
    for j in range(4):
        H += embed([(j, qubits[j].h2)])
    H += embed([(4, np.diag(e_c))])
    E = u.E_Ltilde_c
    for i, j in PAIRS:
        H += E * float(u.alpha[i] * u.alpha[j]) * embed(
            [(i, qubits[i].phi2), (j, qubits[j].phi2)])
    for j in range(4):
        H += E * float(u.alpha[j]) * embed([(j, qubits[j].phi2), (4, phi_c)])
    return OperatorMatrix(H, "product", dims)


def coupler_phase_from_basis(u, n_trunc):
    _, phi, _ = _oscillator_ops(u.xi_c, 1.0, n_trunc)
    return phi


@dataclass
class IsingModel:
    """Generalized Ising target model in the persistent-current frame.

    The bare terms are diagonal in the qubit energy basis (omega/2 X-type in
    the persistent-current basis), the couplings are Z strings.
    """
    omega: np.ndarray            # (4,) Hz
    J1: np.ndarray               # (4,) Hz
    J2: np.ndarray               # (6,) Hz, pair order PAIRS
    J3: np.ndarray               # (4,) Hz, triple order TRIPLES
    J4: float                    # Hz
    shift: float = 0.0           # global offset (Hz)

    @classmethod
    def symmetric(cls, omega, J1=0.0, J2=0.0, J3=0.0, J4=0.0, shift=0.0):
        return cls(omega=np.full(4, float(omega)), J1=np.full(4, float(J1)),
                   J2=np.full(6, float(J2)), J3=np.full(4, float(J3)),
                   J4=float(J4), shift=float(shift))


def assemble_ising_model(m: IsingModel) -> OperatorMatrix:
    """16x16 matrix of the generalized Ising model, persistent-current basis."""
    H = m.shift * np.eye(16)
    for i in range(4):
        ops = [_I2] * 4
        ops[i] = 0.5 * m.omega[i] * _X
        H += kron_all(ops)
    for i in range(4):
        ops = [_I2] * 4
        ops[i] = m.J1[i] * _Z
        H += kron_all(ops)
    for k, (i, j) in enumerate(PAIRS):
        ops = [_I2] * 4
        ops[i] = _Z
        ops[j] = m.J2[k] * _Z
        H += kron_all(ops)
    for k, t in enumerate(TRIPLES):
        ops = [_I2] * 4
        for q in t:
            ops[q] = _Z
        H += m.J3[k] * kron_all(ops)
    H += m.J4 * kron_all([_Z] * 4)
    return OperatorMatrix(H, "ising_pc", (2, 2, 2, 2))
