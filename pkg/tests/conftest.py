"""Shared test helpers: independent dense oracles.

Everything here is deliberately naive (bit loops, explicit kron chains)
so that the oracles share no code path with the package internals they
check.
"""

import numpy as np
import pytest

I2 = np.eye(2, dtype=complex)
X2 = np.array([[0, 1], [1, 0]], dtype=complex)
Y2 = np.array([[0, -1j], [1j, 0]])
Z2 = np.diag([1.0, -1.0]).astype(complex)


def embed_dense(u, qubits, n):
    """Dense 2^n x 2^n embedding of a k-qubit operator by explicit bit
    bookkeeping (qubit 0 = most significant bit)."""
    d = 2 ** n
    k = len(qubits)
    out = np.zeros((d, d), dtype=complex)
    for col in range(d):
        bits = [(col >> (n - 1 - q)) & 1 for q in range(n)]
        sub_in = sum(bits[qubits[m]] << (k - 1 - m) for m in range(k))
        for sub_out in range(2 ** k):
            new_bits = list(bits)
            for m in range(k):
                new_bits[qubits[m]] = (sub_out >> (k - 1 - m)) & 1
            row = sum(new_bits[q] << (n - 1 - q) for q in range(n))
            out[row, col] += u[sub_out, sub_in]
    return out


def kron_site(op, site, n):
    """op at 1-based site, identity elsewhere."""
    out = np.eye(1, dtype=complex)
    for q in range(n):
        out = np.kron(out, op if q == site - 1 else I2)
    return out


def dense_hamiltonian(n, j_coupling, bx, bz):
    h = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for q in range(1, n):
        h += j_coupling * kron_site(Z2, q, n) @ kron_site(Z2, q + 1, n)
    for q in range(1, n + 1):
        h += bz * kron_site(Z2, q, n) + bx * kron_site(X2, q, n)
    return h


def dense_otoc(u, i, j, n, state="zeros", probe="x"):
    """tr[rho X_i(t) V_j X_i(t) V_j] from explicit dense matrices."""
    xi = kron_site(X2, i, n)
    vj = kron_site(X2 if probe == "x" else Y2, j, n)
    xit = u.conj().T @ xi @ u
    m = xit @ vj @ xit @ vj
    d = 2 ** n
    if state == "zeros":
        rho = np.zeros((d, d), dtype=complex)
        rho[0, 0] = 1.0
    elif state == "plus":
        rho = np.full((d, d), 1.0 / d, dtype=complex)
    elif state == "maximally_mixed":
        rho = np.eye(d, dtype=complex) / d
    else:
        raise ValueError(state)
    return complex(np.trace(rho @ m))


def partial_trace_pair(rho, q1, q2, n):
    """Reduced 4x4 state of qubits (q1, q2), by explicit index loops."""
    keep = [q1, q2]
    other = [q for q in range(n) if q not in keep]
    out = np.zeros((4, 4), dtype=complex)
    d = 2 ** n
    for a in range(d):
        abits = [(a >> (n - 1 - q)) & 1 for q in range(n)]
        ia = (abits[q1] << 1) | abits[q2]
        for b in range(d):
            bbits = [(b >> (n - 1 - q)) & 1 for q in range(n)]
            if any(abits[q] != bbits[q] for q in other):
                continue
            ib = (bbits[q1] << 1) | bbits[q2]
            out[ia, ib] += rho[a, b]
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20260808)
