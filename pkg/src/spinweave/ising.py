"""Ising chain Hamiltonians, exact evolution, and the classical-limit OTOC.

The model is an open chain of ``n`` spins,

    H = J sum_i Z_i Z_{i+1} + Bz sum_i Z_i + Bx sum_i X_i,

whose diagonal part (``Bx = 0``) is referred to as the classical
Hamiltonian.  Sites are numbered 1..n to match the probe-site convention of
the OTOC surfaces; site ``j`` acts on qubit ``j - 1``.

For the classical Hamiltonian the OTOC of X operators on the all-zeros
state has a closed form: flipping spins only shuffles classical energies,
so the correlator is a pure phase built from the energy differences of the
single- and double-excitation states.  :func:`classical_otoc` implements
that phase for the measured row ``i = 1``;
:func:`classical_otoc_bruteforce` evaluates the same quantity from dense
diagonal evolution and serves as its oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CapacityError

MAX_DENSE_QUBITS = 14
MAX_OTOC_QUBITS = 10


@dataclass(frozen=True)
class IsingParams:
    """Chain size and couplings. The closed-form OTOC needs n >= 3."""

    n: int
    J: float
    Bx: float
    Bz: float

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"n must be >= 3, got {self.n}")


REGIME_COUPLINGS = {
    "integrable": (-1.0, 0.0, 1.0),
    "chaotic": (-1.0, 0.7, 1.5),
}


@dataclass(frozen=True)
class RegimePreset:
    name: str
    params: IsingParams


def regime_preset(name: str, n: int) -> RegimePreset:
    """Bundled parameter sets: 'integrable' (J, Bx, Bz) = (-1, 0, 1) and
    'chaotic' (-1, 0.7, 1.5)."""
    try:
        j, bx, bz = REGIME_COUPLINGS[name]
    except KeyError:
        raise ValueError(
            f"unknown regime {name!r}; choose from {sorted(REGIME_COUPLINGS)}") from None
    return RegimePreset(name, IsingParams(n, j, bx, bz))


def preset_params(name: str, n: int) -> IsingParams:
    return regime_preset(name, n).params


def _site_bits(n: int) -> np.ndarray:
    """(2^n, n) array of bits with qubit 0 in column 0 (most significant)."""
    idx = np.arange(2 ** n)[:, None]
    return (idx >> np.arange(n - 1, -1, -1)) & 1


def classical_energies(p: IsingParams) -> np.ndarray:
    """Diagonal of the classical Hamiltonian over all classical states."""
    z = 1.0 - 2.0 * _site_bits(p.n)
    return p.J * (z[:, :-1] * z[:, 1:]).sum(axis=1) + p.Bz * z.sum(axis=1)


def _check_dense(n: int):
    if n > MAX_DENSE_QUBITS:
        raise CapacityError(f"dense construction limited to n <= {MAX_DENSE_QUBITS}, got n={n}")


def build_hamiltonian(p: IsingParams) -> np.ndarray:
    """Dense real-symmetric matrix of the full Hamiltonian."""
    _check_dense(p.n)
    d = 2 ** p.n
    h = np.diag(classical_energies(p))
    if p.Bx != 0.0:
        rows = np.arange(d)
        for q in range(p.n):
            h[rows, rows ^ (1 << (p.n - 1 - q))] += p.Bx
    return h


def build_classical_hamiltonian(p: IsingParams) -> np.ndarray:
    """Dense diagonal matrix of the classical part (Bx forced to 0)."""
    _check_dense(p.n)
    return np.diag(classical_energies(p))


def _require_hermitian(h: np.ndarray, tol: float = 1e-10):
    if np.max(np.abs(h - h.conj().T)) > tol:
        raise ValueError("matrix is not Hermitian within tolerance")


class ExactEvolution:
    """Exact propagator of a fixed Hermitian matrix, eigendecomposed once.

    The decomposition is reused for every requested time, which is what the
    surface runs need: one O(8^n) factorization, then O(4^n) per time point.
    """

    def __init__(self, h: np.ndarray):
        _require_hermitian(h)
        self.eigenvalues, self.eigenvectors = np.linalg.eigh(h)

    def unitary(self, t: float) -> np.ndarray:
        v = self.eigenvectors
        return (v * np.exp(-1j * self.eigenvalues * t)) @ v.conj().T


def exact_unitary(h: np.ndarray, t: float) -> np.ndarray:
    """exp(-i h t) for Hermitian ``h`` via eigendecomposition."""
    return ExactEvolution(h).unitary(t)


@lru_cache(maxsize=32)
def cached_evolution(p: IsingParams) -> ExactEvolution:
    """Shared propagator for a parameter set; safe because it is immutable."""
    return ExactEvolution(build_hamiltonian(p))


def _check_site(p: IsingParams, j: int, name: str = "j"):
    if not 1 <= j <= p.n:
        raise ValueError(f"site {name}={j} out of range 1..{p.n}")


def classical_otoc_phase(p: IsingParams, j: int, t: float) -> float:
    """Phase of the classical-Hamiltonian OTOC for the measured row i = 1.

    4(J + Bz)t at the butterfly site, 4Jt at its neighbour, and 0 further
    out (including the far chain end).
    """
    _check_site(p, j)
    if j == 1:
        return 4.0 * (p.J + p.Bz) * t
    if j == 2:
        return 4.0 * p.J * t
    return 0.0


def classical_otoc(p: IsingParams, j: int, t: float) -> complex:
    """Classical-limit OTOC for i = 1, constructed in polar form (unit modulus)."""
    return complex(np.exp(1j * classical_otoc_phase(p, j, t)))


def classical_otoc_bruteforce(p: IsingParams, i: int, j: int, t: float) -> complex:
    """<0..0| X_i(t) X_j X_i(t) X_j |0..0> under the classical Hamiltonian,
    evaluated with dense diagonal evolution.  Oracle for :func:`classical_otoc`;
    also covers general (i, j)."""
    if p.n > MAX_OTOC_QUBITS:
        raise CapacityError(f"brute-force OTOC limited to n <= {MAX_OTOC_QUBITS}")
    _check_site(p, i, "i")
    _check_site(p, j, "j")
    d = 2 ** p.n
    e = classical_energies(p)
    rows = np.arange(d)
    xi = np.zeros((d, d))
    xi[rows ^ (1 << (p.n - i)), rows] = 1.0
    xj = np.zeros((d, d))
    xj[rows ^ (1 << (p.n - j)), rows] = 1.0
    phases = np.exp(-1j * e * t)
    xit = (xi * phases.conj()[:, None]) * phases[None, :]
    m = xit @ xj
    return complex((m @ m)[0, 0])
