"""Biorthonormal eigendecomposition, pseudo-Hermiticity tests and the metric eta.

A real-spectrum diagonalizable Hamiltonian ``H`` is similar to a Hermitian
matrix through ``eta = sqrt(V)``, where ``V = Phi Phi^dagger`` is built from
the left eigenvectors.  Then ``V H V^-1 = H^dagger`` and ``eta H eta^-1`` is
Hermitian.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    NotDiagonalizableError,
    NotPseudoHermitianError,
    PreconditionError,
    SingularMetricError,
)
from .graphcore import Hamiltonian

HERMITIAN_TOL = 1e-12
IMAG_TOL = 1e-9
RCOND_MIN = 1e-10
CLUSTER_TOL = 1e-8
SINGULAR_TOL = 1e-12
HERMITIZE_TOL = 1e-7
DEFECT_CLUSTER_TOL = 1e-6
NULLITY_TOL = 1e-8


@dataclass(frozen=True)
class SpectralData:
    eigenvalues: np.ndarray
    right: np.ndarray  # columns psi_j
    left: np.ndarray  # columns phi_j, with left^dagger = right^-1
    condition: float
    matrix: np.ndarray | None = None

    @property
    def is_real(self) -> bool:
        lam = self.eigenvalues
        return bool(np.all(np.abs(lam.imag) <= IMAG_TOL * np.maximum(1.0, np.abs(lam))))


@dataclass(frozen=True)
class EtaDecomposition:
    eta: np.ndarray
    eta_inv: np.ndarray
    v: np.ndarray
    spectral: SpectralData


@dataclass(frozen=True)
class PHClassification:
    label: str  # hermitian | pseudo_hermitian | broken
    max_imag: float
    rcond: float
    real_spectrum: bool = True
    defective_eigenvalue: float | None = None

    @property
    def ok(self) -> bool:
        return self.label != "broken"

    @property
    def reason(self) -> str:
        if self.label != "broken":
            return "real spectrum and diagonalizable"
        parts = []
        if not self.real_spectrum:
            parts.append(f"complex eigenvalues (max |Im| = {self.max_imag:.3g})")
        if self.rcond <= RCOND_MIN:
            parts.append(f"not diagonalizable (eigenvector rcond = {self.rcond:.3g})")
        elif self.defective_eigenvalue is not None:
            parts.append(
                f"not diagonalizable (eigenvalue {self.defective_eigenvalue:.6g} lacks eigenvectors)"
            )
        return "; ".join(parts) or "broken"


def _matrix(h) -> np.ndarray:
    return np.asarray(h.matrix if isinstance(h, Hamiltonian) else h)


def _rcond(psi: np.ndarray) -> float:
    s = np.linalg.svd(psi, compute_uv=False)
    if s[0] == 0:
        return 0.0
    return float(s[-1] / s[0])


def _sorted_eig(m: np.ndarray):
    lam, psi = np.linalg.eig(m)
    lam = lam.astype(complex)
    order = np.lexsort((np.arange(len(lam)), lam.imag, lam.real))
    return lam[order], psi[:, order]


def _real_ok(lam: np.ndarray) -> np.ndarray:
    return np.abs(lam.imag) <= IMAG_TOL * np.maximum(1.0, np.abs(lam))


def classify(h) -> PHClassification:
    """hermitian, pseudo_hermitian (real spectrum, diagonalizable) or broken."""
    m = _matrix(h)
    n = m.shape[0]
    if n == 0:
        return PHClassification("hermitian", 0.0, 1.0)
    if np.max(np.abs(m - m.conj().T)) <= HERMITIAN_TOL:
        return PHClassification("hermitian", 0.0, 1.0)
    lam, psi = _sorted_eig(m)
    max_imag = float(np.max(np.abs(lam.imag)))
    rc = _rcond(psi)
    real = bool(np.all(_real_ok(lam)))
    defect = _defective_cluster(m, lam) if real else None
    label = "pseudo_hermitian" if real and rc > RCOND_MIN and defect is None else "broken"
    return PHClassification(label, max_imag, rc, real, defect)


def _defective_cluster(m: np.ndarray, lam: np.ndarray) -> float | None:
    """An eigenvalue whose geometric multiplicity falls short, if any.

    A rounded Jordan block of size ``k`` splits into eigenvalues about
    ``eps**(1/k)`` apart whose eigenvectors are far from parallel enough to
    fool a condition-number test.  Eigenvalues are therefore grouped
    loosely and every group of size ``k`` must leave ``k`` singular values
    of ``m - lambda I`` at rounding level.
    """
    scale = max(1.0, float(np.max(np.abs(m))))
    for sl in eigen_clusters(lam.real, DEFECT_CLUSTER_TOL):
        k = sl.stop - sl.start
        if k == 1:
            continue
        value = lam[sl].real.mean()
        sv = np.linalg.svd(m - value * np.eye(m.shape[0]), compute_uv=False)
        if np.sum(sv <= NULLITY_TOL * scale) < k:
            return float(value)
    return None


def eigen_biorthonormal(h) -> SpectralData:
    """Right eigenvectors from a general eigensolver, left ones from the inverse.

    Eigenvalues are ordered by real part, then imaginary part, then solver
    order.
    """
    m = _matrix(h)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    lam, psi = _sorted_eig(m)
    rc = _rcond(psi)
    if rc <= RCOND_MIN:
        raise NotDiagonalizableError(
            f"eigenvector matrix is numerically singular (rcond = {rc:.3g})"
        )
    if np.all(_real_ok(lam)):
        defect = _defective_cluster(m, lam)
        if defect is not None:
            raise NotDiagonalizableError(f"eigenvalue {defect:.6g} lacks a full set of eigenvectors")
    phi = np.linalg.inv(psi).conj().T
    return SpectralData(lam, psi, phi, rc, np.array(m))


def eigen_clusters(values: np.ndarray, tol: float = CLUSTER_TOL) -> list[slice]:
    """Contiguous runs of (already sorted) values that agree within ``tol``.

    The tolerance is relative to ``max(1, |value|)``.
    """
    groups = []
    start = 0
    for k in range(1, len(values) + 1):
        if k == len(values) or abs(values[k] - values[k - 1]) > tol * max(1.0, abs(values[k])):
            groups.append(slice(start, k))
            start = k
    return groups


def _eigenspaces(m: np.ndarray, value: complex, k: int):
    """Orthonormal right and left eigenspace bases for a ``k``-fold eigenvalue.

    Taken from the ``k`` smallest singular vectors of ``m - value I``, which
    stays accurate when the eigensolver returns nearly parallel vectors
    inside a degenerate eigenspace.
    """
    u, _, vh = np.linalg.svd(m - value * np.eye(m.shape[0]))
    return vh[-k:].conj().T, u[:, -k:]


def _normalized_bases(sd: SpectralData):
    """Biorthonormal bases with a fixed scale inside every eigenspace.

    Within each eigenspace the left basis is orthonormal and divided by the
    largest cosine between the left and right eigenspaces; the right basis
    is its biorthonormal dual.  For a simple eigenvalue this is the left
    vector dual to a unit right eigenvector, and for a Hermitian matrix it
    gives an orthonormal basis (so eta is the identity).  The metric thus
    does not depend on which basis the eigensolver returned inside a
    degenerate eigenspace.
    """
    lam = sd.eigenvalues
    n = len(lam)
    m = sd.matrix if sd.matrix is not None else sd.right @ np.diag(lam) @ sd.left.conj().T
    psi = np.zeros((n, n), dtype=complex)
    phi = np.zeros((n, n), dtype=complex)
    for sl in eigen_clusters(lam):
        k = sl.stop - sl.start
        if k == 1:
            qr = sd.right[:, sl] / np.linalg.norm(sd.right[:, sl])
            ql = sd.left[:, sl] / np.linalg.norm(sd.left[:, sl])
        else:
            qr, ql = _eigenspaces(m, lam[sl].real.mean(), k)
        c = np.linalg.svd(ql.conj().T @ qr, compute_uv=False).max()
        phi[:, sl] = ql / c
        psi[:, sl] = qr @ np.linalg.inv(phi[:, sl].conj().T @ qr)
    if not np.iscomplexobj(m):
        psi, phi = psi.real, phi.real
    return psi, phi


def build_eta(sd: SpectralData) -> EtaDecomposition:
    """Metric ``eta`` as the principal square root of ``V = Phi Phi^dagger``."""
    if not sd.is_real:
        raise NotPseudoHermitianError("spectrum is not real")
    psi, phi = _normalized_bases(sd)
    # SVD of Phi rather than eigh of V: V squares the condition number.
    q, sv, _ = np.linalg.svd(phi)
    if sv[-1] <= SINGULAR_TOL * sv[0]:
        raise SingularMetricError(
            f"metric is numerically singular (singular value ratio {sv[-1] / sv[0]:.3g})"
        )
    v = (q * sv**2) @ q.conj().T
    eta = (q * sv) @ q.conj().T
    eta_inv = (q / sv) @ q.conj().T
    lam = sd.eigenvalues.real.astype(complex)
    spectral = SpectralData(lam, psi, phi, _rcond(psi), sd.matrix)
    return EtaDecomposition(eta, eta_inv, v, spectral)


def eta_decomposition(h) -> EtaDecomposition:
    """Classify ``h`` and build its metric, failing on broken input."""
    c = classify(h)
    if not c.ok:
        raise NotPseudoHermitianError(c.reason)
    return build_eta(eigen_biorthonormal(h))


def hermitize(h, ed: EtaDecomposition | None = None) -> Hamiltonian:
    """``eta H eta^-1``, symmetrized after checking it is Hermitian."""
    m = _matrix(h)
    if ed is None:
        ed = eta_decomposition(h)
    ht = ed.eta @ m @ ed.eta_inv
    asym = np.max(np.abs(ht - ht.conj().T), initial=0.0)
    if asym > HERMITIZE_TOL:
        raise PreconditionError(f"similarity transform is not Hermitian (asymmetry {asym:.3g})")
    ht = (ht + ht.conj().T) / 2
    if np.iscomplexobj(ht) and np.max(np.abs(ht.imag), initial=0.0) <= HERMITIAN_TOL:
        ht = ht.real
    return Hamiltonian(ht, "hermitized")


@dataclass(frozen=True)
class EvolutionBasis:
    """``U(t) = basis @ diag(exp(-i lambda t)) @ inverse``."""

    basis: np.ndarray
    inverse: np.ndarray
    eigenvalues: np.ndarray
    unitary: bool

    def propagator(self, t: float) -> np.ndarray:
        return (self.basis * np.exp(-1j * self.eigenvalues * t)) @ self.inverse

    def apply(self, psi0: np.ndarray, times) -> np.ndarray:
        """Evolved states, one row per entry of ``times``."""
        t = np.atleast_1d(np.asarray(times, dtype=float))
        coeff = self.inverse @ np.asarray(psi0, dtype=complex)
        phases = np.exp(-1j * np.outer(t, self.eigenvalues))
        return (phases * coeff) @ self.basis.T


def decompose_evolution(h, ed: EtaDecomposition | None = None) -> EvolutionBasis:
    """Diagonal factorisation of the propagator.

    Without ``ed`` the factors come from the biorthonormal eigenbasis of
    ``h`` (non-unitary walk).  With ``ed`` the hermitized Hamiltonian is
    diagonalized with an orthonormal basis, so the outer factors are unitary.
    """
    if ed is None:
        m = _matrix(h)
        if np.max(np.abs(m - m.conj().T), initial=0.0) <= HERMITIAN_TOL:
            lam, s = np.linalg.eigh(m)
            return EvolutionBasis(s, s.conj().T, lam.astype(complex), True)
        sd = eigen_biorthonormal(h)
        return EvolutionBasis(sd.right, sd.left.conj().T, sd.eigenvalues, False)
    ht = hermitize(h, ed).matrix
    lam, s = np.linalg.eigh(ht)
    return EvolutionBasis(s, s.conj().T, lam.astype(complex), True)
