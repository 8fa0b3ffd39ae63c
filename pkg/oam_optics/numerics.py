"Dense complex linear algebra used by the synthesis and the verification"
import logging
from dataclasses import dataclass
import numpy as np
from scipy.linalg import schur
from oam_optics.configuration import NUMERICS_CONFIG
from oam_optics.exceptions import NotUnitaryError, ShapeError


LOGGER = logging.getLogger('oam_optics')
TWO_PI = 2 * np.pi


@dataclass(frozen=True)
class EigenDecomp:
    """Eigendecomposition U = M^dagger . diag(exp(-i phases)) . M of a unitary.
    The phases are sorted ascending in [0, 2pi) and the rows of m are the
    (conjugated) eigenvectors."""
    m: np.ndarray
    phases: tuple

    def diagonal(self):
        return np.exp(-1j * np.asarray(self.phases))

    def reconstruct(self):
        return self.m.conj().T @ np.diag(self.diagonal()) @ self.m


def as_cmatrix(matrix):
    "Return a read-only complex copy of a 2D array."
    array = np.array(matrix, dtype=complex)
    if array.ndim != 2:
        raise ShapeError('Expected a 2D matrix, got an array with shape {}'.format(array.shape))
    if not np.all(np.isfinite(array)):
        raise ShapeError('Matrix contains non-finite entries')
    array.setflags(write=False)
    return array


def _check_square(m):
    if m.shape[0] != m.shape[1]:
        raise ShapeError('Expected a square matrix, got shape {}'.format(m.shape))


def is_unitary(m, tol=NUMERICS_CONFIG['unitarity_tol']):
    "True iff the max-norm of m^dagger m - I is at most tol."
    m = as_cmatrix(m)
    _check_square(m)
    deviation = m.conj().T @ m - np.eye(m.shape[0])
    return bool(np.max(np.abs(deviation), initial=0.0) <= tol)


def check_unitary(m, name='matrix', tol=NUMERICS_CONFIG['unitarity_tol']):
    m = as_cmatrix(m)
    if not is_unitary(m, tol):
        raise NotUnitaryError('{0} is not unitary within {1}'.format(name, tol))
    return m


def _canonical_basis(vectors, rank):
    """Orthonormal basis of span(vectors) obtained by Gram-Schmidt on the
    projections of the standard basis vectors, taken in index order."""
    projector = vectors @ vectors.conj().T
    basis = []
    for index in range(projector.shape[0]):
        candidate = projector[:, index].copy()
        for _ in range(2):
            for previous in basis:
                candidate -= (previous.conj() @ candidate) * previous
        norm = np.linalg.norm(candidate)
        if norm > 1e-6:
            basis.append(candidate / norm)
        if len(basis) == rank:
            break
    return np.array(basis).T


def eig_unitary(u, degeneracy_tol=NUMERICS_CONFIG['degeneracy_tol']):
    """Diagonalize a unitary through its complex Schur form.
    Eigenvalues are written as exp(-i phi) with phi in [0, 2pi), sorted ascending;
    degenerate eigenspaces get a canonical orthonormal basis."""
    u = check_unitary(u, 'u')
    dim = u.shape[0]
    t, z = schur(u, output='complex')
    phases = np.mod(-np.angle(np.diag(t)), TWO_PI)
    # fold phases within tolerance of 2pi onto 0
    phases[phases > TWO_PI - degeneracy_tol] = 0.0
    order = np.argsort(phases, kind='stable')
    phases = phases[order]
    z = z[:, order]

    columns = np.zeros((dim, dim), dtype=complex)
    start = 0
    while start < dim:
        stop = start + 1
        while stop < dim and phases[stop] - phases[start] <= degeneracy_tol:
            stop += 1
        cluster = z[:, start:stop]
        if stop - start > 1:
            mean_phase = float(np.mean(phases[start:stop]))
            phases[start:stop] = mean_phase
            columns[:, start:stop] = _canonical_basis(cluster, stop - start)
        else:
            columns[:, start] = cluster[:, 0]
        start = stop

    m = as_cmatrix(columns.conj().T)
    LOGGER.debug('Eigendecomposition of a %sx%s unitary, phases %s', dim, dim, phases)
    return EigenDecomp(m=m, phases=tuple(float(p) for p in phases))


def matrix_power(u, k):
    "Exact repeated product u^k; k = 0 gives the identity."
    u = as_cmatrix(u)
    _check_square(u)
    if k < 0:
        raise ValueError('Only non-negative powers are supported, got {}'.format(k))
    return as_cmatrix(np.linalg.matrix_power(u, k))


def phase_aligned_distance(a, b):
    """Max-norm distance between a and b after removing a global phase.
    The phase is aligned on the overlap <b, a>; when the overlap vanishes the
    largest-magnitude entry of b is used instead."""
    a = as_cmatrix(a)
    b = as_cmatrix(b)
    if a.shape != b.shape:
        raise ShapeError('Shape mismatch: {0} vs {1}'.format(a.shape, b.shape))
    if a.size == 0:
        return 0.0
    overlap = np.vdot(b, a)
    if abs(overlap) > NUMERICS_CONFIG['zero_tol'] * max(1.0, np.abs(b).max() * np.abs(a).max()):
        phase = overlap / abs(overlap)
    else:
        index = np.unravel_index(np.argmax(np.abs(b)), b.shape)
        if abs(a[index]) > 0 and abs(b[index]) > 0:
            phase = (a[index] / abs(a[index])) / (b[index] / abs(b[index]))
        else:
            phase = 1.0
    return float(np.max(np.abs(a - phase * b)))


def pauli_x(d, k=1):
    "Cyclic shift |q> -> |q + k mod d>."
    x = np.zeros((d, d), dtype=complex)
    for q in range(d):
        x[(q + k) % d, q] = 1.0
    return as_cmatrix(x)


def pauli_z(d, k=1):
    "Clock gate |q> -> omega^(qk) |q>, omega = exp(2 pi i / d)."
    return as_cmatrix(np.diag(np.exp(2j * np.pi * k * np.arange(d) / d)))


def dft(d):
    "Unitary discrete Fourier transform F[j, q] = omega^(jq) / sqrt(d)."
    grid = np.outer(np.arange(d), np.arange(d))
    return as_cmatrix(np.exp(2j * np.pi * grid / d) / np.sqrt(d))
