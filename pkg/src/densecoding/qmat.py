"""Small dense complex matrices: tensor structure, spectra and entropy.

Operators and states are plain ``numpy`` complex arrays. Density matrices are
validated on demand with :func:`check_density_matrix` rather than wrapped in a
class, so everything composes with ordinary numpy code.
"""

import math
from functools import reduce

import numpy as np

from .errors import (
    InvalidDensityMatrix,
    InvalidDimensions,
    NotConverged,
    NotHermitian,
    NotXState,
)

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


def ket(bits: str) -> np.ndarray:
    """Computational basis column vector, e.g. ``ket("01")`` is |01>."""
    vec = np.zeros(2 ** len(bits), dtype=complex)
    vec[int(bits, 2)] = 1.0
    return vec


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(psi, psi.conj())


def tensor_product(*ops) -> np.ndarray:
    """Kronecker product of one or more matrices (or vectors), left to right."""
    if not ops:
        raise InvalidDimensions("tensor_product needs at least one operand")
    return reduce(np.kron, (np.asarray(op, dtype=complex) for op in ops))


def adjoint(a) -> np.ndarray:
    return np.asarray(a, dtype=complex).conj().T


def partial_trace(rho, factor_dims, keep) -> np.ndarray:
    """Reduce ``rho`` onto the factors listed in ``keep``.

    ``factor_dims`` gives the dimension of each tensor factor in the order
    they appear in the composite basis. Kept factors stay in their original
    order regardless of how ``keep`` is ordered.
    """
    rho = np.asarray(rho, dtype=complex)
    dims = [int(x) for x in factor_dims]
    total = math.prod(dims)
    if rho.shape != (total, total):
        raise InvalidDimensions(
            f"factor dims {dims} imply a {total}x{total} matrix, got {rho.shape}"
        )
    keep = sorted(set(int(k) for k in keep))
    if not keep or keep[0] < 0 or keep[-1] >= len(dims):
        raise InvalidDimensions(f"invalid kept factor indices {keep}")

    n = len(dims)
    t = rho.reshape(dims + dims)
    traced = [i for i in range(n) if i not in keep]
    # trace from the highest index down so earlier axis positions stay valid
    for idx in reversed(traced):
        t = np.trace(t, axis1=idx, axis2=idx + n)
        n -= 1
    kept_dim = math.prod(dims[k] for k in keep)
    return t.reshape(kept_dim, kept_dim)


def hermiticity_defect(a) -> float:
    a = np.asarray(a, dtype=complex)
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def hermitian_spectrum(h, tol: float = JACOBI_TOL,
                       max_sweeps: int = JACOBI_MAX_SWEEPS) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.

    Each rotation first removes the phase of the pivot element and then
    applies a real Givens rotation that annihilates it. Sweeps stop once the
    off-diagonal Frobenius norm drops below ``tol`` (scaled by the matrix norm
    when that exceeds one).

    Returns
    -------
    numpy.ndarray
        Real eigenvalues in descending order.
    """
    a = np.array(h, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidDimensions(f"expected a square matrix, got shape {a.shape}")
    if hermiticity_defect(a) > HERMITIAN_TOL:
        raise NotHermitian(f"Hermiticity defect {hermiticity_defect(a):.3e}")
    n = a.shape[0]
    a = 0.5 * (a + a.conj().T)
    threshold = tol * max(1.0, float(np.linalg.norm(a)))

    for _ in range(max_sweeps + 1):
        if _off_norm(a) <= threshold:
            return np.sort(a.diagonal().real)[::-1]
        for k in range(n - 1):
            for l in range(k + 1, n):
                g = a[k, l]
                mag = abs(g)
                if mag == 0.0:
                    continue
                phase = g / mag
                theta = (a[l, l].real - a[k, k].real) / (2.0 * mag)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot = np.array([[c, s],
                                [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [k, l]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.conj().T @ a[idx, :]
                a[k, l] = a[l, k] = 0.0
                a[k, k] = a[k, k].real
                a[l, l] = a[l, l].real
    raise NotConverged(
        f"Jacobi did not converge in {max_sweeps} sweeps (off norm {_off_norm(a):.3e})"
    )


def is_xstate(rho, tol: float = 1e-12) -> bool:
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        return False
    mask = np.ones((4, 4), dtype=bool)
    np.fill_diagonal(mask, False)
    mask[0, 3] = mask[3, 0] = False
    return bool(np.all(np.abs(rho[mask]) <= tol))


def xstate_spectrum(rho) -> np.ndarray:
    """Closed-form eigenvalues of a two-qubit X-state, descending.

    An X-state has support only on the diagonal and the |00><11| corners, so
    it splits into the 1x1 blocks b, c and the 2x2 block [[a, z], [z*, e]].
    """
    rho = np.asarray(rho, dtype=complex)
    if not is_xstate(rho):
        raise NotXState("matrix has entries outside the diagonal and corners")
    a, b, c, e = rho.diagonal().real
    z = rho[0, 3]
    root = math.sqrt((a - e) ** 2 + 4.0 * abs(z) ** 2)
    vals = np.array([b, c, 0.5 * (a + e + root), 0.5 * (a + e - root)])
    return np.sort(vals)[::-1]


def check_density_matrix(rho, name: str = "state") -> np.ndarray:
    """Return ``rho`` as a complex array or raise if it is not a valid state."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidDensityMatrix(f"{name}: not square, shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise InvalidDensityMatrix(f"{name}: non-finite entries")
    herm = hermiticity_defect(rho)
    if herm > HERMITIAN_TOL:
        raise InvalidDensityMatrix(f"{name}: Hermiticity defect {herm:.3e}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvalidDensityMatrix(f"{name}: trace {tr.real:.15g} != 1")
    lam_min = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
    if lam_min < -PSD_TOL:
        raise InvalidDensityMatrix(f"{name}: negative eigenvalue {lam_min:.3e}")
    return rho


def is_density_matrix(rho) -> bool:
    try:
        check_density_matrix(rho)
    except InvalidDensityMatrix:
        return False
    return True


def entropy_of_spectrum(values) -> float:
    """Shannon entropy in bits of an eigenvalue list, with 0 log 0 = 0."""
    lam = np.asarray(values, dtype=float)
    if np.any(lam < -PSD_TOL):
        raise InvalidDensityMatrix(f"eigenvalue {lam.min():.3e} is below -{PSD_TOL}")
    lam = lam[lam > 0.0]
    return float(0.0 - np.sum(lam * np.log2(lam)))


def von_neumann_entropy(rho) -> float:
    """Von Neumann entropy of a density matrix in bits."""
    return entropy_of_spectrum(hermitian_spectrum(rho))
