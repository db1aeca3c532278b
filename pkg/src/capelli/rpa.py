"""Random-phase-approximation treatment of quadratic boson Hamiltonians.

This is the one floating-point corner of the package.  A Hamiltonian

    H = E0 + sum_ij V_ij b+_i b_j + sum_ij W_ij b+_i b+_j + h.c. of the W term

(the b's are the unit-normalized boson operators realized elsewhere as
z -> b+, d -> b) has the exact normal-mode structure captured by the 2M x 2M
stability matrix

    S = [[ A,        B       ],
         [ -conj(B), -conj(A)]]       A = V,  B = W + W^T.

The Hamiltonian is stable when the spectrum of S is real and nonzero; then
the frequencies come in +/- pairs, the positive-branch amplitudes (X, Y)
normalize to X+X - Y+Y = 1 mode by mode, and the correlated ground-state
shift is delta_E = (sum_n w_n - trace A) / 2.  Because H is quadratic the
RPA is not an approximation here: the Fock-space oracle below reproduces
the frequencies to truncation accuracy, which is what the tests check.

The alternative reading of W as the full two-boson coefficient (B = W
directly, with the Hamiltonian carrying W/2 b+ b+) is available as
b_convention="direct" on every entry point; both conventions are kept
consistent between solver and oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

B_CONVENTIONS = ("sum", "direct")


class RpaError(RuntimeError):
    """Eigensolver breakdown or inconsistent normalization."""


class FockCutoffError(RuntimeError):
    """Truncated Fock space too small: the ground state touches the boundary."""


@dataclass
class QuadraticBosonHamiltonian:
    """E0 + V (one-boson, Hermitian) + W (two-boson, symmetrized on input)."""

    E0: float
    V: np.ndarray
    W: np.ndarray

    def __post_init__(self) -> None:
        V = np.asarray(self.V)
        W = np.asarray(self.W)
        if not (np.iscomplexobj(V) or np.iscomplexobj(W)):
            V = V.astype(float)
            W = W.astype(float)
        if V.ndim != 2 or V.shape[0] != V.shape[1] or V.shape != W.shape:
            raise ValueError("V and W must be square matrices of equal size")
        if not np.allclose(V, V.conj().T, atol=1e-12):
            raise ValueError("V must be Hermitian")
        self.V = V
        self.W = (W + W.T) / 2  # W = W^T exactly from here on

    @property
    def modes(self) -> int:
        return self.V.shape[0]


def _b_matrix(H: QuadraticBosonHamiltonian, b_convention: str) -> np.ndarray:
    if b_convention not in B_CONVENTIONS:
        raise ValueError(f"b_convention must be one of {B_CONVENTIONS}")
    return 2 * H.W if b_convention == "sum" else H.W


def build_rpa_matrix(H: QuadraticBosonHamiltonian,
                     b_convention: str = "sum") -> np.ndarray:
    """The stability matrix [[A, B], [-conj(B), -conj(A)]]."""
    A = H.V
    B = _b_matrix(H, b_convention)
    top = np.hstack([A, B])
    bottom = np.hstack([-B.conj(), -A.conj()])
    return np.vstack([top, bottom])


@dataclass
class RpaSolution:
    """Normal-mode data; amplitudes are None when the flag says unstable.

    For a stable Hamiltonian: frequencies ascending, columns of X and Y per
    mode with X+X - Y+Y = identity, and the ground-state energy shift
    delta_E.  Otherwise only the raw stability-matrix eigenvalues are
    reported (no pseudo-normalization of degenerate or complex modes).
    """

    stable: bool
    frequencies: np.ndarray
    raw_eigenvalues: np.ndarray
    X: Optional[np.ndarray]
    Y: Optional[np.ndarray]
    delta_E: Optional[float]


def solve_rpa(H: QuadraticBosonHamiltonian, b_convention: str = "sum",
              tol: float = 1e-10) -> RpaSolution:
    """Diagonalize the stability matrix and normalize the positive branch.

    Stability means every eigenvalue is real (|imag| <= tol) and nonzero
    (|w| > tol); zero modes therefore trip the unstable flag rather than
    being pseudo-normalized.
    """
    M = H.modes
    S = build_rpa_matrix(H, b_convention)
    try:
        eigvals, eigvecs = np.linalg.eig(S)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - numpy rarely fails
        raise RpaError(f"stability-matrix eigensolver failed: {exc}") from exc
    raw = np.array(sorted(eigvals, key=lambda w: (w.real, w.imag)))
    if np.any(np.abs(raw.imag) > tol) or np.any(np.abs(raw) <= tol):
        return RpaSolution(stable=False, frequencies=np.array([]),
                           raw_eigenvalues=raw, X=None, Y=None, delta_E=None)
    order = [i for i in np.argsort(eigvals.real) if eigvals[i].real > 0]
    freqs = eigvals.real[order]
    X = np.zeros((M, M), dtype=eigvecs.dtype)
    Y = np.zeros((M, M), dtype=eigvecs.dtype)
    for n, i in enumerate(order):
        x = eigvecs[:M, i]
        y = eigvecs[M:, i]
        norm2 = (np.vdot(x, x) - np.vdot(y, y)).real
        if norm2 <= tol:
            raise RpaError("positive-frequency mode with non-positive norm; "
                           "the stability matrix is defective beyond tolerance")
        x = x / np.sqrt(norm2)
        y = y / np.sqrt(norm2)
        # fix the overall phase so output is reproducible
        pivot = int(np.argmax(np.abs(x)))
        phase = x[pivot] / abs(x[pivot])
        X[:, n] = x / phase
        Y[:, n] = y / phase
    delta_E = 0.5 * (freqs.sum() - np.trace(H.V).real)
    return RpaSolution(stable=True, frequencies=freqs, raw_eigenvalues=raw,
                       X=X, Y=Y, delta_E=float(delta_E))


def fock_oracle(H: QuadraticBosonHamiltonian, nmax: int,
                b_convention: str = "sum", k_lowest: Optional[int] = None,
                boundary_tol: float = 1e-8) -> np.ndarray:
    """Exact eigenvalues of H on the Fock space with <= nmax quanta per mode.

    The matrix is assembled from the exact boson elements b+|n> =
    sqrt(n+1)|n+1>, i.e. the unit-normalized z/d representation matrices.
    Raises FockCutoffError when the ground state's weight on boundary
    occupations (some n_i in {nmax-1, nmax}; two shells because pair
    couplings conserve occupation parity, so a single shell can be empty
    while the truncation is still bad) exceeds boundary_tol.  Raises
    ValueError for an RPA-unstable Hamiltonian, whose spectrum is unbounded
    below.
    """
    if nmax < 1:
        raise ValueError("nmax must be at least 1")
    if not solve_rpa(H, b_convention).stable:
        raise ValueError("Fock oracle needs a stable Hamiltonian")
    M = H.modes
    wcoeff = _b_matrix(H, b_convention) / 2  # coefficient of b+_i b+_j, i,j summed
    dims = (nmax + 1,) * M
    size = (nmax + 1) ** M
    occ = np.array(np.unravel_index(np.arange(size), dims)).T  # (size, M)
    complex_input = np.iscomplexobj(H.V) or np.iscomplexobj(H.W)
    mat = np.zeros((size, size), dtype=complex if complex_input else float)
    strides = [(nmax + 1) ** (M - 1 - i) for i in range(M)]
    mat[np.diag_indices(size)] = H.E0
    for idx in range(size):
        n = occ[idx]
        for i in range(M):
            for j in range(M):
                # b+_i b_j
                if H.V[i, j] and n[j] >= 1 and (i == j or n[i] + 1 <= nmax):
                    amp = np.sqrt(n[j]) * np.sqrt(n[i] + (0 if i == j else 1))
                    tgt = idx + strides[i] - strides[j] if i != j else idx
                    mat[tgt, idx] += H.V[i, j] * amp
                # b+_i b+_j
                w = wcoeff[i, j]
                if w:
                    if (i == j and n[i] + 2 <= nmax) or \
                       (i != j and n[i] + 1 <= nmax and n[j] + 1 <= nmax):
                        if i == j:
                            amp = np.sqrt((n[i] + 1) * (n[i] + 2))
                            tgt = idx + 2 * strides[i]
                        else:
                            amp = np.sqrt((n[i] + 1) * (n[j] + 1))
                            tgt = idx + strides[i] + strides[j]
                        mat[tgt, idx] += w * amp
                        mat[idx, tgt] += np.conj(w) * amp  # h.c. (b_i b_j)
    eigvals, eigvecs = np.linalg.eigh(mat)
    ground = eigvecs[:, 0]
    boundary = np.any(occ >= nmax - 1, axis=1)
    bweight = float(np.sum(np.abs(ground[boundary]) ** 2))
    if bweight > boundary_tol:
        raise FockCutoffError(
            f"ground state has boundary weight {bweight:.3e} at nmax={nmax}")
    return eigvals if k_lowest is None else eigvals[:k_lowest]
