"""Hermitian/PSD matrix algebra and reproducible random instance generation.

Everything here operates on plain numpy arrays (complex128).  The
eigensolver is a self-contained cyclic Jacobi iteration so that results do
not depend on the host LAPACK build; the random generator is a portable
splitmix-style 64-bit PRNG so instances can be regenerated bit-for-bit from
(seed, index) anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    DegreeTooLarge,
    DimensionMismatch,
    NoConvergence,
    NotHermitian,
    NotPsd,
    ResultTooLarge,
)

JACOBI_MAX_N = 64
KRON_MAX_DIM = 4096
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    """The splitmix64 output permutation (finalizer)."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """splitmix64: state += golden gamma; output = mix64(state).

    Reference: Steele, Lea & Flood, "Fast splittable pseudorandom number
    generators" (the JDK SplittableRandom core).  Documented in README.md so
    instances can be reproduced outside this package.
    """

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return _mix64(self._state)

    def next_unit(self) -> float:
        """Uniform float in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def next_symmetric(self) -> float:
        """Uniform float in [-1, 1)."""
        return 2.0 * self.next_unit() - 1.0


def derive_seed(seed: int, index: int) -> int:
    """Seed of substream `index` of the stream named `seed`:
    mix64(seed + (index + 1) * golden)."""
    if index < 0:
        raise ValueError("substream index must be >= 0")
    return _mix64((seed + (index + 1) * _GOLDEN) & _MASK64)


def substream(seed: int, index: int) -> SplitMix64:
    """Independent generator for item `index` of the stream named `seed`."""
    return SplitMix64(derive_seed(seed, index))


@dataclass(frozen=True)
class RandomInstanceConfig:
    """Recipe for a reproducible batch of random PSD matrices."""

    n: int
    m: int
    seed: int
    scale: float = 1.0
    field: str = "complex"

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be >= 1")
        if self.scale <= 0:
            raise ValueError("scale must be > 0")
        if self.field not in ("real", "complex"):
            raise ValueError("field must be 'real' or 'complex'")


def as_square_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {A.shape}")
    return A


def max_abs(A) -> float:
    A = np.asarray(A)
    return float(np.max(np.abs(A))) if A.size else 0.0


def is_hermitian(A, tol: float = HERMITIAN_TOL) -> bool:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        return False
    return max_abs(A - A.conj().T) <= tol * (1.0 + max_abs(A))


def random_psd(config: RandomInstanceConfig) -> list[np.ndarray]:
    """Generate `config.m` PSD matrices of size n, each a Gram matrix B*B.

    B is filled row-major with uniform entries in [-1, 1), scaled by
    sqrt(scale); complex entries draw real then imaginary part and carry an
    extra 1/sqrt(2) so the squared-magnitude bound matches the real case.
    Matrix k comes from substream(seed, k), so the list is the same
    regardless of generation order.
    """
    out = []
    for index in range(config.m):
        rng = substream(config.seed, index)
        n = config.n
        if config.field == "real":
            b = [rng.next_symmetric() for _ in range(n * n)]
            B = np.array(b, dtype=complex).reshape(n, n) * math.sqrt(config.scale)
        else:
            b = [
                complex(rng.next_symmetric(), rng.next_symmetric())
                for _ in range(n * n)
            ]
            B = np.array(b, dtype=complex).reshape(n, n) * math.sqrt(config.scale / 2.0)
        A = B.conj().T @ B
        out.append((A + A.conj().T) / 2.0)
    return out


class SpectralDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # real, ascending
    eigenvectors: np.ndarray  # unitary columns, aligned with eigenvalues


def _offdiag_norm(A: np.ndarray) -> float:
    # Computed directly over off-diagonal entries: the textbook
    # ||A||_F^2 - ||diag||_F^2 form cancels catastrophically near
    # convergence and stalls around sqrt(eps)*||A||.
    M = np.abs(A) ** 2
    np.fill_diagonal(M, 0.0)
    return float(np.sqrt(M.sum()))


def hermitian_eig(A, max_sweeps: int = 30, tol: float = 1e-14) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Each rotation is a complex Givens transform U = D R (D a phase, R a real
    rotation) chosen to zero one off-diagonal pair; sweeps run over all pairs
    in a fixed order, so the result is deterministic for a given input.

    Raises NotHermitian for non-Hermitian input, DegreeTooLarge for
    n > 64, and NoConvergence if the off-diagonal mass has not dropped below
    tol * ||A||_F after `max_sweeps` sweeps.
    """
    A = as_square_matrix(A)
    n = A.shape[0]
    if n > JACOBI_MAX_N:
        raise DegreeTooLarge(f"hermitian_eig supports n <= {JACOBI_MAX_N}, got {n}")
    if not is_hermitian(A):
        raise NotHermitian("matrix is not Hermitian within tolerance")
    A = (A + A.conj().T) / 2.0
    V = np.eye(n, dtype=complex)
    norm = max(float(np.linalg.norm(A)), 1e-300)
    converged = False
    for sweep in range(max_sweeps + 1):
        if _offdiag_norm(A) <= tol * norm:
            converged = True
            break
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = A[p, q]
                absg = abs(g)
                if absg == 0.0:
                    continue
                phase = g / absg
                app = A[p, p].real
                aqq = A[q, q].real
                tau = (aqq - app) / (2.0 * absg)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                upp, upq = c, s
                uqp, uqq = -s * np.conj(phase), c * np.conj(phase)
                colp = A[:, p] * upp + A[:, q] * uqp
                colq = A[:, p] * upq + A[:, q] * uqq
                A[:, p], A[:, q] = colp, colq
                rowp = np.conj(upp) * A[p, :] + np.conj(uqp) * A[q, :]
                rowq = np.conj(upq) * A[p, :] + np.conj(uqq) * A[q, :]
                A[p, :], A[q, :] = rowp, rowq
                A[p, q] = 0.0
                A[q, p] = 0.0
                vp = V[:, p] * upp + V[:, q] * uqp
                vq = V[:, p] * upq + V[:, q] * uqq
                V[:, p], V[:, q] = vp, vq
    if not converged:
        raise NoConvergence(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
    w = np.diag(A).real.copy()
    order = np.argsort(w, kind="stable")
    return SpectralDecomposition(w[order], V[:, order])


def min_eigenvalue(A) -> float:
    """Smallest eigenvalue of a Hermitian matrix.

    Jacobi for n <= 64; beyond that (tensor-power operands go up to
    dimension 4096, where a Python Jacobi sweep is hopeless) it falls back
    to LAPACK via numpy.
    """
    A = as_square_matrix(A)
    if A.shape[0] <= JACOBI_MAX_N:
        return float(hermitian_eig(A).eigenvalues[0])
    return float(np.linalg.eigvalsh((A + A.conj().T) / 2.0)[0])


def is_psd(A, tol: float = PSD_TOL) -> bool:
    """True iff A is Hermitian within tol and lambda_min >= -tol*(1+max|A|)."""
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        return False
    if not is_hermitian(A, max(tol, HERMITIAN_TOL)):
        return False
    return min_eigenvalue(A) >= -tol * (1.0 + max_abs(A))


def assert_psd(A, tol: float = PSD_TOL, what: str = "matrix") -> np.ndarray:
    A = as_square_matrix(A)
    if not is_psd(A, tol):
        raise NotPsd(f"{what} is not positive semidefinite within tolerance {tol}")
    return A


def matrix_root(A, p: int) -> np.ndarray:
    """p-th root of a PSD matrix via its spectral decomposition.

    Eigenvalues below zero (roundoff) are clamped to 0 before the root, so
    the result is PSD by construction.
    """
    if p < 1:
        raise ValueError("root order p must be >= 1")
    A = assert_psd(A)
    w, U = hermitian_eig(A)
    w = np.maximum(w, 0.0) ** (1.0 / p)
    R = (U * w) @ U.conj().T
    return (R + R.conj().T) / 2.0


def kron(A, B) -> np.ndarray:
    A = as_square_matrix(A)
    B = as_square_matrix(B)
    dim = A.shape[0] * B.shape[0]
    if dim > KRON_MAX_DIM:
        raise ResultTooLarge(f"Kronecker result dimension {dim} exceeds {KRON_MAX_DIM}")
    return np.kron(A, B)


def kron_power(A, k: int) -> np.ndarray:
    """k-fold Kronecker power of A (k >= 1)."""
    if k < 1:
        raise ValueError("Kronecker power requires k >= 1")
    A = as_square_matrix(A)
    if A.shape[0] ** k > KRON_MAX_DIM:
        raise ResultTooLarge(
            f"Kronecker power dimension {A.shape[0] ** k} exceeds {KRON_MAX_DIM}"
        )
    out = A
    for _ in range(k - 1):
        out = np.kron(out, A)
    return out


def loewner_geq(X, Y, tol: float = 1e-8) -> tuple[bool, float]:
    """Test X >= Y in the Loewner (PSD) order.

    Returns (verdict, lambda_min(X - Y)); the verdict allows a relative
    slack of tol * (1 + max|X - Y|).
    """
    X = as_square_matrix(X)
    Y = as_square_matrix(Y)
    if X.shape != Y.shape:
        raise DimensionMismatch(f"shape mismatch: {X.shape} vs {Y.shape}")
    if not (is_hermitian(X) and is_hermitian(Y)):
        raise NotHermitian("Loewner comparison needs Hermitian operands")
    D = X - Y
    lam = min_eigenvalue(D)
    return lam >= -tol * (1.0 + max_abs(D)), lam


def matrix_to_json(A) -> dict:
    """Matrix wire format: {"n": int, "real": [[...]], "imag": [[...]]}.

    The "imag" field is omitted when the matrix is real.
    """
    A = as_square_matrix(A)
    obj = {"n": int(A.shape[0]), "real": A.real.tolist()}
    if np.any(A.imag != 0.0):
        obj["imag"] = A.imag.tolist()
    return obj


def matrix_from_json(obj: dict) -> np.ndarray:
    if not isinstance(obj, dict) or "n" not in obj or "real" not in obj:
        raise DimensionMismatch("matrix JSON must contain 'n' and 'real'")
    n = int(obj["n"])
    real = np.asarray(obj["real"], dtype=float)
    if real.shape != (n, n):
        raise DimensionMismatch(f"'real' must be {n}x{n}, got {real.shape}")
    A = real.astype(complex)
    if obj.get("imag") is not None:
        imag = np.asarray(obj["imag"], dtype=float)
        if imag.shape != (n, n):
            raise DimensionMismatch(f"'imag' must be {n}x{n}, got {imag.shape}")
        A = A + 1j * imag
    return A
