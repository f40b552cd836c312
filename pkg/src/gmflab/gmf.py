"""Generalized matrix function evaluators.

A generalized matrix function is built from a permutation subgroup G of S_n
and a linear character chi:

    d(A) = sum over sigma in G of chi(sigma) * prod_i A[i, sigma(i)]

The determinant (G = S_n, chi = sign) and permanent (G = S_n, chi = 1) are
the classic cases and get fast dedicated engines; everything else goes
through direct enumeration.  A tensor-space oracle provides an independent
route to the same number via the quadratic-form identity
d(A) = <v, (kron^n A) v> for a decomposable unit vector v.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import BlockCountMismatch, DegreeTooLarge, DimensionMismatch
from .matrices import as_square_matrix
from .permutations import (
    LinearCharacter,
    PermutationGroup,
    sign_character,
    symmetric_group,
    trivial_character,
)

NAIVE_DEGREE_CAP = 8
RYSER_DEGREE_CAP = 24
DET_DEGREE_CAP = 64
ORACLE_DEGREE_CAP = 6


class GmfValue(NamedTuple):
    """A matrix-function value: real part plus the discarded imaginary mass.

    Values are complex internally; on Hermitian PSD input the imaginary
    parts cancel up to roundoff, so the magnitude of what was discarded is
    kept as a health indicator.
    """

    value: float
    imag_residue: float


def _as_value(z: complex) -> GmfValue:
    return GmfValue(float(z.real), abs(float(z.imag)))


@dataclass(frozen=True, eq=False)
class GmfSpec:
    """A named matrix-function evaluator.

    kind is one of "det", "per", "custom" (explicit group + character) or
    "product" (one factor per diagonal block).
    """

    kind: str
    degree: int | None = None
    group: PermutationGroup | None = None
    character: LinearCharacter | None = None
    factors: tuple["GmfSpec", ...] = field(default=())

    @staticmethod
    def det(n: int) -> "GmfSpec":
        if n < 1:
            raise DimensionMismatch("degree must be >= 1")
        return GmfSpec("det", degree=n)

    @staticmethod
    def per(n: int) -> "GmfSpec":
        if n < 1:
            raise DimensionMismatch("degree must be >= 1")
        return GmfSpec("per", degree=n)

    @staticmethod
    def custom(group: PermutationGroup, character: LinearCharacter) -> "GmfSpec":
        if len(character.values) != len(group) or character.group.degree != group.degree:
            raise DimensionMismatch("character does not match the group")
        return GmfSpec("custom", degree=group.degree, group=group, character=character)

    @staticmethod
    def product(factors) -> "GmfSpec":
        factors = tuple(factors)
        if not factors:
            raise BlockCountMismatch("product spec needs at least one factor")
        for f in factors:
            if f.kind == "product":
                raise BlockCountMismatch("product specs cannot be nested")
        return GmfSpec("product", factors=factors)

    @property
    def block_degrees(self) -> tuple[int, ...]:
        if self.kind == "product":
            return tuple(f.degree for f in self.factors)
        return (self.degree,)

    @property
    def spec_id(self) -> str:
        if self.kind in ("det", "per"):
            return f"{self.kind}:{self.degree}"
        if self.kind == "custom":
            h = hashlib.sha256()
            h.update(self.group.images_array().tobytes())
            h.update(np.ascontiguousarray(self.character.values).tobytes())
            return f"custom:{self.degree}:{h.hexdigest()[:8]}"
        return "product(" + ",".join(f.spec_id for f in self.factors) + ")"


def _enumeration_data(spec: GmfSpec) -> tuple[np.ndarray, np.ndarray]:
    """(images, chi) arrays for direct enumeration of a non-product spec."""
    if spec.kind == "det":
        g = symmetric_group(spec.degree)
        return g.images_array(), sign_character(g).values
    if spec.kind == "per":
        g = symmetric_group(spec.degree)
        return g.images_array(), trivial_character(g).values
    if spec.kind == "custom":
        return spec.group.images_array(), spec.character.values
    raise DimensionMismatch(f"spec kind {spec.kind!r} has no enumeration form")


def _check_degree(spec: GmfSpec, A: np.ndarray):
    if A.shape[0] != spec.degree:
        raise DimensionMismatch(
            f"matrix size {A.shape[0]} does not match spec degree {spec.degree}"
        )


def _naive_complex(spec: GmfSpec, A: np.ndarray) -> complex:
    n = A.shape[0]
    images, chi = _enumeration_data(spec)
    entries = A[np.arange(n)[None, :], images]
    return complex(chi @ np.prod(entries, axis=1))


def gmf_naive(spec: GmfSpec, A) -> GmfValue:
    """Reference evaluation by direct enumeration over the group.

    Capped at degree 8 (the group walk is |G| * n work and S_8 already has
    40320 elements).
    """
    A = as_square_matrix(A)
    if spec.kind == "product":
        raise DimensionMismatch("gmf_naive does not take product specs")
    _check_degree(spec, A)
    if spec.degree > NAIVE_DEGREE_CAP:
        raise DegreeTooLarge(f"naive enumeration capped at degree {NAIVE_DEGREE_CAP}")
    return _as_value(_naive_complex(spec, A))


def _ryser_complex(A: np.ndarray) -> complex:
    n = A.shape[0]
    if n == 0:
        return 1.0 + 0j
    rowsums = np.zeros(n, dtype=complex)
    total = 0.0 + 0j
    size = 0
    for k in range(1, 1 << n):
        j = (k & -k).bit_length() - 1
        gray = k ^ (k >> 1)
        if (gray >> j) & 1:
            rowsums += A[:, j]
            size += 1
        else:
            rowsums -= A[:, j]
            size -= 1
        term = complex(np.prod(rowsums))
        total += term if size % 2 == 0 else -term
    return total if n % 2 == 0 else -total


def permanent_ryser(A) -> GmfValue:
    """Permanent by Ryser's inclusion-exclusion.

    Subsets are walked in Gray-code order so each step updates the row-sum
    vector with a single column, giving O(2^n * n) cost.
    """
    A = as_square_matrix(A)
    if A.shape[0] > RYSER_DEGREE_CAP:
        raise DegreeTooLarge(f"permanent capped at degree {RYSER_DEGREE_CAP}")
    return _as_value(_ryser_complex(A))


def _det_complex(A: np.ndarray) -> complex:
    n = A.shape[0]
    if n == 0:
        return 1.0 + 0j
    U = A.astype(complex, copy=True)
    det = 1.0 + 0j
    for col in range(n):
        piv = col + int(np.argmax(np.abs(U[col:, col])))
        if U[piv, col] == 0:
            return 0.0 + 0j
        if piv != col:
            U[[col, piv], :] = U[[piv, col], :]
            det = -det
        det *= U[col, col]
        factors = U[col + 1 :, col] / U[col, col]
        U[col + 1 :, col:] -= np.outer(factors, U[col, col:])
    return det


def determinant(A) -> GmfValue:
    """Determinant by Gaussian elimination with partial pivoting.

    Singular matrices return 0 (an exact zero pivot short-circuits).
    """
    A = as_square_matrix(A)
    if A.shape[0] > DET_DEGREE_CAP:
        raise DegreeTooLarge(f"determinant capped at degree {DET_DEGREE_CAP}")
    return _as_value(_det_complex(A))


def _gmf_complex(spec: GmfSpec, A) -> complex:
    if spec.kind == "product":
        return _product_complex(spec, A)
    A = as_square_matrix(A)
    _check_degree(spec, A)
    if spec.kind == "det":
        return _det_complex(A)
    if spec.kind == "per":
        return _ryser_complex(A)
    if spec.degree > NAIVE_DEGREE_CAP:
        raise DegreeTooLarge(f"custom specs capped at degree {NAIVE_DEGREE_CAP}")
    return _naive_complex(spec, A)


def gmf(spec: GmfSpec, A) -> GmfValue:
    """Evaluate a spec with its fastest engine.

    det -> elimination, per -> Ryser, custom -> enumeration,
    product -> one engine per block.  For product specs, A is the sequence
    of block matrices.
    """
    return _as_value(_gmf_complex(spec, A))


def _product_complex(spec: GmfSpec, blocks) -> complex:
    blocks = list(blocks)
    if len(blocks) != len(spec.factors):
        raise BlockCountMismatch(
            f"expected {len(spec.factors)} blocks, got {len(blocks)}"
        )
    out = 1.0 + 0j
    for f, X in zip(spec.factors, blocks):
        out *= _gmf_complex(f, X)
    return out


def product_gmf(spec: GmfSpec, blocks) -> GmfValue:
    """Product function across blocks: value = prod_i d_i(X_i)."""
    if spec.kind != "product":
        raise BlockCountMismatch("product_gmf needs a product spec")
    return _as_value(_product_complex(spec, blocks))


def _oracle_vector(spec: GmfSpec) -> np.ndarray:
    n = spec.degree
    images, chi = _enumeration_data(spec)
    v = np.zeros(n**n, dtype=complex)
    for row, c in zip(images, chi):
        idx = 0
        for i in row:
            idx = idx * n + int(i)
        # chi(sigma) coefficients make <v, (kron^n A) v> equal d(A) exactly,
        # for complex characters included.
        v[idx] += c
    return v / np.sqrt(len(chi))


def gmf_tensor_oracle(spec: GmfSpec, A) -> GmfValue:
    """Independent evaluation through the tensor-power quadratic form.

    Builds the decomposable unit vector v in the n^n-dimensional tensor
    space and applies kron^n A to it one mode at a time (never materializing
    the n^n x n^n operator), then returns <v, (kron^n A) v>.
    """
    A = as_square_matrix(A)
    if spec.kind == "product":
        raise DimensionMismatch("tensor oracle does not take product specs")
    _check_degree(spec, A)
    n = spec.degree
    if n > ORACLE_DEGREE_CAP:
        raise DegreeTooLarge(f"tensor oracle capped at degree {ORACLE_DEGREE_CAP}")
    v = _oracle_vector(spec)
    T = v.reshape((n,) * n)
    for axis in range(n):
        T = np.moveaxis(np.tensordot(A, T, axes=(1, axis)), 0, axis)
    return _as_value(complex(np.vdot(v, T.reshape(-1))))


def psd_value_scale(spec: GmfSpec, A) -> float:
    """Magnitude yardstick (max diagonal entry)^n for residue/nonnegativity checks.

    For product specs the scale multiplies across blocks; A is then the
    block sequence.
    """
    if spec.kind == "product":
        out = 1.0
        for f, X in zip(spec.factors, A):
            out *= psd_value_scale(f, X)
        return out
    A = as_square_matrix(A)
    top = max(float(np.max(np.diag(A).real)), 0.0) if A.shape[0] else 0.0
    return top ** spec.degree
