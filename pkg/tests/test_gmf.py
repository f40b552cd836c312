import itertools

import numpy as np
import pytest

from gmflab.errors import (
    BlockCountMismatch,
    DegreeTooLarge,
    DimensionMismatch,
)
from gmflab.gmf import (
    GmfSpec,
    determinant,
    gmf,
    gmf_naive,
    gmf_tensor_oracle,
    permanent_ryser,
    product_gmf,
    psd_value_scale,
)
from gmflab.matrices import RandomInstanceConfig, hermitian_eig, random_psd
from gmflab.permutations import (
    closure,
    cyclic_character,
    cyclic_group,
    trivial_character,
)


def brute_permanent(A):
    # independent oracle: direct sum over all permutations
    n = A.shape[0]
    return sum(
        np.prod([A[i, p[i]] for i in range(n)]) for p in itertools.permutations(range(n))
    )


def brute_determinant(A):
    n = A.shape[0]
    total = 0.0 + 0j
    for p in itertools.permutations(range(n)):
        sign = 1
        seen = [False] * n
        for i in range(n):
            if not seen[i]:
                j = i
                length = 0
                while not seen[j]:
                    seen[j] = True
                    j = p[j]
                    length += 1
                if length % 2 == 0:
                    sign = -sign
        total += sign * np.prod([A[i, p[i]] for i in range(n)])
    return total


def random_complex(n, seed):
    rng = np.random.default_rng(seed)
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


# --- naive enumeration -------------------------------------------------------


def test_naive_permanent_all_ones():
    assert gmf_naive(GmfSpec.per(2), np.ones((2, 2))).value == pytest.approx(2.0)


def test_naive_identity_values():
    for n in (1, 2, 3, 4):
        assert gmf_naive(GmfSpec.det(n), np.eye(n)).value == pytest.approx(1.0)
        assert gmf_naive(GmfSpec.per(n), np.eye(n)).value == pytest.approx(1.0)


def test_naive_trivial_group_gives_diagonal_product():
    spec = GmfSpec.custom(closure(2, []), trivial_character(closure(2, [])))
    assert gmf_naive(spec, np.diag([2.0, 3.0])).value == pytest.approx(6.0)


def test_naive_degree_checks():
    with pytest.raises(DimensionMismatch):
        gmf_naive(GmfSpec.per(2), np.eye(3))
    with pytest.raises(DegreeTooLarge):
        gmf_naive(GmfSpec.per(9), np.eye(9))


# --- Ryser ---------------------------------------------------------------------


def test_ryser_all_ones_and_identity():
    assert permanent_ryser(np.ones((3, 3))).value == pytest.approx(6.0)
    assert permanent_ryser(np.eye(4)).value == pytest.approx(1.0)


def test_ryser_matches_brute_force_complex():
    A = random_complex(6, 123)
    got = permanent_ryser(A)
    expected = brute_permanent(A)
    assert abs(complex(got.value, 0) - expected.real) <= 1e-10 * abs(expected)
    # engine agreement with the in-package reference path
    naive = gmf_naive(GmfSpec.per(6), A)
    assert got.value == pytest.approx(naive.value, rel=1e-10)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 7])
def test_engine_agreement_per(n):
    for seed in range(10):
        A = random_complex(n, 1000 * n + seed)
        assert permanent_ryser(A).value == pytest.approx(
            gmf_naive(GmfSpec.per(n), A).value, rel=1e-10, abs=1e-12
        )


def test_ryser_cap():
    with pytest.raises(DegreeTooLarge):
        permanent_ryser(np.eye(25))


# --- determinant -----------------------------------------------------------------


def test_determinant_hand_values():
    assert determinant(np.array([[2.0, 1.0], [1.0, 2.0]])).value == pytest.approx(3.0)
    assert determinant(np.array([[3.0]])).value == pytest.approx(3.0)
    assert determinant(np.zeros((2, 2))).value == 0.0


def test_determinant_matches_eigenvalue_product():
    A = random_psd(RandomInstanceConfig(n=5, m=1, seed=31))[0]
    w, _ = hermitian_eig(A)
    expected = float(np.prod(w))
    assert determinant(A).value == pytest.approx(expected, rel=1e-8)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 7])
def test_engine_agreement_det(n):
    for seed in range(10):
        A = random_complex(n, 2000 * n + seed)
        assert determinant(A).value == pytest.approx(
            gmf_naive(GmfSpec.det(n), A).value, rel=1e-10, abs=1e-12
        )


def test_determinant_singular():
    A = np.array([[1.0, 2.0], [2.0, 4.0]])
    assert abs(determinant(A).value) < 1e-12


# --- dispatch ---------------------------------------------------------------------


def test_gmf_dispatch_equals_engines():
    A = random_complex(5, 9)
    assert gmf(GmfSpec.det(5), A) == determinant(A)
    assert gmf(GmfSpec.per(5), A) == permanent_ryser(A)


def test_gmf_custom_sign_equals_determinant():
    from gmflab.permutations import sign_character, symmetric_group

    A = random_complex(3, 10)
    spec = GmfSpec.custom(symmetric_group(3), sign_character(symmetric_group(3)))
    assert gmf(spec, A).value == pytest.approx(determinant(A).value, rel=1e-10)


def test_gmf_value_exposes_residue():
    c3 = cyclic_group(3)
    spec = GmfSpec.custom(c3, cyclic_character(c3, 1))
    A = random_psd(RandomInstanceConfig(n=3, m=1, seed=8))[0]
    v = gmf(spec, A)
    assert v.imag_residue <= 1e-9 * psd_value_scale(spec, A)


# --- product specs -----------------------------------------------------------------


def test_product_basic_values():
    spec = GmfSpec.product([GmfSpec.det(1), GmfSpec.per(1)])
    one = np.ones((1, 1))
    assert product_gmf(spec, [one, one]).value == pytest.approx(1.0)
    assert product_gmf(spec, [2 * one, 3 * one]).value == pytest.approx(6.0)
    spec2 = GmfSpec.product([GmfSpec.det(2), GmfSpec.per(2)])
    assert product_gmf(spec2, [np.eye(2), np.ones((2, 2))]).value == pytest.approx(2.0)


def test_product_block_checks():
    spec = GmfSpec.product([GmfSpec.det(1), GmfSpec.per(2)])
    with pytest.raises(BlockCountMismatch):
        product_gmf(spec, [np.eye(1)])
    with pytest.raises(DimensionMismatch):
        product_gmf(spec, [np.eye(1), np.eye(3)])
    with pytest.raises(BlockCountMismatch):
        GmfSpec.product([])


def test_gmf_dispatches_product():
    spec = GmfSpec.product([GmfSpec.det(1), GmfSpec.per(1)])
    assert gmf(spec, [np.array([[2.0]]), np.array([[3.0]])]).value == pytest.approx(6.0)


# --- tensor oracle ------------------------------------------------------------------


def test_oracle_det_identity():
    assert gmf_tensor_oracle(GmfSpec.det(2), np.eye(2)).value == pytest.approx(1.0)


def test_oracle_per_all_ones():
    assert gmf_tensor_oracle(GmfSpec.per(2), np.ones((2, 2))).value == pytest.approx(2.0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_oracle_agreement_det_per(n):
    for seed in range(5):
        A = random_psd(RandomInstanceConfig(n=n, m=1, seed=300 + seed))[0]
        for spec in (GmfSpec.det(n), GmfSpec.per(n)):
            a = gmf_tensor_oracle(spec, A).value
            b = gmf_naive(spec, A).value
            assert a == pytest.approx(b, rel=1e-9, abs=1e-12)


def test_oracle_agreement_complex_characters():
    # complex characters exercise the coefficient convention in the
    # decomposable vector
    for n, k in [(3, 1), (3, 2), (4, 1)]:
        g = cyclic_group(n)
        spec = GmfSpec.custom(g, cyclic_character(g, k))
        for seed in range(5):
            A = random_psd(RandomInstanceConfig(n=n, m=1, seed=500 + seed))[0]
            a = gmf_tensor_oracle(spec, A).value
            b = gmf_naive(spec, A).value
            assert a == pytest.approx(b, rel=1e-9, abs=1e-12)


def test_oracle_cap():
    with pytest.raises(DegreeTooLarge):
        gmf_tensor_oracle(GmfSpec.per(7), np.eye(7))


# --- properties ----------------------------------------------------------------------


def test_scaling_homogeneity():
    for n, make in [(3, GmfSpec.det), (3, GmfSpec.per)]:
        spec = make(n)
        A = random_complex(n, 77)
        base = gmf(spec, A).value
        for c in (0.0, 0.5, 2.337):
            scaled = gmf(spec, c * A).value
            assert scaled == pytest.approx(c**n * base, rel=1e-10, abs=1e-12)
    c3 = cyclic_group(3)
    spec = GmfSpec.custom(c3, cyclic_character(c3, 1))
    A = random_psd(RandomInstanceConfig(n=3, m=1, seed=6))[0]
    base = gmf(spec, A).value
    for c in (0.5, 2.0):
        assert gmf(spec, c * A).value == pytest.approx(c**3 * base, rel=1e-10)


def test_nonnegativity_on_gram_matrices():
    # d(B*B) >= -tol for every supported spec kind
    rng = np.random.default_rng(15)
    c3 = cyclic_group(3)
    specs = [
        GmfSpec.det(3),
        GmfSpec.per(3),
        GmfSpec.custom(c3, trivial_character(c3)),
        GmfSpec.custom(c3, cyclic_character(c3, 1)),
    ]
    for _ in range(50):
        B = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        A = B.conj().T @ B
        A = (A + A.conj().T) / 2
        scale = psd_value_scale(GmfSpec.det(3), A)
        for spec in specs:
            assert gmf(spec, A).value >= -1e-9 * scale


def test_spec_ids_are_stable():
    assert GmfSpec.det(3).spec_id == "det:3"
    assert GmfSpec.per(2).spec_id == "per:2"
    c3 = cyclic_group(3)
    s1 = GmfSpec.custom(c3, cyclic_character(c3, 1)).spec_id
    s2 = GmfSpec.custom(c3, cyclic_character(c3, 1)).spec_id
    assert s1 == s2 and s1.startswith("custom:3:")
    prod = GmfSpec.product([GmfSpec.det(1), GmfSpec.per(2)])
    assert prod.spec_id == "product(det:1,per:2)"
