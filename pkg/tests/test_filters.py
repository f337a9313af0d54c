import numpy as np
import pytest

from hgsp import (NumericalError, PolySpec, Spectrum, SymTensor, adjacency_tensor,
                  apply_matrix_poly, apply_tensor_poly, contract_vector, decompose, denoise,
                  poly_response, shift_k, supporting_matrix)

from conftest import random_hypergraph, random_orthonormal


def _spectrum(seed, n=6, m=3):
    rng = np.random.default_rng(seed)
    lam = np.sort(rng.standard_normal(n))[::-1]
    lam[0] = abs(lam[0]) + 1.0
    return Spectrum(random_orthonormal(rng, n), lam, n, m), rng


def test_single_shift_is_contraction(triples7):
    t = adjacency_tensor(triples7)
    s = np.random.default_rng(0).standard_normal(7)
    np.testing.assert_array_equal(shift_k(t, s, 1), contract_vector(t, s))


def test_zero_signal_stays_zero(triples7):
    t = adjacency_tensor(triples7)
    for k in (1, 2, 3):
        np.testing.assert_array_equal(shift_k(t, np.zeros(7), k), np.zeros(7))


def test_triples7_two_shifts(triples7):
    out = shift_k(adjacency_tensor(triples7), np.arange(1.0, 8.0), 2)
    # frozen from the dense outer-power oracle in conftest
    np.testing.assert_allclose(out, [234, 504, 756, 936, 1404, 1656, 1932], rtol=1e-14)


def test_shift_overflow_guard():
    t = SymTensor(3, 2, {(0, 0, 0): 1.0, (1, 1, 1): 1.0})
    with pytest.raises(NumericalError, match="normalize"):
        shift_k(t, np.array([10.0, 1.0]), 12)


def test_tensor_poly_examples(triples7):
    t = adjacency_tensor(triples7)
    rng = np.random.default_rng(1)
    s = rng.standard_normal(7)
    np.testing.assert_array_equal(apply_tensor_poly(t, PolySpec([1.0], "tensor"), s),
                                  contract_vector(t, s))
    np.testing.assert_array_equal(apply_tensor_poly(t, PolySpec([0.0, 0.0], "tensor"), s),
                                  np.zeros(7))
    s1 = contract_vector(t, s)
    s2 = contract_vector(t, s1)
    np.testing.assert_allclose(apply_tensor_poly(t, PolySpec([1.0, -1.0], "tensor"), s), s1 - s2,
                               rtol=1e-14)


def test_polyspec_validation():
    with pytest.raises(ValueError):
        PolySpec([], "matrix")
    with pytest.raises(ValueError):
        PolySpec([1.0], "neither")
    with pytest.raises(ValueError):
        PolySpec([np.inf])
    assert PolySpec([1.0, 2.0], "tensor").degree == 2
    assert PolySpec([1.0, 2.0], "matrix").degree == 1


def test_matrix_poly_identity_and_shift():
    sp, rng = _spectrum(0)
    s = rng.standard_normal(6)
    np.testing.assert_allclose(apply_matrix_poly(sp, PolySpec([1.0]), s), s, atol=1e-14)
    for r in range(6):
        f = sp.basis[r]
        np.testing.assert_allclose(apply_matrix_poly(sp, PolySpec([0.0, 1.0]), f),
                                   sp.coeffs[r] * f, atol=1e-13)


@pytest.mark.parametrize("degree", [1, 3, 5])
def test_matrix_poly_dual_path(degree):
    sp, rng = _spectrum(degree)
    beta = rng.standard_normal(degree + 1)
    s = rng.standard_normal(6)
    p = supporting_matrix(sp)
    explicit = sum(b * np.linalg.matrix_power(p, k) @ s for k, b in enumerate(beta))
    np.testing.assert_allclose(apply_matrix_poly(sp, PolySpec(beta), s), explicit, atol=1e-10)


def test_matrix_powers_act_spectrally():
    sp, rng = _spectrum(9)
    s = rng.standard_normal(6)
    p = supporting_matrix(sp)
    for k in range(5):
        ref = sum(l**k * (f @ s) * f for l, f in zip(sp.coeffs, sp.basis))
        np.testing.assert_allclose(np.linalg.matrix_power(p, k) @ s, ref, atol=1e-10)


def test_order_two_tensor_and_matrix_forms_agree():
    rng = np.random.default_rng(4)
    h = random_hypergraph(rng, 6, 2, uniform=True)
    t = adjacency_tensor(h)
    sp = decompose(t)
    alpha = [0.5, -0.25, 0.125]
    s = rng.standard_normal(6)
    tensor_out = apply_tensor_poly(t, PolySpec(alpha, "tensor"), s)
    matrix_out = apply_matrix_poly(sp, PolySpec([0.0] + alpha), s)
    np.testing.assert_allclose(tensor_out, matrix_out, atol=1e-10)


def test_poly_response():
    np.testing.assert_allclose(poly_response(PolySpec([1.0, 2.0, 3.0]), [0.0, 1.0, 2.0]),
                               [1.0, 6.0, 17.0])
    with pytest.raises(ValueError):
        poly_response(PolySpec([1.0], "tensor"), [0.0])


# -- smoothing filter ------------------------------------------------------------


def test_denoise_gamma_zero_is_identity():
    sp, rng = _spectrum(5)
    y = rng.standard_normal(6)
    np.testing.assert_allclose(denoise(sp, y, 0.0), y, atol=1e-14)
    np.testing.assert_allclose(denoise(sp, y, 0.0, method="spectral"), y, atol=1e-14)


def test_denoise_keeps_leading_component():
    sp, _ = _spectrum(6)
    for gamma in (0.1, 1.0, 100.0):
        np.testing.assert_allclose(denoise(sp, sp.basis[0], gamma), sp.basis[0], atol=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_denoise_dual_path(seed):
    sp, rng = _spectrum(seed)
    y = rng.standard_normal(6)
    gamma = float(rng.uniform(0.01, 20))
    np.testing.assert_allclose(denoise(sp, y, gamma), denoise(sp, y, gamma, method="spectral"),
                               atol=1e-10)


def test_denoise_variation_non_increasing():
    sp, rng = _spectrum(7)
    y = rng.standard_normal(6)
    d = np.eye(6) - supporting_matrix(sp, normalized=True)
    values = [np.linalg.norm(d @ denoise(sp, y, g)) for g in np.linspace(0, 50, 26)]
    assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))


def test_denoise_errors():
    sp, _ = _spectrum(8)
    with pytest.raises(ValueError):
        denoise(sp, np.ones(6), -1.0)
    bad = Spectrum(np.eye(2), [0.0, -1.0], 2, 3)
    with pytest.raises(ValueError):
        denoise(bad, np.ones(2), 1.0)
