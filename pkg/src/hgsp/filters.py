"""Polynomial hypergraph filters and the closed-form smoothing filter."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NumericalError
from .spectrum import Spectrum, original_to_freq, freq_to_original, supporting_matrix
from .symtensor import SymTensor, contract_vector

OVERFLOW_LIMIT = 1e150


@dataclass(frozen=True)
class PolySpec:
    """Filter polynomial.

    ``form="tensor"``: ``coeffs[k-1]`` multiplies the ``k``-times shifted
    signal, ``k = 1..a``.  ``form="matrix"``: ``coeffs[k]`` multiplies
    ``P^k s``, ``k = 0..a`` (a constant term is allowed).
    """

    coeffs: tuple
    form: str = "matrix"

    def __post_init__(self):
        coeffs = tuple(float(c) for c in np.atleast_1d(self.coeffs))
        if self.form not in ("tensor", "matrix"):
            raise ValueError(f"form must be 'tensor' or 'matrix', got {self.form!r}")
        if not coeffs:
            raise ValueError("polynomial needs at least one coefficient")
        if not all(np.isfinite(coeffs)):
            raise ValueError("polynomial coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) if self.form == "tensor" else len(self.coeffs) - 1


def _shifts(t: SymTensor, s, k: int):
    out = np.asarray(s, dtype=float)
    for step in range(1, k + 1):
        out = contract_vector(t, out)
        norm = np.linalg.norm(out)
        if not norm <= OVERFLOW_LIMIT:
            raise NumericalError(
                f"shift {step} has norm {norm:.3e}; normalize the tensor or signal "
                f"(magnitudes grow like degree (M-1)^k)"
            )
        yield out


def shift_k(t: SymTensor, s, k: int) -> np.ndarray:
    """``k`` nested hypergraph shifts: ``F (F (... F s^[M-1])^[M-1])^[M-1]``."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    for out in _shifts(t, s, k):
        pass
    return out


def apply_tensor_poly(t: SymTensor, spec: PolySpec, s) -> np.ndarray:
    """``sum_k alpha_k s_(k)`` over nested shifts."""
    if spec.form != "tensor":
        raise ValueError("apply_tensor_poly needs a tensor-form PolySpec")
    out = np.zeros(t.dim)
    for alpha, shifted in zip(spec.coeffs, _shifts(t, s, spec.degree)):
        out += alpha * shifted
    return out


def poly_response(spec: PolySpec, lam) -> np.ndarray:
    """Frequency response ``h(lam) = sum_k beta_k lam^k`` of a matrix-form filter."""
    if spec.form != "matrix":
        raise ValueError("frequency response is defined for matrix-form filters")
    return np.polynomial.polynomial.polyval(np.asarray(lam, dtype=float), spec.coeffs)


def apply_matrix_poly(sp: Spectrum, spec: PolySpec, s) -> np.ndarray:
    """``h(P) s`` evaluated in the Fourier basis as ``V^T diag(h(lam)) V s``."""
    return freq_to_original(sp, poly_response(spec, sp.coeffs) * original_to_freq(sp, s))


def denoise(sp: Spectrum, y, gamma: float, method: str = "solve") -> np.ndarray:
    """Smooth ``y`` with ``[I + gamma (I - P_s)^T (I - P_s)]^{-1} y``.

    ``method="solve"`` runs a Cholesky solve of the system;
    ``method="spectral"`` divides each Fourier coefficient by
    ``1 + gamma (1 - lam_i / lam_1)^2``.  ``gamma = 0`` returns a copy of ``y``.
    """
    if gamma < 0:
        raise ValueError(f"gamma must be non-negative, got {gamma}")
    if not sp.lambda_max > 0:
        raise ValueError(f"largest coefficient must be positive, got {sp.lambda_max}")
    y = np.asarray(y, dtype=float)
    if method not in ("solve", "spectral"):
        raise ValueError(f"unknown method {method!r}")
    if y.shape != (sp.dim,):
        raise ValueError(f"signal length {y.shape} does not match spectrum dim {sp.dim}")
    if gamma == 0:
        return y.copy()
    if method == "spectral":
        gain = 1.0 / (1.0 + gamma * (1.0 - sp.coeffs / sp.lambda_max) ** 2)
        return freq_to_original(sp, gain * original_to_freq(sp, y))
    d = np.eye(sp.dim) - supporting_matrix(sp, normalized=True)
    return scipy.linalg.solve(np.eye(sp.dim) + gamma * d.T @ d, y, assume_a="pos")
