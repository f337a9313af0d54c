"""Build an adjacency tensor, decompose it and look at a signal in the frequency domain."""
import numpy as np

from hgsp import (Hypergraph, adjacency_tensor, bandwidth, decompose, degree_vector,
                  freq_to_original, hgft, ihgft, original_to_freq, total_variation_component)

np.set_printoptions(precision=4, suppress=True)

# seven nodes, two triples and one pair; the pair is padded up to order 3
h = Hypergraph(7, ((0, 3, 5), (1, 2), (4, 5, 6)))
t = adjacency_tensor(h)
print("order", t.order, "stored entries", t.nnz)
print("weight of a triple entry", t[0, 3, 5], "weight of a padded pair entry", t[1, 1, 2])
print("degrees", degree_vector(t))

sp = decompose(t)
print("\nextracted components", sp.rank, "residual", f"{sp.residual:.2e}")
print("coefficients", sp.coeffs)
print("E-eigen residuals", sp.eig_residuals)

# components are ordered from smooth to oscillating
print("\ntotal variation per component",
      np.array([total_variation_component(sp, r) for r in range(sp.dim)]))

s = sp.basis[:2].T @ np.array([2.0, -1.0])
print("\nsignal", s)
print("spectral coefficients", original_to_freq(sp, s))
print("Fourier transform", hgft(sp, s))
# squaring drops the sign of each coefficient, so the inverse picks the non-negative root
print("inverse of the transform", ihgft(sp, hgft(sp, s)))
print("round trip through the coefficients", freq_to_original(sp, original_to_freq(sp, s)))
print("bandwidth", bandwidth(sp, s))
