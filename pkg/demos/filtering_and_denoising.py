"""Polynomial filters and the smoothing filter on a noisy smooth signal."""
import numpy as np

from demos_data import small_hypergraph
from hgsp import (PolySpec, adjacency_tensor, apply_matrix_poly, apply_tensor_poly, decompose,
                  denoise, denoise_pipeline, poly_response, supporting_matrix)

np.set_printoptions(precision=4, suppress=True)
rng = np.random.default_rng(3)

t = adjacency_tensor(small_hypergraph())
sp = decompose(t)
s = rng.standard_normal(7)

# tensor form: repeated shifts, matrix form: powers of the supporting matrix
print("tensor filter", apply_tensor_poly(t, PolySpec([1.0, -0.5], "tensor"), s))
spec = PolySpec([0.2, 1.0, -0.3])
print("matrix filter", apply_matrix_poly(sp, spec, s))
p = supporting_matrix(sp)
print("explicit     ", 0.2 * s + p @ s - 0.3 * p @ p @ s)
print("response on the spectrum", poly_response(spec, sp.coeffs))

clean = sp.basis[0]
y = clean + rng.uniform(0, 0.1, 7)
print("\nnoisy mse", np.mean((y - clean) ** 2))
for gamma in (0.0, 0.3, 3.0, 30.0):
    print(f"gamma {gamma:5.1f} mse", np.mean((denoise(sp, y, gamma) - clean) ** 2))

res = denoise_pipeline(None, y, [0.0, 0.3, 3.0, 30.0], spectrum=sp)
print(f"\nselected by {res.criterion}: gamma {res.gamma}")
