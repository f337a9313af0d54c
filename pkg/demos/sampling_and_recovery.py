"""Sample a bandlimited signal on a few nodes and recover it everywhere."""
import numpy as np

from demos_data import small_hypergraph
from hgsp import (adjacency_tensor, build_plan, contract_vector, decompose, interpolate, sample,
                  sampled_hypergraph, sampled_shift)
from hgsp.symtensor import SymTensor

np.set_printoptions(precision=4, suppress=True)
rng = np.random.default_rng(1)

# an exactly orthogonally decomposable tensor on 6 nodes
n, k = 6, 3
vectors = np.linalg.qr(rng.standard_normal((n, n)))[0].T
weights = np.array([3.0, 2.0, 1.5, 1.0, 0.5, 0.25])
dense = sum(w * np.einsum("i,j,l->ijl", v, v, v) for w, v in zip(weights, vectors))
t = SymTensor.from_dense(dense)
sp = decompose(t)
print("recovered coefficients", sp.coeffs)

s = sp.basis[:k].T @ rng.standard_normal(k)
plan = build_plan(sp, k)
print(f"\nsampling nodes {plan.q} for bandwidth {k}")
rec = interpolate(plan, sample(plan, s))
print("recovery error", np.linalg.norm(rec - s))

# the shift seen through the samples alone
f_k = sampled_hypergraph(plan, sp)
print("\nshift from samples ", sampled_shift(f_k, sample(plan, s)))
print("samples of the shift", sample(plan, contract_vector(t, s)))

# on an adjacency tensor the decomposition is only approximate, recovery still exact
sp = decompose(adjacency_tensor(small_hypergraph()))
s = sp.basis[:2].T @ np.array([1.0, 0.5])
plan = build_plan(sp, 2)
print("\nadjacency example recovery error", np.linalg.norm(interpolate(plan, sample(plan, s)) - s))
