"""Cluster, classify and compress on small planted hypergraphs."""
import numpy as np
from sklearn.metrics import adjusted_rand_score

from demos_data import planted, two_cliques
from hgsp import (adjacency_tensor, compress, decompose, decompress, lp_hgsp_classify,
                  lp_hgsp_train, spectral_cluster)

np.set_printoptions(precision=4, suppress=True)

res = spectral_cluster(decompose(adjacency_tensor(two_cliques())), 2)
print("two cliques:", res.assignments, "silhouette", round(res.silhouette, 3))

h, block = planted(0)
res = spectral_cluster(decompose(adjacency_tensor(h)), 2)
print("planted blocks:", res.assignments, "ARI", adjusted_rand_score(block, res.assignments))

# greedy mode keeps more components, which the classifier needs
sp = decompose(adjacency_tensor(h), eig_tol=None)
truth = np.where(block == 0, 1, -1)
labels = np.zeros(12, dtype=int)
labels[[0, 3, 7, 10, 11]] = truth[[0, 3, 7, 10, 11]]
pred = lp_hgsp_classify(lp_hgsp_train(sp, labels, degree=15), labels)
print("\ntraining labels", labels)
print("predicted      ", pred)
print("accuracy", np.mean(pred == truth))

s = sp.basis[:4].T @ np.array([1.0, 0.5, -0.2, 0.1])
c = compress(sp, s)
print(f"\nkept {c.K} of {c.N} coefficients, ratio {c.cr}")
print("round trip error", np.max(np.abs(decompress(c, sp) - s)))
