"""Application pipelines: spectrum compression, spectral clustering,
label-propagation classification and denoising."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.cluster import KMeans
from sklearn.metrics import silhouette_score

from .errors import NumericalError
from .filters import denoise
from .hypergraph import Hypergraph, adjacency_tensor
from .spectrum import (Spectrum, bandwidth, decompose, freq_to_original,
                       original_to_freq, supporting_matrix)

# -- compression -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CompressedSignal:
    """First ``K`` Fourier coefficients of a length-``N`` signal.

    ``mse`` holds the squared reconstruction error ``||s - s_rec||^2``
    (zero for lossless compression).
    """

    K: int
    coeffs: np.ndarray
    N: int
    lossless: bool
    mse: float = 0.0
    spectrum_id: str = ""

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float).ravel()
        if coeffs.size != int(self.K) or not 0 <= int(self.K) <= int(self.N):
            raise ValueError(f"need len(coeffs) == K <= N, got {coeffs.size}, {self.K}, {self.N}")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "K", int(self.K))
        object.__setattr__(self, "N", int(self.N))

    @property
    def cr(self) -> float:
        """Compression ratio ``N / K`` (infinite for the zero signal)."""
        return self.N / self.K if self.K else float("inf")


def compress(sp: Spectrum, s, mode: str = "lossless", eps: float = 0.0,
             tol: float = 1e-9) -> CompressedSignal:
    """Keep the leading Fourier coefficients of ``s``.

    ``mode="lossless"`` keeps ``bandwidth(sp, s, tol)`` coefficients.
    ``mode="energy"`` keeps the fewest that retain ``(1 - eps)`` of the
    signal energy.
    """
    s = np.asarray(s, dtype=float)
    st = original_to_freq(sp, s)
    if mode == "lossless":
        k = bandwidth(sp, s, tol)
    elif mode == "energy":
        if not 0 <= eps < 1:
            raise ValueError(f"eps must lie in [0, 1), got {eps}")
        energy = np.cumsum(st**2)
        total = energy[-1] if energy.size else 0.0
        k = 0 if total == 0 else int(np.searchsorted(energy, (1 - eps) * total * (1 - 1e-12))) + 1
        k = min(k, sp.dim)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    coeffs = st[:k]
    mse = 0.0
    if mode != "lossless":
        rec = sp.basis[:k].T @ coeffs
        mse = float(np.sum((s - rec) ** 2))
    return CompressedSignal(k, coeffs, sp.dim, mode == "lossless", mse, sp.id)


def decompress(c: CompressedSignal, sp: Spectrum) -> np.ndarray:
    """``F_K^T coeffs``."""
    if sp.dim != c.N:
        raise ValueError(f"spectrum dim {sp.dim} does not match compressed length {c.N}")
    if c.spectrum_id and c.spectrum_id != sp.id:
        raise ValueError("signal was compressed with a different spectrum")
    return sp.basis[:c.K].T @ c.coeffs


# -- clustering --------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ClusterResult:
    assignments: np.ndarray  # 0-based cluster id per node
    intra_variance: float
    silhouette: float
    embedding: np.ndarray = field(repr=False, default=None)


def spectral_embedding(sp: Spectrum, n_components: int | None = None,
                       rel_tol: float = 1e-9) -> np.ndarray:
    """``N x E`` matrix whose columns are the leading basis vectors with nonzero coefficient."""
    scale = np.max(np.abs(sp.coeffs), initial=0.0)
    keep = np.nonzero(np.abs(sp.coeffs) > rel_tol * scale)[0]
    if n_components is not None:
        keep = keep[:n_components]
    if keep.size == 0:
        raise ValueError("spectrum has no nonzero coefficients")
    return sp.basis[keep].T


def spectral_cluster(sp: Spectrum, k: int, seed: int = 0, restarts: int = 50,
                     max_iter: int = 300, tol: float = 1e-6,
                     n_components: int | None = None) -> ClusterResult:
    """Cluster nodes by k-means on the rows of the Fourier embedding.

    k-means++ seeding, best of ``restarts`` runs by within-cluster sum of
    squares.  Silhouette is measured in the embedding space and is reported
    as 0 when it is undefined (one cluster, or every point in its own).
    """
    n = sp.dim
    if not 1 <= k <= n:
        raise ValueError(f"k must satisfy 1 <= k <= N = {n}, got {k}")
    emb = spectral_embedding(sp, n_components)
    km = KMeans(n_clusters=k, init="k-means++", n_init=restarts, max_iter=max_iter,
                tol=tol, random_state=seed).fit(emb)
    labels = km.labels_.astype(int)
    centroids = km.cluster_centers_[labels]
    intra = float(np.mean(np.sum((emb - centroids) ** 2, axis=1)))
    used = np.unique(labels).size
    sil = float(silhouette_score(emb, labels)) if 2 <= used <= n - 1 else 0.0
    return ClusterResult(labels, intra, sil, emb)


# -- classification ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ClassifierModel:
    """Trained filter ``H = sum_j coefficients[j] P^j`` on a spectrum."""

    degree: int
    coefficients: np.ndarray
    ridge: float
    spectrum: Spectrum = field(repr=False)

    def response(self, lam=None) -> np.ndarray:
        """``h(lam)``; defaults to the spectrum's coefficients."""
        lam = self.spectrum.coeffs if lam is None else np.asarray(lam, dtype=float)
        return np.polynomial.polynomial.polyval(lam, self.coefficients)


def _check_labels(sp: Spectrum, labels) -> np.ndarray:
    labels = np.asarray(labels)
    if labels.shape != (sp.dim,):
        raise ValueError(f"labels length {labels.shape} does not match spectrum dim {sp.dim}")
    if not np.all(np.isin(labels, (-1, 0, 1))):
        raise ValueError("labels must be -1, +1, or 0 for unlabeled")
    return labels.astype(float)


def _power_features(sp: Spectrum, s, degree: int):
    """Columns ``P_s^j s`` for ``j = 0..degree`` (``P_s`` normalized by the coefficient scale)."""
    scale = float(np.max(np.abs(sp.coeffs)))
    if scale == 0.0:
        raise NumericalError("spectrum has no nonzero coefficients")
    mu = sp.coeffs / scale
    st = original_to_freq(sp, s)
    cols = [freq_to_original(sp, mu**j * st) for j in range(degree + 1)]
    return np.column_stack(cols), scale


def lp_hgsp_train(sp: Spectrum, labels, degree: int = 15, ridge: float = 1e-2) -> ClassifierModel:
    """Fit ``H = sum_{j=0..degree} beta_j P^j`` so that ``sign(H s)`` matches the training labels.

    ``labels`` holds +1/-1 for training nodes and 0 for unlabeled ones; the
    same vector is the input signal ``s``.  ``beta`` minimizes
    ``||(H s)_train - y||^2 + ridge ||beta'||^2`` where ``beta'`` are the
    coefficients on unit-norm feature columns.
    """
    s = _check_labels(sp, labels)
    if degree < 1:
        raise ValueError(f"degree must be >= 1, got {degree}")
    if ridge < 0:
        raise ValueError(f"ridge must be non-negative, got {ridge}")
    if not (np.any(s > 0) and np.any(s < 0)):
        raise ValueError("training labels must include both +1 and -1")
    train = np.nonzero(s)[0]
    feats, scale = _power_features(sp, s, degree)
    x = feats[train]
    norms = np.linalg.norm(x, axis=0)
    norms[norms == 0] = 1.0
    xn = x / norms
    gram = xn.T @ xn + ridge * np.eye(degree + 1)
    if np.linalg.cond(gram) > 1e14:
        raise NumericalError("normal equations are singular; increase ridge")
    b = np.linalg.solve(gram, xn.T @ s[train])
    beta = b / norms / scale ** np.arange(degree + 1)
    return ClassifierModel(int(degree), beta, float(ridge), sp)


def lp_hgsp_classify(model: ClassifierModel, labels) -> np.ndarray:
    """Label every node by ``sign(H s)``; an exact zero maps to +1."""
    sp = model.spectrum
    s = _check_labels(sp, labels)
    out = freq_to_original(sp, model.response() * original_to_freq(sp, s))
    return np.where(out >= 0, 1, -1)


# -- denoising ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DenoiseResult:
    signal: np.ndarray
    gamma: float
    curve: list  # (gamma, score) pairs in grid order
    criterion: str
    spectrum: Spectrum = field(repr=False, default=None)


def _gcv(sp: Spectrum, y, gamma: float) -> float:
    gain = 1.0 / (1.0 + gamma * (1.0 - sp.coeffs / sp.lambda_max) ** 2)
    dof = float(np.sum(1.0 - gain))
    if dof <= 0:
        return float("inf")
    resid = np.sum(((1.0 - gain) * original_to_freq(sp, y)) ** 2)
    return float(sp.dim * resid / dof**2)


def denoise_pipeline(h: Hypergraph | None, y, gamma_grid, reference=None,
                     spectrum: Spectrum | None = None, **decompose_opts) -> DenoiseResult:
    """Decompose once, filter ``y`` at every ``gamma`` and keep the best.

    With ``reference`` the score is the mean squared error against it;
    otherwise generalized cross-validation picks ``gamma`` (``gamma = 0`` is
    scored as infinite there, since it leaves no residual to judge).
    """
    grid = [float(g) for g in np.atleast_1d(gamma_grid)]
    if not grid:
        raise ValueError("gamma grid is empty")
    y = np.asarray(y, dtype=float)
    sp = spectrum if spectrum is not None else decompose(adjacency_tensor(h), **decompose_opts)
    if reference is not None:
        reference = np.asarray(reference, dtype=float)
        if reference.shape != y.shape:
            raise ValueError(f"reference length {reference.shape} does not match signal {y.shape}")
    curve, best = [], None
    for g in grid:
        out = denoise(sp, y, g, method="spectral")
        if reference is not None:
            score = float(np.mean((out - reference) ** 2))
        else:
            score = _gcv(sp, y, g) if len(grid) > 1 else 0.0
        curve.append((g, score))
        if best is None or score < best[0]:
            best = (score, g, out)
    return DenoiseResult(best[2], best[1], curve, "mse" if reference is not None else "gcv", sp)
