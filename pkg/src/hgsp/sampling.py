"""Sampling and perfect recovery of bandlimited hypergraph signals."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NumericalError
from .spectrum import Spectrum
from .symtensor import n_mode_product

COND_LIMIT = 1e12


@dataclass(frozen=True, eq=False)
class SamplingPlan:
    """Sampled node indices ``q`` (0-based) with recovery matrices.

    ``Z`` is ``K x Q`` with ``Z U F_K^T = I_K``; ``T = F_K^T Z`` is the
    ``N x Q`` interpolator.
    """

    q: np.ndarray
    K: int
    Z: np.ndarray
    T: np.ndarray
    spectrum_id: str = ""

    def __post_init__(self):
        q = np.asarray(self.q, dtype=np.intp).ravel()
        z = np.asarray(self.Z, dtype=float)
        t = np.asarray(self.T, dtype=float)
        k = int(self.K)
        if len(set(q.tolist())) != q.size:
            raise ValueError("sampled indices must be distinct")
        if q.size < k:
            raise ValueError(f"need at least K = {k} samples, got {q.size}")
        if z.shape != (k, q.size) or t.shape[1] != q.size:
            raise ValueError(f"Z {z.shape} / T {t.shape} do not match K = {k}, Q = {q.size}")
        if q.size and (q.min() < 0 or q.max() >= t.shape[0]):
            raise ValueError(f"sampled index outside [0, {t.shape[0] - 1}]")
        for name, arr in (("q", q), ("Z", z), ("T", t)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "K", k)

    @property
    def Q(self) -> int:
        return self.q.size

    @property
    def N(self) -> int:
        return self.T.shape[0]

    @property
    def selector(self) -> np.ndarray:
        """The ``Q x N`` 0/1 sampling operator ``U``."""
        u = np.zeros((self.Q, self.N))
        u[np.arange(self.Q), self.q] = 1.0
        return u


def build_plan(sp: Spectrum, K: int, Q: int | None = None) -> SamplingPlan:
    """Choose ``Q >= K`` nodes from which every ``K``-bandlimited signal is recoverable.

    Nodes are picked by column-pivoted QR of the first ``K`` basis rows,
    a greedy volume-maximizing choice that keeps ``U F_K^T`` well
    conditioned.  ``Z`` is its inverse (pseudo-inverse when ``Q > K``).
    """
    n = sp.dim
    K = int(K)
    Q = K if Q is None else int(Q)
    if not 1 <= K <= Q <= n:
        raise ValueError(f"need 1 <= K <= Q <= N, got K={K}, Q={Q}, N={n}")
    fk = sp.basis[:K]
    _, _, piv = scipy.linalg.qr(fk, pivoting=True, mode="economic")
    q = np.sort(piv[:Q])
    b = fk[:, q].T  # U F_K^T, Q x K
    cond = np.linalg.cond(b)
    if not cond < COND_LIMIT:
        raise NumericalError(
            f"no well-conditioned sample set: cond(U F_K^T) = {cond:.3e} exceeds {COND_LIMIT:.0e}"
        )
    z = np.linalg.inv(b) if Q == K else np.linalg.pinv(b)
    return SamplingPlan(q, K, z, fk.T @ z, sp.id)


def sample(plan: SamplingPlan, s) -> np.ndarray:
    """``U s``: entries of ``s`` at the sampled nodes, in plan order."""
    s = np.asarray(s, dtype=float)
    if s.shape != (plan.N,):
        raise ValueError(f"signal length {s.shape} does not match plan dimension {plan.N}")
    return s[plan.q]


def interpolate(plan: SamplingPlan, sq) -> np.ndarray:
    """``T s_Q``; exact for ``K``-bandlimited sources."""
    sq = np.asarray(sq, dtype=float)
    if sq.shape != (plan.Q,):
        raise ValueError(f"sample vector length {sq.shape} does not match Q = {plan.Q}")
    return plan.T @ sq


def sample_tensor(plan: SamplingPlan, x) -> np.ndarray:
    """Sample a dense hypergraph signal by applying ``U`` along every mode."""
    x = np.asarray(x, dtype=float)
    u = plan.selector
    for mode in range(x.ndim):
        x = n_mode_product(x, mode, u)
    return x


def interpolate_tensor(plan: SamplingPlan, xq) -> np.ndarray:
    """Interpolate a dense sampled hypergraph signal by applying ``T`` along every mode."""
    xq = np.asarray(xq, dtype=float)
    for mode in range(xq.ndim):
        xq = n_mode_product(xq, mode, plan.T)
    return xq


def sampled_hypergraph(plan: SamplingPlan, sp: Spectrum, symmetric: bool = False) -> np.ndarray:
    """Dense order-``M`` tensor on the ``K`` samples whose shift mirrors the original one.

    The default is ``sum_i lam_i w_i o z_i o ... o z_i`` where ``z_i`` are the
    rows of ``Z`` and ``w_i = U f_i`` the columns of ``Z^-1``.  Contracting
    its last ``M - 1`` modes with a sampled ``K``-bandlimited signal gives
    ``U F s^[M-1]`` exactly.  ``symmetric=True`` uses ``z_i`` in every mode
    instead; the two agree only when ``Z`` is orthogonal.  Requires ``Q == K``.
    """
    if plan.Q != plan.K:
        raise ValueError(f"sampled hypergraph needs Q == K, got Q={plan.Q}, K={plan.K}")
    if plan.spectrum_id and plan.spectrum_id != sp.id:
        raise ValueError("plan was built from a different spectrum")
    k, m = plan.K, sp.order
    lead = plan.Z if symmetric else sp.basis[:k][:, plan.q]
    out = np.zeros((k,) * m)
    for lam, w, z in zip(sp.coeffs[:k], lead, plan.Z):
        term = w
        for _ in range(m - 1):
            term = np.multiply.outer(term, z)
        out += lam * term
    return out


def sampled_shift(f_k, sq) -> np.ndarray:
    """Contract the last ``M - 1`` modes of a dense sampled tensor with ``sq``."""
    out = np.asarray(f_k, dtype=float)
    sq = np.asarray(sq, dtype=float)
    if sq.shape != (out.shape[0],):
        raise ValueError(f"sample vector length {sq.shape} does not match tensor dim {out.shape[0]}")
    for _ in range(out.ndim - 1):
        out = out @ sq
    return out
