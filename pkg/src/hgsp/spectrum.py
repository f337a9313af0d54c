"""Hypergraph Fourier space: orthogonal-CP decomposition and the transforms built on it.

The representing tensor is approximated as ``sum_r lam_r f_r o ... o f_r`` with
orthonormal ``f_r``.  Rows of :attr:`Spectrum.basis` are the ``f_r``; the
coefficients are sorted non-increasing, so low index means low frequency.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import ConvergenceError
from .symtensor import SymTensor, contract_matrix, contract_vector, hadamard_power

@dataclass(frozen=True, eq=False)
class Spectrum:
    """Orthonormal basis ``V`` (rows ``f_r``) with coefficients ``coeffs``.

    ``rank`` counts the components extracted by the decomposition; the rest
    were added by :func:`complete_basis` with zero coefficient.
    ``eig_residuals[r]`` is ``||F f_r^[M-1] - lam_r f_r||`` for every row
    (zero-coefficient rows included), and ``eig_tol`` is the bound the
    extracted rows were accepted under.
    """

    basis: np.ndarray
    coeffs: np.ndarray
    rank: int
    order: int
    residual: float = 0.0
    eig_residuals: np.ndarray | None = None
    eig_tol: float | None = None
    _id: str = field(init=False, repr=False, default="")

    def __post_init__(self):
        basis = np.array(self.basis, dtype=float)
        coeffs = np.array(self.coeffs, dtype=float).ravel()
        n = coeffs.shape[0]
        if basis.shape != (n, n):
            raise ValueError(f"basis shape {basis.shape} does not match {n} coefficients")
        if not (np.all(np.isfinite(basis)) and np.all(np.isfinite(coeffs))):
            raise ValueError("spectrum contains non-finite values")
        err = np.max(np.abs(basis @ basis.T - np.eye(n)), initial=0.0)
        if err > 1e-8:
            raise ValueError(f"basis rows are not orthonormal (max deviation {err:.2e})")
        if np.any(np.diff(coeffs) > 0):
            raise ValueError("coefficients must be sorted non-increasing")
        if not 0 <= int(self.rank) <= n:
            raise ValueError(f"rank {self.rank} outside [0, {n}]")
        if int(self.order) < 2:
            raise ValueError(f"order must be >= 2, got {self.order}")
        basis.setflags(write=False)
        coeffs.setflags(write=False)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "rank", int(self.rank))
        object.__setattr__(self, "order", int(self.order))
        object.__setattr__(self, "residual", float(self.residual))
        if self.eig_residuals is not None:
            er = np.array(self.eig_residuals, dtype=float).ravel()
            er.setflags(write=False)
            object.__setattr__(self, "eig_residuals", er)
        digest = hashlib.sha1()
        digest.update(np.int64([self.order, n]).tobytes())
        digest.update(np.ascontiguousarray(coeffs).tobytes())
        digest.update(np.ascontiguousarray(basis).tobytes())
        object.__setattr__(self, "_id", digest.hexdigest()[:16])

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]

    @property
    def lambda_max(self) -> float:
        return float(self.coeffs[0])

    @property
    def id(self) -> str:
        """Content hash; equal spectra share it."""
        return self._id

    def component(self, r: int) -> np.ndarray:
        return self.basis[r]


# -- decomposition -----------------------------------------------------------


def _sign_fix(v: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude entry positive (first one on ties)."""
    k = int(np.argmax(np.abs(v) > np.max(np.abs(v)) - 1e-12))
    return -v if v[k] < 0 else v


def _complement(rows: np.ndarray, n: int) -> np.ndarray:
    """Orthonormal basis (as columns) of the complement of span(rows)."""
    if rows.shape[0] == 0:
        return np.eye(n)
    return scipy.linalg.null_space(rows, rcond=1e-10)


def _completion(rows: np.ndarray, n: int, s_hint=None) -> np.ndarray:
    """Orthonormal rows spanning the complement of ``rows``.

    With a hint, the first new row is the hint's projection onto the
    complement, so every later row is orthogonal to the hint.
    """
    q = _complement(rows, n)
    m = q.shape[1]
    if m == 0:
        return np.zeros((0, n))
    if s_hint is not None:
        p = q.T @ np.asarray(s_hint, dtype=float)
        norm = np.linalg.norm(p)
        if norm > 1e-12 * max(1.0, np.linalg.norm(s_hint)):
            p = p / norm
            rest = scipy.linalg.null_space(p[None, :], rcond=1e-10)
            q = q @ np.column_stack([p, rest])
    out = np.array([_sign_fix(c) for c in q.T])
    # re-orthonormalize the completed block against accumulated rounding
    full = np.vstack([rows, out]) if rows.shape[0] else out
    for i in range(rows.shape[0], full.shape[0]):
        v = full[i] - full[:i].T @ (full[:i] @ full[i])
        full[i] = v / np.linalg.norm(v)
    return full[rows.shape[0]:]


def _assemble(t_or_none, coeffs, rows, order, residual, eig_tol, n, s_hint=None):
    rank = rows.shape[0]
    extra = _completion(rows, n, s_hint)
    basis = np.vstack([rows.reshape(rank, n), extra])
    lam = np.concatenate([coeffs, np.zeros(n - rank)])
    # stable sort keeps extraction order among ties
    perm = np.argsort(-lam, kind="stable")
    basis, lam = basis[perm], lam[perm]
    eig_res = None
    if t_or_none is not None:
        eig_res = np.array([
            np.linalg.norm(contract_vector(t_or_none, f) - l * f) for f, l in zip(basis, lam)
        ])
    return Spectrum(basis, lam, rank, order, residual, eig_res, eig_tol)


def _cp_residual(t: SymTensor, coeffs, rows) -> float:
    """Frobenius norm of ``t - sum_r coeffs[r] rows[r]^(o M)`` for orthonormal rows."""
    m, n = t.order, t.dim
    if n**m <= 10**6:
        dense = t.to_dense()
        for lam, f in zip(coeffs, rows):
            outer = f
            for _ in range(m - 1):
                outer = np.multiply.outer(outer, f)
            dense = dense - lam * outer
        return float(np.linalg.norm(dense.ravel()))
    # ||T||^2 - 2 sum lam <T, f^M> + sum lam^2, valid for orthonormal rows
    cross = sum(lam * f @ contract_vector(t, f) for lam, f in zip(coeffs, rows))
    sq = t.frobenius_norm() ** 2 - 2 * cross + float(np.sum(np.square(coeffs)))
    return float(np.sqrt(max(sq, 0.0)))


def _power_iteration(t, q, y, alpha, sign, tol, max_iter):
    """Shifted symmetric higher-order power iteration restricted to span(q).

    Maximizes ``sign * <t, x^M>`` over unit ``x = q y``.  ``y`` holds one
    start per column; all columns are iterated together.  Returns the final
    iterates and a per-column convergence mask.
    """
    y = y / np.linalg.norm(y, axis=0)
    done = np.zeros(y.shape[1], dtype=bool)
    for _ in range(max_iter):
        g = q.T @ contract_vector(t, q @ y)
        y_new = sign * g + alpha * y
        y_new /= np.linalg.norm(y_new, axis=0)
        step = np.linalg.norm(y_new - y, axis=0)
        y = np.where(done, y, y_new)
        done |= step < tol
        if done.all():
            break
    return y, done


def _newton_polish(t, q, y, steps=30):
    """Newton refinement of ``q^T t (qy)^[M-1] = lam y``, ``|y| = 1``."""
    m = t.order
    d = q.shape[1]

    def resid(y):
        g = q.T @ contract_vector(t, q @ y)
        lam = float(y @ g)
        return g - lam * y, lam

    r, lam = resid(y)
    best = (np.linalg.norm(r), y, lam)
    for _ in range(steps):
        if best[0] < 1e-15:
            break
        h = q.T @ contract_matrix(t, q @ y) @ q
        jac = np.zeros((d + 1, d + 1))
        jac[:d, :d] = (m - 1) * h - lam * np.eye(d)
        jac[:d, d] = -y
        jac[d, :d] = y
        rhs = -np.concatenate([r, [0.5 * (y @ y - 1.0)]])
        try:
            delta = np.linalg.solve(jac, rhs)
        except np.linalg.LinAlgError:
            break
        y = y + delta[:d]
        y /= np.linalg.norm(y)
        r, lam = resid(y)
        nr = np.linalg.norm(r)
        if nr < best[0]:
            best = (nr, y, lam)
        elif nr > 10 * best[0]:
            break
    return best[1], best[2]


def decompose(t: SymTensor | np.ndarray, tol: float = 1e-8, max_iter: int = 2000,
              seed: int = 0, restarts: int = 20, eig_tol: float | None = 1e-6,
              shift: float | None = None, s_hint=None) -> Spectrum:
    """Orthogonal-CP decomposition by deflated shifted power iteration.

    Components are extracted greedily.  Each round runs ``restarts`` seeded
    power iterations on the deflated tensor, restricted to the orthogonal
    complement of the vectors accepted so far, then polishes the fixed
    points with Newton steps.  The candidate with the largest coefficient
    (largest magnitude for even order) whose E-eigenpair residual
    ``||F f^[M-1] - lam f||`` is within ``eig_tol`` is accepted; ties go to
    the smaller residual, then the earlier restart.  Extraction stops when
    no candidate qualifies, when the best coefficient drops below
    ``tol * ||F||``, or after ``N`` components.  ``eig_tol=None`` accepts any
    converged candidate, giving a plain greedy orthogonal approximation.

    Order-2 input is delegated to a symmetric eigendecomposition.

    For odd order every coefficient is made non-negative by flipping the
    vector.  For even order negative coefficients are kept.

    Raises
    ------
    ValueError
        If a dense input is not super-symmetric.
    ConvergenceError
        If no restart converges within ``max_iter`` in some round.
    """
    if not isinstance(t, SymTensor):
        t = SymTensor.from_dense(t)
    m, n = t.order, t.dim

    if m == 2:
        a = t.to_dense()
        lam, vecs = np.linalg.eigh(a)
        perm = np.argsort(-lam, kind="stable")
        lam, basis = lam[perm], vecs[:, perm].T
        basis = np.array([_sign_fix(v) for v in basis])
        residual = float(np.linalg.norm(a - basis.T @ np.diag(lam) @ basis))
        eig_res = np.linalg.norm(basis @ a - lam[:, None] * basis, axis=1)
        return Spectrum(basis, lam, n, 2, residual, eig_res, eig_tol)

    rng = np.random.default_rng(seed)
    norm_t = t.frobenius_norm()
    if shift is None:
        abs_t = SymTensor(m, n, {k: abs(v) for k, v in t.entries.items()})
        shift = 1.0 + float(np.max(contract_vector(abs_t, np.ones(n)), initial=0.0))
    signs = (1.0,) if m % 2 else (1.0, -1.0)

    coeffs, rows = [], []
    while len(rows) < n and norm_t > 0:
        accepted = np.array(rows).reshape(len(rows), n)
        q = _complement(accepted, n)
        if q.shape[1] == 0:
            break
        candidates = []
        scale = max(norm_t, 1.0)
        starts = rng.standard_normal((q.shape[1], restarts))
        for sign in signs:
            # the power phase only needs the basin; Newton supplies the digits
            ys, done = _power_iteration(t, q, starts, shift, sign, np.sqrt(tol), max_iter)
            for k in range(restarts):
                y, lam = _newton_polish(t, q, ys[:, k])
                x = q @ y
                x /= np.linalg.norm(x)
                g = contract_vector(t, x)
                lam = float(x @ g)
                # accept only a fixed point of the restricted problem
                if np.linalg.norm(q.T @ g - lam * (q.T @ x)) > tol * scale:
                    continue
                if m % 2 and lam < 0:
                    x, lam = -x, -lam
                res = float(np.linalg.norm(contract_vector(t, x) - lam * x))
                candidates.append((lam, res, k, x))
        if not candidates:
            raise ConvergenceError(
                f"power iteration did not converge for component {len(rows) + 1} "
                f"within {max_iter} iterations over {restarts} restarts",
                partial=(np.array(coeffs), accepted),
            )
        valid = [c for c in candidates if eig_tol is None or c[1] <= eig_tol]
        if not valid:
            break
        key = (lambda c: (-round(abs(c[0]) / scale, 9), c[1], c[2]))
        lam, res, _, x = min(valid, key=key)
        if abs(lam) < tol * scale:
            break
        coeffs.append(lam)
        rows.append(_sign_fix(x) if m % 2 == 0 else x)

    coeffs = np.array(coeffs, dtype=float)
    rows = np.array(rows, dtype=float).reshape(len(coeffs), n)
    residual = _cp_residual(t, coeffs, rows)
    return _assemble(t, coeffs, rows, m, residual, eig_tol, n, s_hint)


def complete_basis(partial: Spectrum, s_hint=None) -> Spectrum:
    """Refill the zero-coefficient rows with an orthonormal completion.

    Extracted rows (``rank`` of them) are kept.  With ``s_hint`` the first
    completed row is the hint's projection onto the complement, so all
    other completed rows satisfy ``f^T s_hint = 0``.
    """
    n = partial.dim
    if partial.rank == n:
        return partial
    keep = partial.coeffs != 0.0
    if int(np.sum(keep)) != partial.rank:
        # rank counts extracted rows, which are exactly the nonzero ones
        keep = np.zeros(n, dtype=bool)
        keep[np.argsort(-np.abs(partial.coeffs), kind="stable")[:partial.rank]] = True
    rows = partial.basis[keep]
    coeffs = partial.coeffs[keep]
    out = _assemble(None, coeffs, rows, partial.order, partial.residual, partial.eig_tol,
                    n, s_hint)
    return out


# -- transforms ----------------------------------------------------------------


def _check_dim(sp: Spectrum, v, name="signal") -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.shape[0] != sp.dim:
        raise ValueError(f"{name} length {v.shape} does not match spectrum dim {sp.dim}")
    return v


def original_to_freq(sp: Spectrum, s) -> np.ndarray:
    """``V s``: the original signal expressed in the Fourier basis."""
    return sp.basis @ _check_dim(sp, s)


def freq_to_original(sp: Spectrum, st) -> np.ndarray:
    """``V^T st``, inverse of :func:`original_to_freq`."""
    return sp.basis.T @ _check_dim(sp, st, "spectrum vector")


def hgft(sp: Spectrum, s) -> np.ndarray:
    """Hypergraph Fourier transform ``(f_i^T s)^(M-1)``."""
    return hadamard_power(original_to_freq(sp, s), sp.order - 1)


def ihgft(sp: Spectrum, shat) -> np.ndarray:
    """Inverse HGFT: real ``(M-1)``-th root of every entry, then ``V^T``.

    For even ``M-1`` the non-negative root is taken, so the result is one
    representative of the ``+/-`` class sharing this transform; negative
    entries have no real preimage and are rejected.
    """
    shat = _check_dim(sp, shat, "transform")
    p = sp.order - 1
    if p % 2 == 0 and np.any(shat < 0):
        raise ValueError(f"negative transform entry has no real root of even degree {p}")
    st = np.sign(shat) * np.abs(shat) ** (1.0 / p)
    return freq_to_original(sp, st)


def total_variation_signal(t: SymTensor, lambda_max: float, s, norm: float = 1) -> float:
    """``|| s - t s^[M-1] / lambda_max ||`` in the ``norm``-norm (l1 by default).

    For a unit basis vector ``f_r`` the l2 value is exactly
    ``|1 - lam_r / lam_1|``; the l1 value carries an extra factor ``||f_r||_1``.
    """
    if not lambda_max > 0:
        raise ValueError(f"lambda_max must be positive, got {lambda_max}")
    s = np.asarray(s, dtype=float)
    return float(np.linalg.norm(s - contract_vector(t, s) / lambda_max, ord=norm))


def total_variation_component(sp: Spectrum, r: int) -> float:
    """Total variation of basis row ``r``: ``|1 - lam_r / lam_1|``."""
    if not sp.lambda_max > 0:
        raise ValueError(f"largest coefficient must be positive, got {sp.lambda_max}")
    if not 0 <= r < sp.dim:
        raise IndexError(f"component {r} outside [0, {sp.dim - 1}]")
    return abs(1.0 - sp.coeffs[r] / sp.lambda_max)


def supporting_matrix(sp: Spectrum, normalized: bool = False) -> np.ndarray:
    """``P = V^T diag(lam) V``; divided by ``lam_1`` when ``normalized``."""
    p = sp.basis.T @ (sp.coeffs[:, None] * sp.basis)
    p = 0.5 * (p + p.T)
    if normalized:
        if not sp.lambda_max > 0:
            raise ValueError(f"largest coefficient must be positive, got {sp.lambda_max}")
        p = p / sp.lambda_max
    return p


def bandwidth(sp: Spectrum, s, tol: float = 1e-9) -> int:
    """Smallest ``K`` such that ``(V s)_i`` is negligible for every ``i >= K``.

    An entry counts as zero when its magnitude is at most
    ``tol * max|V s|``.  The zero signal has bandwidth 0.
    """
    if tol < 0:
        raise ValueError(f"tol must be non-negative, got {tol}")
    st = np.abs(original_to_freq(sp, s))
    peak = np.max(st, initial=0.0)
    if peak == 0.0:
        return 0
    big = np.nonzero(st > tol * peak)[0]
    return int(big[-1]) + 1


def frequency_boundary(sp: Spectrum, k: int) -> float:
    """Coefficient ``lam_K`` at the edge of a ``K``-bandlimited space."""
    if not 1 <= k <= sp.dim:
        raise ValueError(f"bandwidth {k} outside [1, {sp.dim}]")
    return float(sp.coeffs[k - 1])
