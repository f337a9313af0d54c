"""Sparse super-symmetric tensors stored by canonical (sorted) index tuples.

Only one representative of every permutation class is kept.  Contractions
recover the missing permutations from multinomial counts, so a tensor with
``N**M`` logical entries costs memory proportional to its distinct
nonzero multisets.

Indices are 0-based in this API.  File formats (see :mod:`hgsp.io`) use
1-based node ids.
"""

from __future__ import annotations

from collections import Counter
from functools import cached_property
from itertools import combinations_with_replacement, permutations
from math import factorial, prod
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np
import scipy.sparse

#: Largest number of scalars a dense tensor may hold.
DENSE_CAP = 10**7


def multiplicity(counts: Iterable[int]) -> int:
    """Number of distinct orderings of a multiset with the given counts."""
    counts = list(counts)
    return factorial(sum(counts)) // prod(factorial(c) for c in counts)


def _check_cap(dim: int, order: int, cap: int) -> None:
    if dim**order > cap:
        raise ValueError(
            f"dense tensor of shape {dim}^{order} = {dim**order} scalars "
            f"exceeds the size cap of {cap}"
        )


class SymTensor:
    """Order-``M``, dimension-``N`` super-symmetric tensor.

    Parameters
    ----------
    order : int
        Tensor order ``M >= 2``.
    dim : int
        Dimension ``N >= 1`` of every mode.
    entries : mapping
        Index tuple -> value.  Keys may be given in any order; they are
        sorted on the way in.  Two permutations of the same tuple must carry
        the same value, otherwise the input is not symmetric and a
        ``ValueError`` is raised.  Zero values are dropped.
    """

    def __init__(self, order: int, dim: int, entries: Mapping[tuple, float] | None = None):
        order, dim = int(order), int(dim)
        if order < 2:
            raise ValueError(f"tensor order must be >= 2, got {order}")
        if dim < 1:
            raise ValueError(f"tensor dimension must be >= 1, got {dim}")
        canon: dict[tuple[int, ...], float] = {}
        for key, value in (entries or {}).items():
            key = tuple(sorted(int(k) for k in key))
            if len(key) != order:
                raise ValueError(f"index {key} has length {len(key)}, expected {order}")
            if key[0] < 0 or key[-1] >= dim:
                raise ValueError(f"index {key} out of range for dimension {dim}")
            value = float(value)
            if not np.isfinite(value):
                raise ValueError(f"non-finite value at index {key}")
            if key in canon and canon[key] != value:
                raise ValueError(
                    f"entries at permutations of {key} disagree "
                    f"({canon[key]} vs {value}); tensor is not symmetric"
                )
            canon[key] = value
        self._order = order
        self._dim = dim
        self._entries = MappingProxyType({k: v for k, v in sorted(canon.items()) if v != 0.0})

    @property
    def order(self) -> int:
        return self._order

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def entries(self) -> Mapping[tuple[int, ...], float]:
        """Read-only canonical entries."""
        return self._entries

    @property
    def nnz(self) -> int:
        """Number of stored canonical entries."""
        return len(self._entries)

    def __getitem__(self, index) -> float:
        index = tuple(sorted(int(i) for i in index))
        if len(index) != self._order:
            raise IndexError(f"expected {self._order} indices, got {len(index)}")
        return self._entries.get(index, 0.0)

    def __repr__(self) -> str:
        return f"SymTensor(order={self._order}, dim={self._dim}, nnz={self.nnz})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymTensor):
            return NotImplemented
        return (self._order, self._dim, dict(self._entries)) == (
            other._order, other._dim, dict(other._entries))

    __hash__ = None

    # -- arithmetic -------------------------------------------------------

    def _combine(self, other: "SymTensor", sign: float) -> "SymTensor":
        if (self._order, self._dim) != (other._order, other._dim):
            raise ValueError(
                f"shape mismatch: order {self._order} dim {self._dim} vs "
                f"order {other._order} dim {other._dim}"
            )
        out = dict(self._entries)
        for k, v in other._entries.items():
            out[k] = out.get(k, 0.0) + sign * v
        return SymTensor(self._order, self._dim, out)

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __neg__(self):
        return self * -1.0

    def __mul__(self, c):
        c = float(c)
        return SymTensor(self._order, self._dim, {k: c * v for k, v in self._entries.items()})

    __rmul__ = __mul__

    # -- dense conversion -------------------------------------------------

    def to_dense(self, cap: int = DENSE_CAP) -> np.ndarray:
        """Materialize all ``N**M`` entries (guarded by ``cap``)."""
        _check_cap(self._dim, self._order, cap)
        out = np.zeros((self._dim,) * self._order)
        for key, value in self._entries.items():
            for perm in set(permutations(key)):
                out[perm] = value
        return out

    @classmethod
    def from_dense(cls, arr, atol: float = 1e-12) -> "SymTensor":
        """Build from a dense array, checking super-symmetry to ``atol``.

        Entries with magnitude below ``atol`` are treated as zero.
        """
        arr = np.asarray(arr, dtype=float)
        order = arr.ndim
        if order < 2 or len(set(arr.shape)) != 1:
            raise ValueError(f"expected a cubical tensor of order >= 2, got shape {arr.shape}")
        scale = max(1.0, float(np.max(np.abs(arr), initial=0.0)))
        for axes in permutations(range(order)):
            if np.max(np.abs(arr - arr.transpose(axes)), initial=0.0) > atol * scale:
                raise ValueError("input tensor is not super-symmetric")
        entries = {}
        for key in zip(*np.nonzero(np.abs(arr) > atol)):
            if list(key) == sorted(key):
                entries[tuple(int(k) for k in key)] = arr[key]
        return cls(order, arr.shape[0], entries)

    @classmethod
    def rank_one_sum(cls, weights, vectors, order: int, atol: float = 0.0) -> "SymTensor":
        """``sum_r weights[r] * vectors[r] ** (outer order)`` in canonical storage."""
        vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
        weights = np.asarray(weights, dtype=float)
        dim = vectors.shape[1]
        if dim**order > DENSE_CAP:
            raise ValueError("rank_one_sum is limited by the dense size cap")
        entries = {}
        for key in combinations_with_replacement(range(dim), order):
            value = float(np.sum(weights * np.prod(vectors[:, key], axis=1)))
            if abs(value) > atol:
                entries[key] = value
        return cls(order, dim, entries)

    # -- contraction tables -----------------------------------------------

    @cached_property
    def _vector_table(self):
        # (remaining M-1 indices per row, sparse N x rows aggregator carrying
        # value * multiplicity); row r contributes to output index rows[r]
        m = self._order
        rows, rest, coef = [], [], []
        for key, value in self._entries.items():
            counts = Counter(key)
            for i in counts:
                counts[i] -= 1
                rows.append(i)
                rest.append([j for j in counts.elements()])
                coef.append(value * multiplicity(counts.values()))
                counts[i] += 1
        n_rows = len(rows)
        agg = scipy.sparse.csr_matrix(
            (np.asarray(coef, dtype=float), (np.asarray(rows, dtype=np.intp), np.arange(n_rows))),
            shape=(self._dim, n_rows))
        return np.asarray(rest, dtype=np.intp).reshape(n_rows, m - 1), agg

    @cached_property
    def _matrix_table(self):
        # rows: (i, j, remaining M-2 indices, value * multiplicity)
        m = self._order
        ii, jj, rest, coef = [], [], [], []
        for key, value in self._entries.items():
            counts = Counter(key)
            for i in list(counts):
                counts[i] -= 1
                for j in [j for j in counts if counts[j] > 0]:
                    counts[j] -= 1
                    ii.append(i)
                    jj.append(j)
                    rest.append([k for k in counts.elements()])
                    coef.append(value * multiplicity(counts.values()))
                    counts[j] += 1
                counts[i] += 1
        return (np.asarray(ii, dtype=np.intp), np.asarray(jj, dtype=np.intp),
                np.asarray(rest, dtype=np.intp).reshape(len(ii), m - 2),
                np.asarray(coef, dtype=float))

    def frobenius_norm(self) -> float:
        """Frobenius norm over all ``N**M`` logical entries."""
        total = 0.0
        for key, value in self._entries.items():
            total += value * value * multiplicity(Counter(key).values())
        return float(np.sqrt(total))


def _as_signal(t: SymTensor, s, batch: bool = False) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if s.ndim not in ((1, 2) if batch else (1,)) or s.shape[0] != t.dim:
        raise ValueError(f"signal shape {s.shape} does not match tensor dim {t.dim}")
    return s


def contract_vector(t: SymTensor, s) -> np.ndarray:
    """Hypergraph shift ``t s^[M-1]``: contract every mode but the first with ``s``.

    ``out[i] = sum_{j1..j_{M-1}} t[i, j1, ..., j_{M-1}] * s[j1] * ... * s[j_{M-1}]``,
    evaluated over canonical entries without forming the outer power of ``s``.
    A 2-D ``s`` of shape ``(N, B)`` is treated as ``B`` signals in columns.
    """
    s = _as_signal(t, s, batch=True)
    rest, agg = t._vector_table
    if rest.shape[0] == 0:
        return np.zeros(s.shape)
    return agg @ np.prod(s[rest], axis=1)


def contract_matrix(t: SymTensor, s) -> np.ndarray:
    """``t s^[M-2]``: the symmetric ``N x N`` matrix left after contracting ``M-2`` modes.

    This is the Jacobian of :func:`contract_vector` divided by ``M-1``.
    """
    s = _as_signal(t, s)
    ii, jj, rest, coef = t._matrix_table
    out = np.zeros((t.dim, t.dim))
    if ii.size:
        np.add.at(out, (ii, jj), coef * np.prod(s[rest], axis=1))
    return out


def n_mode_product(t, mode: int, u) -> np.ndarray:
    """Mode-``mode`` product of a dense tensor with a ``Q x I_mode`` matrix.

    ``out[i_1..j..i_P] = sum_{i_mode} t[i_1..i_mode..i_P] * u[j, i_mode]``.
    ``mode`` is 0-based.
    """
    t = np.asarray(t, dtype=float)
    u = np.atleast_2d(np.asarray(u, dtype=float))
    if not 0 <= mode < t.ndim:
        raise ValueError(f"mode {mode} out of range for a tensor of order {t.ndim}")
    if u.shape[1] != t.shape[mode]:
        raise ValueError(
            f"matrix has {u.shape[1]} columns but mode {mode} has dimension {t.shape[mode]}"
        )
    out = np.tensordot(u, t, axes=([1], [mode]))
    return np.moveaxis(out, 0, mode)


def outer_power(s, times: int, cap: int = DENSE_CAP) -> np.ndarray:
    """Dense ``s o s o ... o s`` (``times`` factors).  Intended for oracles."""
    s = np.asarray(s, dtype=float)
    if times < 1:
        raise ValueError(f"times must be >= 1, got {times}")
    _check_cap(s.shape[0], times, cap)
    out = s
    for _ in range(times - 1):
        out = np.multiply.outer(out, s)
    return out


def hadamard_power(v, times: int) -> np.ndarray:
    """Elementwise ``v ** times`` (``times``-fold Hadamard product)."""
    if times < 1:
        raise ValueError(f"times must be >= 1, got {times}")
    return np.asarray(v, dtype=float) ** int(times)
