"""Text file formats for hypergraphs, signals, spectra, sampling plans,
compressed signals, labels and feature tables.

Node ids are 1-based in every file and 0-based in memory.  JSON documents
carry ``format_version``; floats are written with Python's shortest
round-trip repr, so reading back gives bit-identical values.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .apps import CompressedSignal
from .hypergraph import Hypergraph
from .sampling import SamplingPlan
from .spectrum import Spectrum

FORMAT_VERSION = 1


class InputError(ValueError):
    """A file could not be read or does not describe a valid object."""


def _reject_constant(name):
    raise ValueError(f"non-finite number {name} is not allowed")


def _load_json(path, kind: str) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh, parse_constant=_reject_constant)
    except OSError as exc:
        raise InputError(f"{path}: cannot read {kind} file ({exc.strerror})") from None
    except ValueError as exc:
        raise InputError(f"{path}: invalid {kind} JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise InputError(f"{path}: {kind} file must hold a JSON object")
    version = doc.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise InputError(f"{path}: unsupported format_version {version!r}")
    return doc


def _dump_json(doc: dict, path) -> None:
    doc = {"format_version": FORMAT_VERSION, **doc}
    text = json.dumps(doc, allow_nan=False, indent=1)
    Path(path).write_text(text + "\n")


def _field(doc: dict, key: str, path, kind: str):
    if key not in doc:
        raise InputError(f"{path}: {kind} file is missing field '{key}'")
    return doc[key]


def _real_array(value, path, name: str, ndim: int) -> np.ndarray:
    """Strict conversion: numbers only, rectangular, finite."""
    def bad(msg):
        return InputError(f"{path}: field '{name}' {msg}")

    if ndim == 2:
        if not isinstance(value, list) or not all(isinstance(r, list) for r in value):
            raise bad("must be a list of rows")
        widths = {len(r) for r in value}
        if len(widths) > 1:
            raise bad(f"is not rectangular (row lengths {sorted(widths)})")
    elif not isinstance(value, list):
        raise bad("must be a list")
    flat = value if ndim == 1 else [x for r in value for x in r]
    for x in flat:
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise bad(f"holds non-numeric entry {x!r}")
        if not math.isfinite(x):
            raise bad("holds a non-finite entry")
    arr = np.array(value, dtype=float)
    if ndim == 2 and arr.ndim != 2:
        arr = arr.reshape(len(value), 0)
    return arr


def _int(value, path, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"{path}: field '{name}' must be an integer, got {value!r}")
    return value


def _floats(values) -> list:
    return [float(x) for x in np.asarray(values, dtype=float).ravel()]


# -- hypergraph -----------------------------------------------------------------


def write_hypergraph(h: Hypergraph, path) -> None:
    edges = [[i + 1 for i in e] for e in h.hyperedges]
    _dump_json({"num_nodes": h.num_nodes, "hyperedges": edges}, path)


def read_hypergraph(path) -> Hypergraph:
    doc = _load_json(path, "hypergraph")
    n = _int(_field(doc, "num_nodes", path, "hypergraph"), path, "num_nodes")
    raw = _field(doc, "hyperedges", path, "hypergraph")
    if not isinstance(raw, list):
        raise InputError(f"{path}: field 'hyperedges' must be a list of node lists")
    edges = []
    for k, e in enumerate(raw):
        if not isinstance(e, list):
            raise InputError(f"{path}: hyperedges[{k}] must be a list of node ids")
        ids = [_int(v, path, f"hyperedges[{k}]") for v in e]
        if any(not 1 <= v <= n for v in ids):
            raise InputError(f"{path}: hyperedges[{k}] = {e} has a node outside [1, {n}]")
        edges.append(tuple(v - 1 for v in ids))
    try:
        return Hypergraph(n, tuple(edges))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


# -- plain-text vectors ---------------------------------------------------------


def write_signal(s, path) -> None:
    s = np.asarray(s, dtype=float).ravel()
    if not np.all(np.isfinite(s)):
        raise ValueError("signal contains non-finite values")
    Path(path).write_text("".join(f"{x:.17g}\n" for x in s))


def _read_lines(path, kind: str) -> list:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: cannot read {kind} file ({exc.strerror})") from None
    return [(k + 1, ln.strip()) for k, ln in enumerate(text.splitlines()) if ln.strip()]


def read_signal(path, length: int | None = None) -> np.ndarray:
    values = []
    for lineno, tok in _read_lines(path, "signal"):
        try:
            x = float(tok)
        except ValueError:
            raise InputError(f"{path}:{lineno}: not a number: {tok!r}") from None
        if not math.isfinite(x):
            raise InputError(f"{path}:{lineno}: non-finite value {tok!r}")
        values.append(x)
    if length is not None and len(values) != length:
        raise InputError(f"{path}: signal has {len(values)} values, expected {length}")
    return np.array(values, dtype=float)


def write_labels(labels, path) -> None:
    Path(path).write_text("".join(f"{int(v)}\n" for v in np.asarray(labels).ravel()))


def read_labels(path, length: int | None = None) -> np.ndarray:
    """Integer labels, one per line."""
    values = []
    for lineno, tok in _read_lines(path, "labels"):
        try:
            values.append(int(tok))
        except ValueError:
            raise InputError(f"{path}:{lineno}: not an integer label: {tok!r}") from None
    if length is not None and len(values) != length:
        raise InputError(f"{path}: labels file has {len(values)} entries, expected {length}")
    return np.array(values, dtype=int)


# -- spectrum -------------------------------------------------------------------


def write_spectrum(sp: Spectrum, path) -> None:
    doc = {
        "order": sp.order,
        "dim": sp.dim,
        "rank": sp.rank,
        "residual": sp.residual,
        "lambdas": _floats(sp.coeffs),
        "basis": [_floats(row) for row in sp.basis],
    }
    if sp.eig_tol is not None:
        doc["eig_tol"] = sp.eig_tol
    if sp.eig_residuals is not None:
        doc["eig_residuals"] = _floats(sp.eig_residuals)
    _dump_json(doc, path)


def read_spectrum(path) -> Spectrum:
    doc = _load_json(path, "spectrum")
    get = lambda k: _field(doc, k, path, "spectrum")  # noqa: E731
    order = _int(get("order"), path, "order")
    dim = _int(get("dim"), path, "dim")
    lam = _real_array(get("lambdas"), path, "lambdas", 1)
    basis = _real_array(get("basis"), path, "basis", 2)
    if lam.shape != (dim,) or basis.shape != (dim, dim):
        raise InputError(
            f"{path}: lambdas {lam.shape} / basis {basis.shape} do not match dim {dim}"
        )
    residual = _real_array([get("residual")], path, "residual", 1)[0]
    eig_res = doc.get("eig_residuals")
    if eig_res is not None:
        eig_res = _real_array(eig_res, path, "eig_residuals", 1)
    eig_tol = doc.get("eig_tol")
    try:
        return Spectrum(basis, lam, _int(doc.get("rank", dim), path, "rank"), order,
                        residual, eig_res, eig_tol)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


# -- sampling plan -----------------------------------------------------------------


def write_plan(plan: SamplingPlan, path) -> None:
    _dump_json({
        "K": plan.K,
        "q": [int(i) + 1 for i in plan.q],
        "Z": [_floats(r) for r in plan.Z],
        "T": [_floats(r) for r in plan.T],
        "spectrum_id": plan.spectrum_id,
    }, path)


def read_plan(path) -> SamplingPlan:
    doc = _load_json(path, "plan")
    get = lambda k: _field(doc, k, path, "plan")  # noqa: E731
    k = _int(get("K"), path, "K")
    q = [_int(v, path, "q") for v in get("q")]
    z = _real_array(get("Z"), path, "Z", 2)
    t = _real_array(get("T"), path, "T", 2)
    if any(v < 1 for v in q):
        raise InputError(f"{path}: sampled node ids are 1-based")
    try:
        return SamplingPlan(np.array(q, dtype=int) - 1, k, z, t, str(doc.get("spectrum_id", "")))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


# -- compressed signal ---------------------------------------------------------------


def write_compressed(c: CompressedSignal, path) -> None:
    _dump_json({
        "K": c.K,
        "N": c.N,
        "lossless": c.lossless,
        "mse": c.mse,
        "coeffs": _floats(c.coeffs),
        "spectrum_id": c.spectrum_id,
    }, path)


def read_compressed(path) -> CompressedSignal:
    doc = _load_json(path, "compressed")
    get = lambda k: _field(doc, k, path, "compressed")  # noqa: E731
    coeffs = _real_array(get("coeffs"), path, "coeffs", 1)
    mse = _real_array([doc.get("mse", 0.0)], path, "mse", 1)[0]
    try:
        return CompressedSignal(_int(get("K"), path, "K"), coeffs, _int(get("N"), path, "N"),
                                bool(doc.get("lossless", False)), mse,
                                str(doc.get("spectrum_id", "")))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


# -- feature tables ------------------------------------------------------------


def read_features(path):
    """Read a CSV with a header row: id column, feature columns, optional ``label`` column.

    Returns ``(ids, features, labels)``; ``labels`` is None without a label column.
    """
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise InputError(f"{path}: cannot read features file ({exc.strerror})") from None
    if len(rows) < 2:
        raise InputError(f"{path}: features file needs a header and at least one row")
    header = [c.strip() for c in rows[0]]
    has_label = header[-1].lower() == "label"
    n_feat = len(header) - 1 - has_label
    if n_feat < 1:
        raise InputError(f"{path}: header names no feature columns")
    ids, feats, labels = [], [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise InputError(f"{path}:{lineno}: expected {len(header)} columns, got {len(row)}")
        ids.append(row[0].strip())
        try:
            vals = [float(c) for c in row[1:1 + n_feat]]
        except ValueError:
            raise InputError(f"{path}:{lineno}: non-numeric feature value") from None
        if not all(math.isfinite(v) for v in vals):
            raise InputError(f"{path}:{lineno}: non-finite feature value")
        feats.append(vals)
        if has_label:
            labels.append(row[-1].strip())
    return ids, np.array(feats, dtype=float), (labels if has_label else None)
