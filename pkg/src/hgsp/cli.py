"""Command-line front end.

Every subcommand reads text inputs, writes text outputs and prints metrics
as ``key=value`` lines.  Exit status: 0 success, 1 invalid input, 2
numerical failure.  Node ids, component indices and cluster ids are 1-based.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io
from .apps import (compress, decompress, denoise_pipeline, lp_hgsp_classify, lp_hgsp_train,
                   spectral_cluster)
from .errors import NumericalError
from .filters import PolySpec, apply_matrix_poly, apply_tensor_poly, denoise
from .hypergraph import adjacency_tensor, build_knn_hypergraph
from .sampling import build_plan, interpolate, sample
from .spectrum import (bandwidth, decompose, frequency_boundary, hgft, ihgft,
                       total_variation_component, total_variation_signal)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(**metrics):
    for key, value in metrics.items():
        if isinstance(value, float):
            value = repr(value)
        print(f"{key}={value}")


def _floats(text: str) -> list:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _eig_tol(text: str):
    if text.lower() == "none":
        return None
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'none', got {text!r}") from None


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required for '{args.command}'")


def _signal(args, sp, name="signal"):
    return io.read_signal(getattr(args, name), sp.dim)


def _write_or_print(values, path):
    if path:
        io.write_signal(values, path)
    else:
        sys.stdout.write("".join(f"{x:.17g}\n" for x in values))


# -- subcommands ---------------------------------------------------------------


def cmd_spectrum(args):
    _need(args, "hypergraph", "output")
    h = io.read_hypergraph(args.hypergraph)
    t = adjacency_tensor(h, args.order)
    sp = decompose(t, tol=args.tol, seed=args.seed, restarts=args.restarts, eig_tol=args.eig_tol)
    io.write_spectrum(sp, args.output)
    worst = float(np.max(sp.eig_residuals[:sp.rank], initial=0.0))
    _emit(order=sp.order, dim=sp.dim, rank=sp.rank, lambda_max=sp.lambda_max,
          residual=sp.residual, max_eig_residual=worst)


def cmd_transform(args):
    _need(args, "spectrum", "signal")
    sp = io.read_spectrum(args.spectrum)
    _write_or_print(hgft(sp, _signal(args, sp)), args.output)


def cmd_inverse(args):
    _need(args, "spectrum", "signal")
    sp = io.read_spectrum(args.spectrum)
    _write_or_print(ihgft(sp, _signal(args, sp)), args.output)


def cmd_tv(args):
    _need(args, "spectrum")
    sp = io.read_spectrum(args.spectrum)
    if args.component is not None:
        if not 1 <= args.component <= sp.dim:
            raise UsageError(f"--component {args.component} outside [1, {sp.dim}]")
        _emit(tv=float(total_variation_component(sp, args.component - 1)))
        return
    _need(args, "hypergraph", "signal")
    t = adjacency_tensor(io.read_hypergraph(args.hypergraph), sp.order)
    if t.dim != sp.dim:
        raise UsageError(f"{args.hypergraph}: {t.dim} nodes but spectrum has dim {sp.dim}")
    _emit(tv=total_variation_signal(t, sp.lambda_max, _signal(args, sp), args.norm))


def cmd_bandwidth(args):
    _need(args, "spectrum", "signal")
    sp = io.read_spectrum(args.spectrum)
    k = bandwidth(sp, _signal(args, sp), args.tol)
    _emit(bandwidth=k, boundary=frequency_boundary(sp, k) if k else float("nan"))


def cmd_sample(args):
    _need(args, "spectrum", "k", "output")
    if args.signal is not None:
        _need(args, "samples")
    sp = io.read_spectrum(args.spectrum)
    plan = build_plan(sp, args.k, args.num_samples)
    io.write_plan(plan, args.output)
    _emit(K=plan.K, Q=plan.Q, q=",".join(str(i + 1) for i in plan.q),
          cond=float(np.linalg.cond(plan.Z)))
    if args.signal is not None:
        sq = sample(plan, _signal(args, sp))
        io.write_signal(sq, args.samples)


def cmd_reconstruct(args):
    _need(args, "plan", "signal")
    plan = io.read_plan(args.plan)
    if args.spectrum is not None:
        sp = io.read_spectrum(args.spectrum)
        if plan.spectrum_id and plan.spectrum_id != sp.id:
            raise UsageError(f"{args.plan}: plan was built from a different spectrum")
    sq = io.read_signal(args.signal, plan.Q)
    _write_or_print(interpolate(plan, sq), args.output)


def cmd_filter(args):
    _need(args, "signal", "coeffs")
    spec = PolySpec(tuple(_floats(args.coeffs)), args.form)
    if args.form == "tensor":
        _need(args, "hypergraph")
        t = adjacency_tensor(io.read_hypergraph(args.hypergraph))
        s = io.read_signal(args.signal, t.dim)
        out = apply_tensor_poly(t, spec, s)
    else:
        _need(args, "spectrum")
        sp = io.read_spectrum(args.spectrum)
        out = apply_matrix_poly(sp, spec, _signal(args, sp))
    _write_or_print(out, args.output)


def cmd_denoise(args):
    _need(args, "signal", "gamma")
    if args.spectrum is not None:
        sp = io.read_spectrum(args.spectrum)
    else:
        _need(args, "hypergraph")
        sp = decompose(adjacency_tensor(io.read_hypergraph(args.hypergraph)),
                       tol=args.tol, seed=args.seed, eig_tol=args.eig_tol)
    y = _signal(args, sp)
    grid = _floats(args.gamma)
    ref = io.read_signal(args.reference, sp.dim) if args.reference else None
    if len(grid) == 1 and ref is None:
        out, gamma, crit = denoise(sp, y, grid[0]), grid[0], "fixed"
    else:
        res = denoise_pipeline(None, y, grid, reference=ref, spectrum=sp)
        out, gamma, crit = res.signal, res.gamma, res.criterion
        if args.curve:
            with open(args.curve, "w") as fh:
                fh.write(f"gamma,{crit}\n")
                fh.writelines(f"{g!r},{v!r}\n" for g, v in res.curve)
    _write_or_print(out, args.output)
    _emit(gamma=gamma, criterion=crit)


def cmd_cluster(args):
    _need(args, "spectrum", "k")
    sp = io.read_spectrum(args.spectrum)
    res = spectral_cluster(sp, args.k, seed=args.seed)
    if args.output:
        io.write_labels(res.assignments + 1, args.output)
    _emit(k=args.k, intra_variance=res.intra_variance, silhouette=res.silhouette)


def cmd_classify(args):
    _need(args, "spectrum", "labels")
    sp = io.read_spectrum(args.spectrum)
    labels = io.read_labels(args.labels, sp.dim)
    model = lp_hgsp_train(sp, labels, degree=args.degree, ridge=args.ridge)
    pred = lp_hgsp_classify(model, labels)
    train = labels != 0
    if args.output:
        io.write_labels(pred, args.output)
    _emit(degree=model.degree, ridge=model.ridge, train_size=int(train.sum()),
          train_accuracy=float(np.mean(pred[train] == labels[train])))


def cmd_compress(args):
    _need(args, "spectrum", "signal", "output")
    sp = io.read_spectrum(args.spectrum)
    s = _signal(args, sp)
    if args.energy is not None:
        c = compress(sp, s, mode="energy", eps=args.energy, tol=args.tol)
    else:
        c = compress(sp, s, mode="lossless", tol=args.tol)
    io.write_compressed(c, args.output)
    _emit(K=c.K, N=c.N, cr=float(c.cr), mse=c.mse)


def cmd_decompress(args):
    _need(args, "spectrum", "compressed")
    sp = io.read_spectrum(args.spectrum)
    c = io.read_compressed(args.compressed)
    _write_or_print(decompress(c, sp), args.output)


def cmd_build_hypergraph(args):
    _need(args, "features", "output")
    ids, feats, labels = io.read_features(args.features)
    h = build_knn_hypergraph(feats, args.m)
    io.write_hypergraph(h, args.output)
    if labels is not None and args.labels:
        classes = sorted(set(labels))
        io.write_labels([classes.index(v) + 1 for v in labels], args.labels)
    _emit(num_nodes=h.num_nodes, num_hyperedges=len(h.hyperedges), mce=h.mce)


COMMANDS = {
    "spectrum": (cmd_spectrum, "decompose a hypergraph's adjacency tensor"),
    "transform": (cmd_transform, "hypergraph Fourier transform of a signal"),
    "inverse": (cmd_inverse, "inverse hypergraph Fourier transform"),
    "tv": (cmd_tv, "total variation of a component or a signal"),
    "bandwidth": (cmd_bandwidth, "bandwidth of a signal"),
    "sample": (cmd_sample, "choose sampling nodes for a bandwidth"),
    "reconstruct": (cmd_reconstruct, "interpolate a signal from its samples"),
    "filter": (cmd_filter, "apply a polynomial filter"),
    "denoise": (cmd_denoise, "smoothing filter, optionally over a gamma grid"),
    "cluster": (cmd_cluster, "spectral clustering"),
    "classify": (cmd_classify, "label propagation by a trained polynomial filter"),
    "compress": (cmd_compress, "keep leading Fourier coefficients"),
    "decompress": (cmd_decompress, "rebuild a signal from kept coefficients"),
    "build-hypergraph": (cmd_build_hypergraph, "nearest-neighbour hypergraph from a feature CSV"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hgsp", description="Hypergraph signal processing tools.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--hypergraph")
        p.add_argument("--signal")
        p.add_argument("--spectrum")
        p.add_argument("--labels")
        p.add_argument("--features")
        p.add_argument("--output")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--k", type=int)
        p.add_argument("--gamma", help="one value or a comma-separated grid")
        p.add_argument("--degree", type=int, default=15)
        p.add_argument("--ridge", type=float, default=1e-2)
        if name == "spectrum":
            p.add_argument("--order", type=int, help="tensor order (default: largest edge size)")
            p.add_argument("--restarts", type=int, default=20)
        if name in ("spectrum", "denoise"):
            p.add_argument("--eig-tol", type=_eig_tol, default=1e-6,
                           help="E-eigenpair acceptance bound, or 'none' for greedy mode")
        if name == "tv":
            p.add_argument("--component", type=int)
            p.add_argument("--norm", type=float, default=1, help="norm for a signal's variation")
        if name == "sample":
            p.add_argument("--num-samples", type=int)
            p.add_argument("--samples", help="where to write the sampled values of --signal")
        if name == "reconstruct":
            p.add_argument("--plan")
        if name == "filter":
            p.add_argument("--coeffs")
            p.add_argument("--form", choices=("matrix", "tensor"), default="matrix")
        if name == "denoise":
            p.add_argument("--reference")
            p.add_argument("--curve", help="CSV file for the score curve")
        if name == "compress":
            p.add_argument("--lossless", action="store_true")
            p.add_argument("--energy", type=float, metavar="EPS")
        if name == "decompress":
            p.add_argument("--compressed")
        if name == "build-hypergraph":
            p.add_argument("--m", type=int, default=3, help="hyperedge size")
    return parser


_DEFAULT_TOL = {"spectrum": 1e-8, "denoise": 1e-8}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.tol is None:
            args.tol = _DEFAULT_TOL.get(args.command, 1e-9)
        if args.command == "compress" and args.lossless and args.energy is not None:
            raise UsageError("--lossless and --energy are mutually exclusive")
        COMMANDS[args.command][0](args)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (UsageError, ValueError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (NumericalError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
