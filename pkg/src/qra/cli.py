"""Command-line front end.

Subcommands cover generation and every analysis; each run writes its
payload files plus a manifest echoing the full configuration and a sha256
per output, so identical configs produce byte-identical output trees.
CSV payloads are the plotting contract consumed by the viewer package.
"""
from __future__ import annotations

import argparse
import concurrent.futures
import hashlib
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, dataset, ensembles, haar, nist, transport
from .errors import MalformedName, QraError, SpecParseError

DEFAULT_SEED = 53  # documented default for every subcommand
SCHEMA_VERSION = 1


def _threads() -> int:
    env = os.environ.get("QRA_THREADS", "")
    if env.strip():
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(4, os.cpu_count() or 1)


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _atomic_write(path: Path, data: bytes):
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


class OutputTree:
    """Collects output files under one directory and hashes them."""

    def __init__(self, out_dir):
        self.dir = Path(out_dir)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.hashes: dict[str, str] = {}

    def write_bytes(self, name: str, data: bytes) -> str:
        _atomic_write(self.dir / name, data)
        self.hashes[name] = hashlib.sha256(data).hexdigest()
        return name

    def write_csv(self, name: str, header, rows, fmt: str = "csv") -> str:
        if fmt == "json":
            name = name[: -len(".csv")] + ".json"
            payload = [dict(zip(header, row)) for row in rows]
            data = json.dumps(payload, sort_keys=True, indent=1).encode()
        else:
            lines = [",".join(header)]
            lines.extend(",".join(_fmt(v) for v in row) for row in rows)
            data = ("\n".join(lines) + "\n").encode()
        return self.write_bytes(name, data)

    def write_json(self, name: str, obj) -> str:
        data = (json.dumps(obj, sort_keys=True, indent=2) + "\n").encode()
        return self.write_bytes(name, data)

    def manifest(self, command: str, config: dict) -> str:
        obj = {
            "schema": SCHEMA_VERSION,
            "command": command,
            "config": config,
            "outputs": dict(sorted(self.hashes.items())),
        }
        return self.write_json(f"{command}_manifest.json", obj)


def load_sample(path) -> dataset.BitArray:
    """Load a sample file; metadata comes from the name when it matches the
    measurement scheme, otherwise it is inferred from the content."""
    p = Path(path)
    try:
        return dataset.load_bitarray(p)
    except MalformedName:
        pass
    with open(p) as fh:
        first = ""
        for line in fh:
            first = line.strip()
            if first:
                break
    if not first:
        raise dataset.EmptyFile(f"no bit-string rows in {p}") from None
    source = dataset.Source.CUE_SAMPLER if p.stem.startswith("cue") \
        else dataset.Source.CLASSICAL_PRNG
    meta = dataset.SampleMeta(n_qubits=len(first), source=source, label=p.stem)
    return dataset.load_bitarray(p, meta)


# generation -----------------------------------------------------------
def parse_generator_spec(spec: str) -> dict:
    """Parse `classical:n=..,M=..,p1=..` / `cue:n=..,M=..,mode=..` strings."""
    kind, _, rest = spec.partition(":")
    kind = kind.strip().lower()
    if kind not in ("classical", "cue"):
        raise SpecParseError(f"unknown generator kind {kind!r}")
    fields = {}
    for part in filter(None, (p.strip() for p in rest.split(","))):
        key, eq, val = part.partition("=")
        if not eq:
            raise SpecParseError(f"expected key=value, got {part!r}")
        fields[key.strip()] = val.strip()
    out = {"kind": kind}
    try:
        out["n"] = int(fields.pop("n"))
        out["rows"] = int(fields.pop("M"))
    except KeyError as exc:
        raise SpecParseError(f"generator spec needs {exc}") from None
    except ValueError as exc:
        raise SpecParseError(str(exc)) from None
    if out["n"] < 1 or out["rows"] < 1:
        raise SpecParseError("n and M must be >= 1")
    if kind == "classical":
        try:
            out["p1"] = float(fields.pop("p1", "0.5"))
        except ValueError as exc:
            raise SpecParseError(str(exc)) from None
        if not 0 <= out["p1"] <= 1:
            raise SpecParseError("p1 must be a probability")
    else:
        mode = fields.pop("mode", "fixed")
        try:
            out["mode"] = haar.SamplingMode(mode)
        except ValueError:
            raise SpecParseError(f"unknown cue mode {mode!r}") from None
    if fields:
        raise SpecParseError(f"unknown fields {sorted(fields)}")
    return out


def cmd_generate(args) -> int:
    spec = parse_generator_spec(args.spec)
    tree = OutputTree(args.out)
    if spec["kind"] == "classical":
        a = dataset.generate_classical(spec["n"], spec["rows"], args.seed, spec["p1"])
    else:
        a = haar.sample_cue_bitstrings(spec["n"], spec["rows"], args.seed, spec["mode"])
        if args.emit_probs and spec["mode"] is haar.SamplingMode.FIXED_UNITARY:
            us = haar.sample_cue_unitary(spec["n"], args.seed)
            tree.write_csv(f"{a.meta.label}_probs.csv", ["x", "p"],
                           [(x, p) for x, p in enumerate(us.probs)], args.format)
        if args.emit_eigenphases:
            count = args.emit_eigenphases
            samples = haar.sample_cue_unitaries(spec["n"], count, args.seed)
            tree.write_csv(f"{a.meta.label}_eigenphases.csv",
                           ["re", "im", "phase"],
                           haar.eigenphase_rows(samples), args.format)
    sample_name = f"{a.meta.label}.txt"
    buf = (np.asarray(a.bits) + ord("0")).astype(np.uint8)
    lines = b"\n".join(row.tobytes() for row in buf) + b"\n"
    tree.write_bytes(sample_name, lines)
    tree.manifest("generate", {"spec": args.spec, "seed": args.seed,
                               "label": a.meta.label})
    print(f"wrote {tree.dir / sample_name}")
    return 0


# analysis sections ----------------------------------------------------
def _heatmap_payload(tree, a, fmt):
    hm = ensembles.heatmap(a)
    bias = ensembles.column_bias_report(a)
    label = a.meta.label
    files = {
        "heatmap": tree.write_csv(
            f"{label}_heatmap.csv", [f"q{j}" for j in range(hm.n)],
            [row.tolist() for row in hm.mean_matrix], fmt),
        "column_bias": tree.write_csv(
            f"{label}_column_bias.csv", ["qubit", "mean", "flagged"],
            [(j, float(m), int(j in bias.flagged))
             for j, m in enumerate(bias.column_means)], fmt),
    }
    return {"label": label, "p1": hm.p1, "flagged": list(bias.flagged),
            "files": files}


def _density_payload(tree, a, fmt, bins):
    h = dataset.to_histogram(a)
    dens = haar.empirical_density(h, bins)
    dim = 1 << a.n_qubits
    centers = 0.5 * (dens.grid[1:] + dens.grid[:-1])
    curve_u = np.linspace(0.0, float(dens.grid[-1]), 512)
    label = a.meta.label
    files = {
        "histogram": tree.write_csv(
            f"{label}_histogram.csv", ["x", "count", "p"],
            dataset.histogram_rows(h), fmt),
        "density": tree.write_csv(
            f"{label}_density.csv", ["u", "density"],
            zip(centers, dens.density), fmt),
        "curve": tree.write_csv(
            f"{label}_density_curve.csv", ["u", "density"],
            zip(curve_u, haar.cue_eigvec_density(curve_u, dim)), fmt),
    }
    return {"label": label, "bins": bins, "files": files}


def _ginibre_payload(tree, a, fmt, count, shifted):
    ens = ensembles.slice_square(a)
    count = min(count, ens.count) if count else ens.count
    spec = ensembles.ginibre_spectrum(ens, count=count, shifted=shifted)
    limit = spec.disk_radius * (1 + ensembles.OUTLIER_MARGIN)
    label = a.meta.label
    files = {
        "spectrum": tree.write_csv(
            f"{label}_ginibre.csv", ["re", "im", "is_outlier"],
            [(z.real, z.imag, int(abs(z) > limit)) for z in spec.eigenvalues], fmt),
    }
    return {"label": label, "matrices": count,
            "disk_radius": spec.disk_radius, "files": files}


def _wishart_payload(tree, a, fmt, gamma, bins=40):
    spec = ensembles.wishart_spectrum(a, gamma)
    lo, hi = ensembles.mp_bounds(gamma, spec.sigma2)
    grid = np.linspace(lo, hi, bins + 1)
    hist, _ = (np.histogram(spec.bulk, bins=grid, density=True)
               if spec.bulk.size else (np.zeros(bins), grid))
    centers = 0.5 * (grid[1:] + grid[:-1])
    curve_l = np.linspace(lo, hi, 512)
    label = a.meta.label
    hist_rows = [(float(c), float(v), 0) for c, v in zip(centers, hist)]
    hist_rows += [(float(o), 0.0, 1) for o in spec.outliers]
    files = {
        "spectrum": tree.write_csv(
            f"{label}_wishart.csv", ["lambda", "is_outlier"],
            [(float(v), 0) for v in spec.bulk]
            + [(float(v), 1) for v in spec.outliers], fmt),
        "curve": tree.write_csv(
            f"{label}_mp_curve.csv", ["lambda", "rho"],
            zip(curve_l, ensembles.mp_density(curve_l, gamma, spec.sigma2)), fmt),
        "binned": tree.write_csv(
            f"{label}_mp_hist.csv", ["lambda", "density", "is_outlier"],
            hist_rows, fmt),
    }
    return {"label": label, "gamma": gamma, "sigma2": spec.sigma2,
            "bounds": [lo, hi], "files": files}


def _nist_payload(tree, a, fmt):
    reports = nist.run_battery(a)
    label = a.meta.label
    files = {
        "report": tree.write_json(f"{label}_nist.json", nist.battery_json(reports)),
        "grid": tree.write_bytes(f"{label}_nist_grid.txt",
                                 (nist.battery_grid({label: reports}) + "\n").encode()),
    }
    return {"label": label,
            "verdicts": {r.test_id.value: r.verdict.value for r in reports},
            "files": files}


def _wasserstein_payload(tree, arrays, fmt, normalize):
    samples = [transport.LabeledSample.from_bitarray(a) for a in arrays]
    dm = transport.distance_matrix(samples, normalize=normalize)
    files = {
        "matrix": tree.write_csv(
            "wasserstein_matrix.csv", ["label", *dm.labels],
            [(lbl, *row.tolist()) for lbl, row in zip(dm.labels, dm.d)], fmt),
        "pairs": tree.write_csv(
            "wasserstein_pairs.csv", ["n", "w", "label"],
            [(dm.n_qubits, float(dm.d[i, j]), f"{dm.labels[i]}|{dm.labels[j]}")
             for i in range(len(dm.labels)) for j in range(i + 1, len(dm.labels))],
            fmt),
    }
    payload = {"labels": list(dm.labels), "normalized": dm.normalized,
               "files": files}
    if len(samples) >= 3:
        emb = transport.embed_2d(dm)
        files["embedding"] = tree.write_csv(
            "wasserstein_embedding.csv", ["label", "x", "y"], emb.points, fmt)
        payload["embedding_residual"] = emb.residual
    else:
        payload["embedding"] = "skipped: needs >= 3 samples"
    return payload


def _per_input(fn, tree, arrays, *extra):
    return [fn(tree, a, *extra) for a in arrays]


def cmd_simple(args, fn, *extra) -> int:
    tree = OutputTree(args.out)
    arrays = [load_sample(p) for p in args.inputs]
    payload = _per_input(fn, tree, arrays, args.format, *extra)
    tree.manifest(args.command, _config_of(args))
    _ = payload
    return 0


def _config_of(args) -> dict:
    skip = {"func"}
    return {k: (v.name if hasattr(v, "name") and not isinstance(v, (str, int, float))
                else v)
            for k, v in sorted(vars(args).items()) if k not in skip}


def cmd_nist(args) -> int:
    tree = OutputTree(args.out)
    arrays = [load_sample(p) for p in args.inputs]
    rows = {}
    for a in arrays:
        _nist_payload(tree, a, args.format)
        rows[a.meta.label] = nist.run_battery(a)
    tree.write_bytes("nist_grid.txt", (nist.battery_grid(rows) + "\n").encode())
    tree.manifest("nist", _config_of(args))
    return 0


def cmd_wasserstein(args) -> int:
    tree = OutputTree(args.out)
    arrays = [load_sample(p) for p in args.inputs]
    _wasserstein_payload(tree, arrays, args.format, args.normalize)
    tree.manifest("wasserstein", _config_of(args))
    return 0


def cmd_xeb(args) -> int:
    tree = OutputTree(args.out)
    a = load_sample(args.sample)
    probs = _load_probs(args.probs)
    f = haar.xeb_fidelity(a, probs)
    tree.write_json("xeb.json", {"label": a.meta.label, "f_xeb": f,
                                 "n_qubits": a.n_qubits, "rows": a.rows})
    tree.manifest("xeb", _config_of(args))
    print(f"F_XEB = {f:.6f}")
    return 0


def _load_probs(path) -> np.ndarray:
    text = Path(path).read_text().strip().splitlines()
    header = text[0].split(",") if text else []
    if header and header[0] == "x":
        return np.array([float(line.split(",")[1]) for line in text[1:]])
    return np.array([float(line) for line in text if line.strip()])


def cmd_report(args) -> int:
    tree = OutputTree(args.out)
    arrays = [load_sample(p) for p in args.inputs]
    fmt = args.format

    def density_section():
        out = []
        for a in arrays:
            if a.n_qubits > dataset.HISTOGRAM_MAX_QUBITS:
                out.append({"label": a.meta.label, "status": "skipped",
                            "reason": f"n={a.n_qubits} too wide for a dense histogram"})
            else:
                out.append(_density_payload(tree, a, fmt, args.bins))
        return out

    def wasserstein_section():
        if len(arrays) < 2:
            return {"status": "skipped", "reason": "needs >= 2 inputs"}
        return _wasserstein_payload(tree, arrays, fmt, args.normalize)

    sections = {
        "heatmap": lambda: _per_input(_heatmap_payload, tree, arrays, fmt),
        "density": density_section,
        "ginibre": lambda: _per_input(_ginibre_payload, tree, arrays, fmt,
                                      args.count, args.shifted),
        "wishart": lambda: _per_input(_wishart_payload, tree, arrays, fmt,
                                      args.gamma),
        "nist": lambda: _per_input(_nist_payload, tree, arrays, fmt),
        "wasserstein": wasserstein_section,
    }
    results = {}
    errors = 0
    with concurrent.futures.ThreadPoolExecutor(max_workers=_threads()) as pool:
        futures = {name: pool.submit(fn) for name, fn in sections.items()}
        for name in sections:
            try:
                results[name] = futures[name].result()
            except (QraError, ValueError, OSError) as exc:
                results[name] = {"status": "error",
                                 "error": f"{type(exc).__name__}: {exc}"}
                errors += 1
    report = {"schema": SCHEMA_VERSION, "config": _config_of(args),
              "inputs": [a.meta.label for a in arrays], "sections": results}
    tree.write_json("report.json", report)
    tree.manifest("report", _config_of(args))
    return 3 if errors else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qra",
        description="Randomness audit for quantum random-circuit bit-strings.")
    ap.add_argument("--version", action="version", version=f"qra {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, inputs=True):
        if inputs:
            p.add_argument("inputs", nargs="+", help="sample file(s)")
        p.add_argument("--out", default="qra_out", help="output directory")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    g = sub.add_parser("generate", help="generate a sample file")
    g.add_argument("spec", help="classical:n=..,M=..[,p1=..] or cue:n=..,M=..[,mode=fixed|fresh]")
    g.add_argument("--emit-probs", action="store_true",
                   help="also write the exact outcome distribution (cue fixed mode)")
    g.add_argument("--emit-eigenphases", type=int, default=0, metavar="K",
                   help="also write eigenvalue phases of K freshly sampled "
                        "unitaries (cue mode)")
    common(g, inputs=False)
    g.set_defaults(func=cmd_generate)

    h = sub.add_parser("heatmap", help="entrywise means and per-qubit bias")
    common(h)
    h.set_defaults(func=lambda a: cmd_simple(a, _heatmap_payload))

    d = sub.add_parser("density", help="outcome histogram and scaled density")
    d.add_argument("--bins", type=int, default=50)
    common(d)
    d.set_defaults(func=lambda a: cmd_simple(a, _density_payload, a.bins))

    s = sub.add_parser("spectra", help="circle-law spectrum of square bit matrices")
    s.add_argument("--count", type=int, default=100)
    s.add_argument("--shifted", action="store_true",
                   help="diagonalize the mean-shifted matrices instead")
    common(s)
    s.set_defaults(func=lambda a: cmd_simple(a, _ginibre_payload, a.count, a.shifted))

    w = sub.add_parser("wishart", help="Wishart spectrum against Marchenko-Pastur")
    w.add_argument("--gamma", type=float, default=0.5)
    common(w)
    w.set_defaults(func=lambda a: cmd_simple(a, _wishart_payload, a.gamma))

    n = sub.add_parser("nist", help="statistical randomness battery")
    common(n)
    n.set_defaults(func=cmd_nist)

    ws = sub.add_parser("wasserstein", help="pairwise transport distances")
    ws.add_argument("--normalize", action="store_true", help="divide by 2**n")
    common(ws)
    ws.set_defaults(func=cmd_wasserstein)

    x = sub.add_parser("xeb", help="linear cross-entropy fidelity")
    x.add_argument("sample", help="sample file")
    x.add_argument("--probs", required=True, help="outcome probabilities (csv or one per line)")
    x.add_argument("--out", default="qra_out")
    x.add_argument("--seed", type=int, default=DEFAULT_SEED)
    x.add_argument("--format", choices=("csv", "json"), default="csv")
    x.set_defaults(func=cmd_xeb)

    r = sub.add_parser("report", help="run every analysis and bundle a JSON report")
    r.add_argument("--gamma", type=float, default=0.5)
    r.add_argument("--bins", type=int, default=50)
    r.add_argument("--count", type=int, default=100)
    r.add_argument("--shifted", action="store_true")
    r.add_argument("--normalize", action="store_true")
    common(r)
    r.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except QraError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
