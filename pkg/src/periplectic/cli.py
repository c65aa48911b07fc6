"""Command-line interface: reports, matrix caches, and the verification matrix."""

import argparse
import concurrent.futures
import json
import os
import sys
from pathlib import Path

import numpy as np

from .field import SparseOp
from .kac import DIM_GUARD, grading_census, kac_module
from .maxvec import maximal_vectors
from .series import (
    check_report_against_table,
    composition_series,
    HeadCatalog,
    load_theorem_table,
)
from .structure import build_algebra
from .weights import (
    delta,
    enumerate_lambda,
    is_typical,
    lambda_from_params,
    make_chi,
    weyl_typicality_scan,
)

CHI_KINDS = ["chi1", "chi2", "chi3", "chi4", "chi5", "chi6"]


def _check_prime(text: str) -> int:
    p = int(text)
    if p <= 3 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
        raise argparse.ArgumentTypeError(f"p must be a prime > 3, got {p}")
    return p


def _parse_lambda(text: str) -> tuple:
    try:
        parts = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"--lambda expects 't1,t2', got {text!r}")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"--lambda expects 2 parameters, got {len(parts)}")
    return parts


def _chi_of(args, alg):
    return make_chi(alg, args.chi, a=args.chi_a, b=args.chi_b)


def _weight_record(lam, ts) -> dict:
    return {
        "ts": list(ts),
        "repr": "(" + ", ".join(repr(c) for c in lam.coords) + ")",
        "delta": repr(delta(lam)),
        "typical": is_typical(lam),
    }


def _ts_of(chi, lam) -> tuple:
    return tuple(int(c.coeffs[0]) for c in lam.coords)


# --- output ---------------------------------------------------------------------------

def _emit(obj, args, csv_rows=None, markdown=None) -> None:
    if args.format == "json":
        text = json.dumps(obj, indent=2) + "\n"
    elif args.format == "csv":
        if csv_rows is None:
            raise SystemExit("csv format is not supported for this subcommand")
        lines = [",".join(csv_rows[0])]
        for row in csv_rows[1:]:
            lines.append(",".join(str(x) for x in row))
        text = "\n".join(lines) + "\n"
    else:
        if markdown is None:
            raise SystemExit("markdown format is not supported for this subcommand")
        text = markdown
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _factor_notation(factors) -> str:
    """Bracketed multiplicity notation, e.g. '2*[(0, 0)] + [(1, 0)]'."""
    parts = []
    for f in factors:
        head = f"[{f['label_repr']}]"
        parts.append(head if f["mult"] == 1 else f"{f['mult']}*{head}")
    return " + ".join(parts)


# --- matrix cache ---------------------------------------------------------------------

def _cache_dir(args) -> Path | None:
    path = args.cache_dir or os.environ.get("PERIPLECTIC_CACHE")
    return Path(path) if path else None


def save_module_matrices(M, directory: Path, name: str) -> Path:
    """Persist every action operator as COO triples plus a field header."""
    directory.mkdir(parents=True, exist_ok=True)
    arrays = {"meta": np.array([M.params.p, M.params.m, M.dim], dtype=np.int64)}
    for x, op in M.actions.items():
        rows, cols, degs, vals = [], [], [], []
        for d, s in enumerate(op.slices):
            coo = s.tocoo()
            rows.append(coo.row)
            cols.append(coo.col)
            degs.append(np.full(coo.nnz, d, dtype=np.int64))
            vals.append(coo.data)
        arrays[f"op{x}"] = np.vstack(
            [np.concatenate(c).astype(np.int64) for c in (rows, cols, degs, vals)]
        )
    path = directory / f"{name}.npz"
    np.savez_compressed(path, **arrays)
    return path


def load_module_matrices(path: Path, params) -> dict[int, SparseOp]:
    data = np.load(path)
    p, m, dim = data["meta"]
    if (p, m) != (params.p, params.m):
        raise ValueError(f"cache {path} was written for GF({p}^{m})")
    actions = {}
    for key in data.files:
        if not key.startswith("op"):
            continue
        rows, cols, degs, vals = data[key]
        dense = np.zeros((dim, dim, m), dtype=np.int64)
        dense[rows, cols, degs] = vals
        actions[int(key[2:])] = SparseOp.from_dense(params, dense)
    return actions


def _cache_roundtrip_ok(M, path: Path) -> bool:
    cached = load_module_matrices(path, M.params)
    if set(cached) != set(M.actions):
        return False
    return all(
        all((a.slices[d] - b.slices[d]).nnz == 0 for d in range(M.params.m))
        for a, b in ((M.actions[x], cached[x]) for x in cached)
    )


# --- subcommands ----------------------------------------------------------------------

def cmd_lambda_list(args) -> int:
    alg = build_algebra(args.n, args.p)
    chi = _chi_of(args, alg)
    records = [_weight_record(lam, _ts_of(chi, lam)) for lam in enumerate_lambda(chi)]
    header = ["t1", "t2", "repr", "delta", "typical"]
    rows = [header] + [[r["ts"][0], r["ts"][1], f"\"{r['repr']}\"", f"\"{r['delta']}\"", r["typical"]] for r in records]
    _emit(records, args, csv_rows=rows)
    return 0


def cmd_delta(args) -> int:
    alg = build_algebra(args.n, args.p)
    chi = _chi_of(args, alg)
    lam = lambda_from_params(chi, args.lam)
    _emit(_weight_record(lam, args.lam), args)
    return 0


def cmd_typicality_scan(args) -> int:
    report = weyl_typicality_scan(args.n, args.p)
    report["witnesses"] = {"".join(map(str, k)): v for k, v in report["witnesses"].items()}
    ok = not report["existence_counterexamples"] and not report["equivalence_counterexamples"]
    _emit(report, args)
    return 0 if ok else 1


def _guard_dimension(args) -> None:
    roots = args.n * (args.n - 1) // 2
    bound = (1 << roots) * args.p**roots
    if bound > DIM_GUARD and not args.force_large:
        print(
            f"resource guard: worst-case induced dimension {bound} exceeds "
            f"{DIM_GUARD}; pass --force-large to proceed",
            file=sys.stderr,
        )
        raise SystemExit(2)


def _build_kac(args, alg):
    chi = _chi_of(args, alg)
    lam = lambda_from_params(chi, args.lam)
    try:
        return chi, lam, kac_module(alg, chi, lam, force=args.force_large)
    except ValueError as e:
        print(f"resource guard: {e}", file=sys.stderr)
        raise SystemExit(2)


def cmd_kac(args) -> int:
    _guard_dimension(args)
    alg = build_algebra(args.n, args.p)
    chi, lam, K = _build_kac(args, alg)
    report = {
        "p": args.p,
        "chi": {"kind": args.chi},
        "lambda": _weight_record(lam, args.lam),
        "base_dim": K.base.dim,
        "dim": K.dim,
        "grading_census": {str(g): c for g, c in sorted(grading_census(K).items())},
        "verified": K.verify() == [],
    }
    cache = _cache_dir(args)
    if cache is not None:
        name = f"kac_p{args.p}_{args.chi}_{args.lam[0]}_{args.lam[1]}"
        path = save_module_matrices(K, cache, name)
        report["cache_path"] = str(path)
        report["cache_roundtrip"] = _cache_roundtrip_ok(K, path)
    _emit(report, args)
    return 0 if report["verified"] else 1


def _label_text(label) -> str:
    exps, base = label
    factors = [f"y{i+1}" for i, e in enumerate(exps) if e]
    if not isinstance(base, str):
        base = "".join(str(x) for x in base)
    return (".".join(factors) if factors else "1") + f"|{base}"


def cmd_maxvec(args) -> int:
    _guard_dimension(args)
    alg = build_algebra(args.n, args.p)
    chi, lam, K = _build_kac(args, alg)
    M = K.base if args.module == "base" else K
    out = []
    for mv in maximal_vectors(M):
        support = np.flatnonzero(mv.vector.any(axis=1))
        out.append({
            "weight": "(" + ", ".join(repr(c) for c in mv.weight.coords) + ")",
            "degree": mv.grade,
            "support": [
                _label_text(M.basis_labels[j]) if isinstance(M.basis_labels[j], tuple)
                else str(M.basis_labels[j])
                for j in support
            ],
            "coefficients": [[int(c) for c in mv.vector[j]] for j in support],
        })
    _emit(out, args)
    return 0


def cmd_series(args) -> int:
    _guard_dimension(args)
    alg = build_algebra(args.n, args.p)
    chi = _chi_of(args, alg)
    lam = lambda_from_params(chi, args.lam)
    try:
        rep = composition_series(alg, chi, lam, seed=args.seed, force=args.force_large)
    except ValueError as e:
        print(f"resource guard: {e}", file=sys.stderr)
        return 2
    d = rep.to_dict()
    d["p"] = args.p
    if args.omit_timing:
        d.pop("runtime_ms")
    md = f"K{rep.lam_repr}: dim {rep.dim}, length {rep.length}: {_factor_notation(rep.factors)}\n"
    header = ["label", "dim", "mult"]
    rows = [header] + [[f"\"{f['label_repr']}\"", f["dim"], f["mult"]] for f in rep.factors]
    _emit(d, args, csv_rows=rows, markdown=md)
    return 0


def _verify_row(job) -> dict:
    n, p, kind, ts, seed = job
    alg = build_algebra(n, p)
    chi = make_chi(alg, kind)
    lam = lambda_from_params(chi, ts)
    rep = composition_series(alg, chi, lam, seed=seed, force=True)
    res = check_report_against_table(rep, lam, load_theorem_table(), p)
    return {
        "chi": kind,
        "t1": ts[0],
        "t2": ts[1],
        "typical": rep.typical,
        "dim": rep.dim,
        "length": rep.length,
        "factors": _factor_notation(rep.factors),
        "ok": res["ok"],
        "deviates_from_source": res["suspect"],
        "detail": res["detail"] or res["source_note"],
    }


def cmd_verify(args) -> int:
    kinds = [args.chi] if args.chi else CHI_KINDS
    jobs = []
    for kind in kinds:
        for t1 in range(args.p):
            for t2 in range(args.p):
                jobs.append((args.n, args.p, kind, (t1, t2), args.seed))
    if args.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_verify_row, jobs))
    else:
        rows = []
        alg = build_algebra(args.n, args.p)
        table = load_theorem_table()
        for kind in kinds:
            chi = make_chi(alg, kind)
            catalog = HeadCatalog(alg, chi)
            for t1 in range(args.p):
                for t2 in range(args.p):
                    lam = lambda_from_params(chi, (t1, t2))
                    rep = composition_series(alg, chi, lam, seed=args.seed, force=True, catalog=catalog)
                    res = check_report_against_table(rep, lam, table, args.p)
                    rows.append({
                        "chi": kind, "t1": t1, "t2": t2, "typical": rep.typical,
                        "dim": rep.dim, "length": rep.length,
                        "factors": _factor_notation(rep.factors),
                        "ok": res["ok"], "deviates_from_source": res["suspect"],
                        "detail": res["detail"] or res["source_note"],
                    })
    rows.sort(key=lambda r: (r["chi"], r["t1"], r["t2"]))
    mismatches = sum(not r["ok"] for r in rows)
    summary = {
        "p": args.p,
        "rows": len(rows),
        "mismatches": mismatches,
        "deviations_from_source": sum(r["deviates_from_source"] for r in rows),
        "matrix": rows,
    }
    header = ["chi", "t1", "t2", "typical", "dim", "length", "factors", "ok", "deviates_from_source"]
    csv_rows = [header] + [[r[h] if h != "factors" else f"\"{r[h]}\"" for h in header] for r in rows]
    md_lines = [
        "| chi | (t1,t2) | dim | length | factors | status |",
        "|---|---|---|---|---|---|",
    ]
    for r in rows:
        status = "ok" if r["ok"] else "MISMATCH"
        if r["deviates_from_source"]:
            status += " (deviates from source table)"
        md_lines.append(
            f"| {r['chi']} | ({r['t1']},{r['t2']}) | {r['dim']} | {r['length']} "
            f"| {r['factors']} | {status} |"
        )
    md_lines.append("")
    md_lines.append(f"{len(rows)} rows, {mismatches} mismatches")
    _emit(summary, args, csv_rows=csv_rows, markdown="\n".join(md_lines) + "\n")
    return 1 if mismatches else 0


# --- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="periplectic",
        description="Exact modular representation theory of the periplectic Lie superalgebra.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, chi=True, lam=False):
        sp.add_argument("--n", type=int, default=3, help="algebra rank (default 3)")
        sp.add_argument("--p", type=_check_prime, default=5, help="field characteristic, prime > 3")
        sp.add_argument("--format", choices=["json", "csv", "markdown"], default="json")
        sp.add_argument("--out", help="write the report to this file instead of stdout")
        if chi:
            sp.add_argument("--chi", choices=CHI_KINDS, required=True, help="p-character kind")
            sp.add_argument("--chi-a", type=int, default=1, dest="chi_a",
                            help="first character parameter (kinds with a semisimple part)")
            sp.add_argument("--chi-b", type=int, default=1, dest="chi_b",
                            help="second character parameter")
        if lam:
            sp.add_argument("--lambda", type=_parse_lambda, required=True, dest="lam",
                            help="highest-weight parameters 't1,t2'")

    sp = sub.add_parser("lambda-list", help="enumerate the admissible highest weights")
    common(sp)
    sp.set_defaults(func=cmd_lambda_list)

    sp = sub.add_parser("delta", help="typicality data of one weight")
    common(sp, lam=True)
    sp.set_defaults(func=cmd_delta)

    sp = sub.add_parser("typicality-scan", help="scan Weyl twists of every prime-field weight")
    common(sp, chi=False)
    sp.set_defaults(func=cmd_typicality_scan)

    sp = sub.add_parser("kac", help="build an induced module and report its census")
    common(sp, lam=True)
    sp.add_argument("--cache-dir", help="persist action matrices here (or set PERIPLECTIC_CACHE)")
    sp.add_argument("--force-large", action="store_true", help="override the dimension guard")
    sp.set_defaults(func=cmd_kac)

    sp = sub.add_parser("maxvec", help="maximal vectors of an induced module")
    common(sp, lam=True)
    sp.add_argument("--module", choices=["kac", "base"], default="kac")
    sp.add_argument("--force-large", action="store_true", help="override the dimension guard")
    sp.set_defaults(func=cmd_maxvec)

    sp = sub.add_parser("series", help="composition series report")
    common(sp, lam=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--force-large", action="store_true", help="override the dimension guard")
    sp.add_argument("--omit-timing", action="store_true",
                    help="drop runtime_ms for byte-stable output")
    sp.set_defaults(func=cmd_series)

    sp = sub.add_parser("verify", help="run every case against the expectation table")
    common(sp, chi=False)
    sp.add_argument("--chi", choices=CHI_KINDS, help="restrict to one p-character kind")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    sp.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
