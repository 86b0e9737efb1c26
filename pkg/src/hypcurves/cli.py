"""Batch front-end.

Exit codes: 0 ok, 2 bad input, 3 oracle conflict, 4 assertion failure,
5 search ceiling hit or inconclusive geometry.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import io as hio
from .arcs import decompose
from .corpus import CorpusCurve, generate_corpus, thick_metrics
from .covers import CeilingExceeded, corpus_degree, minimal_degree, sweep_f_sigma
from .cusps import cusp_source, cusp_sweep, hyperbolic_in_cusped, non_increasing
from .inequalities import (check_sapir_inequalities, lagrange_optimum, polygon_area,
                           random_feasible, sums_to_products_check)
from .intersection import Inconclusive, UnsupportedMethod, self_intersection_combinatorial
from .kernel import FenchelNielsenMetric, GeometryError
from .metric import PipelineError, verify_theorem1
from .surface import CurveCycle, PantsDecomposition, StructureError, build_pants_graph
from .tracing import self_intersection_geodesic

EXIT_OK, EXIT_INPUT, EXIT_CONFLICT, EXIT_ASSERT, EXIT_CEILING = 0, 2, 3, 4, 5


class OracleConflict(RuntimeError):
    pass


class AssertionFailure(RuntimeError):
    pass


# -- output -----------------------------------------------------------------------

def _outputs(*paths) -> list[str]:
    return [str(p) for p in paths if p]


def _write_json(data: dict, path, schema: dict | None = None):
    if schema is not None:
        hio.validate(data, schema, "report")
    text = hio.canonical_json(data)
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _write_table(header, rows, path, manifest: hio.RunManifest, dat: bool = True):
    """CSV with a leading manifest comment, plus a whitespace-separated .dat twin."""
    buf = _io.StringIO()
    buf.write(f"# manifest {manifest.digest}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(x) for x in r])
    if path:
        Path(path).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    if path and dat:
        lines = [f"# manifest {manifest.digest}", "# " + " ".join(header)]
        lines += [" ".join(_fmt(x) if x is not None and x != "" else "NaN" for x in r)
                  for r in rows]
        Path(path).with_suffix(".dat").write_text("\n".join(lines) + "\n")


def _dat_path(path):
    return str(Path(path).with_suffix(".dat")) if path else None


# -- workers ------------------------------------------------------------------------

@lru_cache(maxsize=8)
def _graph(pd_json: str):
    return build_pants_graph(PantsDecomposition.from_json(json.loads(pd_json)))


def _pmap(fn, items, threads: int):
    """Order-preserving map; the merge is independent of the worker count."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items, chunksize=1))


def _verify_task(args):
    pd_json, cid, steps, k = args
    g = _graph(pd_json)
    try:
        rep = verify_theorem1(CurveCycle.from_steps(steps), g, k=k, k_source="oracle")
    except PipelineError as exc:
        return {"id": cid, "error": {"stage": exc.stage, "message": str(exc.cause)}}
    return {"id": cid, **rep.to_json()}


def _degree_task(args):
    pd_json, cid, steps, k, ceiling = args
    g = _graph(pd_json)
    return corpus_degree(g, CorpusCurve(cid, CurveCycle.from_steps(steps), k), ceiling)


# -- input helpers ------------------------------------------------------------------------

def _load_surface(path):
    data = hio.load_json(path)
    g, metric = hio.surface_from_json(data, str(path))
    return g, metric


def _load_curve(path, g):
    data = hio.load_json(path)
    return hio.curve_from_json(data, g, str(path))


def _pd_json(g) -> str:
    return json.dumps(g.pd.to_json(), sort_keys=True)


def _manifest(args, command, inputs, outputs, **tol) -> hio.RunManifest:
    return hio.RunManifest(command, args.seed,
                           {k: hio.file_digest(v) for k, v in inputs.items() if v},
                           {"tol": args.tol, **tol}, _outputs(*outputs))


def _thick(g, metric_data, seed, count):
    if metric_data is not None:
        return [hio.metric_from_json(metric_data, "surface")]
    return thick_metrics(g, seed, count)


def _intersections(g, c, method, metrics):
    """{method name: k}; 'geo:i' entries are per metric."""
    out = {}
    if method in ("comb", "both"):
        out["comb"] = self_intersection_combinatorial(g, c).k
    if method in ("geo", "both"):
        for i, m in enumerate(metrics):
            out[f"geo:{i}"] = self_intersection_geodesic(g, m, c).k
    return out


def _auto_method(g, method):
    if method == "auto":
        return "geo" if g.pd.topology().closed else "comb"
    if method in ("comb", "both") and g.pd.topology().closed:
        raise UnsupportedMethod("combinatorial count needs a surface with boundary or cusps;"
                                " use --method geo")
    return method


# -- commands ----------------------------------------------------------------------------

def cmd_analyze(args) -> int:
    g, metric_data = _load_surface(args.surface)
    c = _load_curve(args.curve, g)
    method = _auto_method(g, args.method)
    counts = _intersections(g, c, method, _thick(g, metric_data, args.seed, args.metrics))
    if len(set(counts.values())) != 1:
        raise OracleConflict(f"intersection counts disagree: {counts}")
    k = next(iter(counts.values()))
    d = decompose(g, c)
    ratios = None
    if k >= 1:
        ratios = {cid: r.__dict__ for cid, r in sorted(check_sapir_inequalities(d, k).items())}
    man = _manifest(args, "analyze", {"surface": args.surface, "curve": args.curve}, [args.out])
    report = {"manifest": man.to_json(), "curve": c.to_json(), "k": k,
              "intersection": counts, "decomposition": d.to_json(),
              "flags": d.flags, "ratios": ratios}
    _write_json(report, args.out, hio.ANALYZE_REPORT_SCHEMA)
    return EXIT_OK


def cmd_build_metric(args) -> int:
    g, _ = _load_surface(args.surface)
    c = _load_curve(args.curve, g)
    rep = verify_theorem1(c, g, k=args.k)
    man = _manifest(args, "build-metric", {"surface": args.surface, "curve": args.curve},
                    [args.out])
    _write_json({"manifest": man.to_json(), **rep.to_json()}, args.out,
                hio.REPORT_SCHEMAS["build-metric"])
    if not rep.ok:
        raise AssertionFailure("length or systole check failed")
    return EXIT_OK


def _corpus_items(args, g):
    if args.corpus:
        data = hio.load_json(args.corpus, hio.CORPUS_SCHEMA)
        items = []
        for i, cd in enumerate(data["curves"]):
            c = hio.curve_from_json(cd, g, str(args.corpus), f"/curves/{i}")
            items.append((cd.get("id", f"c{i:03d}"), c, None))
        return items
    if args.curve:
        return [("curve", _load_curve(args.curve, g), None)]
    corpus = generate_corpus(g, args.seed, args.generate, 1, args.k_max)
    return [(x.id, x.cycle, x.k) for x in corpus]


def cmd_verify(args) -> int:
    if args.suite:
        return _run_suite(args)
    if not args.surface:
        raise hio.InputError("verify needs --suite or --surface", "", "args")
    g, _ = _load_surface(args.surface)
    items = _corpus_items(args, g)
    pdj = _pd_json(g)
    results = _pmap(_verify_task, [(pdj, cid, c.steps(), k) for cid, c, k in items],
                    args.threads)
    reports = [r for r in results if "error" not in r]
    errors = [r for r in results if "error" in r]
    failures = [r["id"] for r in reports if not r["ok"]] + [r["id"] for r in errors]
    ratios = [r["ratio"] for r in reports if r["ratio"] is not None]
    scaled = [r["systole_times_2_sqrt_k"] for r in reports
              if r["systole_times_2_sqrt_k"] is not None]
    summary = {"curves": len(results), "failures": len(failures), "failed_ids": failures,
               "empirical_C3": max(ratios) if ratios else None,
               "min_systole_times_2_sqrt_k": min(scaled) if scaled else None}
    man = _manifest(args, "verify", {"surface": args.surface, "curve": args.curve,
                                     "corpus": args.corpus}, [args.out],
                    generate=args.generate if not (args.corpus or args.curve) else None)
    _write_json({"manifest": man.to_json(), "reports": reports, "errors": errors,
                 "summary": summary}, args.out, hio.VERIFY_REPORT_SCHEMA)
    if failures:
        raise AssertionFailure(f"{len(failures)} curve(s) failed: {', '.join(failures[:5])}")
    return EXIT_OK


def _run_suite(args) -> int:
    rng = np.random.default_rng(args.seed)
    rows = []
    if args.suite == "polygon":
        for i in range(args.samples):
            n = int(rng.integers(1, 21))
            b = np.sort(rng.integers(-50, 51, n))
            if b.sum() <= 0:
                b[-1] += 1 - int(b.sum())
                b = np.sort(b)
            b = [int(x) for x in b]
            area = polygon_area(b)
            neg = sum(-x for x in b if x <= 0)
            slack = area - n * neg
            rows.append([args.suite, i, "intermediate", area, slack, slack >= 0])
    elif args.suite == "lagrange":
        for i in range(args.samples):
            n = int(rng.integers(1, 12))
            K = float(rng.uniform(0.5, 200))
            opt = lagrange_optimum(K, n)
            x = random_feasible(rng, n, K)
            value = sum(math.log(v) for v in x)
            ok = sums_to_products_check(x, K) and value <= opt.value + args.tol
            rows.append([args.suite, i, "log_product", value, opt.bound - value, ok])
    else:
        if not args.surface:
            raise hio.InputError("the sapir suite needs --surface", "", "args")
        g, _ = _load_surface(args.surface)
        for x in generate_corpus(g, args.seed, args.generate, 1, args.k_max):
            d = decompose(g, x.cycle)
            for cid, r in sorted(check_sapir_inequalities(d, x.k).items()):
                for name in ("arcs", "beta_sum", "tau_weighted", "beta_spread", "n_tau"):
                    rows.append([args.suite, f"{x.id}/{cid}", name, getattr(r, name), None,
                                 True if name != "beta_sum" or r.beta_sum_positive is not False
                                 else False])
    man = _manifest(args, f"verify --suite {args.suite}", {"surface": args.surface},
                    [args.out], samples=args.samples)
    _write_table(["suite", "case", "check", "value", "slack", "ok"], rows, args.out, man,
                 dat=False)
    if args.suite != "sapir" and not all(r[-1] for r in rows):
        raise AssertionFailure(f"{args.suite}: a check failed")
    return EXIT_OK


def cmd_intersect(args) -> int:
    g, metric_data = _load_surface(args.surface)
    c = _load_curve(args.curve, g)
    method = _auto_method(g, args.method)
    counts = _intersections(g, c, method, _thick(g, metric_data, args.seed, args.metrics))
    agree = len(set(counts.values())) == 1
    man = _manifest(args, "intersect", {"surface": args.surface, "curve": args.curve},
                    [args.out], metrics=args.metrics)
    _write_json({"manifest": man.to_json(), "k": next(iter(counts.values())) if agree else None,
                 "methods": counts, "agree": agree}, args.out, hio.INTERSECT_REPORT_SCHEMA)
    if not agree:
        raise OracleConflict(f"intersection counts disagree: {counts}")
    return EXIT_OK


def cmd_deg(args) -> int:
    g, _ = _load_surface(args.surface)
    c = _load_curve(args.curve, g)
    man = _manifest(args, "deg", {"surface": args.surface, "curve": args.curve}, [args.out],
                    ceiling=args.ceiling)
    try:
        res = minimal_degree(g, c, args.ceiling)
    except CeilingExceeded:
        _write_json({"manifest": man.to_json(), "deg": None, "ceiling": args.ceiling,
                     "exceeded": True}, args.out, hio.DEG_REPORT_SCHEMA)
        raise
    _write_json({"manifest": man.to_json(), **res.to_json()}, args.out, hio.DEG_REPORT_SCHEMA)
    return EXIT_OK


def _cusp_rows(g, source, curves, Ls, tol):
    rows, skipped = [], []
    for cid, c in curves:
        got = cusp_sweep(g, c, source, Ls)
        if not got:
            skipped.append(cid)
        if not non_increasing([r.excess for r in got], tol):
            raise AssertionFailure(f"{cid}: excess increases with L")
        rows += [(cid, r) for r in got]
    return rows, skipped


def _cusp_source(g, metric_data):
    if metric_data is not None:
        return metric_data
    return cusp_source(g, FenchelNielsenMetric.uniform(g.pd))


def cmd_open_cusps(args) -> int:
    g, metric_data = _load_surface(args.surface)
    c = _load_curve(args.curve, g)
    source = _cusp_source(g, metric_data)
    if not any(v == 0 for v in source["lengths"].values()):
        raise hio.InputError("surface has no cusps", "", str(args.surface))
    rows, skipped = _cusp_rows(g, source, [("curve", c)], args.L_sweep, args.tol)
    if skipped:
        print("warning: no L in the sweep is at least the cusped length", file=sys.stderr)
    man = _manifest(args, "open-cusps", {"surface": args.surface, "curve": args.curve},
                    [args.out], L=list(args.L_sweep))
    _write_table(["L", "l_cusped", "l_opened", "excess", "reference_ratio"],
                 [r.row() for _, r in rows], args.out, man, dat=False)
    return EXIT_OK


def cmd_sweep(args) -> int:
    g, metric_data = _load_surface(args.surface)
    if args.kind == "f_sigma":
        corpus = generate_corpus(g, args.seed, args.generate, 0, args.k_max)
        pdj = _pd_json(g)
        degs = _pmap(_degree_task, [(pdj, x.id, x.cycle.steps(), x.k, args.ceiling)
                                    for x in corpus], args.threads)
        rows, slope = sweep_f_sigma(g, corpus, args.k_max, args.ceiling,
                                    {x.id: d for x, d in zip(corpus, degs)})
        for r in rows:
            if r.size == 0:
                print(f"warning: no corpus curve with k = {r.k}", file=sys.stderr)
        man = _manifest(args, "sweep f_sigma", {"surface": args.surface},
                        [args.out, _dat_path(args.out)], ceiling=args.ceiling,
                        k_max=args.k_max, generate=args.generate)
        _write_table(["k", "bin_size", "max_deg", "witness", "lower_witnessed", "exceeded"],
                     [[r.k, r.size, r.max_deg, r.witness, r.lower_witnessed, r.exceeded]
                      for r in rows], args.out, man)
        return EXIT_OK
    source = _cusp_source(g, metric_data)
    if args.curve:
        curves = [("curve", _load_curve(args.curve, g))]
    else:
        corpus = generate_corpus(g, args.seed, args.generate, 0, args.k_max)
        curves = [(x.id, x.cycle) for x in hyperbolic_in_cusped(g, corpus, source)]
    rows, skipped = _cusp_rows(g, source, curves, args.L_sweep, args.tol)
    for cid in skipped:
        print(f"warning: {cid} is longer than every L in the sweep", file=sys.stderr)
    man = _manifest(args, "sweep cusp", {"surface": args.surface, "curve": args.curve},
                    [args.out, _dat_path(args.out)], L=list(args.L_sweep))
    _write_table(["id", "L", "l_cusped", "l_opened", "excess", "reference_ratio"],
                 [[cid, *r.row()] for cid, r in rows], args.out, man)
    return EXIT_OK


# -- parser ----------------------------------------------------------------------------------

def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    def flags(suppress: bool):
        # global flags are accepted before or after the subcommand
        ap = argparse.ArgumentParser(add_help=False)
        kw = {"default": argparse.SUPPRESS} if suppress else {}
        ap.add_argument("--seed", type=int, **(kw or {"default": 0}))
        ap.add_argument("--threads", type=int, help="worker processes", **(kw or {"default": 1}))
        ap.add_argument("--tol", type=float, **(kw or {"default": 1e-6}))
        return ap

    common = flags(True)
    p = argparse.ArgumentParser(prog="hypcurves", parents=[flags(False)],
                                description="Short metrics, intersections and covers for curves.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        sp.add_argument("--out")
        return sp

    sp = add("analyze", cmd_analyze, "decomposition, intersection number and ratios")
    sp.add_argument("--surface", required=True)
    sp.add_argument("--curve", required=True)
    sp.add_argument("--method", choices=["auto", "comb", "geo", "both"], default="auto")
    sp.add_argument("--metrics", type=int, default=3)

    sp = add("build-metric", cmd_build_metric, "short metric and verification report")
    sp.add_argument("--surface", required=True)
    sp.add_argument("--curve", required=True)
    sp.add_argument("--k", type=int)

    sp = add("verify", cmd_verify, "verification over a corpus, or an inequality suite")
    sp.add_argument("--suite", choices=["sapir", "polygon", "lagrange"])
    sp.add_argument("--surface")
    sp.add_argument("--curve")
    sp.add_argument("--corpus")
    sp.add_argument("--generate", type=int, default=50, help="corpus size when generating")
    sp.add_argument("--k-max", type=int, default=200)
    sp.add_argument("--samples", type=int, default=1000)

    sp = add("intersect", cmd_intersect, "self-intersection number")
    sp.add_argument("--surface", required=True)
    sp.add_argument("--curve", required=True)
    sp.add_argument("--method", choices=["auto", "comb", "geo", "both"], default="both")
    sp.add_argument("--metrics", type=int, default=3)

    sp = add("deg", cmd_deg, "minimal degree of a cover with a simple lift")
    sp.add_argument("--surface", required=True)
    sp.add_argument("--curve", required=True)
    sp.add_argument("--ceiling", type=int, default=8)

    sp = add("sweep", cmd_sweep, "f_sigma or cusp tables")
    sp.add_argument("kind", choices=["f_sigma", "cusp"])
    sp.add_argument("--surface", required=True)
    sp.add_argument("--curve")
    sp.add_argument("--generate", type=int, default=30)
    sp.add_argument("--k-max", type=int, default=4)
    sp.add_argument("--ceiling", type=int, default=6)
    sp.add_argument("--L-sweep", type=_floats, default=[4.0, 6.0, 8.0, 10.0])

    sp = add("open-cusps", cmd_open_cusps, "cusped vs opened lengths over L")
    sp.add_argument("--surface", required=True)
    sp.add_argument("--curve", required=True)
    sp.add_argument("--L-sweep", type=_floats, default=[4.0, 6.0, 8.0, 10.0])
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (hio.InputError, UnsupportedMethod) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OracleConflict as exc:
        print(f"oracle conflict: {exc}", file=sys.stderr)
        return EXIT_CONFLICT
    except (AssertionFailure, PipelineError) as exc:
        print(f"assertion failure: {exc}", file=sys.stderr)
        return EXIT_ASSERT
    except CeilingExceeded as exc:
        print(f"search ceiling: {exc}", file=sys.stderr)
        return EXIT_CEILING
    except (Inconclusive, GeometryError) as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_CEILING
    except StructureError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
