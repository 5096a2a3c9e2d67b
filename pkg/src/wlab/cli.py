"""Command-line front end.

Every subcommand prints records to stdout as CSV (header row, floats with 15
significant digits) or JSON (``{"schema_version": "1", "command": ...,
"records": [...]}``).  Exit status: 0 success, 2 invalid input, 1 internal
error; failures print one ``error: <reason>`` line on stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
import warnings
from typing import Any, Callable, Iterable

import numpy as np

from . import boxcount, energy, geometry, measure, reference, spectral
from .errors import ParameterError

SCHEMA_VERSION = "1"

log = logging.getLogger("wlab")

Record = dict[str, Any]


def _fmt(v: Any) -> Any:
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v) or math.isinf(v):
            return str(v)
        return float(f"{v:.15g}")
    return v


def _csv_cell(v: Any) -> str:
    if isinstance(v, float):
        return f"{v:.15g}"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def render(command: str, records: list[Record], fmt: str) -> str:
    records = [{k: _fmt(v) for k, v in r.items()} for r in records]
    if fmt == "json":
        doc = {"schema_version": SCHEMA_VERSION, "command": command, "records": records}
        return json.dumps(doc, indent=1) + "\n"
    buf = io.StringIO()
    if records:
        w = csv.writer(buf, lineterminator="\n")
        keys = list(records[0])
        w.writerow(keys)
        for r in records:
            w.writerow([_csv_cell(r[k]) for k in keys])
    return buf.getvalue()


def _params(args, strict: bool | None = None) -> geometry.WeierstrassParams:
    s = not args.non_strict if strict is None else strict
    return geometry.make_params(args.lam, args.nb, strict=s)


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ParameterError(f"expected comma-separated numbers, got {text!r}") from None


def _levels(text: str) -> list[int]:
    """``"2..7"`` or ``"1,3,4"``."""
    try:
        if ".." in text:
            a, b = text.split("..")
            return list(range(int(a), int(b) + 1))
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ParameterError(f"bad level list {text!r}") from None


# --- subcommands --------------------------------------------------------------


def cmd_params(args) -> list[Record]:
    p = _params(args)
    return [
        {
            "lambda": p.lam,
            "nb": p.nb,
            "d_w": p.d_w,
            "eta": p.eta,
            "strict": p.strict,
            "height_lower_constant": geometry.height_lower_constant(p),
            "cover_constant": geometry.cover_constant(p),
        }
    ]


def cmd_vertices(args) -> list[Record]:
    p = _params(args)
    chain = geometry.vertex_chain(p, args.level)
    bnd = set(chain.boundary_indices)
    return [
        {"index": k, "x": x, "y": y, "boundary": k in bnd}
        for k, (x, y) in enumerate(chain.vertices)
    ]


def cmd_polygons(args) -> list[Record]:
    p = _params(args)
    recs = []
    for poly in geometry.polygons(p, args.level):
        word = "".join(map(str, poly.word)) or "-"
        area = measure.polygon_area(poly)
        for j, (x, y) in enumerate(poly.vertices):
            recs.append({"polygon": poly.index, "word": word, "vertex": j, "x": x, "y": y, "area": area})
    return recs


def cmd_heights(args) -> list[Record]:
    p = _params(args)
    eh = geometry.edge_heights(p, args.level, refine=args.refine)
    return [
        {
            "edge": int(s),
            "height": h,
            "extent": e,
            "lower_bound": eh.lower_bound,
            "upper_bound": eh.upper_bound,
            "upper_holds": bool(h <= eh.upper_bound),
        }
        for s, h, e in zip(eh.start, eh.height, eh.extent)
    ]


def cmd_boxdim(args) -> list[Record]:
    p = _params(args)
    levels = _levels(args.levels) if args.levels else list(range(2, args.level + 1))
    recs = []
    for m in levels:
        log.info("box counting level %d", m)
        bc = boxcount.box_count(p, m, n_sub=args.nsub, refine=args.refine)
        recs.append(
            {"level": m, "side": bc.side, "count": bc.count, "bound": bc.bound, "columns": bc.n_columns}
        )
    if len(levels) >= 2:
        fit = np.polyfit(np.log([1.0 / r["side"] for r in recs]), np.log([r["count"] for r in recs]), 1)
        for r in recs:
            r["slope"] = float(fit[0])
            r["d_w"] = p.d_w
    return recs


def cmd_measure(args) -> list[Record]:
    p = _params(args)
    w = measure.measure_weights(p)
    mu = measure.cell_measures(p, args.level)
    raw = measure.cell_measures(p, args.level, mode="raw")
    return [
        {
            "cell": j,
            "word": "".join(map(str, geometry.word_of_index(j, args.level, p.nb))) or "-",
            "normalized": mu[j],
            "raw": raw[j],
            "weights_normalized": ";".join(f"{v:.15g}" for v in w.normalized),
            "weights_raw": ";".join(f"{v:.15g}" for v in w.raw),
        }
        for j in range(len(mu))
    ]


def cmd_energy(args) -> list[Record]:
    p = _params(args)
    b = _floats(args.boundary) if args.boundary else list(np.linspace(0.0, 1.0, p.nb))
    recs = []
    prev = None
    for m in range(args.level + 1):
        u = energy.dirichlet_solve(p, m, b)
        e = energy.energy(p, m, u, args.mode)
        recs.append(
            {
                "level": m,
                "mode": args.mode,
                "weight": energy.energy_weight(p, m, args.mode),
                "energy": e,
                "ratio": e / prev if prev else math.nan,
            }
        )
        prev = e
    return recs


def cmd_harmonic(args) -> list[Record]:
    p = _params(args)
    b = _floats(args.boundary) if args.boundary else list(np.linspace(0.0, 1.0, p.nb))
    u = energy.dirichlet_solve(p, args.level, b)
    chain = geometry.vertex_chain(p, args.level)
    lap = energy.laplacian(p, args.level, u)
    return [
        {"index": k, "x": chain.x[k], "u": u[k], "laplacian": lap[k]} for k in range(len(u))
    ]


def cmd_resistance(args) -> list[Record]:
    p = _params(args)
    n = energy.n_vertices(p, args.level)
    pairs = [(args.i, args.j)] if args.j is not None else [(args.i, k) for k in range(n)]
    return [
        {
            "level": args.level,
            "mode": args.mode,
            "i": i,
            "j": j,
            "resistance": energy.resistance(p, args.level, i, j, args.mode),
        }
        for i, j in pairs
    ]


def cmd_dimension(args) -> list[Record]:
    p = _params(args, strict=False)
    rd = energy.resistance_dimension(p)
    return [
        {
            "lambda": p.lam,
            "nb": p.nb,
            "d_w": p.d_w,
            "case": rd.case,
            "resistance_dimension": rd.d,
            "weyl_exponent": energy.spectral_exponent(rd.d),
        }
    ]


def cmd_spectrum(args) -> list[Record]:
    p = _params(args)
    if args.method == "direct":
        s = spectral.direct_spectrum(p, args.level)
    elif args.method == "oracle":
        s = spectral.oracle_spectrum(p, args.level)
    else:
        tree = spectral.decimation_tree(p, args.level)
        values = tree.values(args.level)
        return [
            {"value": float(v), "multiplicity": "", "provenance": "decimation"} for v in values
        ]
    return [{"value": v, "multiplicity": k, "provenance": s.provenance} for v, k in s.entries]


def cmd_decimate(args) -> list[Record]:
    p = _params(args)
    tree = spectral.decimation_tree(p, args.level)
    recs = []
    for n in tree.nodes:
        recs.append(
            {
                "level": n.level,
                "value": n.value,
                "kind": "newborn" if n.is_newborn else "continued",
                "parent": n.parent.value if n.parent else math.nan,
                "epsilon": n.epsilon,
                "root_index": n.root_index,
            }
        )
    for r in tree.reports:
        recs.append(
            {
                "level": r.level,
                "value": math.nan,
                "kind": "report",
                "parent": math.nan,
                "epsilon": 0,
                "root_index": -1,
                "reconciled": r.reconciled,
                "n_continued": len(r.continued),
                "n_newborn": len(r.newborn),
                "n_spurious": len(r.spurious),
                "stated_claims": ";".join(
                    f"{label}:claimed={c}:computed={k}" for label, _, c, k in r.stated_claims
                ),
            }
        )
    keys: list[str] = []
    for r in recs:
        keys += [k for k in r if k not in keys]
    return [{k: r.get(k, "") for k in keys} for r in recs]


def cmd_counting(args) -> list[Record]:
    p = _params(args)
    spectrum = spectral.direct_spectrum(p, args.level)
    if args.x == "max":
        x = spectral.scaled_top(p, args.level, args.scale)
    else:
        (x,) = _floats(args.x)
    n = spectral.counting_function(p, args.level, x, args.scale, spectrum=spectrum)
    return [{"level": args.level, "x": x, "scale": args.scale, "count": n}]


def cmd_weyl(args) -> list[Record]:
    p = _params(args)
    levels = _levels(args.levels) if args.levels else list(range(1, args.level + 1))
    tab = spectral.weyl_analysis(p, levels, scale=args.scale)
    gaps = dict(tab.periodicity)
    return [
        {
            "level": m,
            "count": n,
            "log_count_over_m": r,
            "log_step": s,
            "ln_nb": math.log(p.nb),
            "periodicity_gap": gaps.get(m, math.nan),
        }
        for m, n, r, s in tab.rows
    ]


def cmd_reference(args) -> list[Record]:
    g = reference.gasket_constants()
    recs: list[Record] = [
        {"quantity": "r_sg", "p": "", "value": g.r_sg},
        {"quantity": "beta_sg", "p": "", "value": g.beta_sg},
        {"quantity": "d_sg", "p": "", "value": g.d_sg},
    ]
    for row in reference.interval_energy_table(args.x0, args.x1, range(1, args.level + 1)):
        recs.append({"quantity": "interval_energy", "p": row.p, "value": row.energy})
    return recs


COMMANDS: dict[str, Callable[[argparse.Namespace], list[Record]]] = {
    "params": cmd_params,
    "vertices": cmd_vertices,
    "polygons": cmd_polygons,
    "heights": cmd_heights,
    "boxdim": cmd_boxdim,
    "measure": cmd_measure,
    "energy": cmd_energy,
    "harmonic": cmd_harmonic,
    "resistance": cmd_resistance,
    "dimension": cmd_dimension,
    "spectrum": cmd_spectrum,
    "decimate": cmd_decimate,
    "counting": cmd_counting,
    "weyl": cmd_weyl,
    "reference": cmd_reference,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(2, f"error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lambda", dest="lam", type=float, default=0.5)
    common.add_argument("--nb", type=int, default=3)
    common.add_argument("--level", type=int, default=2)
    common.add_argument("--mode", choices=["paper", "conservative"], default="paper")
    common.add_argument("--scale", choices=["none", "paper"], default="paper")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--refine", type=int, default=4)
    common.add_argument("--non-strict", action="store_true", help="allow lambda*nb <= 1")
    common.add_argument("-v", "--verbose", action="store_true", help="progress on stderr")

    parser = _Parser(prog="wlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "spectrum":
            sp.add_argument("--method", choices=["direct", "oracle", "decimation"], default="direct")
        elif name == "counting":
            sp.add_argument("--x", default="max", help="threshold, or 'max' for 4*eta*nb^m")
        elif name in ("energy", "harmonic"):
            sp.add_argument("--boundary", help="comma-separated values on V_0")
        elif name == "resistance":
            sp.add_argument("--i", type=int, default=0)
            sp.add_argument("--j", type=int, default=None)
        elif name == "boxdim":
            sp.add_argument("--levels", help="e.g. 2..7")
            sp.add_argument("--nsub", type=int, default=1)
        elif name == "weyl":
            sp.add_argument("--levels", help="e.g. 1..7")
        elif name == "reference":
            sp.add_argument("--x0", type=float, default=0.25)
            sp.add_argument("--x1", type=float, default=0.75)
    return parser


def run(argv: Iterable[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(None if argv is None else list(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    handler = logging.StreamHandler(stderr)
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.INFO if args.verbose else logging.WARNING)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", geometry.NonStrictWarning)
            records = COMMANDS[args.command](args)
    except ParameterError as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - any other failure is internal
        print(f"error: internal: {type(exc).__name__}: {exc}", file=stderr)
        return 1
    finally:
        log.removeHandler(handler)
    stdout.write(render(args.command, records, args.format))
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
