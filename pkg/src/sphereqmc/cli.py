"""Command-line front end: generate point sets, measure them, emit tables.

Subcommands
-----------
gen      emit a point listing (square or sphere target) as CSV/JSON
measure  compute discrepancy / worst-case-error measures for one point set
table1   per-m worst-case-error table with optional reference comparison
compare  net vs Monte Carlo convergence data with reference curves

All delimited output starts with '#'-prefixed metadata comments followed by
a header row; floats are rendered with 17 significant digits so they
round-trip exactly.  Identical configurations and seeds produce
byte-identical output.  Exit codes: 0 success, 2 invalid configuration,
3 width overflow.

``table1 --plot FILE`` and ``compare --plot FILE`` additionally render the
table as a matplotlib figure next to the delimited output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .discrepancy import DiscrepancyBracket
from .netgen import (
    UnitSquarePointSet,
    digital_net,
    digital_sequence_prefix,
    identity_pascal_spec,
    scramble,
    scramble_state,
)
from .quadrature import (
    net_quality_report,
    random_sphere_points,
    worst_case_error_sq,
    compute_measure,
)
from .sphere import SpherePointSet, lift

#: Printed reference values of the squared worst-case error for base 2,
#: identity/Pascal nets, m = 1..20, and the N^(3/2)-scaled column.
REFERENCE_E2 = {
    1: 6.2622e-01, 2: 2.1149e-01, 3: 8.1448e-02, 4: 3.5091e-02,
    5: 8.0526e-03, 6: 2.6309e-03, 7: 9.4336e-04, 8: 3.4501e-04,
    9: 1.3374e-04, 10: 4.6029e-05, 11: 1.8846e-05, 12: 6.4670e-06,
    13: 1.7873e-06, 14: 5.6815e-07, 15: 1.9912e-07, 16: 6.3194e-08,
    17: 2.4122e-08, 18: 9.1906e-09, 19: 3.7001e-09, 20: 1.3068e-09,
}
REFERENCE_SCALED = {
    1: 1.7712, 2: 1.6920, 3: 1.8430, 4: 2.2459, 5: 1.4577,
    6: 1.3470, 7: 1.3661, 8: 1.4132, 9: 1.5495, 10: 1.5083,
    11: 1.7468, 12: 1.6953, 13: 1.3252, 14: 1.1915, 15: 1.1811,
    16: 1.0602, 17: 1.1447, 18: 1.2335, 19: 1.4047, 20: 1.4032,
}

#: table1 stays below this m unless --allow-slow is given (O(N^2) pair cost).
TABLE1_DEFAULT_GUARD = 13

_MEASURE_ALIASES = {
    "wce": "wce",
    "star": "star",
    "extreme": "extreme",
    "spherestar": "sphere_star",
    "sphereextreme": "sphere_extreme",
    "capl2": "cap_l2",
    "cuifreeden": "cui_freeden",
}


class ConfigError(ValueError):
    """Invalid run configuration; mapped to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    """Validated knobs shared by the generating subcommands."""

    command: str
    base: int = 2
    m: int | None = None
    count: int | None = None
    depth: int | None = None
    matrices: str = "identity_pascal"
    target: str = "square"
    scramble_seed: int | None = None
    scramble_shift: bool = True
    measures: tuple[str, ...] = ()
    exact_limit: int = 512
    output: str | None = None
    fmt: str = "csv"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _emit(lines: list[str], output: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_json(obj, output: str | None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _normalize_measures(raw: str) -> tuple[str, ...]:
    names = []
    for token in raw.split(","):
        token = token.strip().lower().replace("-", "").replace("_", "")
        if not token:
            continue
        if token not in _MEASURE_ALIASES:
            raise ConfigError(f"unknown measure {token!r}")
        name = _MEASURE_ALIASES[token]
        if name not in names:
            names.append(name)
    if not names:
        raise ConfigError("at least one measure is required")
    return tuple(names)


def _build_square(cfg: RunConfig) -> tuple[UnitSquarePointSet, list[str]]:
    """Generate the configured square point set plus its metadata comments."""
    if cfg.matrices != "identity_pascal":
        raise ConfigError(f"unsupported matrices {cfg.matrices!r}")
    if (cfg.m is None) == (cfg.count is None):
        raise ConfigError("exactly one of --m and --count is required")
    if cfg.m is not None:
        if cfg.m < 1:
            raise ConfigError("--m must be >= 1")
        points = digital_net(identity_pascal_spec(cfg.base, cfg.m))
        meta = [f"# generator: digital-net base={cfg.base} m={cfg.m} matrices=identity_pascal"]
    else:
        if cfg.count < 1:
            raise ConfigError("--count must be >= 1")
        depth = cfg.depth
        if depth is None:
            depth = 1
            while cfg.base**depth < cfg.count:
                depth += 1
        points = digital_sequence_prefix(cfg.base, cfg.count, depth)
        meta = [
            "# generator: digital-sequence-prefix "
            f"base={cfg.base} count={cfg.count} depth={depth} matrices=identity_pascal"
        ]
    if cfg.scramble_seed is not None:
        state = scramble_state(
            points.b, points.m, cfg.scramble_seed, digital_shift=cfg.scramble_shift
        )
        points = scramble(points, state)
        shift = "digital" if cfg.scramble_shift else "none"
        meta.append(
            f"# scramble: seed={state.seed} rng={state.algorithm} shift={shift}"
        )
    else:
        meta.append("# scramble: none")
    return points, meta


def _cmd_gen(cfg: RunConfig) -> int:
    points, meta = _build_square(cfg)
    if cfg.target == "square":
        header = ["n", "x1", "x2", "u1", "u2", "denominator"]
        coords = points.coords
        u = points.numerators
        denom = points.denominator
        rows = [
            [str(i), _fmt(coords[i, 0]), _fmt(coords[i, 1]),
             str(int(u[i, 0])), str(int(u[i, 1])), str(denom)]
            for i in range(len(points))
        ]
    elif cfg.target == "sphere":
        header = ["n", "x", "y", "z"]
        pts = lift(points).points
        rows = [
            [str(i), _fmt(pts[i, 0]), _fmt(pts[i, 1]), _fmt(pts[i, 2])]
            for i in range(len(points))
        ]
    else:
        raise ConfigError(f"unknown target {cfg.target!r}")
    meta = meta + [f"# target: {cfg.target}"]
    if cfg.fmt == "csv":
        lines = meta + [",".join(header)] + [",".join(r) for r in rows]
        _emit(lines, cfg.output)
    else:
        obj = {
            "command": "gen",
            "metadata": [m[2:] for m in meta],
            "columns": header,
            "points": [dict(zip(header, _typed_row(header, r))) for r in rows],
        }
        _emit_json(obj, cfg.output)
    return 0


def _typed_row(header: list[str], row: list[str]) -> list:
    typed = []
    for name, cell in zip(header, row):
        if name in ("n", "u1", "u2", "denominator", "m", "N"):
            typed.append(int(cell))
        else:
            typed.append(float(cell))
    return typed


def _read_points(path: str):
    """Re-ingest a gen listing; returns (square set or None, sphere set)."""
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        obj = json.loads(text)
        header = obj["columns"]
        rows = [[str(p[c]) for c in header] for p in obj["points"]]
        meta = obj.get("metadata", [])
    else:
        lines = [l for l in text.splitlines() if l.strip()]
        meta = [l[2:] for l in lines if l.startswith("#")]
        data = [l for l in lines if not l.startswith("#")]
        header = data[0].split(",")
        rows = [l.split(",") for l in data[1:]]
    if header[:3] == ["n", "x1", "x2"]:
        base = 2
        for m in meta:
            for token in m.split():
                if token.startswith("base="):
                    base = int(token[5:])
        denom = int(rows[0][5])
        depth = round(math.log(denom, base))
        if base**depth != denom:
            raise ConfigError(f"denominator {denom} is not a power of base {base}")
        u = np.array([[int(r[3]), int(r[4])] for r in rows], dtype=np.uint64)
        square = UnitSquarePointSet(base, depth, u)
        return square, lift(square)
    if header[:4] == ["n", "x", "y", "z"]:
        pts = np.array([[float(r[1]), float(r[2]), float(r[3])] for r in rows])
        return None, SpherePointSet(pts)
    raise ConfigError(f"unrecognized point listing header: {header}")


def _cmd_measure(cfg: RunConfig, input_path: str | None) -> int:
    if input_path is not None:
        square, sphere = _read_points(input_path)
        meta = [f"# source: {input_path}"]
    else:
        square, meta = _build_square(cfg)
        sphere = lift(square)
    header = ["measure", "value", "exact", "lower", "upper"]
    rows = []
    for name in cfg.measures:
        if name in ("star", "extreme") and square is None:
            raise ConfigError(
                f"measure {name!r} needs exact square pre-images; "
                "re-ingest a square-target listing"
            )
        if name == "wce":
            rows.append(["wce", _fmt(worst_case_error_sq(sphere)), "true", "", ""])
            continue
        result = compute_measure(name, square, sphere, cfg.exact_limit)
        if isinstance(result, DiscrepancyBracket):
            rows.append([name, "", "false", _fmt(result.lower), _fmt(result.upper)])
        else:
            rows.append([name, _fmt(result.value), "true", "", ""])
    if cfg.fmt == "csv":
        lines = meta + [",".join(header)] + [",".join(r) for r in rows]
        _emit(lines, cfg.output)
    else:
        records = []
        for r in rows:
            rec = {"measure": r[0], "exact": r[2] == "true"}
            if r[1]:
                rec["value"] = float(r[1])
            else:
                rec["lower"], rec["upper"] = float(r[3]), float(r[4])
            records.append(rec)
        _emit_json({"command": "measure", "metadata": [m[2:] for m in meta],
                    "measures": records}, cfg.output)
    return 0


def _cmd_table1(cfg: RunConfig, max_m: int, reference: bool, allow_slow: bool,
                plot: str | None) -> int:
    if max_m < 1:
        raise ConfigError("--max-m must be >= 1")
    if max_m > TABLE1_DEFAULT_GUARD and not allow_slow:
        raise ConfigError(
            f"--max-m {max_m} exceeds the desk-scale guard "
            f"{TABLE1_DEFAULT_GUARD}; pass --allow-slow to force it"
        )
    if reference and (cfg.base != 2 or max_m > 20):
        raise ConfigError("--reference is defined for base 2 and max-m <= 20")
    header = ["m", "N", "e2", "n_pow_minus_3_2", "e2_scaled"]
    if reference:
        header += ["e2_ref", "e2_rel_dev", "scaled_ref", "scaled_rel_dev"]
    meta = [f"# table: wce base={cfg.base} matrices=identity_pascal max_m={max_m}"]
    rows = []
    ns, e2s = [], []
    for m in range(1, max_m + 1):
        rep = net_quality_report(identity_pascal_spec(cfg.base, m))
        ns.append(rep.n)
        e2s.append(rep.e2)
        row = [str(m), str(rep.n), _fmt(rep.e2), _fmt(rep.n ** -1.5),
               _fmt(rep.e2_scaled)]
        if reference:
            ref_e2, ref_sc = REFERENCE_E2[m], REFERENCE_SCALED[m]
            row += [_fmt(ref_e2), _fmt(abs(rep.e2 - ref_e2) / ref_e2),
                    _fmt(ref_sc), _fmt(abs(rep.e2_scaled - ref_sc) / ref_sc)]
        rows.append(row)
    if cfg.fmt == "csv":
        _emit(meta + [",".join(header)] + [",".join(r) for r in rows], cfg.output)
    else:
        recs = [dict(zip(header, _typed_row(header, r))) for r in rows]
        _emit_json({"command": "table1", "metadata": [m[2:] for m in meta],
                    "rows": recs}, cfg.output)
    if plot:
        _plot_table(ns, e2s, plot)
    return 0


def _cmd_compare(cfg: RunConfig, max_m: int, seed: int, mc_runs: int,
                 plot: str | None) -> int:
    if max_m < 1:
        raise ConfigError("--max-m must be >= 1")
    if mc_runs < 1:
        raise ConfigError("--mc-runs must be >= 1")
    header = ["m", "N", "e2_net", "e2_mc", "ref_n_pow_minus_3_2", "ref_9_4_n_pow_minus_3_2"]
    meta = [
        f"# compare: base={cfg.base} matrices=identity_pascal max_m={max_m} "
        f"seed={seed} mc_runs={mc_runs} rng=numpy-pcg64"
    ]
    child_seeds = np.random.SeedSequence(seed).generate_state(mc_runs * max_m)
    rows, ns, nets, mcs = [], [], [], []
    for m in range(1, max_m + 1):
        rep = net_quality_report(identity_pascal_spec(cfg.base, m))
        seeds = child_seeds[(m - 1) * mc_runs : m * mc_runs]
        mc = float(np.mean([
            worst_case_error_sq(random_sphere_points(rep.n, int(s))) for s in seeds
        ]))
        ns.append(rep.n)
        nets.append(rep.e2)
        mcs.append(mc)
        rows.append([str(m), str(rep.n), _fmt(rep.e2), _fmt(mc),
                     _fmt(rep.n ** -1.5), _fmt(2.25 * rep.n ** -1.5)])
    if cfg.fmt == "csv":
        _emit(meta + [",".join(header)] + [",".join(r) for r in rows], cfg.output)
    else:
        recs = [dict(zip(header, _typed_row(header, r))) for r in rows]
        _emit_json({"command": "compare", "metadata": [m[2:] for m in meta],
                    "rows": recs}, cfg.output)
    if plot:
        _plot_compare(ns, nets, mcs, plot)
    return 0


def _plot_axes():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    ax.set_xlabel("number of points N")
    ax.set_ylabel("squared worst-case error")
    ax.grid(True, which="both", alpha=0.3)
    return fig, ax


def _guides(ax, ns):
    n = np.asarray(ns, dtype=float)
    ax.loglog(n, n**-1.5, "k--", lw=0.9, label=r"$N^{-3/2}$")
    ax.loglog(n, 2.25 * n**-1.5, "k-.", lw=0.9, label=r"$(9/4)\,N^{-3/2}$")


def _plot_table(ns, e2s, path: str) -> None:
    fig, ax = _plot_axes()
    ax.loglog(ns, e2s, "o-", label="lifted net")
    _guides(ax, ns)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)


def _plot_compare(ns, nets, mcs, path: str) -> None:
    fig, ax = _plot_axes()
    ax.loglog(ns, nets, "o-", label="lifted net")
    ax.loglog(ns, mcs, "s-", label="Monte Carlo")
    _guides(ax, ns)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sphereqmc",
        description="Digital nets on the unit sphere: generation and quality measures.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_points=True):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", metavar="FILE", help="write to FILE instead of stdout")
        if with_points:
            p.add_argument("--base", type=int, default=2, help="prime base (default 2)")
            p.add_argument("--m", type=int, help="net exponent: N = base**m")
            p.add_argument("--count", type=int, help="sequence prefix length")
            p.add_argument("--depth", type=int, help="digit depth for --count")
            p.add_argument("--matrices", choices=("identity_pascal",),
                           default="identity_pascal")
            p.add_argument("--scramble-seed", type=int, metavar="SEED")
            p.add_argument("--no-scramble-shift", action="store_true",
                           help="linear scramble only, no digital shift")

    p_gen = sub.add_parser("gen", help="emit a point listing")
    common(p_gen)
    p_gen.add_argument("--target", choices=("square", "sphere"), default="square")

    p_meas = sub.add_parser("measure", help="measure one point set")
    common(p_meas)
    p_meas.add_argument("--input", metavar="FILE",
                        help="re-ingest a gen listing instead of generating")
    p_meas.add_argument("--measures", required=True,
                        help="comma list: wce,star,extreme,sphere_star,"
                             "sphere_extreme,cap_l2,cui_freeden")
    p_meas.add_argument("--exact-limit", type=int, default=512,
                        help="largest N for exact extreme enumeration")

    p_tab = sub.add_parser("table1", help="worst-case error per m")
    common(p_tab, with_points=False)
    p_tab.add_argument("--base", type=int, default=2)
    p_tab.add_argument("--max-m", type=int, default=TABLE1_DEFAULT_GUARD)
    p_tab.add_argument("--reference", action="store_true",
                       help="append printed reference values and deviations")
    p_tab.add_argument("--allow-slow", action="store_true",
                       help="permit max-m beyond the desk-scale guard")
    p_tab.add_argument("--plot", metavar="FILE", help="also render a figure to FILE")

    p_cmp = sub.add_parser("compare", help="net vs Monte Carlo convergence data")
    common(p_cmp, with_points=False)
    p_cmp.add_argument("--base", type=int, default=2)
    p_cmp.add_argument("--max-m", type=int, default=10)
    p_cmp.add_argument("--seed", type=int, default=0, help="Monte Carlo base seed")
    p_cmp.add_argument("--mc-runs", type=int, default=1,
                       help="Monte Carlo repetitions averaged per m")
    p_cmp.add_argument("--plot", metavar="FILE", help="also render a figure to FILE")
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "gen":
            cfg = RunConfig(
                command="gen", base=args.base, m=args.m, count=args.count,
                depth=args.depth, matrices=args.matrices, target=args.target,
                scramble_seed=args.scramble_seed,
                scramble_shift=not args.no_scramble_shift,
                output=args.output, fmt=args.format,
            )
            return _cmd_gen(cfg)
        if args.command == "measure":
            cfg = RunConfig(
                command="measure", base=args.base, m=args.m, count=args.count,
                depth=args.depth, matrices=args.matrices,
                scramble_seed=args.scramble_seed,
                scramble_shift=not args.no_scramble_shift,
                measures=_normalize_measures(args.measures),
                exact_limit=args.exact_limit, output=args.output, fmt=args.format,
            )
            return _cmd_measure(cfg, args.input)
        if args.command == "table1":
            cfg = RunConfig(command="table1", base=args.base,
                            output=args.output, fmt=args.format)
            return _cmd_table1(cfg, args.max_m, args.reference, args.allow_slow,
                               args.plot)
        if args.command == "compare":
            cfg = RunConfig(command="compare", base=args.base,
                            output=args.output, fmt=args.format)
            return _cmd_compare(cfg, args.max_m, args.seed, args.mc_runs, args.plot)
        raise ConfigError(f"unknown command {args.command!r}")
    except OverflowError as exc:
        print(f"sphereqmc: overflow: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, ValueError) as exc:
        print(f"sphereqmc: invalid configuration: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
