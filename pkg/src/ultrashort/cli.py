"""Command-line driver.

Every command is a thin wrapper over one library operation, emits CSV/JSON
artifacts, and is deterministic given its flags (all seeds are flags).
Usage errors exit 2 (argparse); domain errors exit 1 with the error name on
stderr.  A JSON config file can pre-set any flag; explicit flags win.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys

import numpy as np

from . import limitlaw, relations, stats, sums
from .arith import IntPoly, LaurentPoly, find_split_primes, hensel_roots
from .errors import UltrashortError


class UsageError(Exception):
    """Flag combinations argparse cannot catch; maps to exit code 2."""

CACHE_ENV = "ULTRASHORT_CACHE_DIR"
DEFAULT_CACHE_DIR = ".ultrashort-cache"

COMMANDS = (
    "primes",
    "roots",
    "relations",
    "index",
    "sums",
    "klsums",
    "mults",
    "limit",
    "moments",
    "weylcheck",
    "condition",
    "prime-sweep",
    "figure",
)


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _poly(args) -> IntPoly:
    return IntPoly.parse(args.poly)


def _laurent(text: str) -> LaurentPoly:
    return LaurentPoly.parse(text)


def _alpha_list(text: str) -> list[list[int]]:
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if chunk:
            out.append([int(t) for t in chunk.split(",")])
    return out


# ---------------------------------------------------------------------------
# relation-module disk cache


def _cache_dir(args) -> str:
    return args.cache_dir or os.environ.get(CACHE_ENV, DEFAULT_CACHE_DIR)


def _cache_key(g: IntPoly, kind: str, v, exponents, coeff_cap, degree_bound) -> str:
    blob = json.dumps(
        {
            "poly": g.key(),
            "kind": kind,
            "v": v.key() if v is not None else None,
            "exponents": list(exponents) if exponents else None,
            "coeff_cap": coeff_cap,
            "degree_bound": degree_bound,
        },
        sort_keys=True,
    )
    return hashlib.sha256(blob.encode()).hexdigest()


def cache_get(directory: str, key: str):
    path = os.path.join(directory, key + ".json")
    if not os.path.exists(path):
        return None
    try:
        with open(path) as fh:
            return relations.RelationModule.from_json_dict(json.load(fh))
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"warning: ignoring corrupt cache entry {path}: {exc}", file=sys.stderr)
        return None


def cache_put(directory: str, key: str, module) -> None:
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, key + ".json")
    with open(path, "w") as fh:
        json.dump(module.to_json_dict(), fh, indent=2)
        fh.write("\n")


# ---------------------------------------------------------------------------
# commands


def cmd_primes(args) -> int:
    g = _poly(args)
    qs = find_split_primes(g, args.lo, args.hi)
    _emit({"poly": str(g), "lo": args.lo, "hi": args.hi, "primes": qs}, args.out)
    return 0


def cmd_roots(args) -> int:
    g = _poly(args)
    rl = hensel_roots(g, args.prime, args.power)
    _emit(
        {
            "poly": str(g),
            "q": args.prime,
            "n": args.power,
            "modulus": rl.modulus.modulus,
            "roots": list(rl.roots),
        },
        args.out,
    )
    return 0


def _compute_relations(args):
    g = _poly(args)
    kind = args.kind
    v = _laurent(args.v) if args.v else None
    exponents = tuple(int(t) for t in args.exponents.split(",")) if args.exponents else None
    kwargs = {"coeff_cap": args.coeff_cap}
    if args.degree_bound:
        kwargs["degree_bound"] = args.degree_bound
    if kind == "additive":
        return g, relations.additive_relations(g, **kwargs)
    if kind == "value":
        if v is None:
            raise UsageError("--v is required for kind=value")
        return g, relations.value_relations(g, v, **kwargs)
    if kind == "joint":
        if exponents is None:
            raise UsageError("--exponents is required for kind=joint")
        return g, relations.joint_power_relations(g, exponents, **kwargs)
    return g, relations.multiplicative_relations(g, v or LaurentPoly.x(), **kwargs)


def cmd_relations(args) -> int:
    g = _poly(args)
    v = _laurent(args.v) if args.v else None
    exponents = tuple(int(t) for t in args.exponents.split(",")) if args.exponents else None
    key = _cache_key(g, args.kind, v, exponents, args.coeff_cap, args.degree_bound)
    directory = _cache_dir(args)
    module = None
    if not args.no_cache:
        module = cache_get(directory, key)
    if module is None:
        _, module = _compute_relations(args)
        if not args.no_cache:
            cache_put(directory, key, module)
    _emit(module.to_json_dict(), args.out)
    return 0


def cmd_index(args) -> int:
    g = _poly(args)
    kwargs = {"coeff_cap": args.coeff_cap}
    if args.degree_bound:
        kwargs["degree_bound"] = args.degree_bound
    _emit({"poly": str(g), "ind": relations.index_ind(g, **kwargs)}, args.out)
    return 0


def _write_grid(grid, out: str | None) -> None:
    if out:
        grid.write_csv(out)
        meta_path = os.path.splitext(out)[0] + ".json"
        with open(meta_path, "w") as fh:
            json.dump(grid.to_json_dict(), fh, indent=2)
            fh.write("\n")
    else:
        for a, vv in zip(grid.params, grid.values):
            print(f"{int(a)},{float(vv.real)!r},{float(vv.imag)!r}")


def cmd_sums(args) -> int:
    g = _poly(args)
    v = _laurent(args.v) if args.v else None
    grid = sums.additive_sum_grid(g, args.prime, args.power, v, threads=args.threads)
    _write_grid(grid, args.out)
    return 0


def cmd_klsums(args) -> int:
    g = _poly(args)
    grid = sums.trace_sum_grid(g, args.prime, r=args.rank, mode=args.mode)
    _write_grid(grid, args.out)
    return 0


def cmd_mults(args) -> int:
    g = _poly(args)
    v = _laurent(args.v) if args.v else None
    grid = sums.mult_char_sum_grid(g, args.prime, v)
    _write_grid(grid, args.out)
    return 0


def cmd_limit(args) -> int:
    law = args.law
    if law == "sigma":
        if not args.poly:
            raise UsageError("--poly is required for --law sigma")
        g = _poly(args)
        module = relations.additive_relations(g, coeff_cap=args.coeff_cap)
        h = limitlaw.torus_subgroup(module)
        batch = limitlaw.sigma_samples(h, args.count, args.seed)
    elif law == "st":
        batch = limitlaw.sato_tate_samples(args.count, args.seed)
    elif law.startswith("st-sum:"):
        batch = limitlaw.sato_tate_sum_samples(int(law.split(":")[1]), args.count, args.seed)
    elif law.startswith(("su:", "usp:")):
        name, r = law.split(":")
        batch = limitlaw.haar_trace_samples((name, int(r)), args.count, args.seed)
    elif law.startswith("inv:"):
        if not args.poly:
            raise UsageError("--poly is required for --law inv:R")
        g = _poly(args)
        pairs, unpaired = relations.negation_pairing(g)
        batch = limitlaw.involution_sum_samples(
            g.degree, pairs, int(law.split(":")[1]), args.count, args.seed
        )
    else:
        raise UsageError(f"unknown law {law!r} (sigma | st | st-sum:K | su:R | usp:R)")
    if args.out:
        batch.write_csv(args.out)
    else:
        for z in batch.samples:
            z = complex(z)
            print(f"{z.real!r},{z.imag!r}")
    return 0


def cmd_moments(args) -> int:
    g = _poly(args)
    grid = sums.additive_sum_grid(g, args.prime, args.power, threads=args.threads)
    module = relations.additive_relations(g, coeff_cap=args.coeff_cap)
    empirical = stats.moment_table(grid, args.max_order)
    exact = {
        (m, n): limitlaw.exact_mixed_moment(module, m, n)
        for (m, n) in empirical
    }
    payload = {
        "poly": str(g),
        "q": args.prime,
        "n": args.power,
        "empirical": limitlaw.MomentTable(empirical).to_json_dict(),
        "exact": limitlaw.MomentTable(exact).to_json_dict(),
    }
    _emit(payload, args.out)
    return 0


def cmd_weylcheck(args) -> int:
    g = _poly(args)
    if args.primes:
        qs = [int(t) for t in args.primes.split(",")]
    else:
        if not args.prime_range:
            raise UsageError("need --primes or --prime-range")
        lo, hi, count = (int(t) for t in args.prime_range.split(":"))
        qs = find_split_primes(g, lo, hi)[:count]
    alphas = _alpha_list(args.alpha)
    module = relations.additive_relations(g, coeff_cap=args.coeff_cap)
    report = stats.stationarity_report(g, qs, alphas, module)
    _emit(report, args.out)
    return 0


def cmd_condition(args) -> int:
    g = _poly(args)
    A = sums.make_condition_set(args.prime, args.power, args.descriptor)
    alphas = _alpha_list(args.alpha)
    module = relations.additive_relations(g, coeff_cap=args.coeff_cap)
    report = stats.conditioning_experiment(g, args.prime, args.power, A, alphas, module)
    _emit(report, args.out)
    return 0


def cmd_prime_sweep(args) -> int:
    """Empirical law of sigma(U_p(a)) for fixed a over split p <= T.

    Exploratory only: whether these values equidistribute as the prime
    varies is an open question, so nothing is asserted about the output.
    """
    g = _poly(args)
    qs = find_split_primes(g, 2, args.limit)
    rows = []
    for q in qs:
        roots = hensel_roots(g, q, 1).roots
        z = sum(np.exp(2j * np.pi * ((args.a * r) % q) / q) for r in roots)
        rows.append((q, z))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("p,re,im\n")
            for q, z in rows:
                fh.write(f"{q},{float(z.real)!r},{float(z.imag)!r}\n")
    else:
        for q, z in rows:
            print(f"{q},{float(z.real)!r},{float(z.imag)!r}")
    return 0


# ---------------------------------------------------------------------------
# figures


def _read_csv(path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    cols = {name: i for i, name in enumerate(header)}
    re_i, im_i = cols["re"], cols["im"]
    values = np.array(
        [complex(float(r[re_i]), float(r[im_i])) for r in rows], dtype=np.complex128
    )
    return values


def _figure_range(path, values, explicit) -> float:
    if explicit:
        return float(explicit)
    meta_path = os.path.splitext(path)[0] + ".json"
    if os.path.exists(meta_path):
        try:
            with open(meta_path) as fh:
                meta = json.load(fh)
            if "d" in meta:
                return float(meta["d"])
        except (json.JSONDecodeError, ValueError):
            pass
    top = max(1.0, float(np.abs(values.real).max()), float(np.abs(values.imag).max()))
    return math.ceil(top)


SVG_SIZE = 800


def _svg_header(count: int) -> str:
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f"<!-- samples: {count} -->\n"
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{SVG_SIZE}" height="{SVG_SIZE}" '
        f'viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">\n'
        f'<rect width="{SVG_SIZE}" height="{SVG_SIZE}" fill="white"/>\n'
    )


def render_scatter_svg(values: np.ndarray, bound: float) -> str:
    """800x800 scatter over [-bound-0.5, bound+0.5]^2, radius-1 dots."""
    span = 2 * (bound + 0.5)
    scale = SVG_SIZE / span

    def px(x):
        return (x + bound + 0.5) * scale

    parts = [_svg_header(len(values))]
    mid = px(0.0)
    parts.append(
        f'<line x1="0" y1="{mid:.1f}" x2="{SVG_SIZE}" y2="{mid:.1f}" '
        'stroke="#cccccc" stroke-width="1"/>\n'
        f'<line x1="{mid:.1f}" y1="0" x2="{mid:.1f}" y2="{SVG_SIZE}" '
        'stroke="#cccccc" stroke-width="1"/>\n'
    )
    for z in values:
        parts.append(
            f'<circle cx="{px(z.real):.2f}" cy="{px(-z.imag):.2f}" r="1" '
            'fill="black" fill-opacity="0.3"/>\n'
        )
    parts.append("</svg>\n")
    return "".join(parts)


def render_histogram_svg(values: np.ndarray, bound: float, bins: int) -> str:
    """800x800 histogram of real samples over [-bound-0.5, bound+0.5]."""
    lo, hi = -bound - 0.5, bound + 0.5
    counts, edges = np.histogram(values.real, bins=bins, range=(lo, hi))
    peak = max(1, counts.max())
    scale_x = SVG_SIZE / (hi - lo)
    parts = [_svg_header(len(values))]
    for c, e0, e1 in zip(counts, edges[:-1], edges[1:]):
        h = (SVG_SIZE - 40) * (c / peak)
        x = (e0 - lo) * scale_x
        w = (e1 - e0) * scale_x
        parts.append(
            f'<rect x="{x:.2f}" y="{SVG_SIZE - h:.2f}" width="{w:.2f}" '
            f'height="{h:.2f}" fill="steelblue" stroke="white" stroke-width="0.5"/>\n'
        )
    parts.append("</svg>\n")
    return "".join(parts)


def cmd_figure(args) -> int:
    values = _read_csv(args.input)
    bound = _figure_range(args.input, values, args.range)
    is_complex = bool(np.abs(values.imag).max() > 1e-12)
    if is_complex:
        svg = render_scatter_svg(values, bound)
    else:
        svg = render_histogram_svg(values, bound, args.bins)
    out = args.out or (os.path.splitext(args.input)[0] + ".svg")
    with open(out, "w") as fh:
        fh.write(svg)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ultrashort",
        description="Ultra-short sums of trace functions over polynomial roots",
    )
    parser.add_argument("--config", help="JSON file of flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, poly=True):
        if poly:
            p.add_argument("--poly", help='"X^3+X+3" or "3,1,0,1"')
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--coeff-cap", type=int, default=relations.DEFAULT_COEFF_CAP)
        p.add_argument("--degree-bound", type=int, default=0,
                       help="user-asserted [K_g:Q] bound (default: d!)")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--seed", type=int, default=1)
        p.add_argument("--cache-dir", default=None)
        p.add_argument("--no-cache", action="store_true")

    p = sub.add_parser("primes", help="totally split primes in a range")
    common(p)
    p.add_argument("--lo", type=int)
    p.add_argument("--hi", type=int)
    p.set_defaults(_required=["poly", "lo", "hi"])

    p = sub.add_parser("roots", help="roots of g mod q^n")
    common(p)
    p.add_argument("--prime", type=int)
    p.add_argument("--power", type=int, default=1)
    p.set_defaults(_required=["poly", "prime"])

    p = sub.add_parser("relations", help="certified relation module")
    common(p)
    p.add_argument("--kind", default="additive",
                   choices=["additive", "value", "joint", "multiplicative"])
    p.add_argument("--v", help="Laurent polynomial, e.g. X+X^-1")
    p.add_argument("--exponents", help="comma list for kind=joint, e.g. 1,-1")
    p.set_defaults(_required=["poly"])

    p = sub.add_parser("index", help="ind(g)")
    common(p)
    p.set_defaults(_required=["poly"])

    p = sub.add_parser("sums", help="full additive-character grid")
    common(p)
    p.add_argument("--prime", type=int)
    p.add_argument("--power", type=int, default=1)
    p.add_argument("--v", help="Laurent polynomial (default X)")
    p.set_defaults(_required=["poly", "prime"])

    p = sub.add_parser("klsums", help="Kloosterman trace-sum grid")
    common(p)
    p.add_argument("--prime", type=int)
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--mode", default="dilate", choices=["dilate", "translate"])
    p.set_defaults(_required=["poly", "prime"])

    p = sub.add_parser("mults", help="multiplicative-character grid")
    common(p)
    p.add_argument("--prime", type=int)
    p.add_argument("--v", help="Laurent polynomial (default X)")
    p.set_defaults(_required=["poly", "prime"])

    p = sub.add_parser("limit", help="sample a limit law")
    common(p, poly=False)
    p.add_argument("--poly", help="needed for --law sigma")
    p.add_argument("--law", default="sigma",
                   help="sigma | st | st-sum:K | su:R | usp:R | inv:R")
    p.add_argument("--count", type=int, default=100000)
    p.set_defaults(_required=[])

    p = sub.add_parser("moments", help="empirical vs exact mixed moments")
    common(p)
    p.add_argument("--prime", type=int)
    p.add_argument("--power", type=int, default=1)
    p.add_argument("--max-order", type=int, default=4)
    p.set_defaults(_required=["poly", "prime"])

    p = sub.add_parser("weylcheck", help="exact Weyl stationarity report")
    common(p)
    p.add_argument("--alpha", help='vectors "1,1,1;1,0,0"')
    p.add_argument("--primes", help="comma list of primes")
    p.add_argument("--prime-range", help='"lo:hi:count" split primes')
    p.set_defaults(_required=["poly", "alpha"])

    p = sub.add_parser("condition", help="conditioning experiment")
    common(p)
    p.add_argument("--prime", type=int)
    p.add_argument("--power", type=int, default=1)
    p.add_argument("--descriptor",
                   help="full | interval:A | image:F | subgroup:M")
    p.add_argument("--alpha", help='vectors "1,1,1;1,0,0"')
    p.set_defaults(_required=["poly", "prime", "descriptor", "alpha"])

    p = sub.add_parser("prime-sweep", help="sigma(U_p(a)) over split p <= T")
    common(p)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--limit", type=int)
    p.set_defaults(_required=["poly", "limit"])

    p = sub.add_parser("figure", help="render a CSV as an SVG figure")
    p.add_argument("input")
    p.add_argument("--out")
    p.add_argument("--bins", type=int, default=60)
    p.add_argument("--range", type=float, default=0.0)

    return parser


_DISPATCH = {
    "primes": cmd_primes,
    "roots": cmd_roots,
    "relations": cmd_relations,
    "index": cmd_index,
    "sums": cmd_sums,
    "klsums": cmd_klsums,
    "mults": cmd_mults,
    "limit": cmd_limit,
    "moments": cmd_moments,
    "weylcheck": cmd_weylcheck,
    "condition": cmd_condition,
    "prime-sweep": cmd_prime_sweep,
    "figure": cmd_figure,
}


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Load --config defaults; explicit flags still take precedence."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    path = argv[i + 1]
    with open(path) as fh:
        config = json.load(fh)
    defaults = {k.replace("-", "_"): v for k, v in config.items()}
    for action in parser._subparsers._group_actions:
        for sub_parser in action.choices.values():
            known = {a.dest for a in sub_parser._actions}
            sub_parser.set_defaults(**{k: v for k, v in defaults.items() if k in known})
    return argv[:i] + argv[i + 2 :]


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    argv = _apply_config(parser, argv)
    args = parser.parse_args(argv)
    try:
        for name in getattr(args, "_required", []):
            if getattr(args, name, None) in (None, ""):
                raise UsageError(f"--{name.replace('_', '-')} is required")
        return _DISPATCH[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except UltrashortError as exc:
        print(f"{exc.name}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
