"""Command-line surface.

    curlflux table    --map FILE --n 10,20,50 [--engine auto|brute|dp|sample]
    curlflux check    [--map FILE] [--pairs 50] [--autos 20] [--quick]
    curlflux growth   --map FILE --m 1 --n-max 20
    curlflux classify --map FILE

Exit codes: 0 ok, 1 property violation, 2 engine failure, 3 parse error.
TSV tables render 6 significant digits; JSON output always carries the
exact integer counts so no precision is lost downstream.  The environment
variable CURLFLUX_MEMORY_CAP_MB bounds the DP working set.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass
from typing import Optional

from curlflux import exact_count, metrics, morphisms, sampler, transducer, words
from curlflux.errors import (
    BlowupCapError,
    CurlFluxError,
    EngineMemoryError,
    EnumerationCapError,
    InverseVerificationError,
    MapParseError,
    TransducerClosureError,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_ENGINE = 2
EXIT_PARSE = 3

TABLE_HEADER = ("n", "CURL_RATIO", "CURL_ROOT", "FLUX_RATIO", "FLUX_ROOT")


def sig6(x: float) -> str:
    return "%.6g" % x


def _log(msg: str):
    print(msg, file=sys.stderr)


@dataclass(frozen=True)
class RunConfig:
    """One table run: map, radii, engine choice, sampling knobs, caps."""

    map_path: str
    radii: tuple
    engine: str = "auto"
    samples: int = 100_000
    seed: int = 0
    fmt: str = "tsv"
    out: Optional[str] = None
    brute_ball_limit: int = metrics.BRUTE_BALL_LIMIT
    memory_budget: Optional[int] = None

    @classmethod
    def from_args(cls, args):
        radii = tuple(_parse_radii(args.n))
        if not radii:
            raise ValueError("no radii given")
        return cls(
            map_path=args.map,
            radii=radii,
            engine=args.engine,
            samples=args.samples,
            seed=args.seed,
            fmt=args.format,
            out=args.out,
            memory_budget=_memory_budget(),
        )

    def resolve_engine(self, ctx) -> str:
        """auto -> brute while the ball fits, else dp; selection is logged.

        Sampling is never selected silently: the dp engine falls back to it
        only on a closure failure, with a message.
        """
        if self.engine != "auto":
            return self.engine
        selected = ("brute"
                    if words.ball_size(ctx, max(self.radii)) <= self.brute_ball_limit
                    else "dp")
        _log(f"engine auto: selected {selected}")
        return selected


def _parse_radii(text: str):
    text = text.strip()
    if ".." in text:
        first, last = text.split("..", 1)
        a, b = int(first), int(last)
        if a > b:
            raise ValueError(f"bad range {text!r}")
        return list(range(a, b + 1))
    return [int(part) for part in text.split(",") if part.strip()]


def _memory_budget():
    cap_mb = os.environ.get("CURLFLUX_MEMORY_CAP_MB")
    return int(cap_mb) * 2**20 if cap_mb else None


def _load_map(path: str):
    with open(path) as fh:
        text = fh.read()
    return morphisms.parse_map_file(text)


def _write_output(text: str, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- table -----------------------------------------------------------------

def _exact_rows(phi, config, engine):
    """(row tuples, json rows) from one exact-engine sweep at max radius."""
    n_max = max(config.radii)
    if engine == "brute":
        table = exact_count.joint_length_histogram(phi, n_max)
    else:
        t = transducer.build(phi)
        table = transducer.count_joint(t, n_max, keep_rows=True,
                                       memory_budget=config.memory_budget)
    rows, json_rows = [], []
    for n in config.radii:
        p = table.point(n)
        cr = metrics.exact_ratio(p.curl_count, p.ball)
        fr = metrics.exact_ratio(p.flux_count, p.ball)
        if n >= 1:
            croot = metrics.big_root(p.curl_count, p.ball, n)
            froot = metrics.big_root(p.flux_count, p.ball, n)
        else:
            croot = froot = 1.0
        rows.append((n, cr, croot, fr, froot))
        json_rows.append({
            "n": n, "curl_count": p.curl_count, "flux_count": p.flux_count,
            "ball": p.ball, "curl_ratio": cr, "curl_root": croot,
            "flux_ratio": fr, "flux_root": froot,
        })
    return rows, json_rows


def _sample_rows(phi, config):
    rows, json_rows = [], []
    for n in config.radii:
        est = sampler.estimate_curl_ratio(phi, n, config.samples, config.seed)
        croot = est.point ** (1.0 / n) if n >= 1 and est.point > 0 else (
            1.0 if n == 0 else 0.0)
        froot = est.flux_point ** (1.0 / n) if n >= 1 and est.flux_point > 0 else (
            0.0 if n >= 1 else 1.0)
        rows.append((n, est.point, croot, est.flux_point, froot))
        json_rows.append(est.to_json())
    return rows, json_rows


def cmd_table(args) -> int:
    try:
        phi, _ = _load_map(args.map)
        config = RunConfig.from_args(args)
    except (MapParseError, OSError, ValueError) as exc:
        _log(f"parse error: {exc}")
        return EXIT_PARSE

    engine = config.resolve_engine(phi.ctx)
    try:
        if engine in ("brute", "dp"):
            try:
                rows, json_rows = _exact_rows(phi, config, engine)
            except TransducerClosureError as exc:
                if config.engine != "auto":
                    raise
                _log(f"engine dp failed ({exc}); falling back to sampling")
                engine = "sample"
                rows, json_rows = _sample_rows(phi, config)
        else:
            rows, json_rows = _sample_rows(phi, config)
    except EngineMemoryError as exc:
        _log(f"engine failure: {exc}")
        return EXIT_ENGINE
    except (EnumerationCapError, TransducerClosureError) as exc:
        _log(f"engine failure: {exc}")
        return EXIT_ENGINE

    if config.fmt == "tsv":
        lines = ["\t".join(TABLE_HEADER)]
        for n, cr, croot, fr, froot in rows:
            lines.append("\t".join(
                [str(n), sig6(cr), sig6(croot), sig6(fr), sig6(froot)]
            ))
        _write_output("\n".join(lines) + "\n", config.out)
    else:
        doc = {"map": phi.describe(), "engine": engine, "rows": json_rows}
        _write_output(json.dumps(doc, indent=2) + "\n", config.out)
    return EXIT_OK


# -- check -----------------------------------------------------------------

def _battery_reports(args):
    reports = []
    rng = random.Random(args.seed)
    ctx2 = words.GroupContext(2)
    autos = max(1, args.autos)
    pairs = max(1, args.pairs)
    n_brute = 5 if args.quick else 6

    # observation (ii) + bounds on the standard battery, both engines where possible
    battery = metrics.standard_battery()
    instances = 0
    violations = []
    for phi in battery:
        series = metrics.curl_flux_series(phi, n_brute, "brute")
        try:
            t = transducer.build(phi)
            dp_series = [transducer.curl_flux_dp(phi, n, transducer=t)
                         for n in range(n_brute + 1)]
        except TransducerClosureError:
            dp_series = None
        for i, p in enumerate(series):
            instances += 1
            if p.curl_count + p.flux_count != p.ball:
                violations.append(f"{phi.describe()}: ball identity fails at n={p.n}")
            if dp_series is not None and (
                    dp_series[i].curl_count != p.curl_count):
                violations.append(
                    f"{phi.describe()}: engines disagree at n={p.n}"
                )
    reports.append(metrics.PropertyReport(
        "engine-equivalence-and-ball-identity", instances, tuple(violations)))

    for _ in range(autos):
        auto = morphisms.random_automorphism(ctx2, rng.randrange(1, 5), rng)
        reports.append(metrics.check_inverse_symmetry(auto, n_brute, "brute"))

    for _ in range(pairs):
        a = morphisms.random_automorphism(ctx2, rng.randrange(1, 4), rng).forward
        b = morphisms.random_automorphism(ctx2, rng.randrange(1, 4), rng).forward
        reports.append(
            metrics.check_composition_inequalities(a, b, n_brute - 1, "brute"))

    endo_pairs = max(1, pairs // 2)
    for _ in range(endo_pairs):
        a = metrics.random_injective_endomorphism(ctx2, rng, moves=2)
        b = metrics.random_injective_endomorphism(ctx2, rng, moves=2)
        reports.append(metrics.check_composition_inequalities(
            a, b, n_brute - 1, "brute", automorphisms=False))

    reports.append(metrics.check_power_map_formula(2, 2, 16, root_radius=30))
    reports.append(metrics.check_power_map_formula(2, 3, 16, root_radius=30))
    shift = next(m for m in metrics.standard_battery() if m.label == "shift")
    reports.append(metrics.check_flux_gap(shift, 20, "dp"))
    reports.append(metrics.check_invariance_under_simple_composition(
        shift, n_exact=n_brute, n_rate=50))
    return reports


def cmd_check(args) -> int:
    reports = []
    exit_code = EXIT_OK
    if args.map:
        try:
            phi, psi = _load_map(args.map)
        except (MapParseError, OSError) as exc:
            _log(f"parse error: {exc}")
            return EXIT_PARSE
        if psi is None:
            reports.append(metrics.PropertyReport(
                "map-file-inverse", 0, (), ("no inverse section",)))
        else:
            try:
                morphisms.verify_inverse(phi, psi)
                reports.append(metrics.PropertyReport("map-file-inverse", 1, ()))
            except InverseVerificationError as exc:
                reports.append(metrics.PropertyReport(
                    "map-file-inverse", 1, (str(exc),)))
    if not args.map or args.battery:
        reports.extend(_battery_reports(args))

    if args.format == "json":
        doc = [r.to_json() for r in reports]
        _write_output(json.dumps(doc, indent=2) + "\n", args.out)
    else:
        lines = []
        for r in reports:
            status = "ok" if r.ok else "FAIL"
            lines.append(f"{status}\t{r.property_id}\tinstances={r.instances}")
            for v in r.violations:
                lines.append(f"\tviolation: {v}")
            for note in r.notes:
                lines.append(f"\tnote: {note}")
        _write_output("\n".join(lines) + "\n", args.out)
    if any(not r.ok for r in reports):
        exit_code = EXIT_VIOLATION
    return exit_code


# -- growth ----------------------------------------------------------------

def cmd_growth(args) -> int:
    try:
        phi, _ = _load_map(args.map)
    except (MapParseError, OSError) as exc:
        _log(f"parse error: {exc}")
        return EXIT_PARSE
    try:
        est = metrics.growth_rate_points(phi, args.m, args.n_max)
    except (BlowupCapError, EnumerationCapError) as exc:
        _log(f"engine failure: {exc}")
        return EXIT_ENGINE
    if args.format == "tsv":
        lines = ["\t".join(("m", "n", "GROWTH", "GROWTH_ROOT"))]
        for p in est.points:
            lines.append("\t".join(
                [str(args.m), str(p.n), str(int(p.value)), sig6(p.root)]))
        _write_output("\n".join(lines) + "\n", args.out)
    else:
        doc = {
            "map": phi.describe(), "m": args.m,
            "rows": [{"n": p.n, "growth": int(p.value), "root": p.root}
                     for p in est.points],
        }
        _write_output(json.dumps(doc, indent=2) + "\n", args.out)
    return EXIT_OK


# -- classify ----------------------------------------------------------------

def cmd_classify(args) -> int:
    try:
        phi, _ = _load_map(args.map)
    except (MapParseError, OSError) as exc:
        _log(f"parse error: {exc}")
        return EXIT_PARSE
    c = morphisms.classify(phi)
    doc = {"map": phi.describe(), "kind": c.kind, "simple": c.is_simple}
    if c.conjugator is not None:
        doc["conjugator"] = words.format_word(phi.ctx, c.conjugator)
    if c.exponent is not None:
        doc["exponent"] = c.exponent
    _write_output(json.dumps(doc, indent=2) + "\n", args.out)
    return EXIT_OK


# -- entry ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curlflux",
        description="Exact and sampled curl/flux tables for free-group "
                    "endomorphisms, growth tables, and property batteries.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_table = sub.add_parser("table", help="curl/flux table at given radii")
    p_table.add_argument("--map", required=True)
    p_table.add_argument("--n", required=True,
                         help="comma list (10,20,50) or range (1..8)")
    p_table.add_argument("--engine", default="auto",
                         choices=("auto", "brute", "dp", "sample"))
    p_table.add_argument("--samples", type=int, default=100_000)
    p_table.add_argument("--seed", type=int, default=0)
    p_table.add_argument("--format", default="tsv", choices=("tsv", "json"))
    p_table.add_argument("--out", default=None)
    p_table.set_defaults(func=cmd_table)

    p_check = sub.add_parser("check", help="run the property battery")
    p_check.add_argument("--map", default=None,
                         help="also verify this map file's inverse section")
    p_check.add_argument("--battery", action="store_true",
                         help="run the full battery even with --map")
    p_check.add_argument("--pairs", type=int, default=50)
    p_check.add_argument("--autos", type=int, default=20)
    p_check.add_argument("--quick", action="store_true")
    p_check.add_argument("--seed", type=int, default=20240801)
    p_check.add_argument("--format", default="text", choices=("text", "json"))
    p_check.add_argument("--out", default=None)
    p_check.set_defaults(func=cmd_check)

    p_growth = sub.add_parser("growth", help="growth table for a map")
    p_growth.add_argument("--map", required=True)
    p_growth.add_argument("--m", type=int, default=1)
    p_growth.add_argument("--n-max", type=int, default=20)
    p_growth.add_argument("--format", default="tsv", choices=("tsv", "json"))
    p_growth.add_argument("--out", default=None)
    p_growth.set_defaults(func=cmd_growth)

    p_classify = sub.add_parser("classify", help="structural shape of a map")
    p_classify.add_argument("--map", required=True)
    p_classify.add_argument("--out", default=None)
    p_classify.set_defaults(func=cmd_classify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CurlFluxError as exc:
        _log(f"error: {exc}")
        return EXIT_ENGINE


if __name__ == "__main__":
    sys.exit(main())
