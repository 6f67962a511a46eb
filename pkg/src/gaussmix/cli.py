"""``gaussmix`` command-line interface.

Subcommands::

    gaussmix exact FIXTURE [FIXTURE ...] --mode polarization|interpolation|steiner
    gaussmix estimate intrinsic FIXTURE --k K
    gaussmix estimate mixed FIXTURE [FIXTURE ...] | --spirals
    gaussmix estimate spiral --k K
    gaussmix estimate bm-stats
    gaussmix reproduce [--quick]
    gaussmix profile FIXTURE --grid M

Fixtures are polytope JSON files ``{"dim": d, "vertices": [[...], ...]}``
or the names of the packaged fixtures (``gaussmix fixtures`` lists them).
Exit codes: 0 success, 1 acceptance failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path

from . import experiments
from .convex import Polytope
from .exceptions import ConfigError, GeometryError, NumericalError
from .mixed import (MixedVolumeResult, mixed_volume_bracket, mixed_volume_interpolation,
                    mixed_volume_polarization, steiner_fit)
from .montecarlo import default_seed
from .spectrum import spectral_constant
from .support import support_profile
from .suite import SuiteConfig, run_suite

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def fixture_names() -> list[str]:
    root = resources.files("gaussmix") / "fixtures"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def resolve_fixture(name: str) -> Polytope:
    path = Path(name)
    if not path.exists():
        stem = name[:-5] if name.endswith(".json") else name
        if stem in fixture_names():
            with resources.as_file(resources.files("gaussmix") / "fixtures" / f"{stem}.json") as p:
                return Polytope.load(p)
    return Polytope.load(path)


def _positive(kind=int):
    def parse(text):
        try:
            value = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
        if not value > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value
    return parse


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=None,
                   help="root seed (default: $GAUSSMIX_SEED or 42)")
    p.add_argument("--workers", type=_positive(), default=None,
                   help="worker processes (default: available CPUs)")
    p.add_argument("--json", action="store_true", help="emit JSON")
    p.add_argument("--out", metavar="PATH", default=None, help="write output to PATH")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    # shared flags live on the subcommands: argparse lets subparser defaults
    # overwrite values parsed at the top level
    parser = argparse.ArgumentParser(prog="gaussmix", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    ex = sub.add_parser("exact", parents=[common], help="exact mixed or intrinsic volumes")
    ex.add_argument("fixtures", nargs="+")
    ex.add_argument("--mode", choices=["polarization", "interpolation", "steiner"],
                    default="polarization")
    ex.add_argument("--d", type=_positive(), default=None,
                    help="ambient dimension for interpolation (bodies are zero-padded)")
    ex.add_argument("--ball-n", type=_positive(), default=256, help="ball surrogate resolution")

    est = sub.add_parser("estimate", help="Monte-Carlo estimators")
    kinds = est.add_subparsers(dest="kind", required=True)
    mc = argparse.ArgumentParser(add_help=False)
    mc.add_argument("--target", type=float, default=None, help="value to compare against")
    mc.add_argument("--allowance", type=float, default=None,
                    help="bias allowance on top of the 1.96-sigma band")

    ki = kinds.add_parser("intrinsic", parents=[common, mc])
    ki.add_argument("fixture")
    ki.add_argument("--k", type=_positive(), required=True)
    ki.add_argument("--n-samples", type=_positive(), default=100_000)

    km = kinds.add_parser("mixed", parents=[common, mc])
    km.add_argument("fixtures", nargs="*")
    km.add_argument("--spirals", action="store_true",
                    help="two independent Wiener spirals (target 2)")
    km.add_argument("--n-samples", type=_positive(), default=100_000)
    km.add_argument("--n-steps", type=_positive(), default=10_000)
    km.add_argument("--n-paths", type=_positive(), default=100_000)

    ks = kinds.add_parser("spiral", parents=[common, mc])
    ks.add_argument("--k", type=_positive(), default=2)
    ks.add_argument("--n-steps", type=_positive(), default=10_000)
    ks.add_argument("--n-paths", type=_positive(), default=100_000)

    kb = kinds.add_parser("bm-stats", parents=[common])
    kb.add_argument("--n-steps", type=_positive(), default=10_000)
    kb.add_argument("--n-paths", type=_positive(), default=100_000)

    rp = sub.add_parser("reproduce", parents=[common], help="run the acceptance suite")
    rp.add_argument("--quick", action="store_true",
                    help="reduced sizes and widened allowances (seconds)")
    rp.add_argument("--only", default=None, metavar="LIST",
                    help="comma-separated criterion numbers")
    for flag in ("--n-samples", "--n-steps", "--n-paths"):
        rp.add_argument(flag, type=_positive(), default=None)

    pr = sub.add_parser("profile", parents=[common], help="support-function CSV")
    pr.add_argument("fixture")
    pr.add_argument("--grid", type=_positive(), default=4096, metavar="M")

    sub.add_parser("fixtures", parents=[common], help="list packaged fixtures")
    return parser


def _emit(text: str, out):
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def cmd_exact(args) -> tuple[dict, int]:
    bodies = [resolve_fixture(f) for f in args.fixtures]
    if args.mode == "steiner":
        if len(bodies) != 1:
            raise UsageError("steiner mode takes exactly one fixture")
        fit = steiner_fit(bodies[0], n_ball=args.ball_n)
        return fit.to_dict(), EXIT_OK
    if args.mode == "polarization":
        if args.d is not None and args.d != len(bodies):
            raise UsageError("polarization takes d bodies; use --mode interpolation for ball slots")
        value = mixed_volume_polarization(bodies)
        return MixedVolumeResult(value, "polarization").to_dict(), EXIT_OK
    d = args.d or max(b.dim_ambient for b in bodies)
    value, residual = mixed_volume_interpolation(bodies, d, n_ball=args.ball_n, full_output=True)
    bracket = mixed_volume_bracket(bodies, d, args.ball_n) if d > len(bodies) else None
    return MixedVolumeResult(value, "interpolation", bracket, residual).to_dict(), EXIT_OK


def _finish(report, args) -> tuple[dict, int]:
    out = report.to_dict()
    return out, EXIT_FAIL if out["pass"] is False else EXIT_OK


def _override(report, args):
    if getattr(args, "target", None) is not None:
        report.target = args.target
    if getattr(args, "allowance", None) is not None:
        report.allowance = args.allowance
    return report


def cmd_estimate(args) -> tuple[dict | list, int]:
    seed, workers = args.seed, args.workers
    if args.kind == "intrinsic":
        body = resolve_fixture(args.fixture)
        rep = experiments.intrinsic(body, args.k, args.n_samples, seed, workers,
                                    target=args.target, allowance=args.allowance or 0.0)
        rep.params.update(estimator="intrinsic", constant=spectral_constant(args.k))
        return _finish(rep, args)
    if args.kind == "mixed":
        if args.spirals == bool(args.fixtures):
            raise UsageError("give either fixtures or --spirals")
        if args.spirals:
            rep = experiments.spiral_mixed(args.n_steps, args.n_paths, seed, workers)
        else:
            bodies = [resolve_fixture(f) for f in args.fixtures]
            rep = experiments.mixed(bodies, args.n_samples, seed, workers, target=args.target,
                                    allowance=args.allowance or 0.0)
            rep.params.update(estimator="mixed", constant=spectral_constant(len(bodies)))
        return _finish(_override(rep, args), args)
    if args.kind == "spiral":
        rep = experiments.spiral_intrinsic(args.k, args.n_steps, args.n_paths, seed, workers)
        return _finish(_override(rep, args), args)
    reports = experiments.bm_stats(args.n_steps, args.n_paths, seed, workers)
    out = [r.to_dict() for r in reports]
    return out, EXIT_FAIL if any(r["pass"] is False for r in out) else EXIT_OK


def _parse_only(text):
    if text is None:
        return None
    try:
        only = {int(t) for t in text.split(",") if t.strip()}
    except ValueError:
        raise UsageError(f"--only expects comma-separated integers, got {text!r}")
    if not only or not only <= set(range(1, 9)):
        raise UsageError("--only criteria must be between 1 and 8")
    return only


def cmd_reproduce(args):
    seed = default_seed() if args.seed is None else args.seed
    cfg = (SuiteConfig.quick_mode if args.quick else SuiteConfig)(seed=seed, workers=args.workers)
    overrides = {k: v for k, v in (("n_samples", args.n_samples), ("n_steps", args.n_steps),
                                   ("n_paths", args.n_paths)) if v is not None}
    if overrides:
        from dataclasses import replace
        cfg = replace(cfg, **overrides)
    results = run_suite(cfg, _parse_only(args.only))
    ok = all(r.passed for r in results)
    payload = {"seed": seed, "workers": cfg.workers, "quick": cfg.quick, "pass": ok,
               "criteria": [r.to_dict() for r in results]}
    return payload, results, EXIT_OK if ok else EXIT_FAIL


def _format_table(results) -> str:
    lines = []
    for r in results:
        lines.append(r.summary())
        for c in r.checks:
            mark = "ok  " if c["pass"] else "FAIL"
            if "target" in c:
                lines.append(f"    {mark} {c['label']}: {c['value']:.6g} vs {c['target']:.6g} "
                             f"(tol {c['tolerance']:.3g})")
            else:
                lines.append(f"    {mark} {c['label']}")
    n_pass = sum(r.passed for r in results)
    lines.append(f"{n_pass}/{len(results)} criteria passed")
    return "\n".join(lines)


def _format_plain(obj) -> str:
    if isinstance(obj, list):
        return "\n".join(_format_plain(o) for o in obj)
    parts = []
    for k, v in obj.items():
        if isinstance(v, float):
            v = f"{v:.6g}"
        elif isinstance(v, list) and v and isinstance(v[0], float):
            v = "[" + ", ".join(f"{x:.6g}" for x in v) + "]"
        parts.append(f"{k}={v}")
    return " ".join(parts)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    if args.workers is None:
        args.workers = os.cpu_count() or 1
    if args.seed is None:
        try:
            args.seed = default_seed()
        except ValueError as exc:
            print(f"gaussmix: error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    try:
        if args.command == "fixtures":
            names = fixture_names()
            _emit(_dump(names) if args.json else "\n".join(names), args.out)
            return EXIT_OK
        if args.command == "profile":
            text = support_profile(resolve_fixture(args.fixture), args.grid).to_csv()
            _emit(text, args.out)
            return EXIT_OK
        if args.command == "reproduce":
            payload, results, code = cmd_reproduce(args)
            _emit(_dump(payload) if args.json else _format_table(results), args.out)
            return code
        out, code = cmd_exact(args) if args.command == "exact" else cmd_estimate(args)
        _emit(_dump(out) if args.json else _format_plain(out), args.out)
        return code
    except (UsageError, ConfigError, GeometryError, NumericalError) as exc:
        print(f"gaussmix: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
