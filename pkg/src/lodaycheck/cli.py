"""Command line: ``lodaycheck verify | loday | plot``.

Exit codes: 0 all gated checks pass, 1 a gated check failed, 2 usage or
input error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import algebra as alg
from .functions import TRIG_TOLERANCE
from .omega import Surjection, decompose, enumerate_surjections
from .report import gated_ok, report_json, report_markdown
from .verify import CHECK_NAMES, run_checks

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class CampaignConfig:
    seed: int = 0
    max_index: int = 5
    max_level: int = 2
    samples: int = 500
    tolerance: float = TRIG_TOLERANCE
    out: str = "reports"
    checks: list = field(default_factory=lambda: list(CHECK_NAMES))

    def validate(self) -> None:
        if not isinstance(self.seed, int) or not -(2**63) <= self.seed < 2**64:
            raise UsageError(f"seed must be a 64-bit integer, got {self.seed!r}")
        if not 1 <= self.max_index <= 8:
            raise UsageError(f"max_index must be in 1..8, got {self.max_index}")
        if not 1 <= self.max_level <= 3:
            raise UsageError(f"max_level must be in 1..3, got {self.max_level}")
        if self.samples < 1:
            raise UsageError("samples must be positive")
        if not self.tolerance > 0:
            raise UsageError("tolerance must be positive")
        unknown = sorted(set(self.checks) - set(CHECK_NAMES))
        if unknown:
            raise UsageError(f"unknown checks {unknown}; choose from {', '.join(CHECK_NAMES)}")

    def report_fields(self) -> dict:
        out = asdict(self)
        del out["out"]
        return out


def load_config(args) -> CampaignConfig:
    data = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"{args.config}: {exc}") from None
        if not isinstance(data, dict):
            raise UsageError(f"{args.config}: expected a JSON object")
        unknown = set(data) - set(CampaignConfig.__dataclass_fields__)
        if unknown:
            raise UsageError(f"{args.config}: unknown keys {sorted(unknown)}")
    for key in ("seed", "max_index", "max_level", "samples", "tolerance", "out"):
        value = getattr(args, key)
        if value is not None:
            data[key] = value
    if args.checks is not None:
        data["checks"] = [c.strip() for c in args.checks.split(",") if c.strip()]
    try:
        config = CampaignConfig(**data)
    except TypeError as exc:
        raise UsageError(str(exc)) from None
    config.validate()
    return config


def run(config: CampaignConfig, timings: bool = False, quiet: bool = False) -> int:
    def progress(o):
        if not quiet:
            flag = "" if o.gated else " (informational)"
            print(f"{o.status:>12}  {o.name} {o.parameters}{flag}", flush=True)

    outcomes = run_checks(
        config.checks, config.max_index, config.max_level, config.samples, config.seed, config.tolerance,
        progress=progress,
    )
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    fields = config.report_fields()
    (out / "report.json").write_text(report_json(outcomes, fields, timings))
    (out / "report.md").write_text(report_markdown(outcomes, fields))
    ok = gated_ok(outcomes)
    if not quiet:
        print(f"report written to {out}/report.json; gated checks {'pass' if ok else 'FAILED'}")
    return EXIT_OK if ok else EXIT_FAILED


# -- loday tools ----------------------------------------------------------------


def _surjection(text: str) -> Surjection:
    try:
        return Surjection.parse(text)
    except ValueError as exc:
        raise UsageError(f"surjection {text!r}: {exc}") from None


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _algebra(path: str) -> alg.FiniteCommAlgebra:
    try:
        return alg.FiniteCommAlgebra.from_json(_load_json(path), where=path)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _format_row(row) -> str:
    return " ".join(alg.fraction_str(v) for v in row)


def loday_main(args) -> int:
    if args.tool == "enumerate":
        try:
            for s in enumerate_surjections(args.n, args.m):
                print(s)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    elif args.tool == "decompose":
        perm, merges = decompose(_surjection(args.surjection))
        print(f"permutation {perm}")
        print("merges " + (",".join(map(str, merges)) or "-"))
    elif args.tool == "sigma-star":
        A = _algebra(args.algebra)
        sigma = _surjection(args.surjection)
        try:
            op = alg.sigma_star(A, sigma)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if args.tensor:
            data = _load_json(args.tensor)
            try:
                t = alg.Tensor(A, int(data["level"]), alg.fraction_array(data["coeffs"], where=f"{args.tensor}.coeffs"))
                print(json.dumps(op(t).to_json()))
            except (KeyError, TypeError, ValueError) as exc:
                raise UsageError(f"{args.tensor}: {exc}") from None
        else:
            for row in op.matrix():
                print(_format_row(row))
    elif args.tool == "naturality":
        data = _load_json(args.eta)
        if not isinstance(data, dict):
            raise UsageError(f"{args.eta}: expected a JSON object")
        try:
            if args.algebra:
                A = _algebra(args.algebra)
            elif "source" in data:
                A = alg.FiniteCommAlgebra.from_json(data["source"], where=f"{args.eta}.source")
            else:
                raise UsageError("no source algebra: pass --algebra or put 'source' in the eta file")
            if args.target_algebra:
                B = _algebra(args.target_algebra)
            elif "target" in data:
                B = alg.FiniteCommAlgebra.from_json(data["target"], where=f"{args.eta}.target")
            else:
                B = A
            eta = alg.TransformationFamily.from_json(data, A.dim, B.dim, where=args.eta)
            result = alg.check_naturality(eta, A, B, _surjection(args.sigma))
        except (KeyError, ValueError) as exc:
            raise UsageError(str(exc).strip("'\"")) from None
        print(json.dumps(result.to_json(), sort_keys=True))
        return EXIT_OK if result.passed else EXIT_FAILED
    return EXIT_OK


# -- argument parsing -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lodaycheck", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the seeded verification campaign")
    v.add_argument("--config", help="JSON config file; flags override its values")
    v.add_argument("--seed", type=int)
    v.add_argument("--max-index", dest="max_index", type=int, help="largest projection index N (<= 8)")
    v.add_argument("--max-level", dest="max_level", type=int, help="largest tensor level R (<= 3)")
    v.add_argument("--samples", type=int, help="sampled sets per check")
    v.add_argument("--tolerance", type=float, help="tolerance for the trig function family")
    v.add_argument("--checks", help=f"comma-separated subset of: {', '.join(CHECK_NAMES)}")
    v.add_argument("--out", help="directory for report.json and report.md")
    v.add_argument("--timings", action="store_true", help="include elapsed times in the JSON report")
    v.add_argument("--quiet", action="store_true")

    lo = sub.add_parser("loday", help="Loday functor tools for finite-dimensional algebras")
    tools = lo.add_subparsers(dest="tool", required=True)
    e = tools.add_parser("enumerate", help="list surjections <n> -> <m>")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--m", type=int, required=True)
    d = tools.add_parser("decompose", help="factor a surjection into a permutation and adjacent merges")
    d.add_argument("--surjection", required=True)
    s = tools.add_parser("sigma-star", help="matrix of sigma* on tensor powers of an algebra")
    s.add_argument("--algebra", required=True)
    s.add_argument("--surjection", required=True, help='image list such as "2,1,1"')
    s.add_argument("--tensor", help="apply to this tensor file instead of printing the matrix")
    nat = tools.add_parser("naturality", help="check one naturality square of a transformation")
    nat.add_argument("--eta", required=True)
    nat.add_argument("--sigma", required=True)
    nat.add_argument("--algebra")
    nat.add_argument("--target-algebra", dest="target_algebra")

    p = sub.add_parser("plot", help="SVG of the regions R_n and the action of a word")
    p.add_argument("--max-index", dest="max_index", type=int, default=3)
    p.add_argument("--word", default="", help='atoms such as "clamp:1,flip:1"')
    p.add_argument("--source", default="cylinder", choices=["cylinder", "moebius"])
    p.add_argument("--target", default="moebius", choices=["cylinder", "moebius"])
    p.add_argument("--out", default="regions.svg")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return run(load_config(args), timings=args.timings, quiet=args.quiet)
        if args.command == "loday":
            return loday_main(args)
        if args.command == "plot":
            from .plot import plot_main

            return plot_main(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
