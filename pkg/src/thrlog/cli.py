"""Command line: ``thrlog monoid-info``, ``thrlog nerve-homology``, ``thrlog verify``.

Exit codes: 0 success, 1 a check failed, 2 usage or parse error, 3 a check
was inconclusive and ``--strict`` was given.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import simplicial as S
from .homology import normalized_chains
from .monoid import AffineMonoid, DimensionCapError, TorsionError, is_saturated, sharpen, units
from .report import FAIL, INCONCLUSIVE
from .suite import FORMATS, Config, report_json, report_table, resolve, run

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3
KINDS = ("dihedral", "replete", "real", "tensor-interval")


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _config_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--max-degree", type=_positive, default=argparse.SUPPRESS)
    p.add_argument("--weight-window", type=_positive, default=argparse.SUPPRESS)
    p.add_argument("--coord-window", type=_positive, default=argparse.SUPPRESS)
    p.add_argument("--rank-cap", type=_positive, default=argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS)
    p.add_argument("--threads", type=_positive, default=argparse.SUPPRESS)
    p.add_argument("--strict", action="store_true", default=argparse.SUPPRESS,
                   help="exit 3 when a check is inconclusive")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _config_parent()
    parser = argparse.ArgumentParser(prog="thrlog", parents=[common],
                                     description="Monoids with involution, dihedral nerves and their checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    info = sub.add_parser("monoid-info", parents=[common], help="describe a monoid given as JSON")
    info.add_argument("path")
    nh = sub.add_parser("nerve-homology", parents=[common], help="homology of a weight piece of a nerve")
    nh.add_argument("path")
    nh.add_argument("--kind", choices=KINDS, default="dihedral")
    nh.add_argument("--weight", help="comma-separated weight vector (dihedral, tensor-interval)")
    nh.add_argument("--window", type=int, help="l1 window radius (replete, real; optional otherwise)")
    ver = sub.add_parser("verify", parents=[common], help="run registered checks")
    ver.add_argument("ids", nargs="*", default=["all"])
    return parser


def _config(ns: argparse.Namespace) -> Config:
    keys = {"max_degree", "weight_window", "coord_window", "rank_cap", "seed", "format", "threads"}
    return Config(**{k: v for k, v in vars(ns).items() if k in keys})


def _load(path: str) -> tuple[AffineMonoid, str | None]:
    """Parse a monoid file; an invalid involution is dropped and reported."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON ({exc.msg}, line {exc.lineno})") from exc
    if not isinstance(data, dict):
        raise UsageError(f"{path}: expected a JSON object")
    try:
        return AffineMonoid.from_dict(data), None
    except (ValueError, TypeError) as exc:
        if data.get("involution") is None:
            raise UsageError(f"{path}: {exc}") from exc
        try:
            return AffineMonoid.from_dict(dict(data, involution=None)), str(exc)
        except (ValueError, TypeError) as exc2:
            raise UsageError(f"{path}: {exc2}") from exc2


def monoid_info(m: AffineMonoid, rank_cap: int, involution_problem: str | None = None) -> dict:
    out: dict = {
        "ambient_rank": m.ambient_rank,
        "rank": m.rank,
        "generators": [list(g) for g in m.generators],
        "group_completion": [list(b) for b in m.gp_basis],
        "units": [list(b) for b in units(m).generators],
        "sharp": m.is_sharp,
        "integral": True,
        "fine": True,
        "involution": None if m.involution is None else [list(r) for r in m.involution],
        "involution_valid": involution_problem is None,
    }
    if involution_problem:
        out["involution_problem"] = involution_problem
    try:
        bar, _ = sharpen(m)
        out["sharpening"] = {"ambient_rank": bar.ambient_rank, "generators": [list(g) for g in bar.generators]}
    except TorsionError as exc:
        out["sharpening"] = {"error": str(exc)}
    try:
        out["saturated"] = is_saturated(m, rank_cap)
    except DimensionCapError as exc:
        out["saturated"] = None
        out["saturation_error"] = str(exc)
    return out


def _info_table(info: dict) -> str:
    return "\n".join(f"{k:<18} {json.dumps(v)}" for k, v in info.items())


def nerve_homology(m: AffineMonoid, kind: str, weight, window, cfg: Config):
    N = cfg.max_degree + 1
    if kind == "dihedral":
        if weight is None and window is None:
            raise UsageError("dihedral nerve needs --weight or --window")
        pieces = [S.dihedral_nerve(m, N, weight=w, window=window) for w in S.weight_orbit(m, weight)] \
            if weight is not None else [S.dihedral_nerve(m, N, window=window)]
    elif kind == "tensor-interval":
        if weight is None and window is None:
            raise UsageError("tensor-interval needs --weight or --window")
        pieces = [S.tensor_interval(m, N, weight=w, window=window) for w in S.weight_orbit(m, weight)] \
            if weight is not None else [S.tensor_interval(m, N, window=window)]
    elif kind == "replete":
        if window is None:
            raise UsageError("the replete nerve needs --window (every weight piece is infinite)")
        pieces = [S.replete_nerve(m, N, window, weight=weight)]
    else:
        if window is None and m.rank:
            raise UsageError("the real nerve of a nonzero group needs --window")
        pieces = [S.real_nerve(m, N, window)]
    X = S.union(*pieces) if len(pieces) > 1 else pieces[0]
    return normalized_chains(X).table(cfg.max_degree)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = _config(ns)
    except ValueError as exc:
        print(f"thrlog: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if ns.command == "monoid-info":
            m, problem = _load(ns.path)
            info = monoid_info(m, cfg.rank_cap, problem)
            print(json.dumps(info, sort_keys=True, indent=2) if cfg.format == "json" else _info_table(info))
            return EXIT_OK
        if ns.command == "nerve-homology":
            m, problem = _load(ns.path)
            if problem:
                raise UsageError(f"{ns.path}: {problem}")
            weight = None
            if ns.weight is not None:
                try:
                    weight = tuple(int(v) for v in ns.weight.split(","))
                except ValueError as exc:
                    raise UsageError(f"bad --weight {ns.weight!r}") from exc
                if len(weight) != m.ambient_rank:
                    raise UsageError(f"--weight needs {m.ambient_rank} coordinates")
            try:
                table = nerve_homology(m, ns.kind, weight, ns.window, cfg)
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
            print(table.to_json() if cfg.format == "json" else table.to_text())
            return EXIT_OK
        try:
            ids = resolve(ns.ids)
        except KeyError as exc:
            raise UsageError(exc.args[0]) from exc
        rows = run(ids, cfg)
        print(report_json(rows, cfg) if cfg.format == "json" else report_table(rows))
        statuses = {r["status"] for r in rows}
        if FAIL in statuses:
            return EXIT_FAIL
        if INCONCLUSIVE in statuses and getattr(ns, "strict", False):
            return EXIT_INCONCLUSIVE
        return EXIT_OK
    except UsageError as exc:
        print(f"thrlog: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
