"""Command-line interface.

Subcommands: verify (randomized inequality suite), search (exponent grid
scan over seeded instances), reproduce (built-in reference computations),
gmf (one-off evaluation), eig (Hermitian eigenvalues).

Exit codes: 0 success / no violation, 1 violation found or reproduction
failed, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from .errors import GmflabError, NumericalFailure, ReproductionFailed
from .gmf import GmfSpec, gmf
from .matrices import (
    RandomInstanceConfig,
    hermitian_eig,
    matrix_from_json,
    matrix_to_json,
)
from .permutations import group_from_json
from .search import (
    REFERENCE_IDS,
    REGISTRY,
    SearchConfig,
    inequality_ids,
    r_grid,
    random_search,
    reproduce,
    scan_r,
    sharp_instance,
)


class UsageError(Exception):
    pass


def write_atomic(path: str, text: str):
    """Write via a temp file in the same directory + rename, so a failure
    never leaves a partial file at the destination."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_json_file(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read JSON file {path!r}: {e}") from e


def _parse_spec(text: str, n: int | None) -> GmfSpec:
    if text in ("det", "per"):
        if n is None or n < 1:
            raise UsageError(f"--spec {text} needs --n >= 1")
        return GmfSpec.det(n) if text == "det" else GmfSpec.per(n)
    if text.startswith("custom:"):
        obj = _load_json_file(text[len("custom:"):])
        try:
            group, character = group_from_json(obj)
        except GmflabError as e:
            raise UsageError(f"invalid group file: {e}") from e
        if character is None:
            raise UsageError("custom spec file must include a character")
        spec = GmfSpec.custom(group, character)
        if n is not None and n != spec.degree:
            raise UsageError(f"--n {n} conflicts with group degree {spec.degree}")
        return spec
    if text.startswith("product:"):
        factors = []
        for part in text[len("product:"):].split(","):
            kind, _, deg = part.partition(":")
            if kind not in ("det", "per") or not deg.isdigit() or int(deg) < 1:
                raise UsageError(f"bad product factor {part!r} (use det:N or per:N)")
            factors.append(GmfSpec.det(int(deg)) if kind == "det" else GmfSpec.per(int(deg)))
        return GmfSpec.product(factors)
    raise UsageError(f"unknown spec {text!r} (use det, per, custom:FILE or product:...)")


def _parse_partition(text: str, m: int) -> list[list[int]]:
    try:
        blocks = [
            [int(i) for i in part.split(",") if i != ""] for part in text.split("|")
        ]
    except ValueError as e:
        raise UsageError(f"bad partition {text!r}: {e}") from e
    flat = sorted(i for b in blocks for i in b)
    if flat != list(range(m)):
        raise UsageError(f"partition {text!r} does not cover 0..{m - 1}")
    return blocks


def _suite_config(args) -> SearchConfig:
    if args.suite not in REGISTRY:
        raise UsageError(f"unknown suite {args.suite!r}; have {inequality_ids()}")
    entry = REGISTRY[args.suite]
    if args.n is not None and args.n < 1:
        raise UsageError("--n must be >= 1")
    spec = _parse_spec(args.spec, args.n)
    n = args.n if args.n is not None else spec.degree
    if n is None:
        n = 1  # product specs carry their own block sizes
    m = args.m if args.m is not None else 3
    if entry.matrix_count is None and args.m is None:
        raise UsageError(f"suite {args.suite!r} needs --m")
    r_values = tuple(args.r or ())
    if getattr(args, "r_grid", None):
        try:
            lo, hi, step = (float(x) for x in args.r_grid.split(":"))
        except ValueError as e:
            raise UsageError(f"--r-grid must be MIN:MAX:STEP, got {args.r_grid!r}") from e
        r_values = r_values + r_grid(lo, hi, step)
    if entry.takes_r and not r_values:
        raise UsageError(f"suite {args.suite!r} needs --r (or --r-grid)")
    extra = {}
    if args.suite in ("three_level_power", "three_level_convex"):
        if args.k is None or args.l is None or args.p is None:
            raise UsageError(f"suite {args.suite!r} needs --k --l --p")
        extra.update(k=args.k, l=args.l, p=args.p)
    if args.suite == "three_level_convex":
        extra["phi"] = args.phi or "x^1.5"
    if args.suite == "partition_power":
        if not args.partition:
            raise UsageError("suite partition_power needs --partition like '0|1,2'")
        extra["partition"] = _parse_partition(args.partition, m)
    if args.suite == "tensor_three_term":
        extra["power"] = args.power
    try:
        instance = RandomInstanceConfig(
            n=n, m=m, seed=args.seed, scale=args.scale, field=args.field
        )
        return SearchConfig(
            inequality_id=args.suite,
            spec=spec,
            instance=instance,
            r_values=r_values,
            trials=args.trials,
            extra=extra,
        )
    except (ValueError, KeyError) as e:
        raise UsageError(str(e)) from e


def _emit(result, args) -> None:
    lines = result.to_report_lines()
    if args.out:
        write_atomic(args.out, "\n".join(lines) + "\n")
        _emit_violation_files(result, args.out)
    else:
        for line in lines:
            print(line)
    if getattr(args, "summary", False):
        print(json.dumps(result.summary(), sort_keys=True))


def _emit_violation_files(result, out_path: str) -> None:
    stem, _ = os.path.splitext(out_path)
    for idx, (rep, mats) in enumerate(result.violation_instances):
        flat = []
        for M in mats:
            if isinstance(M, tuple):  # product blocks
                flat.extend(M)
            else:
                flat.append(M)
        obj = {
            "inequality_id": rep.inequality_id,
            "spec_id": rep.spec_id,
            "params": rep.params,
            "slack": rep.slack,
            "matrices": [matrix_to_json(M) for M in flat],
        }
        write_atomic(f"{stem}.violation{idx:03d}.json", json.dumps(obj, sort_keys=True) + "\n")


def _cmd_verify(args) -> int:
    config = _suite_config(args)
    result = random_search(config)
    _emit(result, args)
    return 1 if result.violations else 0


def _cmd_search(args) -> int:
    if not getattr(args, "r_grid", None) and not args.r:
        raise UsageError("search needs --r-grid (or explicit --r values)")
    config = _suite_config(args)
    if args.fixed_instance == "sharp":
        entry = REGISTRY[config.inequality_id]
        count = entry.matrix_count if entry.matrix_count is not None else config.instance.m
        mats = sharp_instance(config.inequality_id, config.spec, config.instance.n, count)
        if mats is None:
            raise UsageError("no built-in sharp instance for this suite/spec/size")
        result = scan_r(config.inequality_id, config.spec, mats, config.r_values, config.extra)
    else:
        result = random_search(config)
    _emit(result, args)
    return 1 if result.violations else 0


def _cmd_reproduce(args) -> int:
    if args.example_id not in REFERENCE_IDS:
        raise UsageError(
            f"unknown example {args.example_id!r}; have {list(REFERENCE_IDS)}"
        )
    result = reproduce(args.example_id)
    _emit(result, args)
    return 0


def _cmd_gmf(args) -> int:
    A = matrix_from_json(_load_json_file(args.matrix))
    spec = _parse_spec(args.spec, args.n if args.n is not None else A.shape[0])
    value = gmf(spec, A)
    print(repr(value.value))
    return 0


def _cmd_eig(args) -> int:
    A = matrix_from_json(_load_json_file(args.matrix))
    decomp = hermitian_eig(A)
    print(json.dumps({"eigenvalues": list(decomp.eigenvalues)}))
    return 0


def _add_suite_flags(p: argparse.ArgumentParser, with_grid: bool):
    p.add_argument("--suite", required=True, help="inequality id (see README)")
    p.add_argument("--spec", default="det", help="det | per | custom:FILE | product:det:N,per:N")
    p.add_argument("--n", type=int, default=None, help="matrix size")
    p.add_argument("--m", type=int, default=None, help="matrix count for m-matrix suites")
    p.add_argument("--r", type=float, action="append", help="exponent (repeatable)")
    if with_grid:
        p.add_argument("--r-grid", dest="r_grid", help="MIN:MAX:STEP exponent grid")
        p.add_argument(
            "--fixed-instance", dest="fixed_instance", choices=["sharp"], default=None,
            help="scan the built-in sharp instance instead of random ones",
        )
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--l", type=int, default=None)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--phi", default=None, help="convex transform name (three_level_convex)")
    p.add_argument("--partition", default=None, help="0-based blocks, e.g. '0|1,2'")
    p.add_argument("--power", type=int, default=2, help="tensor power (tensor_three_term)")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--field", choices=["real", "complex"], default="complex")
    p.add_argument("--out", default=None, help="write JSON-lines reports here (atomic)")
    p.add_argument("--summary", action="store_true", help="print an aggregate object")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gmflab",
        description="generalized matrix functions and PSD inequality verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="randomized verification of one inequality")
    _add_suite_flags(p, with_grid=False)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("search", help="exponent-grid scan for violations")
    _add_suite_flags(p, with_grid=True)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("reproduce", help="run a built-in reference computation")
    p.add_argument("example_id")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_reproduce, summary=False)

    p = sub.add_parser("gmf", help="evaluate one matrix function")
    p.add_argument("--spec", required=True)
    p.add_argument("--matrix", required=True, help="matrix JSON file")
    p.add_argument("--n", type=int, default=None)
    p.set_defaults(func=_cmd_gmf)

    p = sub.add_parser("eig", help="eigenvalues of a Hermitian matrix")
    p.add_argument("--matrix", required=True, help="matrix JSON file")
    p.set_defaults(func=_cmd_eig)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except ReproductionFailed as e:
        print(f"reproduction failed: {e}", file=sys.stderr)
        return 1
    except NumericalFailure as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 3
    except (GmflabError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
