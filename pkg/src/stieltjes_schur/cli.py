"""Command-line front end: read moment data as JSON, run a pipeline, print JSON.

Exit status is 0 on success, 1 on a domain error and 2 on unreadable input.
Errors go to stderr as JSON objects; stdout carries only results.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import jsonio
from .cf_resolvent import (ContinuedFraction, Tail, cf_expand, moebius_apply,
                           resolvent_factorization_check, resolvent_matrix)
from .convergence import indeterminacy_report
from .errors import SchurError
from .hankel_indices import is_regular, normal_indices
from .measure_oracle import roundtrip_verify
from .multidiag import (assemble_full, decompose_best, diagonal_extract,
                        multivariate_expansion, partition_support, solve_diagonal)
from .schur_engine import schur_decompose_ab, schur_decompose_ml

log = logging.getLogger("stieltjes_schur")

LOG_LEVEL_ENV = "STIELTJES_SCHUR_LOG"


def _read_input(path: str):
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise jsonio.InputFormatError(f"cannot read {path}: {exc.strerror}") from None
    return jsonio.loads(text)


def _parse_key(text: str | None):
    if text is None:
        return None
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise jsonio.InputFormatError(f"--key must look like '1,0', got {text!r}") from None


def _fraction_from(data, parity: str) -> tuple[ContinuedFraction, object]:
    """A fraction given directly, or the S-fraction of a moment sequence."""
    if isinstance(data, dict) and "atoms" in data:
        return jsonio.parse_fraction(data), data
    dec = schur_decompose_ml(jsonio.parse_moments(data), parity)
    key = data.get("key") if isinstance(data, dict) else None
    return ContinuedFraction.from_decomposition(dec, key), data


def cmd_indices(args, data) -> dict:
    s = jsonio.parse_moments(data)
    idx = normal_indices(s)
    return {"indices": list(idx.indices), "nu": list(idx.nu), "mu": list(idx.mu),
            "regular": bool(is_regular(s))}


def _schur_one(data, args) -> dict:
    s = jsonio.parse_moments(data)
    key = data.get("key") if isinstance(data, dict) else None
    if args.kind == "ab":
        out = jsonio.ab_json(schur_decompose_ab(s))
        if key is not None:
            out["key"] = key
        return out
    if args.parity == "auto" or args.prefix:
        dec = decompose_best(s, args.parity)
    else:
        dec = schur_decompose_ml(s, args.parity)
    return jsonio.ml_json(dec, key)


def cmd_schur(args, data) -> dict:
    """One sequence, or every diagonal of ``decompose`` output with failures reported inline."""
    if not (isinstance(data, dict) and "diagonals" in data):
        return _schur_one(data, args)
    results = []
    for diagonal in data["diagonals"]:
        try:
            results.append(_schur_one(diagonal, args))
        except SchurError as exc:
            exc.key = tuple(diagonal.get("key") or ()) or None
            results.append({"key": diagonal.get("key"), "error": exc.to_json()})
    return {"diagonals": results}


def cmd_resolvent(args, data) -> dict:
    cf, _ = _fraction_from(data, args.parity)
    W = resolvent_matrix(cf)
    check = resolvent_factorization_check(cf, W)
    out = W.to_json()
    out["factorization"] = {"ok": check.ok, "witness": check.witness, "factor": check.factor}
    return out


def cmd_expand(args, data) -> dict:
    cf, raw = _fraction_from(data, args.parity)
    tau = jsonio.parse_tail(raw)
    series = cf_expand(cf, tau, args.order)
    out = {"parity": cf.parity, "levels": cf.levels, "series": series.to_json()}
    if tau is not None:
        out["moebius"] = moebius_apply(resolvent_matrix(cf), Tail.of(tau), args.order).to_json()
    return out


def cmd_decompose(args, data) -> dict:
    t = jsonio.parse_tensor(data)
    key = _parse_key(args.key)
    keys = [key] if key is not None else list(partition_support(t))
    return {"n": t.dimension, "max_degree": t.max_degree,
            "diagonals": [diagonal_extract(t, k).to_json() for k in keys]}


def _solution_json(sol) -> dict:
    out = jsonio.ml_json(sol.decomposition, sol.key)
    out["prefactor"] = list(sol.prefactor)
    out["trusted_length"] = sol.trusted_length
    return out


def cmd_solve(args, data) -> dict:
    t = jsonio.parse_tensor(data)
    key = _parse_key(args.key)
    if key is not None:
        return _solution_json(solve_diagonal(t, key, args.parity))
    full = assemble_full(t, args.parity)
    return {
        "solutions": [_solution_json(s) for s in full.solutions],
        "errors": [full.errors[k].to_json() for k in sorted(full.errors)],
        "mismatches": [list(m) for m in full.mismatches()],
        "expansion": jsonio.monomial_map_json(full.expansion()),
        "direct": jsonio.monomial_map_json(multivariate_expansion(t)),
    }


def cmd_indeterminacy(args, data) -> dict:
    return indeterminacy_report(jsonio.parse_moments(data), args.depth).to_json()


def cmd_verify(args, data) -> dict:
    measure = jsonio.parse_measure(data)
    return roundtrip_verify(measure, args.parity).to_json()


COMMANDS = {
    "indices": (cmd_indices, "normal indices and regularity of a moment sequence"),
    "schur": (cmd_schur, "continued-fraction atoms of a moment sequence"),
    "resolvent": (cmd_resolvent, "resolvent matrix and its factorization check"),
    "expand": (cmd_expand, "series expansion of a continued fraction"),
    "decompose": (cmd_decompose, "diagonal sequences of a moment tensor"),
    "solve": (cmd_solve, "solve every diagonal of a moment tensor"),
    "indeterminacy": (cmd_indeterminacy, "partial sums of the indeterminacy criteria"),
    "verify": (cmd_verify, "round-trip check for a discrete measure"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stieltjes-schur",
        description="Exact diagonal Schur algorithm for Stieltjes moment problems.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("input", nargs="?", default="-",
                       help="JSON input file (default: stdin)")
        p.add_argument("--output", "-o", help="write the result here instead of stdout")
        if name in ("resolvent", "expand"):
            p.add_argument("--parity", choices=("odd", "even"), default="even")
        if name == "schur":
            p.add_argument("--parity", choices=("odd", "even", "auto"), default="even")
        if name in ("solve", "verify"):
            p.add_argument("--parity", choices=("odd", "even", "auto"), default="auto")
        if name == "schur":
            p.add_argument("--kind", choices=("ml", "ab"), default="ml",
                           help="S-fraction atoms (ml) or basic Schur steps (ab)")
            p.add_argument("--prefix", action="store_true",
                           help="use the longest prefix the parity interpolates exactly")
        if name == "expand":
            p.add_argument("--order", type=_nonnegative, default=8,
                           help="number of negative powers to print")
        if name in ("decompose", "solve"):
            p.add_argument("--key", help="one diagonal, e.g. '1,0'")
        if name == "indeterminacy":
            p.add_argument("--depth", type=_nonnegative, default=None)
        if name == "verify":
            p.add_argument("--measure", help="measure JSON file (same as the positional input)")
    return parser


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def _emit_error(payload: dict) -> None:
    sys.stderr.write(jsonio.dumps(payload))


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get(LOG_LEVEL_ENV, "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    handler = COMMANDS[args.command][0]
    source = getattr(args, "measure", None) or args.input
    try:
        data = _read_input(source)
        log.info("running %s on %s", args.command, source)
        result = handler(args, data)
    except jsonio.InputFormatError as exc:
        _emit_error(exc.to_json())
        return 2
    except SchurError as exc:
        _emit_error(exc.to_json())
        return 1
    except (ValueError, ZeroDivisionError) as exc:
        _emit_error({"error": type(exc).__name__, "message": str(exc)})
        return 1
    text = jsonio.dumps(result)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
