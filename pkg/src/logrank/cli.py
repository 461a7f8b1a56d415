"""Command-line interface: one subcommand per computation, JSON on stdout.

Exit status: 0 success, 1 well-formed "not found" or failed verification,
2 malformed input (the offending field is named on stderr).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Sequence

from . import __version__
from .certificates import COMMANDS, DEFAULTS, InputError, build, verify

HELP = {
    "structural-rank": "rank of sum_i x_i M_i over Q(x), with a minor and kernel certificate",
    "det-rep": "square affine matrix whose determinant is the given polynomial",
    "wm-decompose": "search for P, Q with a threshold-meeting zero block in P M Q",
    "mcc": "search for w, v with w^T M_i v = 0 for every component",
    "siegel": "small nonzero integer kernel vector with max|b_i| < 2NH",
    "mult-rel": "lattice of multiplicative relations of nonzero rationals",
    "vandermonde": "relation extracted from a polynomial vanishing on powers",
    "xn": "the set X(N) of componentwise power products",
    "theta": "Theta_r(d) and the comparison with (r/6e) d^((r+1)/r)",
    "padic-log": "Iwasawa p-adic logarithm of a rational or Hensel-lifted unit",
    "padic-exp": "p-adic exponential inside its disc of convergence",
    "hensel": "Hensel lift of a simple root modulo p",
    "log-matrix": "matrix of p-adic logs of unit embeddings, with a certified rank",
    "interp-det": "valuation of det(u^(a_i y_j)) against Theta_1(d) v_p(u - 1)",
    "series": "truncated power series: exp, log, relations, product-exp",
    "verify": "re-check a certificate produced by any other subcommand",
}


def _options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--seed", type=int, default=DEFAULTS["seed"],
                   help="seed for every random choice (default: %(default)s)")
    g.add_argument("--prec", type=int, default=DEFAULTS["prec"],
                   help="p-adic precision in digits (default: %(default)s)")
    g.add_argument("--height", type=int, default=DEFAULTS["height"],
                   help="height bound for subspace and witness searches (default: %(default)s)")
    g.add_argument("--max-points", type=int, default=DEFAULTS["max_points"],
                   help="cap on enumerated points (default: %(default)s)")
    g.add_argument("--strategy", default=DEFAULTS["strategy"],
                   help="search strategy: exhaustive/alternating (wm-decompose), "
                        "kernel/pigeonhole (siegel); auto picks the first (default: %(default)s)")
    g.add_argument("--prime", type=int, default=DEFAULTS["prime"],
                   help="prime p for the p-adic subcommands")
    g.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    return common


def make_parser() -> argparse.ArgumentParser:
    common = _options()
    parser = argparse.ArgumentParser(
        prog="logrank", description=__doc__.splitlines()[0], parents=[common],
        epilog="INPUT is a path to a JSON file or inline JSON; bare numbers and "
               "fractions like 3/7 are accepted where a single rational is expected.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    for name, text in HELP.items():
        p = sub.add_parser(name, help=text, description=text, parents=[common])
        p.add_argument("input", metavar="INPUT" if name != "verify" else "CERTIFICATE")
    return parser


def read_input(text: str):
    """A JSON file path, inline JSON, or a bare rational such as ``3/7``."""
    if text == "-":
        text = sys.stdin.read()
    elif os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        stripped = text.strip()
        if stripped and all(ch in "0123456789-/ " for ch in stripped):
            return stripped
        raise InputError("/", f"invalid JSON ({exc.msg} at line {exc.lineno} column {exc.colno})") from None


def dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True)


def main(argv: Sequence[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    opts = {"seed": args.seed, "prec": args.prec, "height": args.height,
            "max_points": args.max_points, "strategy": args.strategy, "prime": args.prime}
    try:
        data = read_input(args.input)
        if args.command == "verify":
            if not isinstance(data, dict):
                raise InputError("/", "certificate must be a JSON object")
            ok, transcript = verify(data)
            print(dump({"command": data["command"], "verified": ok, "transcript": transcript}))
            return 0 if ok else 1
        if args.prec < 1:
            raise InputError("/options/prec", "must be positive")
        if args.height < 1:
            raise InputError("/options/height", "must be positive")
        cert = build(args.command, data, opts)
    except InputError as exc:
        print(f"logrank {args.command}: malformed input at {exc}", file=sys.stderr)
        return 2
    print(dump(cert))
    return 0 if cert["status"] == "ok" else 1


if __name__ == "__main__":
    sys.exit(main())
