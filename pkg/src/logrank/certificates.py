"""Certificates: JSON records of a computation plus the exact checks behind it.

Each command has a builder (runs the search or computation) and a checker
that re-derives every claim from the echoed input using verifier code
only.  The transcript stored in a certificate is the checker's output, so
re-running the checker must reproduce it.
"""

from __future__ import annotations

import contextlib
import math
import random
from fractions import Fraction
from typing import Any, Callable

from . import __version__
from .core import MultiPoly, format_rational, to_fraction
from .detrep import determinantal_rep, is_affine, rep_dimension, verify_rep
from .intlattice import (SiegelPreconditionError, SiegelSearchError, lattice_rank, siegel_solve,
                         snf, verify_siegel)
from .linalg import (BAREISS_LIMIT, cramer_kernel, det_Q, det_poly, poly_matvec, rank_Q,
                     rank_profile_poly, submatrix, transpose)
from .padic import (PadicNumber, embedding_values, exp_domain_min, exp_p, hensel_root,
                    interp_det_valuation, log_matrix, log_p, padic_rank_lower_bound, vp)
from .relations import (HypothesisError, enumerate_xn, laurent_lower_bound, power_product,
                        relation_lattice, theta, theta_by_enumeration, vandermonde_relation,
                        vanishing_poly, verify_relation_lattice)
from .series import (TruncatedSeries, check_relation, product_exp_identity, relation_detect,
                     series_exp, series_log)
from .symbolic import SymbolicMatrix, generic_matrix
from .wm import (MccWitness, ZeroBlockCertificate, check_mcc_witness, find_zero_block,
                 mcc_witness, rank_threshold, verify_zero_block)

SCHEMA_VERSION = 1

DEFAULTS = {"seed": 0, "prec": 20, "height": 2, "max_points": 10 ** 6, "strategy": "auto",
            "prime": None}


class InputError(ValueError):
    """Malformed input; ``pointer`` names the offending field."""

    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer or "/"


@contextlib.contextmanager
def at(pointer: str):
    """Turn parsing failures inside the block into an :class:`InputError`."""
    try:
        yield
    except InputError:
        raise
    except (KeyError, IndexError, TypeError, ValueError, ZeroDivisionError, AttributeError) as exc:
        raise InputError(pointer, f"{type(exc).__name__}: {exc}") from None


def field(data: Any, key: str, pointer: str = ""):
    if not isinstance(data, dict):
        raise InputError(pointer, "expected a JSON object")
    if key not in data:
        raise InputError(f"{pointer}/{key}", "missing field")
    return data[key]


def _check(name: str, ok: bool) -> dict:
    return {"check": name, "ok": bool(ok)}


def _rat(q) -> str:
    return format_rational(to_fraction(q))


# -- parsers (shared by builders and checkers) -------------------------------


def parse_symbolic(data, pointer: str = "") -> SymbolicMatrix:
    field(data, "symbols", pointer)
    entries = field(data, "entries", pointer)
    if not isinstance(entries, list) or not entries:
        raise InputError(f"{pointer}/entries", "expected a nonempty list of rows")
    for i, row in enumerate(entries):
        if not isinstance(row, list):
            raise InputError(f"{pointer}/entries/{i}", "expected a list")
        for j, cell in enumerate(row):
            if not isinstance(cell, dict):
                raise InputError(f"{pointer}/entries/{i}/{j}", "expected {symbol: coefficient}")
            for name, c in cell.items():
                with at(f"{pointer}/entries/{i}/{j}/{name}"):
                    to_fraction(c)
    with at(pointer):
        return SymbolicMatrix.from_json(data)


def parse_poly(data, pointer: str = "") -> MultiPoly:
    with at(pointer):
        return MultiPoly.from_json(data)


def parse_int_matrix(data, pointer: str) -> list[list[int]]:
    if not isinstance(data, list) or not data:
        raise InputError(pointer, "expected a nonempty list of rows")
    out = []
    for i, row in enumerate(data):
        if not isinstance(row, list):
            raise InputError(f"{pointer}/{i}", "expected a list")
        new = []
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, int):
                raise InputError(f"{pointer}/{i}/{j}", "expected an integer")
            new.append(x)
        out.append(new)
    if len({len(r) for r in out}) != 1:
        raise InputError(pointer, "rows have different lengths")
    return out


def parse_rationals(data, pointer: str) -> list[Fraction]:
    if not isinstance(data, list) or not data:
        raise InputError(pointer, "expected a nonempty list")
    out = []
    for i, x in enumerate(data):
        with at(f"{pointer}/{i}"):
            out.append(to_fraction(x))
    return out


def parse_int(data, pointer: str, minimum: int | None = None) -> int:
    if isinstance(data, bool) or not isinstance(data, int):
        raise InputError(pointer, "expected an integer")
    if minimum is not None and data < minimum:
        raise InputError(pointer, f"must be at least {minimum}")
    return data


def parse_series(data, pointer: str) -> TruncatedSeries:
    with at(pointer):
        return TruncatedSeries.from_json(data)


def _prime(opts: dict) -> int:
    p = opts.get("prime")
    if p is None:
        raise InputError("/options/prime", "--prime is required for this command")
    if p < 2 or any(p % q == 0 for q in range(2, math.isqrt(p) + 1)):
        raise InputError("/options/prime", f"{p} is not prime")
    return p


def _ptext(x: PadicNumber) -> dict:
    return x.to_json()


# -- structural rank -----------------------------------------------------------


def build_structural_rank(data, opts):
    m = parse_symbolic(data)
    px = generic_matrix(m)
    elim = rank_profile_poly(px, "auto", opts["seed"])
    threshold = Fraction(m.rows * m.cols, m.rows + m.cols)
    result = {"structural_rank": elim.rank,
              "threshold": _rat(threshold), "hypothesis": elim.rank < threshold,
              "minor": {"rows": list(elim.pivot_rows), "cols": list(elim.pivot_cols)}}
    if min(m.shape) <= BAREISS_LIMIT:
        ker = cramer_kernel(px, elim.pivot_rows, elim.pivot_cols) if elim.rank else \
            [[MultiPoly.constant(m.space.size, int(i == j)) for i in range(m.cols)] for j in range(m.cols)]
        result["kernel"] = [[e.to_json() for e in v] for v in ker]
    return "ok", result


def check_structural_rank(data, result, opts):
    m = parse_symbolic(data)
    px = generic_matrix(m)
    r = result["structural_rank"]
    rows, cols = result["minor"]["rows"], result["minor"]["cols"]
    out = [_check("minor has size equal to the rank", len(rows) == len(cols) == r
                  and len(set(rows)) == r and len(set(cols)) == r)]
    # a nonzero value at an integer point proves the minor is a nonzero polynomial
    rng = random.Random(opts["seed"])
    nonzero = r == 0
    if r and out[0]["ok"]:
        minor = submatrix(px, rows, cols)
        for _ in range(20):
            pt = [rng.randint(1, 10 ** 6) for _ in range(m.space.size)]
            if det_Q([[e.evaluate(pt) for e in row] for row in minor]) != 0:
                nonzero = True
                break
    out.append(_check("rank lower bound: minor is nonzero at an integer point", nonzero))
    if "kernel" in result:
        ker = [[MultiPoly.from_json(e, m.space.size) for e in v] for v in result["kernel"]]
        free = [j for j in range(m.cols) if j not in cols]
        ok = len(ker) == m.cols - r and all(len(v) == m.cols for v in ker)
        ok = ok and all(not any(poly_matvec(px, v)) for v in ker)
        ok = ok and all(bool(v[j]) and all(not v[jj] for jj in free if jj != j)
                        for v, j in zip(ker, free))
        out.append(_check("rank upper bound: independent polynomial kernel vectors", ok))
    rep = Fraction(m.rows * m.cols, m.rows + m.cols)
    out.append(_check("threshold recomputed", result["threshold"] == _rat(rep)
                      and result["hypothesis"] == (r < rep)))
    return out


# -- determinantal representation ----------------------------------------------


def build_det_rep(data, opts):
    p = parse_poly(data)
    prune = bool(data.get("prune", False)) if isinstance(data, dict) else False
    mat = determinantal_rep(p, prune=prune)
    return "ok", {"dimension": len(mat), "degree": p.degree(), "pruned": prune,
                  "verified": verify_rep(mat, p, "symbolic"),
                  "matrix": [[e.to_json() for e in row] for row in mat],
                  "expected_dimension": rep_dimension(p.nvars, p.degree()) if p.degree() >= 1 else 1}


def check_det_rep(data, result, opts):
    p = parse_poly(data)
    mat = [[MultiPoly.from_json(e, p.nvars) for e in row] for row in result["matrix"]]
    out = [_check("matrix is square with affine entries", is_affine(mat)),
           _check("dimension matches", len(mat) == result["dimension"])]
    out.append(_check("determinant equals the polynomial", out[0]["ok"] and det_poly(mat) == p))
    return out


# -- zero blocks and witnesses -------------------------------------------------


def build_wm(data, opts):
    m = parse_symbolic(data)
    strategy = opts["strategy"] if opts["strategy"] != "auto" else "exhaustive"
    if strategy not in ("exhaustive", "alternating"):
        raise InputError("/options/strategy", "use exhaustive or alternating")
    rep = rank_threshold(m)
    result = {"structural_rank": rep.structural_rank, "threshold": _rat(rep.threshold),
              "hypothesis": rep.hypothesis, "strategy": strategy}
    cert = find_zero_block(m, strategy, opts["height"], opts["seed"])
    if cert is None:
        result["found"] = False
        return "not_found", result
    result.update({"found": True, "m_prime": cert.m_prime, "n_prime": cert.n_prime,
                   "p": [[_rat(x) for x in row] for row in cert.p],
                   "q": [[_rat(x) for x in row] for row in cert.q]})
    return "ok", result


def check_wm(data, result, opts):
    m = parse_symbolic(data)
    if not result.get("found"):
        return [_check("search-exhausted report (nothing to re-check)", True)]
    cert = ZeroBlockCertificate([[to_fraction(x) for x in row] for row in result["p"]],
                                [[to_fraction(x) for x in row] for row in result["q"]],
                                result["m_prime"], result["n_prime"])
    try:
        chk = verify_zero_block(m, cert)
    except ValueError:
        return [_check("P and Q invertible", False)]
    return [_check("P and Q invertible", True),
            _check("top-right block of PMQ is zero", chk.ok),
            _check("m'/m + n'/n > 1", chk.threshold_met)]


def build_mcc(data, opts):
    m = parse_symbolic(data)
    if m.rows != m.cols:
        raise InputError("/entries", "matrix must be square")
    wit = mcc_witness(m, opts["height"])
    if wit is None:
        return "not_found", {"found": False, "height": opts["height"]}
    return "ok", {"found": True, "w": list(wit.w), "v": list(wit.v)}


def check_mcc(data, result, opts):
    m = parse_symbolic(data)
    if not result.get("found"):
        return [_check("search-exhausted report (nothing to re-check)", True)]
    wit = MccWitness(tuple(result["w"]), tuple(result["v"]))
    return [_check("w^T M_i v = 0 for every component", check_mcc_witness(m, wit))]


# -- integer lattices and relations -------------------------------------------


def _siegel_input(data):
    a = parse_int_matrix(field(data, "a"), "/a")
    h = data.get("H")
    if h is None:
        h = max(abs(x) for row in a for x in row) + 1
    h = parse_int(h, "/H", 1)
    return a, h


def build_siegel(data, opts):
    a, h = _siegel_input(data)
    strategy = opts["strategy"] if opts["strategy"] != "auto" else "kernel"
    if strategy not in ("kernel", "pigeonhole"):
        raise InputError("/options/strategy", "use kernel or pigeonhole")
    try:
        b = siegel_solve(a, h, strategy, opts["max_points"])
    except SiegelPreconditionError as exc:
        raise InputError("/a", str(exc)) from None
    except SiegelSearchError as exc:
        return "failed", {"found": False, "reason": str(exc)}
    return "ok", {"found": True, "H": h, "b": list(b), "bound": 2 * len(a[0]) * h}


def check_siegel_cert(data, result, opts):
    a, h = _siegel_input(data)
    if not result.get("found"):
        return [_check("search failure report (nothing to re-check)", True)]
    b = result["b"]
    return [_check("N > 2M and |a_ij| < H", len(a[0]) > 2 * len(a)
                   and all(abs(x) < h for row in a for x in row)),
            _check("A b = 0, b != 0, max|b_i| < 2NH", verify_siegel(a, h, b))]


def _values(data):
    vals = data if isinstance(data, list) else field(data, "values")
    vals = parse_rationals(vals, "/values" if isinstance(data, dict) else "")
    for i, v in enumerate(vals):
        if v == 0:
            raise InputError(f"/values/{i}", "entries must be nonzero")
    return vals


def build_mult_rel(data, opts):
    vals = _values(data)
    lat = relation_lattice(vals)
    return "ok", {"rank": lat.rank, "basis": [list(v) for v in lat.basis]}


def check_mult_rel(data, result, opts):
    vals = _values(data)
    basis = [tuple(v) for v in result["basis"]]
    return [_check("every basis vector is a relation",
                   all(power_product(vals, v) == 1 for v in basis)),
            _check("lattice equals the full relation lattice", verify_relation_lattice(vals, basis)),
            _check("rank reported", result["rank"] == len(basis))]


def _vandermonde_input(data):
    vals = _values(data)
    f = parse_poly(field(data, "poly"), "/poly")
    big_l = parse_int(field(data, "L"), "/L", 0)
    if f.nvars != len(vals):
        raise InputError("/poly", "variable count differs from the tuple length")
    return vals, f, big_l


def build_vandermonde(data, opts):
    vals, f, big_l = _vandermonde_input(data)
    if (big_l + 1) ** len(vals) > opts["max_points"]:
        raise InputError("/L", f"(L+1)^n exceeds --max-points {opts['max_points']}")
    try:
        rel = vandermonde_relation(vals, f, big_l, opts["max_points"])
    except HypothesisError as exc:
        return "failed", {"found": False, "reason": str(exc)}
    return "ok", {"found": True, "relation": list(rel)}


def check_vandermonde(data, result, opts):
    vals, f, big_l = _vandermonde_input(data)
    if not result.get("found"):
        return [_check("hypothesis failure report (nothing to re-check)", True)]
    rel = result["relation"]
    return [_check("relation is nonzero with |lambda_i| <= L",
                   any(rel) and len(rel) == len(vals) and all(abs(x) <= big_l for x in rel)),
            _check("prod alpha_i^lambda_i = 1", power_product(vals, rel) == 1)]


def _xn_input(data):
    g = field(data, "generators")
    if not isinstance(g, list) or not g:
        raise InputError("/generators", "expected a nonempty list of rows")
    rows = [parse_rationals(r, f"/generators/{i}") for i, r in enumerate(g)]
    if len({len(r) for r in rows}) != 1:
        raise InputError("/generators", "rows have different lengths")
    if any(x == 0 for r in rows for x in r):
        raise InputError("/generators", "entries must be nonzero")
    n_bound = parse_int(field(data, "N"), "/N", 0)
    d = data.get("degree_bound")
    return rows, n_bound, (None if d is None else parse_int(d, "/degree_bound", 1))


def build_xn(data, opts):
    rows, n_bound, d = _xn_input(data)
    if (n_bound + 1) ** len(rows) > opts["max_points"]:
        raise InputError("/N", f"(N+1)^m exceeds --max-points {opts['max_points']}")
    res = enumerate_xn(rows, n_bound)
    result = {"size": res.size, "points": [[_rat(x) for x in p] for p in res.points],
              "exponents": [list(a) for a in res.exponents]}
    if d is not None:
        f = vanishing_poly(res.points, d)
        result["vanishing_poly"] = None if f is None else f.to_json()
    return "ok", result


def check_xn(data, result, opts):
    rows, n_bound, d = _xn_input(data)
    pts = [tuple(to_fraction(x) for x in p) for p in result["points"]]
    exps = result["exponents"]
    m, n = len(rows), len(rows[0])
    ok = len(pts) == len(exps) == result["size"] and len(set(pts)) == len(pts)
    ok = ok and all(0 <= e <= n_bound for a in exps for e in a)
    ok = ok and all(p == tuple(power_product([rows[i][j] for i in range(m)], a) for j in range(n))
                    for p, a in zip(pts, exps))
    # completeness: distinct values over the whole box, counted independently
    full = {tuple(math.prod((rows[i][j] ** a[i] for i in range(m)), start=Fraction(1))
                  for j in range(n))
            for a in _box(m, n_bound)}
    out = [_check("points are the listed power products", ok),
           _check("point set is complete", full == set(pts))]
    if d is not None:
        f = result.get("vanishing_poly")
        if f is None:
            out.append(_check("no vanishing polynomial claimed", True))
        else:
            poly = MultiPoly.from_json(f, n)
            out.append(_check("polynomial is nonzero, degree < d, vanishes on X(N)",
                              bool(poly) and poly.degree() < d
                              and all(poly.evaluate(p) == 0 for p in pts)))
    return out


def _box(m: int, n_bound: int):
    a = [0] * m
    while True:
        yield list(a)
        i = 0
        while i < m and a[i] == n_bound:
            a[i] = 0
            i += 1
        if i == m:
            return
        a[i] += 1


def _theta_input(data):
    r = parse_int(field(data, "r"), "/r", 1)
    d = parse_int(field(data, "d"), "/d", 1)
    return r, d


def build_theta(data, opts):
    r, d = _theta_input(data)
    t = theta(r, d)
    lb = laurent_lower_bound(r, d)
    return "ok", {"theta": t, "laurent_bound": repr(lb), "exceeds_bound": t > lb}


def check_theta(data, result, opts):
    r, d = _theta_input(data)
    if r == 1:
        expect = d * (d - 1) // 2
    elif d <= 40 and r <= 3:
        expect = theta_by_enumeration(r, d)
    else:
        expect = theta(r, d)
    lb = laurent_lower_bound(r, d)
    return [_check("theta value", result["theta"] == expect),
            _check("bound comparison", result["exceeds_bound"] == (expect > lb)
                   and result["laurent_bound"] == repr(lb))]


# -- p-adic --------------------------------------------------------------------


def _unit_desc(data, pointer: str):
    if isinstance(data, dict):
        coeffs = field(data, "minpoly", pointer)
        if not isinstance(coeffs, list) or len(coeffs) < 2:
            raise InputError(f"{pointer}/minpoly", "expected at least two integer coefficients")
        for i, c in enumerate(coeffs):
            parse_int(c, f"{pointer}/minpoly/{i}")
        if "residue" in data:
            parse_int(data["residue"], f"{pointer}/residue")
        return data
    with at(pointer):
        q = to_fraction(data)
    if q == 0:
        raise InputError(pointer, "value must be nonzero")
    return q


def _check_log(x: PadicNumber, lx: PadicNumber) -> bool:
    """``exp(n * log x) == u^n`` for the unit part u of x, n = p - 1 (2 if p = 2)."""
    p = x.p
    n = 2 if p == 2 else p - 1
    u = PadicNumber(p, 0, x.unit, x.rel_prec)
    nl = lx * n
    if nl.is_zero():
        return (u ** n - 1).truncate(lx.prec).is_zero()
    if nl.valuation < exp_domain_min(p):
        return False
    return exp_p(nl).truncate(lx.prec) == (u ** n).truncate(lx.prec)


def build_padic_log(data, opts):
    p, k = _prime(opts), opts["prec"]
    desc = _unit_desc(data, "")
    with at(""):
        vals = embedding_values(desc, p, k)
    return "ok", {"values": [_ptext(v) for v in vals], "logs": [_ptext(log_p(v)) for v in vals]}


def check_padic_log(data, result, opts):
    p, k = _prime(opts), opts["prec"]
    vals = [PadicNumber.from_json(v) for v in result["values"]]
    logs = [PadicNumber.from_json(v) for v in result["logs"]]
    desc = _unit_desc(data, "")
    if isinstance(desc, dict):
        coeffs = [int(c) for c in desc["minpoly"]]
        ok = all(sum(c * v.residue() ** i for i, c in enumerate(coeffs)) % p ** k == 0
                 and v.prec == k for v in vals)
    else:
        ok = vals == [PadicNumber.from_rational(desc, p, k)]
    return [_check("input values", ok and len(vals) == len(logs)),
            _check("exp(n log x) = u^n", all(_check_log(x, lx) for x, lx in zip(vals, logs)))]


def _padic_exp_input(data, p, k):
    with at(""):
        q = to_fraction(data)
    x = PadicNumber.from_rational(q, p, k)
    if not x.is_zero() and x.valuation < exp_domain_min(p):
        raise InputError("", f"exp_p needs valuation >= {exp_domain_min(p)}")
    return x


def build_padic_exp(data, opts):
    p, k = _prime(opts), opts["prec"]
    x = _padic_exp_input(data, p, k)
    return "ok", {"value": _ptext(x), "exp": _ptext(exp_p(x))}


def check_padic_exp(data, result, opts):
    p, k = _prime(opts), opts["prec"]
    x = _padic_exp_input(data, p, k)
    e = PadicNumber.from_json(result["exp"])
    return [_check("input value", PadicNumber.from_json(result["value"]) == x),
            _check("log(exp x) = x", e.valuation == 0 and log_p(e) == x.truncate(e.prec))]


def _hensel_input(data):
    coeffs = field(data, "poly")
    if not isinstance(coeffs, list) or len(coeffs) < 2:
        raise InputError("/poly", "expected at least two integer coefficients")
    coeffs = [parse_int(c, f"/poly/{i}") for i, c in enumerate(coeffs)]
    return coeffs, parse_int(field(data, "residue"), "/residue")


def build_hensel(data, opts):
    p, k = _prime(opts), opts["prec"]
    coeffs, r0 = _hensel_input(data)
    with at("/residue"):
        root = hensel_root(coeffs, r0, p, k)
    return "ok", {"root": _ptext(root), "residue_mod_pk": str(root.residue())}


def check_hensel(data, result, opts):
    p, k = _prime(opts), opts["prec"]
    coeffs, r0 = _hensel_input(data)
    x = int(result["residue_mod_pk"])
    return [_check("f(root) = 0 mod p^k", sum(c * x ** i for i, c in enumerate(coeffs)) % p ** k == 0),
            _check("root lifts the residue", (x - r0) % p == 0),
            _check("digits match", PadicNumber.from_json(result["root"]) == PadicNumber.from_int_mod(x, p, k))]


def _units_input(data):
    units = data if isinstance(data, list) else field(data, "units")
    if not isinstance(units, list) or not units:
        raise InputError("/units", "expected a nonempty list")
    out = []
    for i, u in enumerate(units):
        if isinstance(u, list):
            out.append([_unit_desc(x, f"/units/{i}/{j}") for j, x in enumerate(u)])
        else:
            out.append(_unit_desc(u, f"/units/{i}"))
    return out


def build_log_matrix(data, opts):
    p, k = _prime(opts), opts["prec"]
    units = _units_input(data)
    with at("/units"):
        res = log_matrix(units, p, k)
    vals = []
    for u in units:
        descs = u if isinstance(u, list) else [u]
        vals.append([_ptext(v) for d in descs for v in embedding_values(d, p, k)])
    return "ok", {"values": vals, "entries": [[_ptext(e) for e in row] for row in res.entries],
                  "rank_lower_bound": res.rank_lower_bound, "precision": k}


def check_log_matrix(data, result, opts):
    vals = [[PadicNumber.from_json(v) for v in row] for row in result["values"]]
    ents = [[PadicNumber.from_json(v) for v in row] for row in result["entries"]]
    ok = len(vals) == len(ents) and all(len(a) == len(b) for a, b in zip(vals, ents))
    ok = ok and all(_check_log(x, lx) for a, b in zip(vals, ents) for x, lx in zip(a, b))
    return [_check("entries are logs of the embeddings", ok),
            _check("units have valuation 0", all(v.valuation == 0 for row in vals for v in row)),
            _check("certified rank", padic_rank_lower_bound(ents) == result["rank_lower_bound"])]


def _interp_input(data):
    with at("/u"):
        u = to_fraction(field(data, "u"))
    a = [parse_int(x, f"/a/{i}") for i, x in enumerate(field(data, "a"))]
    y = [parse_int(x, f"/y/{i}") for i, x in enumerate(field(data, "y"))]
    return u, a, y


def build_interp_det(data, opts):
    p = _prime(opts)
    u, a, y = _interp_input(data)
    with at(""):
        rep = interp_det_valuation(u, a, y, p)
    return "ok", {"valuation": rep.valuation, "theta": rep.theta, "bound": rep.bound,
                  "bound_holds": rep.holds, "working_precision": rep.precision}


def check_interp_det(data, result, opts):
    p = _prime(opts)
    u, a, y = _interp_input(data)
    d = len(a)
    s = vp(u - 1, p)
    out = [_check("theta_1(d) = d(d-1)/2", result["theta"] == d * (d - 1) // 2),
           _check("bound = theta * v_p(u - 1)", result["bound"] == result["theta"] * s)]
    if max(abs(x) for x in a) * max(abs(x) for x in y) <= 400:
        exact = det_Q([[u ** (ai * yj) for yj in y] for ai in a])
        out.append(_check("valuation of the exact determinant", vp(exact, p) == result["valuation"]))
    else:
        out.append(_check("valuation at higher precision",
                          interp_det_valuation(u, a, y, p, prec=2 * result["working_precision"]).valuation
                          == result["valuation"]))
    out.append(_check("bound comparison", result["bound_holds"] == (result["valuation"] >= result["bound"])))
    return out


# -- power series ---------------------------------------------------------------


def _series_input(data):
    op = field(data, "op")
    if op not in ("exp", "log", "relations", "product-exp"):
        raise InputError("/op", "use exp, log, relations or product-exp")
    raw = field(data, "series")
    if op in ("exp", "log"):
        return op, [parse_series(raw, "/series")], None
    if not isinstance(raw, list) or not raw:
        raise InputError("/series", "expected a nonempty list of series")
    ys = [parse_series(s, f"/series/{i}") for i, s in enumerate(raw)]
    ms = None
    if op == "product-exp":
        ms = [parse_int(x, f"/ms/{i}") for i, x in enumerate(field(data, "ms"))]
        if len(ms) != len(ys):
            raise InputError("/ms", "one exponent per series is required")
    return op, ys, ms


def build_series(data, opts):
    op, ys, ms = _series_input(data)
    with at("/series"):
        if op == "exp":
            return "ok", {"series": series_exp(ys[0]).to_json()}
        if op == "log":
            return "ok", {"series": series_log(ys[0]).to_json()}
        if op == "relations":
            rel = relation_detect(ys)
            return "ok", {"order": rel.order, "valid_to_order": rel.order,
                          "basis": [list(v) for v in rel.basis]}
        holds = product_exp_identity(ys, ms)
        return ("ok" if holds else "failed"), {"identity_holds": holds}


def check_series(data, result, opts):
    op, ys, ms = _series_input(data)
    if op == "exp":
        z = TruncatedSeries.from_json(result["series"])
        return [_check("log(result) = input", series_log(z) == ys[0])]
    if op == "log":
        z = TruncatedSeries.from_json(result["series"])
        return [_check("exp(result) = input", series_exp(z) == ys[0])]
    if op == "relations":
        basis = result["basis"]
        n = len(ys)
        coef = [[y[i] for y in ys] for i in range(1, ys[0].order)]
        ok_rank = len(basis) == n - rank_Q(coef) and (not basis or lattice_rank(basis) == len(basis))
        sat = True
        if basis:
            d, _, _ = snf(transpose(basis))
            sat = all(abs(d[i][i]) == 1 for i in range(len(basis)))
        return [_check("each vector is a relation mod t^T", all(check_relation(ys, v) for v in basis)),
                _check("rank equals n - rank of coefficients", ok_rank),
                _check("lattice is saturated", sat)]
    lhs = TruncatedSeries.one(ys[0].order)
    total = TruncatedSeries(ys[0].order, ())
    for y, m in zip(ys, ms):
        z = series_exp(y)
        lhs = lhs * (z ** m if m >= 0 else z.inverse() ** (-m))
        total = total + y.scale(m)
    return [_check("product identity", result["identity_holds"] == (lhs == series_exp(total)))]


COMMANDS: dict[str, tuple[Callable, Callable]] = {
    "structural-rank": (build_structural_rank, check_structural_rank),
    "det-rep": (build_det_rep, check_det_rep),
    "wm-decompose": (build_wm, check_wm),
    "mcc": (build_mcc, check_mcc),
    "siegel": (build_siegel, check_siegel_cert),
    "mult-rel": (build_mult_rel, check_mult_rel),
    "vandermonde": (build_vandermonde, check_vandermonde),
    "xn": (build_xn, check_xn),
    "theta": (build_theta, check_theta),
    "padic-log": (build_padic_log, check_padic_log),
    "padic-exp": (build_padic_exp, check_padic_exp),
    "hensel": (build_hensel, check_hensel),
    "log-matrix": (build_log_matrix, check_log_matrix),
    "interp-det": (build_interp_det, check_interp_det),
    "series": (build_series, check_series),
}


def build(command: str, data, opts: dict) -> dict:
    """Run a command and wrap the result in a certificate."""
    builder, checker = COMMANDS[command]
    opts = {**DEFAULTS, **opts}
    status, result = builder(data, opts)
    transcript = checker(data, result, opts)
    if status == "ok" and not all(c["ok"] for c in transcript):
        status = "failed"
    return {"schema_version": SCHEMA_VERSION, "tool": "logrank", "version": __version__,
            "command": command, "options": opts, "input": data, "status": status,
            "result": result, "transcript": transcript}


def verify(cert: dict) -> tuple[bool, list[dict]]:
    """Re-run the checks of a certificate; all must pass and match its transcript."""
    for key in ("schema_version", "command", "options", "input", "result", "transcript"):
        if key not in cert:
            raise InputError(f"/{key}", "missing field")
    if cert["schema_version"] != SCHEMA_VERSION:
        raise InputError("/schema_version", f"unsupported schema {cert['schema_version']!r}")
    if cert["command"] not in COMMANDS:
        raise InputError("/command", f"unknown command {cert['command']!r}")
    _, checker = COMMANDS[cert["command"]]
    opts = {**DEFAULTS, **cert["options"]}
    try:
        transcript = checker(cert["input"], cert["result"], opts)
    except InputError:
        raise
    except (KeyError, IndexError, TypeError, ValueError, ArithmeticError) as exc:
        return False, [_check(f"certificate is readable ({type(exc).__name__})", False)]
    ok = all(c["ok"] for c in transcript) and transcript == cert["transcript"]
    return ok, transcript
