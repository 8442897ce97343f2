"""Command line front end.

A DGLA is given as a JSON file::

    {"basis": [["x", 1], ["u", 1], ["v", 2], ["w", 2]],
     "d": [["u", "v", "1"]],
     "bracket": [["x", "x", "v", "1"], ["x", "u", "w", "1"]],
     "eta": [["v", "u", "1"]],
     "norm": {"mode": "banach", "weights": {"x": "2"}, "eps": "1/2"},
     "options": {"cap": 4, "probe_normalization": false}}

``d`` entries read d(from) += c·to, ``bracket`` entries [a, b] += c·t, and
``eta`` entries η(from) += c·to.  Only ``basis`` is required.  Rationals are
strings "p/q" (integers are accepted as JSON numbers; floats are not).

Exit codes: 0 every verdict passed, 1 some verification failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from . import bounds as B
from .coalgebra import Verdict, morphism_check
from .graded import ANTISYMMETRIC, GradedSpace, LinearMap, MultiMap, canonicalize, fmt, scalar
from .transfer import (DGLA, MC, REMARK, Splitting, build_splitting, decompose, hodge,
                       kuranishi_series, lift_agreement, recursion_oracle, round_trip,
                       splitting_identities, transfer, validate_dgla)
from .trees import catalan

DEFAULT_CAP = 4
MAX_CAP = 6
PASS, FAIL = "PASS", "FAIL"


class SpecError(ValueError):
    """Invalid input; ``errors`` holds one located message per problem."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass
class NormSpec:
    mode: str = B.BANACH
    weights: dict = field(default_factory=dict)    # basis name -> Fraction
    exponents: dict = field(default_factory=dict)  # basis name -> int
    eps: Fraction = Fraction(1, 2)


@dataclass
class DglaSpec:
    L: DGLA
    eta: LinearMap | None = None
    norm: NormSpec | None = None
    cap: int = DEFAULT_CAP
    probe: bool = False

    @property
    def space(self) -> GradedSpace:
        return self.L.space

    def splitting(self) -> Splitting:
        return Splitting(self.eta) if self.eta is not None else build_splitting(self.L)


# -- parsing ----------------------------------------------------------------

def _rational(x, where, errors):
    if isinstance(x, bool) or isinstance(x, float):
        errors.append(f"{where}: {x!r} is not an exact rational (write it as a \"p/q\" string)")
        return None
    try:
        return scalar(x)
    except (TypeError, ValueError, ZeroDivisionError):
        errors.append(f"{where}: {x!r} is not a rational number")
        return None


def _entries(raw, key, width, errors):
    if raw is None:
        return []
    if not isinstance(raw, list):
        errors.append(f"{key}: expected a list")
        return []
    out = []
    for i, e in enumerate(raw):
        if not isinstance(e, list) or len(e) != width:
            errors.append(f"{key}[{i}]: expected a list of {width} items")
            continue
        out.append((f"{key}[{i}]", e))
    return out


def _linear(raw, key, space, degree, errors):
    index = {n: i for i, n in enumerate(space.names)}
    triples = []
    for where, (a, b, c) in _entries(raw, key, 3, errors):
        bad = [n for n in (a, b) if n not in index]
        for n in bad:
            errors.append(f"{where}: unknown basis name {n!r}")
        c = _rational(c, where, errors)
        if bad or c is None:
            continue
        i, j = index[a], index[b]
        if space.degrees[j] - space.degrees[i] != degree:
            errors.append(f"{where}: {a} has degree {space.degrees[i]} and {b} has degree "
                          f"{space.degrees[j]}, but {key} has degree {degree:+d}")
            continue
        triples.append((i, j, c))
    return LinearMap.from_entries(space, space, degree, triples)


def _bracket(raw, space, errors):
    index = {n: i for i, n in enumerate(space.names)}
    seen = {}
    triples = []
    for where, (a, b, t, c) in _entries(raw, "bracket", 4, errors):
        bad = [n for n in (a, b, t) if n not in index]
        for n in bad:
            errors.append(f"{where}: unknown basis name {n!r}")
        c = _rational(c, where, errors)
        if bad or c is None:
            continue
        i, j, k = index[a], index[b], index[t]
        degs = space.degrees
        if degs[i] + degs[j] != degs[k]:
            errors.append(f"{where}: [{a}, {b}] has degree {degs[i] + degs[j]} but {t} has "
                          f"degree {degs[k]}")
            continue
        sign, canon = canonicalize((i, j), degs, ANTISYMMETRIC)
        if not sign:
            if c:
                errors.append(f"{where}: [{a}, {a}] vanishes for even {a}")
            continue
        if (canon, k) in seen:
            errors.append(f"{where}: repeats the value of [{a}, {b}] at {t} "
                          f"(already set by {seen[canon, k]})")
            continue
        seen[canon, k] = where
        triples.append(((i, j), k, c))
    return MultiMap.from_entries(space, space, 2, 0, ANTISYMMETRIC, triples)


def _basis(raw, errors):
    if not isinstance(raw, list) or not raw:
        errors.append("basis: expected a nonempty list of [name, degree] pairs")
        return None
    pairs, names = [], set()
    for i, e in enumerate(raw):
        if (not isinstance(e, list) or len(e) != 2 or not isinstance(e[0], str)
                or not isinstance(e[1], int) or isinstance(e[1], bool)):
            errors.append(f"basis[{i}]: expected [name, integer degree]")
            continue
        if e[0] in names:
            errors.append(f"basis[{i}]: duplicate name {e[0]!r}")
            continue
        names.add(e[0])
        pairs.append((e[0], e[1]))
    return GradedSpace(tuple(pairs)) if pairs and len(pairs) == len(raw) else None


def _norm(raw, space, errors):
    if raw is None:
        return None
    if not isinstance(raw, dict):
        errors.append("norm: expected an object")
        return None
    ns = NormSpec()
    unknown = sorted(set(raw) - {"mode", "weights", "exponents", "eps"})
    for k in unknown:
        errors.append(f"norm: unknown field {k!r}")
    ns.mode = raw.get("mode", B.BANACH)
    if ns.mode not in (B.BANACH, B.SCALED):
        errors.append(f"norm.mode: expected \"{B.BANACH}\" or \"{B.SCALED}\"")
    for key, conv in (("weights", _rational), ("exponents", None)):
        table = raw.get(key, {})
        if not isinstance(table, dict):
            errors.append(f"norm.{key}: expected an object keyed by basis name")
            continue
        for name, val in table.items():
            where = f"norm.{key}.{name}"
            if name not in space.names:
                errors.append(f"{where}: unknown basis name {name!r}")
                continue
            if conv is None:
                if not isinstance(val, int) or isinstance(val, bool) or val < 0:
                    errors.append(f"{where}: expected a nonnegative integer")
                    continue
                ns.exponents[name] = val
            else:
                w = conv(val, where, errors)
                if w is not None and w <= 0:
                    errors.append(f"{where}: weights must be positive")
                elif w is not None:
                    ns.weights[name] = w
    if ns.mode == B.BANACH and ns.exponents:
        errors.append("norm.exponents: only meaningful in scaled mode")
    if "eps" in raw:
        e = _rational(raw["eps"], "norm.eps", errors)
        if e is not None and not 0 < e < 1:
            errors.append("norm.eps: expected 0 < eps < 1")
        elif e is not None:
            ns.eps = e
    return ns


def check_cap(cap, where="cap") -> int:
    if not isinstance(cap, int) or isinstance(cap, bool) or not 2 <= cap <= MAX_CAP:
        raise SpecError([f"{where}: expected an integer between 2 and {MAX_CAP}, got {cap!r}"])
    return cap


def parse_spec(text: str) -> DglaSpec:
    """Parse and validate a JSON DGLA description; raises SpecError listing every problem."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError([f"line {exc.lineno} column {exc.colno}: malformed JSON ({exc.msg})"])
    if not isinstance(raw, dict):
        raise SpecError(["top level: expected a JSON object"])
    errors = [f"top level: unknown field {k!r}"
              for k in sorted(set(raw) - {"basis", "d", "bracket", "eta", "norm", "options"})]
    space = _basis(raw.get("basis"), errors)
    if space is None:
        raise SpecError(errors)
    d = _linear(raw.get("d"), "d", space, 1, errors)
    br = _bracket(raw.get("bracket"), space, errors)
    eta = _linear(raw["eta"], "eta", space, -1, errors) if "eta" in raw else None
    norm = _norm(raw.get("norm"), space, errors)
    opts = raw.get("options", {})
    cap, probe = DEFAULT_CAP, False
    if not isinstance(opts, dict):
        errors.append("options: expected an object")
    else:
        for k in sorted(set(opts) - {"cap", "probe_normalization"}):
            errors.append(f"options: unknown field {k!r}")
        try:
            cap = check_cap(opts.get("cap", DEFAULT_CAP), "options.cap")
        except SpecError as exc:
            errors += exc.errors
        probe = opts.get("probe_normalization", False)
        if not isinstance(probe, bool):
            errors.append("options.probe_normalization: expected true or false")
    if errors:
        raise SpecError(errors)
    L = DGLA(space, d, br)
    verdict = validate_dgla(L)
    for axiom, names in verdict.violations:
        msg = f"{axiom} fails at ({', '.join(names)})"
        if axiom == "d squared":
            i = space.index(names[0])
            dd = d(d.columns[i])
            msg += ": d(d(%s)) = %s" % (names[0], " + ".join(
                f"{fmt(c)} {space.names[t]}" for t, c in sorted(dd.items())))
        errors.append(msg)
    if eta is not None and not errors:
        for ident, ok in splitting_identities(L, eta).items():
            if not ok:
                errors.append(f"eta: splitting identity {ident} fails")
    if errors:
        raise SpecError(errors)
    return DglaSpec(L, eta, norm, cap, probe)


def _linear_entries(m: LinearMap) -> list:
    names = m.source.names
    return [[names[j], m.target.names[i], fmt(c)]
            for j, col in enumerate(m.columns) for i, c in sorted(col.items())]


def serialize_spec(spec: DglaSpec) -> str:
    """Canonical JSON for ``spec``; parse_spec inverts it."""
    sp = spec.space
    out = {"basis": [[n, d] for n, d in sp.basis],
           "d": _linear_entries(spec.L.d),
           "bracket": [[sp.names[i], sp.names[j], sp.names[t], fmt(c)]
                       for (i, j), v in sorted(spec.L.bracket.coeffs.items())
                       for t, c in sorted(v.items())]}
    if spec.eta is not None:
        out["eta"] = _linear_entries(spec.eta)
    if spec.norm is not None:
        ns = spec.norm
        out["norm"] = {"mode": ns.mode,
                       "weights": {n: fmt(ns.weights[n]) for n in sp.names if n in ns.weights},
                       "exponents": {n: ns.exponents[n] for n in sp.names if n in ns.exponents},
                       "eps": fmt(ns.eps)}
    out["options"] = {"cap": spec.cap, "probe_normalization": spec.probe}
    return json.dumps(out, indent=2, ensure_ascii=False) + "\n"


# -- report helpers ---------------------------------------------------------

def _entries_of(m: MultiMap) -> list:
    sn, tn = m.source.names, m.target.names
    return [[[sn[i] for i in key], tn[t], fmt(c)]
            for key, v in sorted(m.coeffs.items()) for t, c in sorted(v.items())]


def _components(maps: dict) -> dict:
    return {str(n): _entries_of(m) for n, m in sorted(maps.items())}


def _verdict(v: Verdict) -> dict:
    out = {"status": PASS if v else FAIL}
    if not v:
        out["residual_terms"] = {str(n): c for n, c in v.summary().items()}
        witness = {}
        for n, r in sorted(v.residuals.items()):
            key = min(r.coeffs)
            witness[str(n)] = [r.source.names[i] for i in key]
        out["witness"] = witness
    return out


def _flag(ok: bool) -> str:
    return PASS if ok else FAIL


def _all_pass(obj) -> bool:
    if isinstance(obj, dict):
        return all(_all_pass(v) for k, v in obj.items() if k not in ("probed", "printed"))
    if isinstance(obj, list):
        return all(_all_pass(v) for v in obj)
    return obj != FAIL


def term_estimate(cap: int) -> int:
    """Σ_{n ≤ cap} |Ot(n)|·n!, the number of tree terms evaluated per input tuple."""
    return sum(catalan(n - 1) * factorial(n) for n in range(2, cap + 1))


# -- commands ---------------------------------------------------------------

def cmd_check(spec: DglaSpec, args) -> dict:
    split = spec.splitting()
    hd = hodge(spec.L, split)
    # no transfer runs here; the field is kept so every report has the same head
    return {"command": "check",
            "normalization": None,
            "dimension": spec.L.dim,
            "dgla": PASS,
            "splitting": "given" if spec.eta is not None else "constructed",
            "splitting_identities": {k: _flag(v)
                                     for k, v in splitting_identities(spec.L, split.eta).items()},
            "cohomology": {"basis": [list(p) for p in hd.H.basis],
                           "betti": {str(k): v for k, v in sorted(hd.betti().items())}},
            "contractible": {"basis": [list(p) for p in hd.F.basis]}}


def _oracle(spec, res, cap) -> dict:
    mu, f = recursion_oracle(spec.L, res.hodge, cap)
    out = {}
    for n in range(2, cap + 1):
        out[f"mu_{n}"] = _flag(mu.bracket(n) == res.mu.bracket(n))
        out[f"f_{n}"] = _flag(f.component(n) == res.f.component(n))
    return out


def cmd_transfer(spec: DglaSpec, args) -> dict:
    cap = args.cap or spec.cap
    res = transfer(spec.L, spec.splitting(), cap, probe=args.probe_normalization or spec.probe)
    return {"command": "transfer",
            "cap": cap,
            "normalization": res.normalization,
            "probed": {k: _flag(v) for k, v in res.probed.items()},
            "verdicts": {"jacobi": _verdict(res.jacobi),
                         "f_morphism": _verdict(res.f_check),
                         "g_morphism": _verdict(res.g_check),
                         "oracle": _oracle(spec, res, cap)},
            "H": [list(p) for p in res.hodge.H.basis],
            "F": [list(p) for p in res.hodge.F.basis],
            "mu": _components(res.mu.mu),
            "f": _components(res.f.f),
            "g": _components(res.g.f)}


def cmd_invert(spec: DglaSpec, args) -> dict:
    cap = args.cap or spec.cap
    split = spec.splitting()
    res = transfer(spec.L, split, cap)
    plain, plain_inv = decompose(spec.L, split, cap, res.hodge, res.f, res.g)
    iso, inv = decompose(spec.L, split, cap, res.hodge, res.f, res.g, complete=True)
    rt = round_trip(iso, inv)
    prt = round_trip(plain, plain_inv)
    return {"command": "invert",
            "cap": cap,
            "normalization": res.normalization,
            "probed": {k: _flag(v) for k, v in res.probed.items()},
            "construction": "completed",
            "printed": {"iso_morphism": _verdict(morphism_check(plain)),
                        "round_trip": {k: _flag(v) for k, v in prt.items()}},
            "verdicts": {"transfer": _flag(res.ok),
                         "iso_morphism": _verdict(morphism_check(iso)),
                         "inverse_morphism": _verdict(morphism_check(inv)),
                         "round_trip": {k: _flag(v) for k, v in rt.items()}},
            "source": [list(p) for p in iso.source.space.basis],
            "iso": _components(iso.f),
            "inverse": _components(inv.f)}


def _parse_point(text: str, L: DGLA) -> dict:
    v, errors = {}, []
    for i, part in enumerate(p for p in text.split(",") if p.strip()):
        name, sep, val = part.partition("=")
        name = name.strip()
        where = f"--point item {i + 1}"
        if not sep:
            errors.append(f"{where}: expected name=value")
            continue
        if name not in L.space.names:
            errors.append(f"{where}: unknown basis name {name!r}")
            continue
        j = L.space.index(name)
        if L.space.degrees[j] != 1:
            errors.append(f"{where}: {name} has degree {L.space.degrees[j]}, the Kuranishi map "
                          "takes degree-1 elements")
            continue
        c = _rational(val.strip(), where, errors)
        if c:
            v[j] = v.get(j, Fraction(0)) + c
    if errors:
        raise SpecError(errors)
    return v


def _vector(v: dict, space: GradedSpace) -> dict:
    return {space.names[i]: fmt(c) for i, c in sorted(v.items()) if c}


def cmd_kuranishi(spec: DglaSpec, args) -> dict:
    cap = args.cap or spec.cap
    point = _parse_point(args.point, spec.L)
    split = spec.splitting()
    res = transfer(spec.L, split, cap)
    hd = res.hodge
    x = hd.coords_H(point)
    series = {}
    for conv in (REMARK, MC):
        s = kuranishi_series(res.mu, x, cap, conv)
        total: dict = {}
        for n, v in s.items():
            for i, c in v.items():
                total[i] = total.get(i, Fraction(0)) + c
        series[conv] = {"terms": {str(n): _vector(v, hd.H) for n, v in s.items()},
                        "value": _vector(total, hd.H)}
    agree = lift_agreement(spec.L, hd, res.mu, x, cap)
    return {"command": "kuranishi",
            "cap": cap,
            "normalization": res.normalization,
            "probed": {k: _flag(v) for k, v in res.probed.items()},
            "point": _vector(point, spec.space),
            "point_H": _vector(x, hd.H),
            "remark": series[REMARK],
            "mc": series[MC],
            "verdicts": {"transfer": _flag(res.ok),
                         "mc_matches_lift": {str(m): _flag(ok) for m, ok in agree.items()}}}


def _model(ns: NormSpec, space: GradedSpace, pivot_names) -> B.NormModel:
    w = [ns.weights.get(p, Fraction(1)) for p in pivot_names]
    if ns.mode == B.SCALED:
        return B.NormModel.scaled(space, w, [ns.exponents.get(p, 0) for p in pivot_names])
    return B.NormModel.banach(space, w)


def _pivot(name: str) -> str:
    return name[2:-1]


def cmd_bounds(spec: DglaSpec, args) -> dict:
    cap = args.cap or spec.cap
    ns = spec.norm or NormSpec()
    eps = ns.eps
    if args.eps is not None:
        errors = []
        eps = _rational(args.eps, "--eps", errors)
        if eps is not None and not 0 < eps < 1:
            errors.append("--eps: expected 0 < eps < 1")
        if errors:
            raise SpecError(errors)
    La, sa = B.adapted(spec.L, spec.splitting())
    model = _model(ns, La.space, [_pivot(n) for n in La.space.names])
    table = B.measure_mu_bounds(La, sa, model, cap, eps)
    res = transfer(La, sa, cap)
    iso, _ = decompose(La, sa, cap, res.hodge, res.f, res.g, complete=True)
    src_model = _model(ns, iso.source.space, [_pivot(n) for n in iso.source.space.names])
    cert, inv = B.certify_morphism_inverse(iso, src_model, model, eps)
    maj = B.gamma(20)
    return {"command": "bounds",
            "cap": cap,
            "eps": fmt(eps),
            "mode": ns.mode,
            "normalization": res.normalization,
            "frame": [list(p) for p in La.space.basis],
            "constants": {"c": fmt(table.c), "k": fmt(table.k), "kappa": fmt(table.kappa)},
            "mu_bounds": [{"n": r.n, "norm1": fmt(r.measured1), "bound1": fmt(r.bound1),
                           "norm0": fmt(r.measured0), "bound0": fmt(r.bound0),
                           "status": _flag(r.ok)} for r in table.rows],
            "majorant": {"gamma": [fmt(maj[p]) for p in range(1, 9)],
                         "positive_to_20": _flag(maj.positive()),
                         "convolution_to_8": _flag(maj.convolution_ok(8, 8))},
            "stirling": _flag(B.stirling_check(max(cap, 20))),
            "inverse_certificate": {"status": _flag(cert.ok),
                                    "C": fmt(cert.C) if cert.C is not None else None,
                                    "R": fmt(cert.R) if cert.R is not None else None,
                                    "C_prime": fmt(cert.Cp) if cert.Cp is not None else None,
                                    "R_prime": fmt(cert.Rp) if cert.Rp is not None else None,
                                    "margins": {str(q): fmt(m) for q, m in cert.margins.items()},
                                    "reason": cert.reason}}


COMMANDS = {"check": cmd_check, "transfer": cmd_transfer, "invert": cmd_invert,
            "kuranishi": cmd_kuranishi, "bounds": cmd_bounds}


# -- output -----------------------------------------------------------------

def _text(obj, indent=0) -> list:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines += _text(v, indent + 1)
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, dict):
                lines.append(f"{pad}-")
                lines += _text(v, indent + 1)
            else:
                lines.append(f"{pad}- {_inline(v)}")
    else:
        lines.append(f"{pad}{_inline(obj)}")
    return lines


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _inline(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_inline(x)}" for k, x in v.items()) + "}"
    return "null" if v is None else str(v)


def render(report: dict, output: str) -> str:
    if output == "json":
        return json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    return "\n".join(_text(report)) + "\n"


# -- entry point ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="homotransfer",
                                description="Minimal models of finite-dimensional DGLAs.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(name, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("spec", help="JSON spec file, or - for stdin")
        s.add_argument("--output", choices=("json", "text"), default="json")
        s.add_argument("--timing", action="store_true", help="add wall-clock seconds")
        return s

    common("check", "validate the DGLA and the splitting")
    s = common("transfer", "minimal model μ and the morphisms f, g")
    s.add_argument("--cap", type=int)
    s.add_argument("--probe-normalization", action="store_true",
                   help="evaluate every normalization reading")
    s = common("invert", "decomposition isomorphism and its inverse")
    s.add_argument("--cap", type=int)
    s = common("kuranishi", "Kuranishi map at a degree-1 point")
    s.add_argument("--point", required=True, help='coordinates, e.g. "x=1,u=1/2"')
    s.add_argument("--cap", type=int)
    s = common("bounds", "norm estimates and convergence certificates")
    s.add_argument("--eps")
    s.add_argument("--cap", type=int)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for name in ("cap", "probe_normalization", "eps", "point"):
        if not hasattr(args, name):
            setattr(args, name, None)
    try:
        if args.cap is not None:
            check_cap(args.cap, "--cap")
        if args.spec == "-":
            text = sys.stdin.read()
        else:
            with open(args.spec, encoding="utf-8") as fh:
                text = fh.read()
        spec = parse_spec(text)
        cap = args.cap or spec.cap
        if cap > DEFAULT_CAP:
            print(f"warning: cap {cap} evaluates about {term_estimate(cap)} tree terms per "
                  "input tuple; this can take minutes", file=sys.stderr)
        start = time.perf_counter()
        report = COMMANDS[args.command](spec, args)
    except OSError as exc:
        return _input_error(args, [f"{args.spec}: {exc.strerror}"])
    except SpecError as exc:
        return _input_error(args, exc.errors)
    ok = _all_pass(report.get("verdicts", {})) and _all_pass(
        {k: v for k, v in report.items() if k not in ("verdicts", "probed", "printed")})
    report = {"status": PASS if ok else FAIL, **report}
    if args.timing:
        report["seconds"] = round(time.perf_counter() - start, 3)
    sys.stdout.write(render(report, args.output))
    return 0 if ok else 1


def _input_error(args, errors) -> int:
    for e in errors:
        print(f"error: {e}", file=sys.stderr)
    if args.output == "json":
        sys.stdout.write(render({"status": "INPUT_ERROR", "errors": errors}, "json"))
    return 2


if __name__ == "__main__":
    sys.exit(main())
