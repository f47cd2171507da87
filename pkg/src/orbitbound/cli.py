"""Command-line interface: ``orbitbound <command> ...`` with JSON on stdout.

Exit codes: 0 computed (any verdict), 2 input error, 3 selftest failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import bounds, configaut, jetspace, orbits, suites
from .polyring import PolyError, make_point

SCHEMA_VERSION = "v1"


class InputError(Exception):
    pass


def _schema(cmd: str) -> str:
    return f"orbitbound/{cmd}/{SCHEMA_VERSION}"


def _pt(y) -> list[str]:
    return [str(c) for c in y]


def _load_json(arg: str, what: str):
    text = arg
    if not arg.lstrip().startswith(("{", "[")):
        try:
            text = Path(arg).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read {what} {arg!r}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what} is not valid JSON: {exc}") from exc


def load_system(arg: str) -> orbits.AffineSystem:
    """System file: ``{"n": 1, "N": 1, "maps": [{"name": "f", "coords": ["36 - x1"]}]}``.

    A bare list of coordinate strings is accepted for a map as well.
    """
    data = _load_json(arg, "system")
    if not isinstance(data, dict) or "n" not in data or "maps" not in data:
        raise InputError("system must be an object with 'n' and 'maps'")
    n, N = data["n"], data.get("N", 1)
    if not isinstance(n, int) or not isinstance(N, int):
        raise InputError("'n' and 'N' must be integers")
    maps = []
    for k, entry in enumerate(data["maps"]):
        if isinstance(entry, dict):
            name, coords = entry.get("name", f"f{k}"), entry.get("coords")
        else:
            name, coords = f"f{k}", entry
        if not isinstance(coords, list) or not all(isinstance(c, str) for c in coords):
            raise InputError(f"map {k}: coords must be a list of polynomial strings")
        maps.append((str(name), coords))
    try:
        return orbits.AffineSystem.build(n, maps, N)
    except (PolyError, orbits.OrbitError) as exc:
        raise InputError(str(exc)) from exc


def load_point(arg: str, sys_: orbits.AffineSystem) -> tuple:
    data = _load_json(arg, "point")
    if not isinstance(data, list):
        raise InputError("point must be a JSON array")
    try:
        return sys_.point([c if isinstance(c, (int, str)) else str(c) for c in data])
    except (ValueError, ZeroDivisionError, orbits.OrbitError) as exc:
        raise InputError(f"bad point: {exc}") from exc


def parse_int(text: str, what: str) -> int:
    try:
        return int(text)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{what} must be a decimal integer, got {text!r}") from exc


def parse_pair(text: str) -> bounds.PrimePair:
    parts = text.split(",")
    if len(parts) != 2:
        raise InputError("prime pair must look like p,p'")
    p, q = (parse_int(x.strip(), "prime") for x in parts)
    try:
        return bounds.PrimePair(min(p, q), max(p, q))
    except bounds.BoundError as exc:
        raise InputError(str(exc)) from exc


# report builders (also used by tests)

def verdict_report(decision: orbits.Decision) -> dict:
    v = decision.verdict
    out: dict = {"schema": _schema("decide"), "verdict": v.tag, "reason": None,
                 "orbit": None, "permutations": None, "witness": None}
    if isinstance(v, orbits.Periodic):
        index = {y: i for i, y in enumerate(v.orbit)}
        out["orbit"] = [_pt(y) for y in v.orbit]
        out["permutations"] = {}
        for name, perm in v.permutations.items():
            images = tuple(index[perm[y]] for y in v.orbit)
            out["permutations"][name] = {"images": list(images),
                                         "cycles": configaut.cycle_notation(images)}
    elif isinstance(v, orbits.NotPeriodic):
        out["reason"] = v.reason.value
        if v.orbit is not None:
            out["orbit"] = [_pt(y) for y in v.orbit]
        w = v.witness
        if v.reason is orbits.Reason.FINITE_NOT_PERMUTED:
            out["witness"] = {"generator": w["generator"],
                              "collision": [_pt(w["collision"][0]), _pt(w["collision"][1])],
                              "image": _pt(w["image"]), "unhit": _pt(w["unhit"])}
        else:
            out["witness"] = {"visited": str(w["visited"]), "bound": str(w["bound"])}
    else:
        out["witness"] = {"visited": str(v.visited)}
    b = decision.bound
    out["budget"] = str(decision.budget)
    out["bound"] = {
        "override": None if decision.bound_override is None else str(decision.bound_override),
        "label": b.label if b is not None else "override",
        "primes": list(b.primes) if b is not None else None,
        "log2": bounds.format_log(b.log2_value) if b is not None else None,
    }
    out["steps"] = getattr(v, "steps", 0)
    return out


def bound_report(b: bounds.EffectiveBound) -> dict:
    return {
        "schema": _schema("bound"),
        "n": b.n,
        "primes": list(b.primes),
        "label": b.label,
        "log2": bounds.format_log(b.log2_value),
        "exact": None if b.exact_value is None else bounds.int_to_decimal(b.exact_value),
        "exact_log2": None if b.exact_value is None else bounds.format_log(bounds.log2_int(b.exact_value)),
        "note": b.note,
        "per_prime": {
            str(p): {k: bounds.format_log(v) for k, v in parts.items()}
            for p, parts in b.per_prime.items()
        },
    }


def aut_report(Z: configaut.ConfigScheme, pair: bounds.PrimePair) -> dict:
    group = configaut.aut_group(Z)
    out = {
        "schema": _schema("aut"),
        "points": [_pt(y) for y in Z.points],
        "weights": [[str(w) for w in row] for row in Z.weights],
        "order": str(group.order),
        "generators": [configaut.cycle_notation(g) for g in group.generators],
        "gamma": {},
        "injective": None,
        "note": "",
    }
    small = Z.size <= 8
    for p in pair:
        data = configaut.level2_data(Z, p)
        entry = {"quotient_size": str(data.quotient_size), "p2_in_m2": data.p2_in_m2,
                 "residue_classes": [sorted(C) for C in sorted(data.classes, key=min)],
                 "elements": None, "torsion_ok": None}
        if small:
            members = [s for s in group.elements() if configaut.gamma_membership(Z, s, p, data)]
            entry["elements"] = [configaut.cycle_notation(s) for s in members]
            entry["torsion_ok"] = configaut.torsion_order_check(Z, p, group=group).ok
        out["gamma"][str(p)] = entry
    if small:
        out["injective"] = configaut.injectivity_check(Z, pair, group=group)
    else:
        out["note"] = "Gamma and injectivity checks are limited to 8 points"
    return out


def jets_report(sys_: orbits.AffineSystem, y: tuple, p: int) -> dict:
    maps = {}
    for name, F in sys_.maps:
        fp = jetspace.jet_fingerprint(F, y, p)
        maps[name] = {"base": [str(c) for c in fp["base"]], "jacobian": fp["jacobian"]}
    return {"schema": _schema("jets"), "prime": p, "point": _pt(y), "maps": maps}


def interpolate_report(seq: list[int]) -> dict:
    res = configaut.lagrange_cycle(seq)
    obstruction = None
    primes = sorted({q for i, a in enumerate(seq) for b in seq[i + 1:]
                     for q in configaut.prime_factors(abs(a - b))})
    for p in primes:
        hit = configaut.mod_p_obstruction(seq, p)
        if hit is not None:
            obstruction = {"p": p, "indices": list(hit)}
            break
    return {
        "schema": _schema("interpolate"),
        "cycle": [str(a) for a in seq],
        "coefficients": [str(c) for c in res.coefficients],
        "polynomial": str(res.poly),
        "integral": res.integral,
        "mod2_obstruction": configaut.mod_p_obstruction(seq, 2) is not None,
        "obstruction": obstruction,
    }


def orbit_report(state: orbits.OrbitState, budget: int) -> dict:
    return {
        "schema": _schema("orbit"),
        "stabilized": state.stabilized,
        "steps": state.steps,
        "size": str(len(state.visited)),
        "budget": str(budget),
        "points": [_pt(y) for y in state.ordered()],
        "frontier": [_pt(y) for y in sorted(state.frontier, key=orbits.point_key)],
    }


# commands

def cmd_decide(args) -> dict:
    sys_ = load_system(args.system)
    x = load_point(args.point, sys_)
    budget = parse_int(args.budget, "budget")
    override = None if args.bound_override is None else parse_int(args.bound_override, "bound override")
    try:
        decision = orbits.decide(sys_, x, budget, override)
    except orbits.OrbitError as exc:
        raise InputError(str(exc)) from exc
    return verdict_report(decision)


def cmd_orbit(args) -> dict:
    sys_ = load_system(args.system)
    x = load_point(args.point, sys_)
    budget = parse_int(args.budget, "budget")
    try:
        state = orbits.orbit_closure(sys_, x, budget)
    except orbits.OrbitError as exc:
        raise InputError(str(exc)) from exc
    return orbit_report(state, budget)


def cmd_bound(args) -> dict:
    n = parse_int(args.n, "n")
    if n < 1:
        raise InputError("n must be >= 1")
    if args.primes:
        pair = parse_pair(args.primes)
    else:
        pair = bounds.choose_primes(parse_int(args.N, "N"))
    return bound_report(bounds.bound_C(n, pair, want_exact=args.exact))


def cmd_aut(args) -> dict:
    data = _load_json(args.points, "points")
    N0 = parse_int(args.N0, "N0")
    if isinstance(data, dict):
        N0 = data.get("N0", N0)
        data = data.get("points")
    if not isinstance(data, list) or not data or not all(isinstance(y, list) for y in data):
        raise InputError("points must be a nonempty JSON array of coordinate arrays")
    n = len(data[0])
    pair = parse_pair(args.prime_pair)
    try:
        pts = [make_point([str(c) for c in y], n, N0) for y in data]
        Z = configaut.weight_matrix(pts, N0)
        if N0 % pair.p == 0 or N0 % pair.q == 0:
            raise InputError(f"primes {pair} must not divide N0={N0}")
        return aut_report(Z, pair)
    except (PolyError, configaut.ConfigError) as exc:
        raise InputError(str(exc)) from exc


def cmd_jets(args) -> dict:
    sys_ = load_system(args.system)
    x = load_point(args.point, sys_)
    p = parse_int(args.prime, "prime")
    if not jetspace.is_prime(p) or sys_.N % p == 0:
        raise InputError(f"prime must be a prime not dividing N={sys_.N}")
    try:
        return jets_report(sys_, x, p)
    except (PolyError, jetspace.JetError) as exc:
        raise InputError(str(exc)) from exc


def cmd_interpolate(args) -> dict:
    try:
        seq = [int(a) for a in args.cycle.split(",") if a.strip()]
    except ValueError as exc:
        raise InputError("cycle must be a comma-separated list of integers") from exc
    try:
        return interpolate_report(seq)
    except configaut.ConfigError as exc:
        raise InputError(str(exc)) from exc


def cmd_selftest(args) -> dict:
    results = suites.run_all(quick=args.quick)
    return {
        "schema": _schema("selftest"),
        "passed": all(r.passed for r in results),
        "suites": [{"name": r.name, "passed": r.passed, "seconds": round(r.seconds, 3),
                    "details": json.loads(json.dumps(r.details, default=str))}
                   for r in results],
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orbitbound", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", help="decide S-periodicity of a point")
    p.add_argument("--system", required=True, help="system JSON file (or inline JSON)")
    p.add_argument("--point", required=True, help="point as a JSON array")
    p.add_argument("--budget", default="10000")
    p.add_argument("--bound-override", default=None)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("orbit", help="orbit closure up to a point budget")
    p.add_argument("--system", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--budget", default="10000")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("bound", help="the effective orbit-size bound")
    p.add_argument("--n", required=True)
    p.add_argument("--primes", default=None, help="p,p' (default: two smallest primes not dividing N)")
    p.add_argument("--N", default="1")
    p.add_argument("--exact", action="store_true")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("aut", help="automorphisms of a point configuration")
    p.add_argument("--points", required=True, help="JSON array of coordinate-string arrays")
    p.add_argument("--prime-pair", default="2,3")
    p.add_argument("--N0", default="1")
    p.set_defaults(func=cmd_aut)

    p = sub.add_parser("jets", help="jet fingerprints of each generator")
    p.add_argument("--system", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--prime", required=True)
    p.set_defaults(func=cmd_jets)

    p = sub.add_parser("interpolate", help="interpolate a cyclic sequence")
    p.add_argument("--cycle", required=True)
    p.set_defaults(func=cmd_interpolate)

    p = sub.add_parser("selftest", help="run the property suites")
    p.add_argument("--quick", action="store_true", help="about a tenth of the samples")
    p.set_defaults(func=cmd_selftest)
    return parser


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    t0 = time.perf_counter()
    try:
        report = args.func(args)
    except InputError as exc:
        json.dump({"schema": _schema("error"), "error": str(exc)}, out)
        out.write("\n")
        return 2
    report["seconds"] = round(time.perf_counter() - t0, 6)
    json.dump(report, out, indent=2)
    out.write("\n")
    if args.command == "selftest" and not report["passed"]:
        return 3
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
