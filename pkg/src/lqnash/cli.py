"""Command-line surface: solve single games, sweep the dynamics gain,
cross-verify against the brute-force oracles, and re-derive the elimination
quintic through the Buchberger engine.

Exit codes: 0 ok, 2 invalid input, 3 internal-consistency violation,
4 oracle disagreement.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from fractions import Fraction

from .exactalg import UniPoly, isolate_real_roots, refine_root
from .game import (
    GameParams,
    InvalidGameError,
    TrivialGame,
    cost,
    normalize,
    renormalize_equilibrium,
)
from .groebner import EliminationError, buchberger, elimination_polynomial
from .oracle import (
    SharedComponentError,
    br_iteration,
    grid_scan,
    resultant_elimination,
    simulate_cost,
)
from .solver import (
    ConsistencyError,
    DegenerateGameError,
    SolveReport,
    build_g,
    solve,
    stationarity_system,
)
from . import sweep as sweep_mod
from .sweep import ConfigError, format_float

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INCONSISTENT = 3
EXIT_DISAGREE = 4


# ---------------------------------------------------------------------------
# Canonical JSON: sorted keys, two-space indent, 12-significant-digit floats.
# Parsing a document and re-serializing it is byte-identical.
# ---------------------------------------------------------------------------


def _float_token(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    if x == 0.0:
        return "0"
    return format(x, ".12g")


def _serialize(obj, indent: int) -> str:
    pad = "  " * indent
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _float_token(obj)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        inner = ",\n".join(pad + "  " + _serialize(v, indent + 1) for v in obj)
        return "[\n" + inner + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner = ",\n".join(
            pad + "  " + json.dumps(str(k)) + ": " + _serialize(v, indent + 1)
            for k, v in sorted(obj.items())
        )
        return "{\n" + inner + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def canonical_dumps(obj) -> str:
    return _serialize(obj, 0) + "\n"


def parse_rational(text: str) -> Fraction:
    """Exact rational from an integer, fraction 'p/q', or decimal string."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def parse_number(text: str) -> Fraction:
    """Rational if the text parses exactly, otherwise the exact value of the float."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        pass
    try:
        value = float(text)
    except ValueError as exc:
        raise ValueError(f"not a number: {text!r}") from exc
    if not math.isfinite(value):
        raise ValueError(f"not a finite number: {text!r}")
    return Fraction(value)


def format_poly(p: UniPoly, var: str = "k2") -> str:
    if p.is_zero:
        return "0"
    parts = []
    for i in range(p.degree, -1, -1):
        c = p.coeffs[i]
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = f"{mag}"
        else:
            power = var if i == 1 else f"{var}^{i}"
            body = power if mag == 1 else f"{mag}*{power}"
        parts.append(("-" if c < 0 else "+", body))
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


# ---------------------------------------------------------------------------
# Argument plumbing
# ---------------------------------------------------------------------------


_GAME_FLAGS = ("a", "q1", "q2", "r1", "r2")
_OPT_FLAGS = ("b1", "b2", "x0")


def _add_game_flags(sp: argparse.ArgumentParser) -> None:
    for name in _GAME_FLAGS:
        sp.add_argument(f"--{name}", required=True)
    sp.add_argument("--b1", default="1")
    sp.add_argument("--b2", default="1")
    sp.add_argument("--x0", default="1")


def _params_from_args(args, parser=parse_number) -> GameParams:
    values = {}
    for name in _GAME_FLAGS + _OPT_FLAGS:
        values[name] = parser(getattr(args, name))
    return GameParams(**values)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lqnash",
        description="Exact Nash equilibria of scalar two-player discrete-time LQ games",
    )
    ap.add_argument("--seed", type=int, default=None, help="seed for randomized verify starts")
    ap.add_argument("--threads", type=int, default=1, help="worker processes for sweeps")
    ap.add_argument("--quiet", action="store_true", help="suppress informational output")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="solve one game and print the report")
    _add_game_flags(sp)
    sp.add_argument("--format", choices=("json", "table"), default="json")

    sp = sub.add_parser("sweep", help="run a parameter sweep from a JSON config")
    sp.add_argument("config", help="path to the sweep configuration")

    sp = sub.add_parser("verify", help="cross-check one game against all oracles")
    _add_game_flags(sp)
    sp.add_argument("--grid-n", type=int, default=512)
    sp.add_argument("--tol", type=float, default=1e-6)

    sp = sub.add_parser("groebner-check", help="re-derive the quintic with Buchberger")
    _add_game_flags(sp)
    return ap


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------


def _equilibrium_doc(e) -> dict:
    return {
        "k1": e.k1,
        "k2": e.k2,
        "a_cl": e.a_cl,
        "j1": e.j1,
        "j2": e.j2,
        "residual_norm": e.residual_norm,
        "root_multiplicity": e.root_multiplicity,
    }


def _params_doc(params: GameParams) -> dict:
    return {name: float(getattr(params, name)) for name in _GAME_FLAGS + _OPT_FLAGS}


def solve_document(params: GameParams, report: SolveReport) -> dict:
    return {
        "params": _params_doc(params),
        "trivial": False,
        "g2_coefficients": [str(c) for c in report.g2.coeffs],
        "g_scale": 2,
        "delta": {
            "exact": str(report.delta),
            "float": sweep_mod._safe_float(report.delta),
            "sign": report.delta_sign,
        },
        "real_roots_total": report.real_roots_total,
        "roots_below_zero": report.roots_below_zero,
        "roots_above_a": report.roots_above_a,
        "n_nash": report.n_nash,
        "equilibria": [_equilibrium_doc(e) for e in report.equilibria],
        "theorem_flags": {
            "existence": report.theorem_flags.existence,
            "at_most_three": report.theorem_flags.at_most_three,
            "delta_consistency": report.theorem_flags.delta_consistency,
        },
    }


def trivial_document(params: GameParams) -> dict:
    x0sq = float(params.x0) ** 2
    return {
        "params": _params_doc(params),
        "trivial": True,
        "n_nash": 1,
        "equilibria": [
            {
                "k1": 0.0,
                "k2": 0.0,
                "a_cl": 0.0,
                "j1": float(params.q1) * x0sq,
                "j2": float(params.q2) * x0sq,
                "residual_norm": 0.0,
                "root_multiplicity": 1,
            }
        ],
    }


def _print_table(doc: dict) -> None:
    print(f"{'':>4}{'k1':>18}{'k2':>18}{'a_cl':>14}{'j1':>16}{'j2':>16}")
    for i, e in enumerate(doc["equilibria"], 1):
        print(
            f"{i:>4}{format_float(e['k1']):>18}{format_float(e['k2']):>18}"
            f"{format_float(e['a_cl']):>14}{format_float(e['j1']):>16}{format_float(e['j2']):>16}"
        )
    if not doc.get("trivial"):
        print(f"delta = {doc['delta']['float']:.6g} (sign {doc['delta']['sign']}), "
              f"{doc['n_nash']} equilibrium(s)")


def cmd_solve(args) -> int:
    try:
        params = _params_from_args(args)
        params.validate()
    except (ValueError, InvalidGameError) as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        report = solve(params)
        doc = solve_document(params, report)
    except TrivialGame:
        doc = trivial_document(params)
    except InvalidGameError as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ConsistencyError, DegenerateGameError) as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    if args.format == "table":
        _print_table(doc)
    else:
        sys.stdout.write(canonical_dumps(doc))
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def cmd_sweep(args) -> int:
    try:
        config = sweep_mod.load_config(args.config)
    except ConfigError as exc:
        print(f"invalid sweep config: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        rows = sweep_mod.run_sweep(config, threads=max(1, args.threads))
        csv_text = sweep_mod.rows_to_csv(rows)
    except TrivialGame:
        print("invalid sweep config: a_grid includes a = 0", file=sys.stderr)
        return EXIT_INVALID
    except (ConsistencyError, DegenerateGameError) as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    sweep_mod.write_atomic(config.outputs.csv, csv_text)
    if config.outputs.svg:
        sweep_mod.write_atomic(config.outputs.svg, sweep_mod.render_svg(rows, config))
    if config.outputs.json:
        sweep_mod.write_atomic(
            config.outputs.json, canonical_dumps(sweep_mod.rows_to_json_doc(rows))
        )
    if not args.quiet:
        print(f"wrote {len(rows)} rows to {config.outputs.csv}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _match_sets(found: list, expected: list, tol: float) -> tuple[bool, float, str]:
    """Pairwise set agreement within tol; reports the worst deviation."""
    if len(found) != len(expected):
        return False, math.inf, f"{len(found)} pairs vs {len(expected)}"
    worst = 0.0
    used = [False] * len(expected)
    for f in found:
        best, best_i = math.inf, -1
        for i, e in enumerate(expected):
            if used[i]:
                continue
            d = max(abs(f[0] - e[0]), abs(f[1] - e[1]))
            if d < best:
                best, best_i = d, i
        if best_i < 0 or best > tol:
            return False, best, f"pair ({f[0]:.9g}, {f[1]:.9g}) unmatched (deviation {best:.3g})"
        used[best_i] = True
        worst = max(worst, best)
    return True, worst, ""


def cmd_verify(args) -> int:
    try:
        params = _params_from_args(args)
        params.validate()
        if params.a == 0:
            print("verify does not apply to the trivial game a = 0", file=sys.stderr)
            return EXIT_INVALID
    except (ValueError, InvalidGameError) as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID
    tol = args.tol
    try:
        report = solve(params)
    except (ConsistencyError, DegenerateGameError) as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    norm = normalize(params)
    solved = [renormalize_equilibrium(norm, (e.k1, e.k2)) for e in report.equilibria]
    solved = [(float(k1), float(k2)) for k1, k2 in solved]
    a = float(norm.a)
    failures = []
    lines = [f"solve: {len(solved)} equilibrium(s), delta sign {report.delta_sign}"]

    scanned = grid_scan(norm, args.grid_n)
    ok, worst, detail = _match_sets(scanned, solved, tol)
    lines.append(
        f"grid_scan(n={args.grid_n}): "
        + (f"agree ({len(scanned)} pairs, max deviation {worst:.3g})" if ok else f"DISAGREE: {detail}")
    )
    if not ok:
        failures.append(("grid_scan", detail))

    rng = random.Random(args.seed)
    starts = []
    for i in range(1, 9):
        base = a * i / 9.0
        if args.seed is not None:
            base += rng.uniform(-a / 18.0, a / 18.0)
        starts.append(min(max(base, 1e-12), a - 1e-12))
    converged = 0
    for s in starts:
        res = br_iteration(norm, s, max_iter=500, tol=tol / 100.0)
        if not res.converged:
            continue
        converged += 1
        best = min(
            (max(abs(res.k1 - e[0]), abs(res.k2 - e[1])) for e in solved), default=math.inf
        )
        if best > 10 * tol:
            detail = f"fixed point ({res.k1:.9g}, {res.k2:.9g}) not among solved pairs"
            failures.append(("br_iteration", detail))
            lines.append(f"br_iteration: DISAGREE: {detail}")
            break
    else:
        lines.append(f"br_iteration: agree ({converged}/8 starts converged, all matched)")

    try:
        res_poly = resultant_elimination(norm)
        res_roots = []
        for iv in isolate_real_roots(res_poly):
            res_roots.append(float(refine_root(res_poly, iv, Fraction(1, 2**50))))
        for _, k2 in solved:
            best = min((abs(k2 - r) for r in res_roots), default=math.inf)
            if best > tol:
                detail = f"equilibrium k2 {k2:.9g} is not a resultant root (distance {best:.3g})"
                failures.append(("resultant_elimination", detail))
                lines.append(f"resultant_elimination: DISAGREE: {detail}")
                break
        else:
            lines.append(
                f"resultant_elimination: agree (degree {res_poly.degree}, "
                f"{len(res_roots)} real roots cover all equilibria)"
            )
    except SharedComponentError as exc:
        failures.append(("resultant_elimination", str(exc)))
        lines.append(f"resultant_elimination: DISAGREE: {exc}")

    worst_sim = 0.0
    sim_ok = True
    for k1, k2 in solved:
        samples = simulate_cost(norm, k1, k2, 200)
        closed = cost(norm, k1, k2)
        a_cl = closed.a_cl
        for partial, total in ((samples[-1].partial_cost_1, closed.j1), (samples[-1].partial_cost_2, closed.j2)):
            tail = abs(total) * abs(a_cl) ** 402 + 1e-9 * (1 + abs(total))
            err = abs(partial - total)
            worst_sim = max(worst_sim, err)
            if err > tail:
                sim_ok = False
                detail = f"simulated cost off by {err:.3g} at pair ({k1:.9g}, {k2:.9g})"
                failures.append(("simulate_cost", detail))
                lines.append(f"simulate_cost: DISAGREE: {detail}")
                break
        if not sim_ok:
            break
    if sim_ok:
        lines.append(f"simulate_cost(T=200): agree (max error {worst_sim:.3g})")

    for line in lines:
        print(line)
    if failures:
        print(f"VERDICT: FAIL ({failures[0][0]}: {failures[0][1]})")
        return EXIT_DISAGREE
    print("VERDICT: PASS")
    return EXIT_OK


# ---------------------------------------------------------------------------
# groebner-check
# ---------------------------------------------------------------------------


def cmd_groebner_check(args) -> int:
    try:
        params = _params_from_args(args, parser=parse_rational)
        params.validate()
        if params.a == 0:
            print("groebner-check does not apply to the trivial game a = 0", file=sys.stderr)
            return EXIT_INVALID
    except (ValueError, InvalidGameError) as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID
    norm = normalize(params)
    direct = build_g(norm).monic()
    try:
        basis = buchberger(stationarity_system(norm))
        eliminated = elimination_polynomial(basis)
    except EliminationError as exc:
        print(f"elimination failed: {exc}", file=sys.stderr)
        return EXIT_DISAGREE
    print(f"direct quintic:     {format_poly(direct)}")
    print(f"buchberger version: {format_poly(eliminated)}")
    if eliminated == direct:
        print("PASS: elimination polynomial matches the closed form exactly")
        return EXIT_OK
    print("FAIL: polynomials differ")
    return EXIT_DISAGREE


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "solve": cmd_solve,
        "sweep": cmd_sweep,
        "verify": cmd_verify,
        "groebner-check": cmd_groebner_check,
    }
    return handlers[args.command](args)


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
