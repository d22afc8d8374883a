"""Command line front end: value tables, figure data, and verification suites.

Exit codes follow the CI contract: 0 on pass, 1 on verification failure,
2 on usage errors.  With --jobs 1 all output is byte-reproducible; higher
job counts only change scheduling of independent tasks, never values.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from . import inequalities, nosignalling, quantum
from .classical import brute_force_classical_value, canonical_strategy, classical_value_formula, strategy_value
from .game import all_questions, chsh_bit_embedding, predicate
from .quantum import (
    QuantumStrategy,
    average_win_analytic,
    maximize_r,
    quantum_value,
    quantum_value_excess,
)

DEFAULT_SEED = 42
VERIFY_SUITES = ("classical", "quantum", "nosignalling", "lemma2", "lemma3", "converse", "all")


def _fmt(x) -> str:
    """Decimal with 12 significant digits (binary-to-decimal rounding is
    round-half-even)."""
    return format(float(x), ".12g")


def _frac(fr: Fraction) -> str:
    if fr.denominator == 1:
        return str(fr.numerator)
    return f"{fr.numerator}/{fr.denominator}"


def _parallel_map(fn, items, jobs: int) -> list:
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _alpha_grid(samples: int) -> np.ndarray:
    return np.linspace(0.0, math.pi / 2.0, samples)


def value_row(m: int) -> dict:
    omega_c = classical_value_formula(m)
    theta_star = maximize_r(m - 1).theta_star
    omega_q = quantum_value(m)
    # the advantage is computed in excess form; the plain difference of the
    # two columns loses all signal once the gap drops below 1 ulp of 1/2
    return {
        "m": m,
        "omega_c": _fmt(omega_c),
        "omega_c_fraction": _frac(omega_c),
        "omega_q": _fmt(omega_q),
        "theta_star": _fmt(theta_star),
        "omega_ns": "1",
        "quantum_advantage": _fmt(quantum_value_excess(m)),
    }


def _check(name: str, expected, actual, tolerance, margin) -> dict:
    return {
        "name": name,
        "expected": str(expected),
        "actual": str(actual),
        "tolerance": str(tolerance),
        "margin": _fmt(margin) if isinstance(margin, float) else str(margin),
    }


def verify_classical(m: int, seed: int) -> dict:
    brute, best = brute_force_classical_value(m, restrict_parity=True)
    formula = classical_value_formula(m)
    canonical = strategy_value(canonical_strategy(m))
    checks = [
        _check("brute_force_equals_formula", _frac(formula), _frac(brute), "exact", brute == formula),
        _check("canonical_equals_formula", _frac(formula), _frac(canonical), "exact", canonical == formula),
    ]
    if m == 2:
        unrestricted, _ = brute_force_classical_value(2, restrict_parity=False)
        checks.append(
            _check("parity_restriction_lossless", _frac(brute), _frac(unrestricted), "exact", unrestricted == brute)
        )
    ok = brute == formula and canonical == formula and all(c["margin"] == "True" for c in checks)
    return {
        "suite": "classical",
        "seed": seed,
        "m": m,
        "brute_force": _frac(brute),
        "formula": _frac(formula),
        "match": brute == formula,
        # one maximizer, signs as +1/-1 per facet, question bit 0 then 1
        "maximizer": [
            [[int(v) for v in fa.values] for fa in pair] for pair in best.choices
        ],
        "pass": ok,
        "checks": checks,
    }


def verify_quantum(m_values, alpha_samples: int, tol: float, seed: int, jobs: int = 1) -> dict:
    grid = _alpha_grid(alpha_samples)

    def worst_for_m(m: int) -> tuple[float, float]:
        cross = 0.0
        analytic = 0.0
        for alpha in grid:
            strategy = QuantumStrategy(m, float(alpha))
            total = 0.0
            for q in all_questions(m):
                sim = quantum.winning_probability_simulated(strategy, q)
                op = quantum.winning_probability_operator(strategy, q)
                cross = max(cross, abs(sim - op))
                total += sim
            analytic = max(analytic, abs(total / 2 ** m - average_win_analytic(m, float(alpha))))
        return cross, analytic

    results = _parallel_map(worst_for_m, m_values, jobs)
    worst_cross = max(r[0] for r in results)
    worst_analytic = max(r[1] for r in results)
    checks = [
        _check("simulated_equals_operator", f"<= {tol}", worst_cross, tol, tol - worst_cross),
        _check("average_equals_closed_form", f"<= {tol}", worst_analytic, tol, tol - worst_analytic),
    ]
    ok = worst_cross <= tol and worst_analytic <= tol
    if 2 in m_values:
        target = (2.0 + math.sqrt(2.0)) / 4.0
        err = abs(quantum_value(2) - target)
        theta_err = abs(maximize_r(1).theta_star - math.pi / 4.0)
        checks.append(_check("two_player_value", target, quantum_value(2), 1e-9, 1e-9 - err))
        checks.append(_check("two_player_theta_star", math.pi / 4.0, maximize_r(1).theta_star, 1e-6, 1e-6 - theta_err))
        ok = ok and err <= 1e-9 and theta_err <= 1e-6
    return {
        "suite": "quantum",
        "seed": seed,
        "m_values": list(m_values),
        "alpha_samples": alpha_samples,
        "pass": ok,
        "checks": checks,
    }


def verify_nosignalling(m: int, subset_max: int | None, seed: int, export: str | None = None) -> dict:
    corr = nosignalling.build_ns_correlation(m)
    if subset_max is None:
        subset_max = m if m <= 3 else 2
    normalized = nosignalling.verify_normalization(corr)
    no_signal = all(
        nosignalling.verify_no_signalling(corr, size) for size in range(1, subset_max + 1)
    )
    value = nosignalling.ns_winning_probability(corr)
    if export:
        with open(export, "w", encoding="utf-8") as handle:
            for line in nosignalling.export_lines(corr):
                handle.write(line + "\n")
    ok = normalized and no_signal and value == 1
    return {
        "suite": "nosignalling",
        "seed": seed,
        "m": m,
        "subset_max": subset_max,
        "normalization": normalized,
        "no_signalling": no_signal,
        "value": _frac(value),
        "pass": ok,
        "checks": [
            _check("normalization", True, normalized, "exact", normalized),
            _check("no_signalling_marginals", True, no_signal, "exact", no_signal),
            _check("winning_probability", "1", _frac(value), "exact", value == 1),
        ],
    }


def verify_lemma2(trials: int, dim: int, max_power: int, seed: int, tol: float) -> dict:
    report = inequalities.run_lemma2_trials(
        trials, max_dim_half=max(dim // 2, 1), max_power=max_power, seed=seed, tol=tol
    )
    tight = inequalities.lemma2_lhs(
        inequalities.chsh_style_pair(
            quantum.z_theta(0.0),
            quantum.z_theta(math.pi / 2.0),
            quantum.z_theta(math.pi / 4.0),
            quantum.z_theta(-math.pi / 4.0),
        ),
        quantum.ghz_state(2),
        1,
    )
    target = 2.0 + math.sqrt(2.0)
    ok = report["passed"] and abs(tight - target) <= 1e-6
    return {
        "suite": "lemma2",
        "seed": seed,
        "trials": trials,
        "pass": ok,
        "checks": [
            _check("random_pairs_bounded", "0 failures", f"{report['failures']} failures", tol, report["worst_slack"]),
            _check("chsh_configuration_tight", target, tight, 1e-6, 1e-6 - abs(tight - target)),
        ],
    }


def verify_lemma3(m_max: int, seed: int) -> dict:
    failures = [power for power in range(1, m_max + 1) if not inequalities.verify_lemma3(power)]
    return {
        "suite": "lemma3",
        "seed": seed,
        "m_max": m_max,
        "pass": not failures,
        "checks": [
            _check("two_sided_bounds", "hold for all exponents", f"failures at {failures}" if failures else "hold", "exact", not failures)
        ],
    }


def verify_converse(m_values, alpha_samples: int, tol: float, seed: int, jobs: int = 1) -> dict:
    grid = _alpha_grid(alpha_samples)

    def all_ok(m: int) -> bool:
        for alpha in grid:
            strategy = QuantumStrategy(m, float(alpha))
            for q in all_questions(m):
                if not inequalities.verify_converse_chain(strategy, q, tol):
                    return False
        return True

    results = _parallel_map(all_ok, m_values, jobs)
    ok = all(results)
    return {
        "suite": "converse",
        "seed": seed,
        "m_values": list(m_values),
        "alpha_samples": alpha_samples,
        "pass": ok,
        "checks": [_check("relaxation_and_identities", True, ok, tol, ok)],
    }


def verify_chsh_equivalence(seed: int) -> dict:
    mismatches = 0
    for q in all_questions(2):
        for a1 in (0, 1):
            for a2 in (0, 1):
                won = predicate(chsh_bit_embedding(a1, a2, q), q)
                if won != int((a1 ^ a2) == q[0] * q[1]):
                    mismatches += 1
    return {
        "suite": "chsh",
        "seed": seed,
        "pass": mismatches == 0,
        "checks": [_check("xor_rule_equivalence", "0 mismatches", f"{mismatches} mismatches", "exact", mismatches == 0)],
    }


def verify_all(quick: bool, seed: int, jobs: int) -> dict:
    if quick:
        quantum_ms, alpha_samples, trials = range(2, 5), 8, 100
        converse_ms, converse_samples = range(2, 5), 4
        lemma3_max = 32
    else:
        quantum_ms, alpha_samples, trials = range(2, 7), 32, 1000
        converse_ms, converse_samples = range(2, 6), 16
        lemma3_max = 64
    reports = [
        verify_classical(2, seed),
        verify_classical(3, seed),
        verify_quantum(list(quantum_ms), alpha_samples, 1e-10, seed, jobs),
        verify_nosignalling(2, None, seed),
        verify_nosignalling(3, None, seed),
        verify_nosignalling(4, 2, seed),
        verify_lemma2(trials, 8, 6, seed, 1e-9),
        verify_lemma3(lemma3_max, seed),
        verify_converse(list(converse_ms), converse_samples, 1e-10, seed, jobs),
        verify_chsh_equivalence(seed),
    ]
    return {
        "suite": "all",
        "seed": seed,
        "quick": quick,
        "pass": all(r["pass"] for r in reports),
        "suites": reports,
    }


def _parse_m_range(text: str, parser: argparse.ArgumentParser) -> tuple[int, int]:
    try:
        lo, hi = (int(part) for part in text.split(":"))
    except ValueError:
        parser.error(f"--m-range expects LO:HI, got {text!r}")
    return lo, hi


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="base seed echoed in reports")
    parser.add_argument(
        "--jobs",
        type=int,
        default=int(os.environ.get("HCGAME_JOBS", "1")),
        help="worker count for independent tasks (HCGAME_JOBS mirrors this)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hcgame", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    values = sub.add_parser("values", help="per-m value table")
    values.add_argument("--m", type=int, default=None)
    values.add_argument("--m-range", type=str, default="2:12")
    values.add_argument("--format", choices=("csv", "json"), default="csv")
    values.add_argument("--out", type=str, default=None)
    _add_common(values)

    figure = sub.add_parser("figure3", help="CSV of classical/quantum/no-signalling values")
    figure.add_argument("--m-max", type=int, default=12)
    figure.add_argument("--out", type=str, required=True)
    _add_common(figure)

    verify = sub.add_parser("verify", help="run a verification suite")
    suites = verify.add_subparsers(dest="suite", required=True)

    v_classical = suites.add_parser("classical")
    v_classical.add_argument("--m", type=int, choices=(2, 3), default=2)
    _add_common(v_classical)

    v_quantum = suites.add_parser("quantum")
    v_quantum.add_argument("--m", type=int, default=None, help="single m; default sweeps 2..6")
    v_quantum.add_argument("--alpha-samples", type=int, default=32)
    v_quantum.add_argument("--tol", type=float, default=1e-9)
    _add_common(v_quantum)

    v_ns = suites.add_parser("nosignalling")
    v_ns.add_argument("--m", type=int, choices=(2, 3, 4), default=2)
    v_ns.add_argument("--subset-max", type=int, default=None)
    v_ns.add_argument("--export", type=str, default=None, help="write the support as JSON lines")
    _add_common(v_ns)

    v_l2 = suites.add_parser("lemma2")
    v_l2.add_argument("--trials", type=int, default=1000)
    v_l2.add_argument("--dim", type=int, default=8)
    v_l2.add_argument("--max-power", type=int, default=6)
    v_l2.add_argument("--tol", type=float, default=1e-9)
    _add_common(v_l2)

    v_l3 = suites.add_parser("lemma3")
    v_l3.add_argument("--m-max", type=int, default=64)
    _add_common(v_l3)

    v_conv = suites.add_parser("converse")
    v_conv.add_argument("--m", type=int, default=None, help="single m; default sweeps 2..5")
    v_conv.add_argument("--alpha-samples", type=int, default=16)
    v_conv.add_argument("--tol", type=float, default=1e-10)
    _add_common(v_conv)

    v_all = suites.add_parser("all")
    v_all.add_argument("--quick", action="store_true")
    _add_common(v_all)

    return parser


def cmd_values(args, parser) -> int:
    if args.m is not None:
        lo = hi = args.m
    else:
        lo, hi = _parse_m_range(args.m_range, parser)
    if not 2 <= lo <= hi <= 64:
        parser.error(f"m range must satisfy 2 <= lo <= hi <= 64, got {lo}:{hi}")
    rows = _parallel_map(value_row, range(lo, hi + 1), args.jobs)
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        if args.format == "csv":
            out.write("m,omega_c,omega_c_fraction,omega_q,theta_star,omega_ns,quantum_advantage\n")
            for row in rows:
                out.write(
                    f"{row['m']},{row['omega_c']},{row['omega_c_fraction']},{row['omega_q']},"
                    f"{row['theta_star']},{row['omega_ns']},{row['quantum_advantage']}\n"
                )
        else:
            for row in rows:
                out.write(json.dumps(row) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_figure3(args, parser) -> int:
    if not 2 <= args.m_max <= 64:
        parser.error(f"--m-max must be in [2, 64], got {args.m_max}")
    rows = _parallel_map(value_row, range(2, args.m_max + 1), args.jobs)
    try:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write("m,classical,quantum,nosignalling\n")
            for row in rows:
                handle.write(f"{row['m']},{row['omega_c']},{row['omega_q']},{row['omega_ns']}\n")
    except OSError as exc:
        parser.error(f"cannot write {args.out}: {exc}")
    return 0


def cmd_verify(args, parser) -> int:
    seed, jobs = args.seed, args.jobs
    if args.suite == "classical":
        report = verify_classical(args.m, seed)
    elif args.suite == "quantum":
        m_values = [args.m] if args.m is not None else list(range(2, 7))
        if any(not 2 <= m <= 6 for m in m_values):
            parser.error("quantum verification supports m in 2..6")
        report = verify_quantum(m_values, args.alpha_samples, args.tol, seed, jobs)
    elif args.suite == "nosignalling":
        report = verify_nosignalling(args.m, args.subset_max, seed, args.export)
    elif args.suite == "lemma2":
        report = verify_lemma2(args.trials, args.dim, args.max_power, seed, args.tol)
    elif args.suite == "lemma3":
        report = verify_lemma3(args.m_max, seed)
    elif args.suite == "converse":
        m_values = [args.m] if args.m is not None else list(range(2, 6))
        if any(not 2 <= m <= 5 for m in m_values):
            parser.error("converse verification supports m in 2..5")
        report = verify_converse(m_values, args.alpha_samples, args.tol, seed, jobs)
    elif args.suite == "all":
        report = verify_all(args.quick, seed, jobs)
    else:  # pragma: no cover - argparse enforces choices
        parser.error(f"unknown suite {args.suite}")
    print(json.dumps(report, indent=2))
    return 0 if report["pass"] else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error(f"--jobs must be positive, got {args.jobs}")
    if args.command == "values":
        return cmd_values(args, parser)
    if args.command == "figure3":
        return cmd_figure3(args, parser)
    return cmd_verify(args, parser)


if __name__ == "__main__":
    sys.exit(main())
