"""Command-line front end: rates, sweeps, optimization, simulation, checks.

Subcommands: keyrate, sweep, optimize, simulate, verify. Aborted protocol
runs are results, not failures; the process exits nonzero only for invalid
input, I/O problems, or failed verification. All randomness is controlled
by explicit --seed flags.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass

from .attack import AttackParams, NAMED_ATTACKS, named_attack, validate
from .keyrate import KeyRateReport, final_rate
from .optimizer import FidelityConstraint, maximize_s_be
from .protosim import ProtocolConfig, run_protocol
from .verify import run_verification

SWEEP_HEADER = ["var", "value", "xi", "e", "r_pa", "r_final", "r_final_raw", "r_bb84", "aborted"]


class ConfigError(ValueError):
    """A config document failed to parse; the message names the field."""


def _fmt(x: float) -> str:
    """12 significant digits, the sweep-file number format."""
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return f"{x:.12g}"


def _fmt_bool(b: bool) -> str:
    return "true" if b else "false"


def _print_report(report: KeyRateReport) -> None:
    doc = report.to_dict()
    for key in ("xi", "e", "r_pa", "r_final", "r_final_raw", "r_bb84"):
        val = doc[key]
        print(f"{key:<12} = {'nan' if val is None else _fmt(val)}")
    print(f"{'boundary_ok':<12} = {_fmt_bool(report.boundary_ok)}")
    print(f"{'aborted':<12} = {_fmt_bool(report.aborted)}")


def cmd_keyrate(args: argparse.Namespace) -> int:
    report = final_rate(args.xi, args.e)
    if args.json:
        print(json.dumps(report.to_dict(), sort_keys=True, indent=2))
    else:
        _print_report(report)
    return 0


@dataclass(frozen=True)
class SweepSpec:
    """One-variable sweep: which knob moves, over what grid, what is fixed."""

    variable: str
    start: float
    stop: float
    steps: int
    fixed_xi: float | None = None
    fixed_e: float = 0.0
    symmetric: bool = False

    def __post_init__(self) -> None:
        if self.variable not in ("e", "xi", "backward_noise"):
            raise ValueError(f"unknown sweep variable {self.variable!r}")
        if not self.start < self.stop:
            raise ValueError(f"start={self.start} must be below stop={self.stop}")
        if self.steps < 2:
            raise ValueError(f"steps={self.steps} must be at least 2")

    def rows(self) -> list[KeyRateReport]:
        out = []
        for i in range(self.steps):
            v = self.start + (self.stop - self.start) * i / (self.steps - 1)
            if self.variable in ("e", "backward_noise"):
                e = v
                xi = 1.0 - 2.0 * e if self.symmetric else self.fixed_xi
            else:
                xi = v
                e = self.fixed_e
            out.append(final_rate(xi, e))
        return out


def cmd_sweep(args: argparse.Namespace) -> int:
    if args.var in ("e", "backward_noise"):
        if args.symmetric and args.xi is not None:
            raise ValueError("--symmetric and --xi are mutually exclusive")
        if not args.symmetric and args.xi is None:
            if args.var == "backward_noise":
                args.xi = 1.0  # clean forward channel unless stated otherwise
            else:
                raise ValueError("sweeping e needs either --xi or --symmetric")
    spec = SweepSpec(
        variable=args.var,
        start=args.start,
        stop=args.stop,
        steps=args.steps,
        fixed_xi=args.xi,
        fixed_e=args.e,
        symmetric=args.symmetric,
    )
    reports = spec.rows()
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SWEEP_HEADER)
        for i, report in enumerate(reports):
            v = spec.start + (spec.stop - spec.start) * i / (spec.steps - 1)
            writer.writerow(
                [
                    spec.variable,
                    _fmt(v),
                    _fmt(report.xi),
                    _fmt(report.e),
                    _fmt(report.r_pa),
                    _fmt(report.r_final),
                    _fmt(report.r_final_raw),
                    _fmt(report.r_bb84),
                    _fmt_bool(report.aborted),
                ]
            )
    print(f"wrote {len(reports)} rows to {args.out}")
    return 0


def cmd_optimize(args: argparse.Namespace) -> int:
    constraint = FidelityConstraint(c0sq=args.f01, cppsq=args.fpm)
    result = maximize_s_be(constraint, budget=args.budget, seed=args.seed)
    for key in ("best_entropy", "closed_form_entropy", "gap"):
        print(f"{key:<20} = {_fmt(getattr(result, key))}")
    print(f"{'iterations':<20} = {result.iterations}")
    print(f"{'converged':<20} = {_fmt_bool(result.converged)}")
    doc = json.dumps(result.to_dict(), sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(doc + "\n")
        print(f"wrote result to {args.out}")
    else:
        print(doc)
    return 0


def _attack_from_value(value) -> AttackParams:
    if isinstance(value, str):
        if value == "symmetric":
            raise ConfigError(
                "config field 'attack': the symmetric attack needs an object "
                '{"name": "symmetric", "e": <value>}'
            )
        return named_attack(value)
    if isinstance(value, dict):
        if "name" in value:
            return named_attack(value["name"], value.get("e"))
        return validate(AttackParams.from_dict(value))
    raise ConfigError(f"config field 'attack': expected name or object, got {value!r}")


_CONFIG_FIELDS = {
    "n": int,
    "check_fraction": float,
    "announce_fraction": float,
    "backward_noise": float,
    "seed": int,
    "permute": bool,
    "abort_slack_z": float,
}


def _load_config(path: str | None, args: argparse.Namespace) -> ProtocolConfig:
    doc: dict = {}
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config file {path}: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError(f"config file {path}: top level must be an object")
        unknown = set(doc) - set(_CONFIG_FIELDS) - {"attack"}
        if unknown:
            raise ConfigError(f"config field '{sorted(unknown)[0]}': unknown key")

    attack = None
    if "attack" in doc:
        attack = _attack_from_value(doc["attack"])
    if args.attack is not None:
        if args.attack == "symmetric":
            if args.attack_e is None:
                raise ConfigError("--attack symmetric needs --attack-e")
            attack = named_attack("symmetric", args.attack_e)
        else:
            attack = named_attack(args.attack)
    if attack is None:
        raise ConfigError("config field 'attack': missing (no --attack either)")

    kwargs = {}
    for name, cast in _CONFIG_FIELDS.items():
        if name in doc:
            raw = doc[name]
            if cast is bool and not isinstance(raw, bool):
                raise ConfigError(f"config field '{name}': expected true/false")
            try:
                kwargs[name] = cast(raw)
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"config field '{name}': {exc}") from exc
        flag = getattr(args, name, None)
        if flag is not None:
            kwargs[name] = flag
    if "n" not in kwargs:
        raise ConfigError("config field 'n': missing (no --n either)")
    try:
        return ProtocolConfig(attack=attack, **kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_simulate(args: argparse.Namespace) -> int:
    config = _load_config(args.config, args)
    stats, report = run_protocol(config)

    trials_for = {label: 0 for label in ("0", "1", "+", "-")}
    for key, count in stats.counts.items():
        trials_for[key.split("|")[0]] += count
    rows = [
        ("f0", stats.est_f0, stats.se_f0, trials_for["0"]),
        ("f1", stats.est_f1, stats.se_f1, trials_for["1"]),
        ("fplus", stats.est_fplus, stats.se_fplus, trials_for["+"]),
        ("fminus", stats.est_fminus, stats.se_fminus, trials_for["-"]),
        ("e", stats.est_e, stats.se_e, stats.n_announced),
        ("xi", stats.est_xi, stats.se_xi, stats.n_check_consistent),
    ]
    print(f"{'quantity':<10} {'value':>16} {'se':>16} {'n_used':>10}")
    for name, value, se, used in rows:
        print(f"{name:<10} {_fmt(value):>16} {_fmt(se):>16} {used:>10}")
    print(f"raw key m = {stats.m}, k_est = {stats.k_est}, "
          f"aborted = {_fmt_bool(stats.aborted)}")

    doc = json.dumps(
        {"config": config.to_dict(), "stats": stats.to_dict(), "report": report.to_dict()},
        sort_keys=True,
        indent=2,
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(doc + "\n")
        print(f"wrote results to {args.out}")
    else:
        print(doc)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    report = run_verification(trials=args.trials, seed=args.seed)
    for check in report.checks:
        verdict = "PASS" if check.passed else "FAIL"
        print(
            f"[{verdict}] {check.name}: max deviation {check.max_deviation:.3e} "
            f"(tolerance {check.tolerance:.0e}) over {check.trials} trials"
        )
    if report.ok:
        print("all checks passed")
        return 0
    failed = sum(1 for c in report.checks if not c.passed)
    print(f"FAILED: {failed} of {len(report.checks)} checks")
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dqkd",
        description="Security analysis of the four-state two-way deterministic "
        "QKD protocol: key rates, attack optimization, protocol simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keyrate", help="evaluate the asymptotic key rate at (xi, e)")
    p.add_argument("--xi", type=float, required=True, help="forward rate parameter in [-1, 1]")
    p.add_argument("--e", type=float, required=True, help="announced-bit error rate in [0, 1/2]")
    p.add_argument("--json", action="store_true", help="emit JSON instead of the table")
    p.set_defaults(func=cmd_keyrate)

    p = sub.add_parser("sweep", help="tabulate rates along one variable into a CSV file")
    p.add_argument("--var", required=True, choices=("e", "xi", "backward_noise"))
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--xi", type=float, default=None, help="fixed xi when sweeping e")
    p.add_argument("--e", type=float, default=0.0, help="fixed e when sweeping xi")
    p.add_argument(
        "--symmetric",
        action="store_true",
        help="tie xi = 1 - 2e while sweeping e (symmetric-attack channel)",
    )
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("optimize", help="maximize the eavesdropper entropy at fixed fidelities")
    p.add_argument("--f01", type=float, required=True, help="computational-basis fidelity")
    p.add_argument("--fpm", type=float, required=True, help="diagonal-basis fidelity")
    p.add_argument("--budget", type=int, default=20000, help="objective evaluation cap")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="write the JSON result here instead of stdout")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("simulate", help="Monte-Carlo run of the full protocol")
    p.add_argument("--config", default=None, help="JSON config file")
    p.add_argument("--attack", default=None, choices=NAMED_ATTACKS, help="named attack")
    p.add_argument("--attack-e", type=float, default=None, help="disturbance for --attack symmetric")
    p.add_argument("--n", type=int, default=None, help="number of forward qubits")
    p.add_argument("--check-fraction", dest="check_fraction", type=float, default=None)
    p.add_argument("--announce-fraction", dest="announce_fraction", type=float, default=None)
    p.add_argument("--backward-noise", dest="backward_noise", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--permute", dest="permute", action="store_true", default=None)
    p.add_argument("--no-permute", dest="permute", action="store_false")
    p.add_argument("--abort-slack-z", dest="abort_slack_z", type=float, default=None)
    p.add_argument("--out", default=None, help="write the JSON results here instead of stdout")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="re-run the numerical certification suite")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
