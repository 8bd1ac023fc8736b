"""Command-line interface.

Subcommands:

    solve           write a completed LB or UB profile to a file
    verify          exact-best-response check of a profile file
    train-cfr       train vanilla CFR, write the average profile + eps trace
    tournament      run the duplicate-match protocol from a JSON config
    variance-study  duplicate vs independent-card variance comparison
    replay          re-derive chips from a match log and check agreement

Exit status: 0 on success/verified, 1 on verification failure or replay
mismatch, 2 on usage or configuration errors.  Every command is
deterministic given its flags; nothing reads the clock.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import equilibrium, harness, strategy
from .agents import AgentSpec, validate_spec
from .strategy import ProfileFormatError


class ConfigError(ValueError):
    """A configuration file failed validation; message names the field."""


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def cmd_solve(args: argparse.Namespace) -> int:
    profile = strategy.nash_profile(args.variant)
    header = f"{args.variant} parameter table, completed by strict dominance"
    _write_text(args.out, strategy.serialize_profile(profile, header=header))
    print(f"wrote {args.variant} profile: {args.out}")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    text = _read_text(args.profile)
    try:
        profile = strategy.parse_profile(text)
    except ProfileFormatError as exc:
        print(f"{args.profile}: {exc}", file=sys.stderr)
        return 2
    report = equilibrium.epsilon_report(profile)
    print(report.render())
    if report.epsilon <= args.threshold:
        print(f"verified: epsilon <= {args.threshold:g}")
        return 0
    print(f"not verified: epsilon exceeds {args.threshold:g}")
    return 1


def _checkpoints(iterations: int) -> list[int]:
    points = sorted({10 ** k for k in range(2, 12) if 10 ** k < iterations} | {iterations})
    return points


def cmd_train_cfr(args: argparse.Namespace) -> int:
    if args.iters < 0:
        print(f"--iters must be >= 0, got {args.iters}", file=sys.stderr)
        return 2
    trainer = equilibrium.CfrTrainer(seed=args.seed)
    rows = []
    done = 0
    for checkpoint in _checkpoints(args.iters):
        trainer.run(checkpoint - done)
        done = checkpoint
        eps = float(equilibrium.epsilon(trainer.average_profile()))
        rows.append((checkpoint, eps))
    profile = trainer.average_profile()
    header = f"CFR average strategy, iterations={args.iters}, seed={args.seed}"
    _write_text(args.out, strategy.serialize_profile(profile, header=header))
    trace_path = f"{args.out}.trace.csv"
    trace = "iteration,epsilon\n" + "".join(f"{i},{e!r}\n" for i, e in rows)
    _write_text(trace_path, trace)
    final_eps = rows[-1][1]
    print(f"wrote profile: {args.out}")
    print(f"wrote trace:   {trace_path}")
    print(f"final epsilon: {final_eps!r} after {args.iters} iterations")
    return 0


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)


def _parse_agent(entry: object, where: str) -> tuple[AgentSpec, Optional[str]]:
    _require(isinstance(entry, dict), f"{where}: expected an object")
    unknown = set(entry) - {"kind", "name", "parameters"}
    _require(not unknown, f"{where}: unknown keys {sorted(unknown)}")
    _require("kind" in entry, f"{where}: missing required key 'kind'")
    _require(isinstance(entry["kind"], str), f"{where}.kind: expected a string")
    name = entry.get("name")
    if name is not None:
        _require(isinstance(name, str) and name != "", f"{where}.name: expected a non-empty string")
    parameters = entry.get("parameters", {})
    _require(isinstance(parameters, dict), f"{where}.parameters: expected an object")
    spec = AgentSpec(entry["kind"], parameters)
    try:
        validate_spec(spec)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc
    return spec, name


def load_config(path: str, min_agents: int = 3,
                max_agents: Optional[int] = None) -> tuple[list[AgentSpec], list[str], harness.MatchConfig]:
    """Parse and validate a tournament/study configuration file."""
    text = _read_text(path)
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    _require(isinstance(raw, dict), f"{path}: top level must be an object")
    allowed = {"agents", "hands_per_match", "matches_per_permutation",
               "master_seed", "normalization_divisor"}
    unknown = set(raw) - allowed
    _require(not unknown, f"{path}: unknown keys {sorted(unknown)}")
    _require("agents" in raw, f"{path}: missing required key 'agents'")
    _require("master_seed" in raw, f"{path}: missing required key 'master_seed'")
    _require(isinstance(raw["agents"], list), "agents: expected a list")
    _require(len(raw["agents"]) >= min_agents, f"agents: need at least {min_agents}, got {len(raw['agents'])}")
    if max_agents is not None:
        _require(len(raw["agents"]) <= max_agents,
                 f"agents: need at most {max_agents}, got {len(raw['agents'])}")
    _require(isinstance(raw["master_seed"], int) and not isinstance(raw["master_seed"], bool),
             "master_seed: expected an integer")
    _require(raw["master_seed"] >= 0, "master_seed: must be >= 0")

    pool = []
    names: list[Optional[str]] = []
    for i, entry in enumerate(raw["agents"]):
        spec, name = _parse_agent(entry, f"agents[{i}]")
        pool.append(spec)
        names.append(name)
    defaults = harness.default_labels(pool)
    labels = [name if name is not None else default for name, default in zip(names, defaults)]
    _require(len(set(labels)) == len(labels), "agents: labels must be unique; add 'name' keys")

    def _int_field(key: str, default: int) -> int:
        value = raw.get(key, default)
        _require(isinstance(value, int) and not isinstance(value, bool), f"{key}: expected an integer")
        return value

    divisor = raw.get("normalization_divisor", 100_000)
    _require(isinstance(divisor, (int, float)) and not isinstance(divisor, bool) and divisor > 0,
             "normalization_divisor: expected a positive number")
    try:
        config = harness.MatchConfig(
            master_seed=raw["master_seed"],
            hands_per_match=_int_field("hands_per_match", 3000),
            matches_per_permutation=_int_field("matches_per_permutation", 10),
            normalization_divisor=float(divisor),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return pool, labels, config


def cmd_tournament(args: argparse.Namespace) -> int:
    pool, labels, config = load_config(args.config)
    os.makedirs(args.out, exist_ok=True)
    report = harness.run_tournament(pool, config, labels=labels)
    for grouping in report.groupings:
        a, b, c = grouping.pool_indices
        for set_idx, dup in enumerate(grouping.sets):
            for perm_idx, match in enumerate(dup.matches):
                perm = harness.PERMUTATIONS[perm_idx]
                seating = ",".join(grouping.labels[perm[s]] for s in range(3))
                log = harness.match_log(match, header=[
                    f"grouping: {a}-{b}-{c} ({','.join(grouping.labels)})",
                    f"set: {set_idx}",
                    f"permutation: {perm_idx} seating: {seating}",
                    f"master_seed: {config.master_seed}",
                ])
                path = os.path.join(args.out, f"match_g{a}-{b}-{c}_s{set_idx}_p{perm_idx}.log")
                _write_text(path, log)
    csv_text = harness.report_csv(report)
    _write_text(os.path.join(args.out, "report.csv"), csv_text)
    _write_text(os.path.join(args.out, "report.json"), harness.report_json(report))
    print(csv_text, end="")
    print(f"report written to {args.out}")
    return 0


def cmd_variance_study(args: argparse.Namespace) -> int:
    if args.replications < 30:
        print(f"--replications must be >= 30, got {args.replications}", file=sys.stderr)
        return 2
    triple, labels, config = load_config(args.config, min_agents=3, max_agents=3)
    study = harness.variance_study(triple, config, args.replications)
    record = {
        "agents": labels,
        "studied_agent": labels[0],
        "replications": study.replications,
        "hands_per_match": study.hands_per_match,
        "duplicate_mean": study.duplicate_mean,
        "independent_mean": study.independent_mean,
        "duplicate_variance": study.duplicate_variance,
        "independent_variance": study.independent_variance,
        "ratio": study.ratio,
    }
    if args.out:
        _write_text(args.out, json.dumps(record, indent=2, sort_keys=True) + "\n")
        print(f"wrote {args.out}")
    print(f"duplicate variance:   {study.duplicate_variance!r}")
    print(f"independent variance: {study.independent_variance!r}")
    print(f"ratio: {study.ratio!r}")
    return 0


def cmd_replay(args: argparse.Namespace) -> int:
    text = _read_text(args.log)
    try:
        totals = harness.replay_match_log(text)
    except harness.ReplayError as exc:
        print(f"replay mismatch: {exc}", file=sys.stderr)
        return 1
    hands = sum(1 for line in text.splitlines() if line and not line.startswith("#")) - 1
    print(f"replayed {hands} hands; per-seat totals {totals[0]} {totals[1]} {totals[2]}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kuhn3p",
        description="Three-player Kuhn poker: exact solving, verification, "
                    "CFR training, and duplicate-match tournaments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="write a completed LB or UB profile")
    p.add_argument("--variant", required=True, choices=("LB", "UB"))
    p.add_argument("--out", required=True, help="output profile path")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="exact best-response verification of a profile")
    p.add_argument("--profile", required=True, help="profile file to verify")
    p.add_argument("--threshold", type=float, default=1e-9,
                   help="accept epsilon at or below this value (default 1e-9)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("train-cfr", help="train vanilla CFR and write the average profile")
    p.add_argument("--iters", type=int, required=True, help="number of iterations")
    p.add_argument("--seed", type=int, default=0, help="training seed (default 0)")
    p.add_argument("--out", required=True, help="output profile path; trace goes to <out>.trace.csv")
    p.set_defaults(func=cmd_train_cfr)

    p = sub.add_parser("tournament", help="run the duplicate-match tournament protocol")
    p.add_argument("--config", required=True, help="JSON configuration file")
    p.add_argument("--out", required=True, help="output directory for logs and reports")
    p.set_defaults(func=cmd_tournament)

    p = sub.add_parser("variance-study", help="duplicate vs independent-card variance comparison")
    p.add_argument("--config", required=True, help="JSON configuration file (exactly 3 agents)")
    p.add_argument("--replications", type=int, default=100, help="replications per arm (>= 30)")
    p.add_argument("--out", default=None, help="optional JSON output path")
    p.set_defaults(func=cmd_variance_study)

    p = sub.add_parser("replay", help="re-derive chips from a match log and check agreement")
    p.add_argument("--log", required=True, help="match log file")
    p.set_defaults(func=cmd_replay)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
