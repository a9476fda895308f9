"""Command-line driver for all experiments.

Every command loads one JSON config, runs deterministically, and emits
canonical JSONL records (or an equivalent table with --format table),
embedding the tool version and the config hash.  Exit codes: 0 success
(mathematically negative outcomes like "undetermined" included),
1 usage or config problems, 2 exceeded caps, 3 strategy faults.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import __version__
from .analysis import folner_profile, growth_profile
from .config import (
    build_provider,
    build_schedule,
    build_strategy,
    config_hash,
    load_config,
    require_sections,
    resolve_fire,
)
from .engine import play
from .errors import (
    CapExceededError,
    ConfigError,
    FirecontainError,
    NoFeasibleRadiusError,
    SearchBudgetExceededError,
    StrategyFaultError,
)
from .groups.semigroup import free_pair_search, semigroup_tree
from .solver import exhaustive_no_containment
from .trace import dump_line, game_records, trace_header, validate_trace, write_trace

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_CAPS = 2
EXIT_STRATEGY = 3


class _Output:
    """Collects records, prints them, and optionally tees to a file."""

    def __init__(self, fmt: str, report_path=None):
        self.fmt = fmt
        self.report_path = report_path
        self.lines: list[str] = []

    def emit(self, record: dict) -> None:
        if self.fmt == "records":
            self.lines.append(dump_line(record))
        else:
            self.lines.extend(_tabulate(record))

    def finish(self) -> None:
        text = "".join(line + "\n" for line in self.lines)
        sys.stdout.write(text)
        if self.report_path:
            Path(self.report_path).write_text(text, encoding="ascii")


def _tabulate(record: dict) -> list[str]:
    kind = record.get("type", "record")
    lines = [f"[{kind}]"]
    for key in sorted(record):
        if key == "type":
            continue
        value = record[key]
        if isinstance(value, dict):
            value = dump_line(value)
        elif isinstance(value, list):
            value = dump_line({"v": value})[5:-1]
        lines.append(f"  {key} = {value}")
    return lines


def _run_record(command: str, cfg: dict) -> dict:
    rec = {
        "type": "run",
        "command": command,
        "version": __version__,
        "config_hash": config_hash(cfg),
    }
    if "label" in cfg:
        rec["label"] = cfg["label"]
    return rec


def _simulate_payload(cfg: dict) -> tuple[dict, list[dict]]:
    """Run one game from a config; returns (stdout record, trace records)."""
    provider = build_provider(cfg["graph"])
    fire = resolve_fire(cfg["fire"], provider)
    schedule = build_schedule(cfg["schedule"])
    try:
        strategy = build_strategy(cfg["strategy"], provider, fire, schedule)
    except NoFeasibleRadiusError as exc:
        return (
            {
                "type": "strategy-error",
                "code": exc.code,
                "detail": str(exc),
                "strategy": cfg["strategy"]["name"],
            },
            [],
        )
    report = play(
        provider,
        fire,
        schedule,
        strategy,
        cfg["horizon"],
        escape_radius=cfg.get("escape_radius"),
    )
    header = trace_header(
        __version__,
        config_hash(cfg),
        cfg["graph"],
        fire,
        schedule.to_record(),
        cfg["horizon"],
        strategy.describe(),
        escape_radius=cfg.get("escape_radius"),
    )
    return report.to_record(), game_records(header, report)


def cmd_simulate(cfg: dict, out: _Output, trace_path=None) -> int:
    require_sections(cfg, ["graph", "fire", "schedule", "strategy", "horizon"], "simulate")
    out.emit(_run_record("simulate", cfg))
    result, records = _simulate_payload(cfg)
    out.emit(result)
    path = trace_path or cfg.get("out", {}).get("trace")
    if path and records:
        write_trace(path, records)
    return EXIT_OK


def cmd_growth(cfg: dict, out: _Output) -> int:
    require_sections(cfg, ["graph", "growth"], "growth")
    provider = build_provider(cfg["graph"])
    out.emit(_run_record("growth", cfg))
    section = cfg["growth"]
    window = section.get("fit_window")
    profile = growth_profile(
        provider,
        max_radius=section["max_radius"],
        fit_window=tuple(window) if window else None,
    )
    out.emit(profile.to_record())
    if "folner" in cfg:
        ratios = folner_profile(provider, max_radius=cfg["folner"]["max_radius"])
        out.emit(
            {
                "type": "folner-profile",
                "ratios": [str(r) for r in ratios],
                "decreasing": all(a > b for a, b in zip(ratios, ratios[1:])),
            }
        )
    return EXIT_OK


def cmd_certify(cfg: dict, out: _Output) -> int:
    require_sections(cfg, ["graph", "fire", "schedule", "certify"], "certify")
    provider = build_provider(cfg["graph"])
    fire = resolve_fire(cfg["fire"], provider)
    schedule = build_schedule(cfg["schedule"])
    caps = cfg.get("caps", {})
    kwargs = {}
    if "vertices" in caps:
        kwargs["max_vertices"] = caps["vertices"]
    if "nodes" in caps:
        kwargs["max_nodes"] = caps["nodes"]
    out.emit(_run_record("certify", cfg))
    result = exhaustive_no_containment(
        provider,
        fire,
        schedule,
        cfg["certify"]["truncation_depth"],
        cfg["certify"]["horizon"],
        **kwargs,
    )
    out.emit(result.to_record())
    return EXIT_OK


def cmd_semigroup(cfg: dict, out: _Output) -> int:
    require_sections(cfg, ["graph", "semigroup"], "semigroup")
    if cfg["graph"]["kind"] != "group":
        raise ConfigError("graph.kind", "semigroup analysis needs a group graph")
    provider = build_provider(cfg["graph"])
    group = provider.group
    section = cfg["semigroup"]
    out.emit(_run_record("semigroup", cfg))
    if "pair" in section:
        u = group.decode(section["pair"][0])
        v = group.decode(section["pair"][1])
        tree = semigroup_tree(group, u, v, section["depth"])
    else:
        tree = free_pair_search(
            group,
            max_word_length=section["max_word_length"],
            depth=section["depth"],
        )
    if tree is None:
        out.emit(
            {
                "type": "semigroup",
                "found": False,
                "max_word_length": section["max_word_length"],
                "depth": section["depth"],
            }
        )
    else:
        rec = tree.to_record()
        rec["type"] = "semigroup"
        rec["found"] = tree.free_up_to_depth
        out.emit(rec)
    return EXIT_OK


def _suite_row(path: Path) -> dict:
    row: dict = {"type": "suite-row", "config": path.name}
    try:
        cfg = load_config(str(path))
        require_sections(cfg, ["graph"], "suite")
        provider = build_provider(cfg["graph"])
        row["label"] = cfg.get("label", path.stem)
        row["graph"] = provider.name
        row["config_hash"] = config_hash(cfg)
        if "growth" in cfg:
            profile = growth_profile(provider, max_radius=cfg["growth"]["max_radius"])
            row["degree"] = round(profile.fitted_degree, 3)
            row["not_polynomial"] = profile.not_polynomial
        if "folner" in cfg:
            ratios = folner_profile(provider, max_radius=cfg["folner"]["max_radius"])
            row["folner_last"] = str(ratios[-1])
            row["folner_decreasing"] = all(a > b for a, b in zip(ratios, ratios[1:]))
        if "schedule" in cfg and "strategy" in cfg and "horizon" in cfg:
            fire = resolve_fire(cfg.get("fire", {"ball": 0}), provider)
            schedule = build_schedule(cfg["schedule"])
            try:
                strategy = build_strategy(cfg["strategy"], provider, fire, schedule)
                report = play(provider, fire, schedule, strategy, cfg["horizon"])
                row["containment"] = report.outcome
                row["contained_at"] = report.contained_at
                row["total_protected"] = report.total_protected
            except NoFeasibleRadiusError:
                row["containment"] = "no-feasible-radius"
                row["contained_at"] = None
        if "semigroup" in cfg and cfg["graph"]["kind"] == "group":
            section = cfg["semigroup"]
            tree = free_pair_search(
                provider.group,
                max_word_length=section["max_word_length"],
                depth=section["depth"],
            )
            if tree is None:
                row["semigroup"] = "none"
            else:
                row["semigroup"] = f"free({tree.u},{tree.v})@{tree.depth}"
        if "certify" in cfg and "fire" in cfg and "schedule" in cfg:
            fire = resolve_fire(cfg["fire"], provider)
            schedule = build_schedule(cfg["schedule"])
            caps = cfg.get("caps", {})
            kwargs = {}
            if "vertices" in caps:
                kwargs["max_vertices"] = caps["vertices"]
            if "nodes" in caps:
                kwargs["max_nodes"] = caps["nodes"]
            try:
                result = exhaustive_no_containment(
                    provider,
                    fire,
                    schedule,
                    cfg["certify"]["truncation_depth"],
                    cfg["certify"]["horizon"],
                    **kwargs,
                )
                row["certify"] = result.kind
            except SearchBudgetExceededError:
                row["certify"] = "inconclusive"
    except FirecontainError as exc:
        row["error"] = f"{exc.code}: {exc}"
    return row


def cmd_suite(config_dir: str, out: _Output, jobs: int = 4) -> int:
    root = Path(config_dir)
    if not root.is_dir():
        raise ConfigError("config-dir", f"not a directory: {config_dir}")
    paths = sorted(root.glob("*.json"))
    rows: list[dict] = []
    if paths:
        with ThreadPoolExecutor(max_workers=max(1, min(jobs, len(paths)))) as pool:
            rows = list(pool.map(_suite_row, paths))
    out.emit(
        {
            "type": "run",
            "command": "suite",
            "version": __version__,
            "configs": len(paths),
        }
    )
    errors = 0
    for row in rows:
        if "error" in row:
            errors += 1
        out.emit(row)
    out.emit({"type": "suite-summary", "rows": len(rows), "errors": errors})
    return EXIT_OK


def cmd_validate(trace_path: str, out: _Output, config_path=None) -> int:
    try:
        text = Path(trace_path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError("trace", f"no such file: {trace_path}") from None
    provider = None
    if config_path:
        cfg = load_config(config_path)
        require_sections(cfg, ["graph"], "validate")
        provider = build_provider(cfg["graph"])
    report = validate_trace(text, provider)
    rec = report.to_record()
    rec["trace"] = Path(trace_path).name
    out.emit(rec)
    return EXIT_OK if report.valid else EXIT_CONFIG


def cmd_serve(host: str, port: int) -> int:
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=host, port=port, log_level="warning")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="firecontain",
        description="Fire containment experiments on infinite graphs.",
    )
    parser.add_argument("--version", action="version", version=f"firecontain {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, config=True):
        if config:
            p.add_argument("--config", required=True, help="path to a JSON experiment config")
        p.add_argument("--format", choices=("records", "table"), default="records")
        p.add_argument("--report", help="also write the stdout records to this file")

    p = sub.add_parser("simulate", help="play one game and write its trace")
    add_common(p)
    p.add_argument("--trace", help="trace output path (overrides config out.trace)")

    p = sub.add_parser("growth", help="ball growth profile and fitted degree")
    add_common(p)

    p = sub.add_parser("certify", help="exhaustive search on a truncation")
    add_common(p)

    p = sub.add_parser("semigroup", help="free semigroup pair search")
    add_common(p)

    p = sub.add_parser("suite", help="run a directory of configs into a summary table")
    p.add_argument("--config-dir", required=True)
    p.add_argument("--jobs", type=int, default=4)
    p.add_argument("--format", choices=("records", "table"), default="records")
    p.add_argument("--report", help="also write the stdout records to this file")

    p = sub.add_parser("validate", help="replay and check a trace file")
    p.add_argument("--trace", required=True)
    p.add_argument("--config", help="config providing the graph (else the trace header)")
    p.add_argument("--format", choices=("records", "table"), default="records")
    p.add_argument("--report", help="also write the stdout records to this file")

    p = sub.add_parser("serve", help="run the HTTP session service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8321)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; 2 is reserved for exceeded
        # caps here, so usage problems map to the config exit code.
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG
    out = _Output(getattr(args, "format", "records"), getattr(args, "report", None))
    try:
        if args.command == "simulate":
            code = cmd_simulate(load_config(args.config), out, trace_path=args.trace)
        elif args.command == "growth":
            code = cmd_growth(load_config(args.config), out)
        elif args.command == "certify":
            code = cmd_certify(load_config(args.config), out)
        elif args.command == "semigroup":
            code = cmd_semigroup(load_config(args.config), out)
        elif args.command == "suite":
            code = cmd_suite(args.config_dir, out, jobs=args.jobs)
        elif args.command == "validate":
            code = cmd_validate(args.trace, out, config_path=args.config)
        elif args.command == "serve":
            return cmd_serve(args.host, args.port)
        else:  # pragma: no cover - argparse enforces the choices
            parser.error(f"unknown command {args.command!r}")
            return EXIT_CONFIG
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (CapExceededError, SearchBudgetExceededError) as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPS
    except StrategyFaultError as exc:
        print(f"strategy fault: {exc}", file=sys.stderr)
        return EXIT_STRATEGY
    except FirecontainError as exc:
        # Anything else the domain raises while building from a config
        # (bad generators, unknown vertices, inapplicable strategy).
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out.finish()
    return code


if __name__ == "__main__":
    raise SystemExit(main())
