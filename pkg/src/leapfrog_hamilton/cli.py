"""Command-line front door: certify | leapfrog | oracle | export.

Reports are JSON Lines on stdout (or ``--out``), one document per input
graph in input order. Diagnostics go to stderr. Exit codes: 0 success,
2 unreadable or malformed input, 3 validation failure, 4 n not 2 mod 4,
5 a finding against the construction.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .batch_runner import run_batch
from .config import FORMATS, KIND_FILTERS, ORACLE_KINDS, RunConfig, SeedPair
from .config_io import load_run_config, save_run_config, validate_run_config
from .diagnostics import configure_logging, describe_exception
from .ear_decomp import (
    ear_decomposition_to_document,
    find_nice_decomposition,
    validate_ear_decomposition,
)
from .enumerator import run_enumeration
from .errors import (
    ClaimViolation,
    ConfigError,
    DecompositionError,
    EarDecompositionError,
    Finding,
    FullereneError,
    HamiltonError,
    LeapfrogError,
    MapError,
    PlanarCodeError,
    WrongResidue,
)
from .fullerene import leapfrog, leapfrog_to_document, validate_fullerene, verify_two_factor
from .hamilton import (
    construct_cycles,
    cycle_to_dot,
    decomposition_to_dot,
    verify_hamilton,
)
from .oracle import enumerate_decompositions, enumerate_hamilton_cycles
from .planar_code import read_maps
from .planar_map import PlanarMap
from .serialization import (
    dump_json,
    dump_json_lines,
    load_json_documents,
    map_from_document,
    map_to_document,
    to_dot,
    write_text,
)
from .stable_tree import DecompositionKind, classify, has_second_connector

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INVALID = 3
EXIT_WRONG_RESIDUE = 4
EXIT_FINDING = 5


class InputError(LeapfrogError):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="input", default=None, help="planar_code or map JSON file")
    common.add_argument("--out", dest="output", default=None, help="report file (default stdout)")
    common.add_argument("--config", default=None, help="YAML or TOML run configuration")
    common.add_argument("--write-config", default=None, help="save the effective configuration")
    common.add_argument("--workers", type=int, default=None)
    common.add_argument("-v", "--verbose", dest="verbosity", action="count", default=None)
    common.add_argument("--quiet", action="store_true", default=False)

    parser = argparse.ArgumentParser(
        prog="leapfrog-hamilton",
        description="Certify exponentially many Hamilton cycles in leapfrog fullerenes.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    certify = commands.add_parser("certify", parents=[common], help="run the full pipeline")
    certify.add_argument("--seed-hexagon", type=int, default=None)
    certify.add_argument("--seed-pentagon", type=int, default=None)
    certify.add_argument("--materialize-tree", action="store_true", default=None)
    certify.add_argument("--artifacts", default=None, help="directory for per-graph outputs")

    commands.add_parser("leapfrog", parents=[common], help="emit L(G) with face origins")

    oracle = commands.add_parser("oracle", parents=[common], help="brute-force ground truth")
    oracle.add_argument("--oracle", choices=ORACLE_KINDS, default=None)
    oracle.add_argument("--filter", choices=KIND_FILTERS, default=None)
    oracle.add_argument("--on-leapfrog", action="store_true", default=None)
    oracle.add_argument("--cap-cycles", type=int, default=None, help="0 disables the cap")
    oracle.add_argument("--time-budget-ms", type=int, default=None, help="0 disables the budget")
    oracle.add_argument("--max-vertices", type=int, default=None)

    export = commands.add_parser("export", parents=[common], help="DOT/JSON export")
    export.add_argument("--format", choices=FORMATS, default=None)
    export.add_argument("--graph", default=None, help="map file the exported records refer to")
    export.add_argument("--index", type=int, default=None, help="export only this record")
    export.add_argument("--on-leapfrog", action="store_true", default=None)
    return parser


_FLAG_FIELDS = (
    "input",
    "output",
    "workers",
    "verbosity",
    "materialize_tree",
    "artifacts",
    "oracle",
    "filter",
    "on_leapfrog",
    "format",
    "graph",
    "index",
)
_PATH_FLAGS = {"input", "output", "artifacts", "graph"}


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Flags given on the command line override values from ``--config``."""
    config = load_run_config(args.config) if args.config else RunConfig()
    config.command = args.command
    for name in _FLAG_FIELDS:
        value = getattr(args, name, None)
        if value is not None:
            setattr(config, name, Path(value) if name in _PATH_FLAGS else value)

    hexagon = getattr(args, "seed_hexagon", None)
    pentagon = getattr(args, "seed_pentagon", None)
    if (hexagon is None) != (pentagon is None):
        raise ConfigError("--seed-hexagon and --seed-pentagon must be given together")
    if hexagon is not None:
        config.seed = SeedPair(hexagon, pentagon)

    limits = config.oracle_limits
    cap = getattr(args, "cap_cycles", None)
    if cap is not None:
        limits.cap_cycles = cap or None
    budget = getattr(args, "time_budget_ms", None)
    if budget is not None:
        limits.time_budget_ms = budget or None
    max_vertices = getattr(args, "max_vertices", None)
    if max_vertices is not None:
        limits.max_vertices = max_vertices

    validate_run_config(config)
    if config.input is None:
        raise ConfigError("no input given (--in or 'input' in the config file)")
    if not config.input.is_file():
        raise InputError(f"input file {config.input} does not exist")
    return config


def load_input(path: Path) -> list[PlanarMap]:
    try:
        maps = read_maps(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise InputError(f"{path} is neither planar_code nor JSON") from exc
    if not maps:
        raise InputError(f"{path} holds no graphs")
    logger.info("read %d graph(s) from %s", len(maps), path)
    return maps


def error_record(index: int, error: LeapfrogError) -> dict[str, Any]:
    if isinstance(error, Finding):
        return {"index": index, **error.record()}
    return {"index": index, "error": type(error).__name__, "message": str(error)}


def exit_code_for(error: LeapfrogError) -> int:
    if isinstance(error, Finding):
        return EXIT_FINDING
    if isinstance(error, WrongResidue):
        return EXIT_WRONG_RESIDUE
    if isinstance(error, (PlanarCodeError, MapError, InputError, ConfigError)):
        return EXIT_INPUT
    return EXIT_INVALID


# certify


@dataclass(frozen=True)
class _GraphTask:
    index: int
    planar_map: PlanarMap
    config: RunConfig
    inner_workers: int


def certify_graph(
    planar_map: PlanarMap,
    *,
    seed: tuple[int, int] | None = None,
    workers: int = 1,
    materialize_tree: bool = False,
    artifacts: Path | None = None,
) -> dict[str, Any]:
    """Full pipeline for one graph; findings are recorded, not raised."""
    fullerene = validate_fullerene(planar_map)
    if fullerene.k is None:
        raise WrongResidue(f"n = {fullerene.n} is not 2 mod 4; no 2^k certificate applies")

    ears = find_nice_decomposition(fullerene, seed)
    validate_ear_decomposition(fullerene, ears)
    enumeration = run_enumeration(
        fullerene, ears, workers=workers, materialize_tree=materialize_tree
    )
    result = leapfrog(fullerene)
    findings = list(enumeration.audit.findings)
    if not verify_two_factor(result):
        findings.append(
            ClaimViolation("pentagon-and-hexagon faces of G do not form a 2-factor of H").record()
        )
    try:
        construction = construct_cycles(result, enumeration.leaves)
    except Finding as finding:
        logger.error("n=%d: %s", fullerene.n, finding)
        findings.append(finding.record())
        construction = None

    count = enumeration.count
    unique = construction.report.unique if construction is not None else []
    if construction is not None:
        findings.extend(construction.findings)
    bound_met = count.bound_met and len(unique) >= count.bound
    report: dict[str, Any] = {
        "n": count.n,
        "k": count.k,
        "seed": list(ears.seed),
        "proper": count.proper_count,
        "improper": count.improper_count,
        "cycles": len(unique),
        "bound": count.bound,
        "bound_met": bound_met,
        "leaf_hashes": [leaf.digest for leaf in enumeration.leaves],
        "findings": findings,
        "audit": enumeration.audit.to_document(),
    }
    if enumeration.tree is not None:
        report["tree"] = enumeration.tree.to_document()

    if artifacts is not None:
        write_text(artifacts / "graph.json", dump_json(map_to_document(planar_map)) + "\n")
        write_text(artifacts / "leapfrog.json", dump_json(leapfrog_to_document(result)) + "\n")
        write_text(artifacts / "H.json", dump_json(map_to_document(result.H)) + "\n")
        write_text(
            artifacts / "ears.json", dump_json(ear_decomposition_to_document(ears)) + "\n"
        )
        write_text(
            artifacts / "decompositions.jsonl",
            dump_json_lines(leaf.to_document() for leaf in enumeration.leaves),
        )
        write_text(artifacts / "cycles.jsonl", dump_json_lines(c.to_document() for c in unique))
    return report


def _certify_task(task: _GraphTask) -> tuple[dict[str, Any], int]:
    config = task.config
    artifacts = None
    if config.artifacts is not None:
        artifacts = config.artifacts / f"graph-{task.index:03d}"
    try:
        report = certify_graph(
            task.planar_map,
            seed=config.seed.as_tuple() if config.seed else None,
            workers=task.inner_workers,
            materialize_tree=config.materialize_tree,
            artifacts=artifacts,
        )
    except LeapfrogError as exc:
        logger.error("graph %d: %s", task.index, exc)
        logger.debug("%s", describe_exception(exc)[1])
        return error_record(task.index, exc), exit_code_for(exc)
    report["index"] = task.index
    code = EXIT_FINDING if report["findings"] or not report["bound_met"] else EXIT_OK
    return report, code


def cmd_certify(config: RunConfig, maps: Sequence[PlanarMap]) -> tuple[list[dict[str, Any]], int]:
    per_graph = config.workers > 1 and len(maps) > 1
    inner = 1 if per_graph else config.workers
    tasks = [_GraphTask(i, m, config, inner) for i, m in enumerate(maps)]
    outcomes = run_batch(_certify_task, tasks, config.workers if per_graph else 1)
    return [report for report, _ in outcomes], max(code for _, code in outcomes)


# leapfrog


def _leapfrog_task(task: _GraphTask) -> tuple[dict[str, Any], int]:
    try:
        result = leapfrog(validate_fullerene(task.planar_map))
    except LeapfrogError as exc:
        logger.error("graph %d: %s", task.index, exc)
        return error_record(task.index, exc), exit_code_for(exc)
    return {"index": task.index, **leapfrog_to_document(result)}, EXIT_OK


def cmd_leapfrog(config: RunConfig, maps: Sequence[PlanarMap]) -> tuple[list[dict[str, Any]], int]:
    tasks = [_GraphTask(i, m, config, 1) for i, m in enumerate(maps)]
    outcomes = run_batch(_leapfrog_task, tasks, config.workers)
    return [report for report, _ in outcomes], max(code for _, code in outcomes)


# oracle


def _oracle_one(config: RunConfig, index: int, planar_map: PlanarMap) -> dict[str, Any]:
    instance = f"{config.input.name}#{index}" if config.input else f"#{index}"
    limits = config.oracle_limits
    if config.oracle == "hamilton":
        target = planar_map
        if config.on_leapfrog:
            target = leapfrog(validate_fullerene(planar_map)).H
            instance += ":leapfrog"
        _, report = enumerate_hamilton_cycles(
            target,
            limits.cap_cycles,
            time_budget_ms=limits.time_budget_ms,
            instance=instance,
        )
        return report.to_document()

    fullerene = validate_fullerene(planar_map)
    found, report = enumerate_decompositions(
        fullerene,
        config.filter,
        max_vertices=limits.max_vertices,
        workers=config.workers,
        instance=instance,
    )
    document = report.to_document()
    broken = [
        d for d in found if d.kind is DecompositionKind.IMPROPER and not has_second_connector(d)
    ]
    if broken:
        document["findings"] = [
            ClaimViolation(
                "improper decomposition with one graceful hexagon and no graceful vertex",
                {"decomposition": d.to_document()},
            ).record()
            for d in broken
        ]
    return document


def cmd_oracle(config: RunConfig, maps: Sequence[PlanarMap]) -> tuple[list[dict[str, Any]], int]:
    reports: list[dict[str, Any]] = []
    code = EXIT_OK
    for index, planar_map in enumerate(maps):
        try:
            document = _oracle_one(config, index, planar_map)
        except LeapfrogError as exc:
            logger.error("graph %d: %s", index, exc)
            reports.append(error_record(index, exc))
            code = max(code, exit_code_for(exc))
            continue
        if not document["complete"]:
            logger.warning("%s: enumeration incomplete, count is a lower bound",
                           document["instance"])
        if document.get("findings"):
            code = max(code, EXIT_FINDING)
        reports.append(document)
    return reports, code


# export


def _load_documents(path: Path) -> list[Any]:
    if path.read_bytes().startswith(b">>"):
        return [map_to_document(m) for m in load_input(path)]
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    documents = load_json_documents(text)
    if not documents:
        raise InputError(f"{path} holds no records")
    return documents


def _reference_map(config: RunConfig, what: str) -> PlanarMap:
    if config.graph is None:
        raise InputError(f"exporting {what} needs --graph")
    maps = load_input(config.graph)
    planar_map = maps[0]
    if config.on_leapfrog:
        planar_map = leapfrog(validate_fullerene(planar_map)).H
    return planar_map


def _export_document(config: RunConfig, document: Any) -> str | dict[str, Any]:
    if not isinstance(document, dict):
        raise InputError("export records must be JSON objects")
    if "adj" in document:
        planar_map = map_from_document(document)
        if config.on_leapfrog:
            planar_map = leapfrog(validate_fullerene(planar_map)).H
        if config.format == "dot":
            return to_dot(planar_map)
        return map_to_document(planar_map)
    if "W" in document and "B" in document:
        fullerene = validate_fullerene(_reference_map(config, "a decomposition"))
        decomposition = classify(fullerene, document["W"], document["B"])
        if config.format == "dot":
            return decomposition_to_dot(fullerene.planar_map, decomposition)
        return decomposition.to_document()
    if "edges" in document:
        H = _reference_map(config, "a cycle")
        try:
            cycle = verify_hamilton(H, [tuple(edge) for edge in document["edges"]])
        except (TypeError, ValueError) as exc:
            raise InputError(f"malformed cycle record: {exc}") from exc
        if config.format == "dot":
            return cycle_to_dot(H, cycle)
        return cycle.to_document()
    raise InputError(f"unrecognised record with keys {sorted(document)}")


def cmd_export(config: RunConfig) -> tuple[str, int]:
    documents = _load_documents(config.input)
    if config.index is not None:
        if not 0 <= config.index < len(documents):
            raise InputError(f"--index {config.index} outside 0..{len(documents) - 1}")
        documents = [documents[config.index]]
    try:
        exported = [_export_document(config, document) for document in documents]
    except (DecompositionError, HamiltonError) as exc:
        raise InputError(f"record does not describe a valid object: {exc}") from exc
    if config.format == "dot":
        return "".join(exported), EXIT_OK
    return dump_json_lines(exported), EXIT_OK


def _emit(config: RunConfig, text: str) -> None:
    if config.output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        write_text(config.output, text)


def run(config: RunConfig) -> int:
    if config.command == "export":
        text, code = cmd_export(config)
        _emit(config, text)
        return code
    maps = load_input(config.input)
    handlers = {"certify": cmd_certify, "leapfrog": cmd_leapfrog, "oracle": cmd_oracle}
    reports, code = handlers[config.command](config, maps)
    _emit(config, dump_json_lines(reports))
    return code


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    configure_logging(args.verbosity or 0, args.quiet)

    try:
        config = resolve_config(args)
        if args.verbosity is None and config.verbosity:
            configure_logging(config.verbosity, args.quiet)
        if args.write_config:
            save_run_config(config, args.write_config)
        return run(config)
    except (ConfigError, InputError, PlanarCodeError, MapError) as exc:
        logger.error("%s", exc)
        return EXIT_INPUT
    except (FullereneError, EarDecompositionError) as exc:
        logger.error("%s", exc)
        return EXIT_INVALID
    except LeapfrogError as exc:
        message, details = describe_exception(exc)
        logger.error("%s", message)
        logger.debug("%s", details)
        return exit_code_for(exc)


if __name__ == "__main__":
    raise SystemExit(main())

