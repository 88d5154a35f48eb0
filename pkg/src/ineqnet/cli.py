"""Command-line interface.

Subcommands:
  analyze    full pipeline: CSV in, report tree out
  validate   ingest-only dry run; prints the validation report
  region     single-region network plus CI chart data
  aggregate  rebuild support networks from saved per-region networks

Exit codes: 0 success, 2 unreadable input, 3 invalid configuration,
4 zero accepted records.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .aggregation import COHORTS, build_support_network, to_transaction
from .dominance import build_domination_network, income_ordering
from .errors import ConfigError, FormatError, IneqnetError, NoAcceptedRecordsError
from .ingest import group_by_region, load_alias_map, parse_household_file
from .report import (
    PipelineConfig,
    emit_network_dot,
    network_from_dict,
    network_to_dict,
    run_pipeline,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONFIG = 3
EXIT_NO_DATA = 4

_CONFIG_FLAGS = {
    # CLI flag dest -> PipelineConfig field
    "input": "input_path",
    "alias": "alias_path",
    "out_dir": "output_dir",
    "alpha": "alpha",
    "bootstrap_iters": "bootstrap_iters",
    "confidence_level": "confidence_level",
    "support_threshold": "support_threshold",
    "ag_threshold": "ag_threshold",
    "min_samples": "min_samples",
    "seed": "seed",
    "exclude": "exclude",
    "allow_negative_income": "allow_negative_income",
    "histogram_bins": "histogram_bins",
}


def _add_config_flags(parser: argparse.ArgumentParser, need_output: bool = True) -> None:
    parser.add_argument("--input", help="household CSV path")
    parser.add_argument("--alias", help="occupation alias CSV (raw_label,code)")
    if need_output:
        parser.add_argument("--out-dir", help="output directory")
    parser.add_argument("--config", help="JSON config file; CLI flags override it")
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--bootstrap-iters", type=int)
    parser.add_argument("--confidence-level", type=float)
    parser.add_argument("--support-threshold", type=float)
    parser.add_argument("--ag-threshold", type=float)
    parser.add_argument("--min-samples", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--exclude", action="append", metavar="REGION_ID",
                        help="region to exclude (repeatable)")
    parser.add_argument("--allow-negative-income", action="store_true", default=None)
    parser.add_argument("--histogram-bins", type=int)


def _build_config(args: argparse.Namespace) -> PipelineConfig:
    data: dict = {}
    if getattr(args, "config", None):
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
    for dest, field_name in _CONFIG_FLAGS.items():
        value = getattr(args, dest, None)
        if value is not None:
            data[field_name] = value
    if "input_path" not in data:
        raise ConfigError("missing --input (or input_path in config file)")
    if "output_dir" not in data:
        data["output_dir"] = "."
    config = PipelineConfig.from_dict(data)
    config.validate()
    return config


def _cmd_analyze(args: argparse.Namespace) -> int:
    config = _build_config(args)
    try:
        summary = run_pipeline(config, workers=args.workers)
    except FileNotFoundError as exc:
        print(f"error: cannot read input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NoAcceptedRecordsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_DATA
    print(
        f"analyzed {len(summary.profiles)} region(s), "
        f"{summary.validation.accepted} record(s); "
        f"outputs in {config.output_dir}"
    )
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    alias_map = None
    try:
        if args.alias:
            with open(args.alias, "r", encoding="utf-8", newline="") as fh:
                alias_map = load_alias_map(fh)
        if not args.input:
            raise ConfigError("missing --input")
        _, report = parse_household_file(
            args.input,
            alias_map=alias_map,
            allow_negative_income=bool(args.allow_negative_income),
        )
    except (FileNotFoundError, OSError) as exc:
        print(f"error: cannot read input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(f"total rows:    {report.total_rows}")
    print(f"accepted:      {report.accepted}")
    print(f"rejected:      {report.rejected}")
    for reason, count in sorted(report.rejection_reasons.items()):
        print(f"  {reason}: {count}")
    return EXIT_OK if report.accepted > 0 else EXIT_NO_DATA


def _cmd_region(args: argparse.Namespace) -> int:
    config = _build_config(args)
    alias_map = None
    try:
        if config.alias_path:
            with open(config.alias_path, "r", encoding="utf-8", newline="") as fh:
                alias_map = load_alias_map(fh)
        records, report = parse_household_file(
            config.input_path,
            alias_map=alias_map,
            allow_negative_income=config.allow_negative_income,
        )
    except (FileNotFoundError, OSError) as exc:
        print(f"error: cannot read input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if report.accepted == 0:
        print("error: no accepted records", file=sys.stderr)
        return EXIT_NO_DATA
    regions = {r.region_id: r for r in group_by_region(records)}
    region = regions.get(args.region_id)
    if region is None:
        print(f"error: region {args.region_id!r} not found; "
              f"known: {sorted(regions)}", file=sys.stderr)
        return EXIT_NO_DATA
    network = build_domination_network(region, config.network_params())
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    from .report import _safe_name, _write_json  # noqa: PLC0415

    safe = _safe_name(region.region_id)
    (out / f"{safe}.dot").write_text(emit_network_dot(network), encoding="utf-8")
    _write_json(out / f"{safe}.json", network_to_dict(network))
    print(f"region {region.region_id}: {len(network.nodes)} occupation(s), "
          f"{len(network.edges)} dominance pair(s), density {network.density:.4f}")
    for occ, ci in income_ordering(network):
        print(f"  {occ.value}: mean CI [{ci.lower:.1f}, {ci.upper:.1f}]")
    return EXIT_OK


def _cmd_aggregate(args: argparse.Namespace) -> int:
    networks_dir = Path(args.networks_dir)
    if not networks_dir.is_dir():
        print(f"error: not a directory: {networks_dir}", file=sys.stderr)
        return EXIT_INPUT
    networks = []
    for path in sorted(networks_dir.glob("*.json")):
        networks.append(network_from_dict(json.loads(path.read_text(encoding="utf-8"))))
    if not networks:
        print("error: no network JSON files found", file=sys.stderr)
        return EXIT_NO_DATA

    ag_classes: dict[str, str] = {}
    if args.profiles:
        try:
            with open(args.profiles, "r", encoding="utf-8", newline="") as fh:
                for row in csv.DictReader(fh):
                    ag_classes[row["region_id"]] = row["ag_class"]
        except (OSError, KeyError) as exc:
            print(f"error: cannot read profiles: {exc}", file=sys.stderr)
            return EXIT_INPUT

    threshold = args.support_threshold if args.support_threshold is not None else 0.5
    if not 0.0 < threshold < 1.0:
        print("error: support threshold must lie in (0, 1)", file=sys.stderr)
        return EXIT_CONFIG
    transactions = [to_transaction(n) for n in networks]
    out = Path(args.out_dir or ".")
    out.mkdir(parents=True, exist_ok=True)
    emitted = 0
    for cohort in COHORTS:
        if cohort == "All":
            cohort_txns = transactions
        elif ag_classes:
            cohort_txns = [
                t for t in transactions if ag_classes.get(t.region_id) == cohort
            ]
        else:
            continue  # no profiles given: only the All network is derivable
        if not cohort_txns:
            continue
        net = build_support_network(cohort_txns, cohort=cohort, threshold=threshold)
        (out / f"{cohort}.dot").write_text(emit_network_dot(net), encoding="utf-8")
        emitted += 1
    print(f"wrote {emitted} support network(s) to {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ineqnet",
        description="Income inequality analytics over household survey records",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="run the full pipeline")
    _add_config_flags(p_analyze)
    p_analyze.add_argument("--workers", type=int, default=1,
                           help="regions processed in parallel (output-identical)")
    p_analyze.set_defaults(func=_cmd_analyze)

    p_validate = sub.add_parser("validate", help="ingest-only dry run")
    p_validate.add_argument("--input", required=True)
    p_validate.add_argument("--alias")
    p_validate.add_argument("--allow-negative-income", action="store_true")
    p_validate.set_defaults(func=_cmd_validate)

    p_region = sub.add_parser("region", help="single-region network and CIs")
    p_region.add_argument("region_id")
    _add_config_flags(p_region)
    p_region.set_defaults(func=_cmd_region)

    p_agg = sub.add_parser("aggregate", help="support networks from saved networks")
    p_agg.add_argument("--networks-dir", required=True,
                       help="directory of per-region network JSON files")
    p_agg.add_argument("--profiles", help="profiles.csv for cohort membership")
    p_agg.add_argument("--out-dir")
    p_agg.add_argument("--support-threshold", type=float)
    p_agg.set_defaults(func=_cmd_aggregate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except IneqnetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_DATA


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
