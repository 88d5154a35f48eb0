"""Parse, validate and group household survey CSV records.

Input contract: UTF-8 CSV with header exactly
``household_id,province,occupation,annual_income``. Rows are rejected
individually (never fatally) with a counted reason, so one malformed row
cannot abort a multi-million-row ingest. The only fatal condition is a
missing or wrong header.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Optional, TextIO

from .errors import FormatError, UnknownOccupationError
from .taxonomy import CODE_TO_OCCUPATION, Occupation

EXPECTED_HEADER = ["household_id", "province", "occupation", "annual_income"]

# Rejection reason codes used in ValidationReport.rejection_reasons.
REASON_BAD_ROW = "bad_row"
REASON_UNKNOWN_OCCUPATION = "unknown_occupation"
REASON_BAD_INCOME = "bad_income"
REASON_MISSING_REGION = "missing_region"


class HouseholdRecord(NamedTuple):
    """One accepted survey row: the head of one household."""

    household_id: str
    region_id: str
    occupation: Occupation
    annual_income: float


@dataclass(frozen=True)
class ValidationReport:
    total_rows: int
    accepted: int
    rejected: int
    rejection_reasons: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.accepted + self.rejected != self.total_rows:
            raise ValueError("accepted + rejected must equal total_rows")


@dataclass(frozen=True)
class RegionSample:
    """All accepted records of one region, grouped by occupation.

    Occupations with zero records are absent from the map; every income
    sequence is non-empty and preserves input order.
    """

    region_id: str
    samples: dict[Occupation, list[float]]
    head_count: int

    def __post_init__(self) -> None:
        if self.head_count != sum(len(v) for v in self.samples.values()):
            raise ValueError("head_count must equal total sample size")

    def all_incomes(self) -> list[float]:
        out: list[float] = []
        for occ in sorted(self.samples, key=lambda o: o.value):
            out.extend(self.samples[occ])
        return out


def normalize_occupation(
    raw_label: str, alias_map: Optional[Mapping[str, str]] = None
) -> Occupation:
    """Resolve a free-text occupation label to one of the 14 codes.

    Exact code strings always map to themselves; anything else must be
    present in the alias map, whose values are exact codes.
    """
    occ = CODE_TO_OCCUPATION.get(raw_label)
    if occ is not None:
        return occ
    if alias_map:
        code = alias_map.get(raw_label)
        if code is not None:
            occ = CODE_TO_OCCUPATION.get(code)
            if occ is None:
                raise UnknownOccupationError(
                    f"alias for {raw_label!r} maps to unknown code {code!r}"
                )
            return occ
    raise UnknownOccupationError(f"unknown occupation label: {raw_label!r}")


def parse_household_csv(
    stream: TextIO,
    alias_map: Optional[Mapping[str, str]] = None,
    allow_negative_income: bool = False,
) -> tuple[list[HouseholdRecord], ValidationReport]:
    """Parse a household CSV stream into validated records plus a report.

    Malformed rows are counted with a reason, never silently dropped.
    Zero incomes are accepted (Unemployment/Student plausibly earn 0);
    negative incomes are rejected unless ``allow_negative_income``.
    """
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise FormatError("empty input: missing header row") from None
    header = [h.strip().lstrip("﻿") for h in header]
    if header != EXPECTED_HEADER:
        raise FormatError(
            f"bad header {header!r}; expected {EXPECTED_HEADER!r}"
        )

    records: list[HouseholdRecord] = []
    reasons: dict[str, int] = {}
    total = 0
    code_lookup = CODE_TO_OCCUPATION
    aliases = dict(alias_map) if alias_map else {}

    def reject(reason: str) -> None:
        reasons[reason] = reasons.get(reason, 0) + 1

    for row in reader:
        total += 1
        if len(row) != 4:
            reject(REASON_BAD_ROW)
            continue
        household_id, region_id, raw_occ, raw_income = row
        region_id = region_id.strip()
        if not region_id:
            reject(REASON_MISSING_REGION)
            continue
        occ = code_lookup.get(raw_occ)
        if occ is None:
            code = aliases.get(raw_occ)
            occ = code_lookup.get(code) if code is not None else None
            if occ is None:
                reject(REASON_UNKNOWN_OCCUPATION)
                continue
        try:
            income = float(raw_income)
        except ValueError:
            reject(REASON_BAD_INCOME)
            continue
        if income != income or income in (float("inf"), float("-inf")):
            reject(REASON_BAD_INCOME)
            continue
        if income < 0 and not allow_negative_income:
            reject(REASON_BAD_INCOME)
            continue
        records.append(HouseholdRecord(household_id, region_id, occ, income))

    report = ValidationReport(
        total_rows=total,
        accepted=len(records),
        rejected=total - len(records),
        rejection_reasons=reasons,
    )
    return records, report


def write_household_csv(records: Iterable[HouseholdRecord], stream: TextIO) -> None:
    """Serialize records back to the input CSV format (round-trip safe)."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(EXPECTED_HEADER)
    for rec in records:
        writer.writerow(
            [rec.household_id, rec.region_id, rec.occupation.value,
             repr(rec.annual_income)]
        )


def group_by_region(records: Iterable[HouseholdRecord]) -> list[RegionSample]:
    """Partition records into one RegionSample per distinct region.

    Output is sorted by region_id; income order within each occupation
    sequence preserves input order for reproducibility.
    """
    grouped: dict[str, dict[Occupation, list[float]]] = {}
    for rec in records:
        grouped.setdefault(rec.region_id, {}).setdefault(
            rec.occupation, []
        ).append(rec.annual_income)
    out = []
    for region_id in sorted(grouped):
        samples = grouped[region_id]
        out.append(
            RegionSample(
                region_id=region_id,
                samples=samples,
                head_count=sum(len(v) for v in samples.values()),
            )
        )
    return out


def load_alias_map(stream: TextIO) -> dict[str, str]:
    """Load a two-column alias CSV ``raw_label,code``."""
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise FormatError("empty alias file") from None
    if [h.strip() for h in header] != ["raw_label", "code"]:
        raise FormatError(f"bad alias header {header!r}; expected raw_label,code")
    aliases: dict[str, str] = {}
    for row in reader:
        if len(row) != 2:
            raise FormatError(f"bad alias row: {row!r}")
        raw_label, code = row
        if code not in CODE_TO_OCCUPATION:
            raise UnknownOccupationError(
                f"alias file maps {raw_label!r} to unknown code {code!r}"
            )
        aliases[raw_label] = code
    return aliases


def parse_household_file(
    path: str,
    alias_map: Optional[Mapping[str, str]] = None,
    allow_negative_income: bool = False,
) -> tuple[list[HouseholdRecord], ValidationReport]:
    with io.open(path, "r", encoding="utf-8", newline="") as fh:
        return parse_household_csv(
            fh, alias_map=alias_map, allow_negative_income=allow_negative_income
        )
