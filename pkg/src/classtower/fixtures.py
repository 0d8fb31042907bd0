"""Embedded numeric fixtures and the row-by-row verification harness.

The fixture file (data/fixtures_v1.json) stores the transcribed invariant
tables: one array per source table, rows carrying the printed values, class
group tuples as printed (full groups).  Only 2-parts of class groups are
compared; every other printed column (symbols, exponents, discriminant,
coclass) is compared exactly.  Table-level caption constants (legendre, pi,
m) are merged into each row at load time.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .abelian import AbelianType
from .classify import classify_pair
from .quadratic import field_discriminant, two_part_of_class_group

__all__ = ["FixtureRow", "ColumnResult", "RowResult", "load_fixtures", "verify_fixtures"]

ENV_FIXTURE_PATH = "CLASSTOWER_FIXTURES"

_CAPTION_KEYS = ("legendre", "pi", "m")


@dataclass(frozen=True)
class FixtureRow:
    table: str
    d: int
    p1: int
    p2: int
    values: dict  # printed scalar columns: q, legendre, pi, b, m, n, disc, coclass
    cl_k0: tuple | None
    cl_k0bar: tuple | None
    cl_kk: tuple | None
    cl_K: tuple | None  # 7 printed tuples
    cl_L: tuple | None

    def __post_init__(self) -> None:
        if self.d != 2 * self.p1 * self.p2:
            raise ValueError(f"fixture row {self.table}/{self.d}: d != 2*p1*p2")
        for part in (self.cl_k0, self.cl_k0bar, self.cl_kk):
            if part is not None:
                AbelianType.from_factors(part)
        for group in (self.cl_K, self.cl_L):
            if group is not None:
                for tup in group:
                    AbelianType.from_factors(tup)


def _row_from_json(table: str, raw: dict, caption: dict) -> FixtureRow:
    values = {k: v for k, v in raw.items() if k in ("q", "legendre", "pi", "b", "m", "n", "disc", "coclass")}
    for key, val in caption.items():
        values.setdefault(key, val)
    return FixtureRow(
        table=table,
        d=raw["d"],
        p1=raw["p1"],
        p2=raw["p2"],
        values=values,
        cl_k0=tuple(raw["cl_k0"]) if "cl_k0" in raw else None,
        cl_k0bar=tuple(raw["cl_k0bar"]) if "cl_k0bar" in raw else None,
        cl_kk=tuple(raw["cl_kk"]) if "cl_kk" in raw else None,
        cl_K=tuple(map(tuple, raw["cl_K"])) if "cl_K" in raw else None,
        cl_L=tuple(map(tuple, raw["cl_L"])) if "cl_L" in raw else None,
    )


def load_fixtures(path: str | None = None) -> dict[str, list[FixtureRow]]:
    if path is None:
        path = os.environ.get(ENV_FIXTURE_PATH)
    return _load_fixtures_cached(path)


@lru_cache(maxsize=None)
def _load_fixtures_cached(path: str | None) -> dict[str, list[FixtureRow]]:
    if path is None:
        text = resources.files("classtower").joinpath("data/fixtures_v1.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    doc = json.loads(text)
    if doc.get("version") != "fixtures_v1":
        raise ValueError(f"unsupported fixture version: {doc.get('version')!r}")
    out: dict[str, list[FixtureRow]] = {}
    for table, body in doc["tables"].items():
        caption = {k: body[k] for k in _CAPTION_KEYS if k in body}
        out[table] = [_row_from_json(table, raw, caption) for raw in body["rows"]]
    return out


@dataclass(frozen=True)
class ColumnResult:
    column: str
    ok: bool
    expected: str
    got: str
    printed: str = ""  # the verbatim printed value, for audit (class-group columns)


@dataclass(frozen=True)
class RowResult:
    table: str
    d: int
    p1: int
    p2: int
    columns: tuple[ColumnResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.columns)

    def failures(self) -> list[ColumnResult]:
        return [c for c in self.columns if not c.ok]


def _two_part_str(tup) -> str:
    return str(AbelianType.from_factors(tup).two_part())


def verify_row(row: FixtureRow) -> RowResult:
    """Compare every checkable printed column of one row against computed values."""
    record, report, validation = classify_pair(row.p1, row.p2)
    cols: list[ColumnResult] = []

    def add(name, expected, got, printed=""):
        cols.append(
            ColumnResult(name, str(expected) == str(got), str(expected), str(got), str(printed))
        )

    computed_scalars = {
        "q": record.q,
        "legendre": record.legendre,
        "pi": record.pi,
        "b": record.B,
        "m": record.m,
        "n": record.n,
        "disc": report.disc,
        "coclass": report.coclass,
    }
    for key, printed in sorted(row.values.items()):
        add(key, printed, computed_scalars[key])
    if row.cl_k0 is not None:
        oracle = two_part_of_class_group(field_discriminant(row.d))
        add("cl_k0", _two_part_str(row.cl_k0), str(oracle), row.cl_k0)
    if row.cl_k0bar is not None:
        oracle = two_part_of_class_group(field_discriminant(-row.d))
        add("cl_k0bar", _two_part_str(row.cl_k0bar), str(oracle), row.cl_k0bar)
    if row.cl_kk is not None:
        add("cl_kk", _two_part_str(row.cl_kk), "(2, 2, 2)", row.cl_kk)
    if row.cl_K is not None:
        for j, tup in enumerate(row.cl_K, start=1):
            add(f"cl_K{j}", _two_part_str(tup), str(report.k_fields[j].cl2), tup)
    if row.cl_L is not None:
        for j, tup in enumerate(row.cl_L, start=1):
            add(f"cl_L{j}", _two_part_str(tup), str(report.l_fields[j].cl2), tup)
    add("cross_validation", True, validation.passed)
    return RowResult(row.table, row.d, row.p1, row.p2, tuple(cols))


def verify_fixtures(
    table: str | None = None,
    filter_d: int | None = None,
    path: str | None = None,
) -> list[RowResult]:
    fixtures = load_fixtures(path)
    if table is not None:
        if table not in fixtures:
            raise ValueError(f"unknown fixture table {table!r}; have {sorted(fixtures)}")
        fixtures = {table: fixtures[table]}
    results = []
    for name in sorted(fixtures, key=lambda t: (len(t), t)):
        for row in fixtures[name]:
            if filter_d is not None and row.d != filter_d:
                continue
            results.append(verify_row(row))
    return results
