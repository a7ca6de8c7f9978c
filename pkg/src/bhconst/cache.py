"""Line-oriented JSON persistence for :class:`ConstantTable`.

Line 1 is a header record, every further line one entry::

    {"kind": "bhconst-table", "field": "real", "strategy": "exhaustive", "digits": 100, ...}
    {"m": 1, "value": "1.000...", "argmin_k": null}

Values are decimal strings with ``digits + GUARD_DIGITS`` significant digits.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import mpmath
from mpmath import mp

from . import __version__
from .errors import CacheError, StaleCacheError
from .numerics import GUARD_DIGITS, Field, HighPrecReal, working_dps
from .recursive import ConstantTable, Strategy

KIND = "bhconst-table"
CACHE_DIR_ENV = "BHCONST_CACHE_DIR"


def default_cache_dir() -> Path | None:
    d = os.environ.get(CACHE_DIR_ENV)
    return Path(d) if d else None


def default_cache_name(field: Field, strategy: Strategy, digits: int, p0_mode: str = "exact",
                       k0: int | None = None) -> str:
    parts = [str(field), str(strategy)]
    if k0 is not None:
        parts.append(f"k0-{k0}")
    parts.append(f"d{digits}")
    if p0_mode != "exact":
        parts.append(f"p0-{p0_mode}")
    return "-".join(parts) + ".jsonl"


def _fmt(v: HighPrecReal, sig: int) -> str:
    return mpmath.nstr(v.value, sig, strip_zeros=False, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)


def dumps(table: ConstantTable) -> str:
    header = {
        "kind": KIND,
        "field": str(table.field),
        "strategy": str(table.strategy),
        "digits": table.digits,
        "k0": table.k0,
        "p0_mode": table.p0_mode,
        "engine_version": table.engine_version,
        "created": table.created,
        "entries": len(table.entries),
    }
    sig = table.digits + GUARD_DIGITS
    lines = [json.dumps(header, sort_keys=True)]
    with mp.workdps(sig + 5):
        for m in sorted(table.entries):
            rec = {"m": m, "value": _fmt(table.entries[m], sig), "argmin_k": table.argmin.get(m)}
            lines.append(json.dumps(rec, sort_keys=True))
    return "\n".join(lines) + "\n"


def cache_store(table: ConstantTable, path) -> Path:
    """Write atomically (temp file + rename)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(dumps(table), encoding="utf-8")
    os.replace(tmp, path)
    return path


def loads(text: str, source: str = "<string>") -> ConstantTable:
    lines = text.splitlines()
    if not lines:
        raise CacheError(f"{source}: empty cache file")
    try:
        header = json.loads(lines[0])
        if header.get("kind") != KIND:
            raise CacheError(f"{source}: not a bhconst table (kind={header.get('kind')!r})")
        table = ConstantTable(
            field=Field.parse(header["field"]),
            strategy=Strategy(header["strategy"]),
            digits=int(header["digits"]),
            k0=header.get("k0"),
            p0_mode=header.get("p0_mode", "exact"),
            created=header["created"],
            engine_version=header["engine_version"],
        )
        with mp.workdps(working_dps(table.digits) + 5):
            for lineno, line in enumerate(lines[1:], start=2):
                rec = json.loads(line)
                m = int(rec["m"])
                if m in table.entries:
                    raise CacheError(f"{source}:{lineno}: duplicate entry m={m}")
                table.entries[m] = HighPrecReal(mpmath.mpf(rec["value"]), table.digits)
                if rec.get("argmin_k") is not None:
                    table.argmin[m] = int(rec["argmin_k"])
    except CacheError:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise CacheError(f"{source}: corrupt cache ({exc})") from None
    expected = header.get("entries")
    if expected is not None and expected != len(table.entries):
        raise CacheError(f"{source}: header promises {expected} entries, found {len(table.entries)}")
    return table


def cache_load(path, digits: int | None = None, field: Field | None = None,
               strategy: Strategy | None = None) -> ConstantTable:
    """Read a table; raise StaleCacheError if it is less precise than ``digits``."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CacheError(f"cannot read cache {path}: {exc}") from None
    table = loads(text, str(path))
    if digits is not None and table.digits < digits:
        raise StaleCacheError(
            f"{path} holds {table.digits}-digit values but {digits} were requested; recompute it")
    if table.engine_version != __version__:
        raise StaleCacheError(f"{path} was written by engine {table.engine_version}, this is {__version__}")
    if field is not None and table.field is not field:
        raise CacheError(f"{path} is a {table.field} table, expected {field}")
    if strategy is not None and table.strategy is not strategy:
        raise CacheError(f"{path} is a {table.strategy} table, expected {strategy}")
    return table
