"""Eigenvalue dataset ingestion.

Datasets are JSON files mirroring the published eigenvalue tables:

    {
      "source": str,
      "genus": int,
      "weight": int | null,            # per-record override allowed
      "generator_labels": "ones-count" | "p2-block-count",
      "records": [
        {
          "label": str, "p": int, "weight": int?,
          "T0p": str,                  # factored integer
          "Tp2_aggregate": str | null, # genus-2 aggregate lambda(T(p^2))
          "Ti_p2": {"1": str, ...} | null,
          "flags": [str]
        }, ...
      ]
    }

Eigenvalues are stored as factored-integer strings, matching the published
tables character for character (with '·' replaced by '*'); the exact
integers are derived at load time.

``generator_labels`` names the indexing convention of the Ti_p2 keys.
"ones-count" is the internal one (T_i has divisor type with i ones;
T_n is the scalar similitude coset).  Published genus-4 tables count the
p^2-blocks instead, which is the dual labelling: key i there means the
internal generator n - i.  Genus <= 2 data is unaffected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from importlib import resources

from .hecke import EigenvalueRecord, InconsistentDatasetError

GENERATOR_LABEL_STYLES = ("ones-count", "p2-block-count")


class ParseError(ValueError):
    """Malformed factored-integer string; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class DatasetError(ValueError):
    """Schema violation or internally inconsistent dataset."""


def parse_factored_integer(text: str) -> int:
    """Parse '-2^8*3^2*5*73' style strings into exact integers.

    Grammar: optional sign, then factors B or B^E joined by '*', with B
    and E decimal literals; whitespace is ignored everywhere.
    """
    compact = []
    posmap = []
    for idx, ch in enumerate(text):
        if not ch.isspace():
            compact.append(ch)
            posmap.append(idx)
    s = "".join(compact)
    if not s:
        raise ParseError("empty factored integer", 0)

    def err(msg: str, i: int):
        return ParseError(msg, posmap[i] if i < len(posmap) else len(text))

    i = 0
    sign = 1
    if s[i] in "+-":
        sign = -1 if s[i] == "-" else 1
        i += 1
    value = 1
    expecting_factor = True
    while i < len(s):
        if not s[i].isdigit():
            raise err(f"expected a digit, found {s[i]!r}", i)
        start = i
        while i < len(s) and s[i].isdigit():
            i += 1
        base = int(s[start:i])
        exponent = 1
        if i < len(s) and s[i] == "^":
            i += 1
            if i >= len(s) or not s[i].isdigit():
                raise err("expected an exponent after '^'", i)
            start = i
            while i < len(s) and s[i].isdigit():
                i += 1
            exponent = int(s[start:i])
        value *= base ** exponent
        expecting_factor = False
        if i < len(s):
            if s[i] != "*":
                raise err(f"expected '*' between factors, found {s[i]!r}", i)
            i += 1
            expecting_factor = True
    if expecting_factor:
        raise err("dangling '*' at end of input", len(s) - 1)
    return sign * value


@dataclass(frozen=True)
class Dataset:
    source: str
    genus: int
    weight: int | None
    generator_labels: str
    records: tuple[EigenvalueRecord, ...]
    raw: dict

    def clean_records(self) -> tuple[EigenvalueRecord, ...]:
        return tuple(r for r in self.records if not r.excluded)


def _require(cond: bool, message: str):
    if not cond:
        raise DatasetError(message)


def dataset_from_dict(data: dict) -> Dataset:
    _require(isinstance(data, dict), "top level must be an object")
    for key in ("source", "genus", "records"):
        _require(key in data, f"missing top-level key {key!r}")
    genus = data["genus"]
    _require(isinstance(genus, int) and genus >= 1, "genus must be a positive integer")
    weight = data.get("weight")
    _require(weight is None or isinstance(weight, int), "weight must be an integer or null")
    labels = data.get("generator_labels", "ones-count")
    _require(labels in GENERATOR_LABEL_STYLES, f"unknown generator_labels {labels!r}")
    _require(isinstance(data["records"], list), "records must be a list")

    records = []
    seen: set[tuple[str, int]] = set()
    for idx, raw in enumerate(data["records"]):
        where = f"record {idx}"
        _require(isinstance(raw, dict), f"{where}: must be an object")
        for key in ("label", "p", "T0p"):
            _require(key in raw, f"{where}: missing key {key!r}")
        label, p = raw["label"], raw["p"]
        _require(isinstance(label, str) and label, f"{where}: label must be a nonempty string")
        _require(isinstance(p, int), f"{where}: p must be an integer")
        if (label, p) in seen:
            raise DatasetError(f"{where}: duplicate (label, prime) = ({label}, {p})")
        seen.add((label, p))
        k = raw.get("weight", weight)
        _require(isinstance(k, int), f"{where} ({label}, p={p}): no weight available")
        flags = tuple(raw.get("flags", ()))
        _require(all(isinstance(f, str) for f in flags), f"{where}: flags must be strings")

        try:
            t0p = parse_factored_integer(raw["T0p"])
            aggregate = raw.get("Tp2_aggregate")
            generators = raw.get("Ti_p2")
            _require((aggregate is None) != (generators is None),
                     f"{where} ({label}, p={p}): exactly one of Tp2_aggregate and Ti_p2 required")
            agg_value = None
            gen_values = None
            if aggregate is not None:
                agg_value = parse_factored_integer(aggregate)
            else:
                _require(isinstance(generators, dict) and generators,
                         f"{where}: Ti_p2 must be a nonempty object")
                gen_values = {}
                for key, text in generators.items():
                    _require(isinstance(key, str) and key.isdigit(),
                             f"{where}: generator index {key!r} is not a non-negative integer")
                    i = int(key)
                    _require(0 <= i <= genus, f"{where}: generator index {i} outside 0..{genus}")
                    if labels == "p2-block-count":
                        i = genus - i
                    gen_values[i] = parse_factored_integer(text)
            record = EigenvalueRecord(label=label, n=genus, k=k, p=p, lambda_t0p=t0p,
                                      generator_eigenvalues=gen_values,
                                      aggregate_tp2=agg_value, flags=flags)
        except (ParseError, InconsistentDatasetError) as exc:
            raise DatasetError(f"{where} ({label}, p={p}): {exc}") from exc
        records.append(record)
    return Dataset(source=data["source"], genus=genus, weight=weight,
                   generator_labels=labels, records=tuple(records), raw=data)


def load_dataset(path: str | Path) -> Dataset:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise DatasetError(f"{path}: invalid JSON: {exc}") from exc
    return dataset_from_dict(data)


def serialize_dataset(dataset: Dataset) -> str:
    """Canonical JSON form; byte-identical round trip for bundled files."""
    return json.dumps(dataset.raw, indent=2, sort_keys=True) + "\n"


def bundled_path(name: str) -> Path:
    """Path of a bundled dataset file (with or without the .json suffix)."""
    if not name.endswith(".json"):
        name += ".json"
    ref = resources.files("satake").joinpath("data", name)
    with resources.as_file(ref) as concrete:
        return Path(concrete)


def resolve_dataset(spec: str | Path) -> Dataset:
    """Load from an existing path, else fall back to the bundled files."""
    path = Path(spec)
    if path.exists():
        return load_dataset(path)
    bundled = bundled_path(str(spec))
    if bundled.exists():
        return load_dataset(bundled)
    raise DatasetError(f"no such dataset: {spec}")
