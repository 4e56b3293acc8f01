"""CSV/JSON record files.

Every file carries the full run configuration and a timestamp in its header;
reals are written with 17 significant digits so a read-back is bit-exact.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .amplitude import LayerParameters, OverlapValue
from .concentration import SweepRecord
from .optimizer import OptimizationResult

COLUMNS = ("n", "p", "layer", "beta", "gamma", "overlap_scaled", "grad_norm", "branch", "seed")
FORMATS = ("csv", "json")


@dataclass
class RunConfig:
    command: str
    options: dict = field(default_factory=dict)
    rng_seed: int = 0
    output: str | None = None
    format: str = "json"

    def to_dict(self) -> dict:
        return asdict(self)


def fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    return format(x, ".17g")


def timestamp() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


def record_rows(records) -> list[dict]:
    rows = []
    for rec in records:
        res = rec.result
        for k, (gamma, beta) in enumerate(zip(res.params.gammas, res.params.betas), start=1):
            rows.append({
                "n": rec.n, "p": rec.p, "layer": k, "beta": beta, "gamma": gamma,
                "overlap_scaled": res.overlap.scaled, "grad_norm": res.grad_norm,
                "branch": res.branch, "seed": rec.seed,
            })
    return rows


def _cell(value) -> str:
    return fmt_float(value) if isinstance(value, float) else str(value)


def dumps_records(records, fmt: str, config: RunConfig, stamp: str | None = None) -> str:
    rows = record_rows(records)
    if not rows:
        raise ValueError("no records to write")
    stamp = timestamp() if stamp is None else stamp
    config_json = json.dumps(config.to_dict(), sort_keys=True)
    if fmt == "csv":
        buf = io.StringIO()
        buf.write(f"# config: {config_json}\n")
        buf.write(f"# timestamp: {stamp}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(COLUMNS)
        for row in rows:
            writer.writerow([_cell(row[c]) for c in COLUMNS])
        return buf.getvalue()
    if fmt == "json":
        lines = ["{", f'  "config": {config_json},', f'  "timestamp": {json.dumps(stamp)},',
                 '  "records": [']
        body = []
        for row in rows:
            fields = ", ".join(
                f'"{c}": {json.dumps(row[c]) if isinstance(row[c], str) else _cell(row[c])}'
                for c in COLUMNS
            )
            body.append("    {" + fields + "}")
        lines.append(",\n".join(body))
        lines += ["  ]", "}"]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def emit_records(records, path, fmt: str, config: RunConfig) -> Path:
    path = Path(path)
    path.write_text(dumps_records(records, fmt, config))
    return path


def _typed(row: dict) -> dict:
    return {
        "n": int(row["n"]), "p": int(row["p"]), "layer": int(row["layer"]),
        "beta": float(row["beta"]), "gamma": float(row["gamma"]),
        "overlap_scaled": float(row["overlap_scaled"]), "grad_norm": float(row["grad_norm"]),
        "branch": str(row["branch"]), "seed": int(row["seed"]),
    }


def parse_records(text: str) -> tuple[dict, list[dict]]:
    """Return ``(config, rows)`` from CSV or JSON record text."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        doc = json.loads(text)
        return doc.get("config", {}), [_typed(r) for r in doc["records"]]
    config: dict = {}
    body = []
    for line in text.splitlines():
        if line.startswith("# config:"):
            config = json.loads(line[len("# config:"):])
        elif not line.startswith("#") and line.strip():
            body.append(line)
    reader = csv.DictReader(body)
    if tuple(reader.fieldnames or ()) != COLUMNS:
        raise ValueError(f"unexpected CSV columns {reader.fieldnames}")
    return config, [_typed(r) for r in reader]


def rows_to_records(rows: list[dict]) -> list[SweepRecord]:
    """Group per-layer rows back into one record per (n, p)."""
    grouped: dict[tuple[int, int], list[dict]] = {}
    for row in rows:
        grouped.setdefault((row["n"], row["p"]), []).append(row)
    records = []
    for (n, p), layers in sorted(grouped.items()):
        layers.sort(key=lambda r: r["layer"])
        if [r["layer"] for r in layers] != list(range(1, p + 1)):
            raise ValueError(f"incomplete layers for n={n}, p={p}")
        head = layers[0]
        result = OptimizationResult(
            n=n,
            params=LayerParameters(tuple(r["gamma"] for r in layers),
                                   tuple(r["beta"] for r in layers)),
            overlap=OverlapValue(head["overlap_scaled"], n),
            grad_norm=head["grad_norm"],
            iterations=0,
            branch=head["branch"],
        )
        records.append(SweepRecord(n, p, result, 0.0, head["seed"]))
    return records


def load_records(path) -> tuple[dict, list[SweepRecord]]:
    config, rows = parse_records(Path(path).read_text())
    return config, rows_to_records(rows)
