"""CSV and JSON report writers.

Both files carry the library version and the fully resolved config, and
contain no timestamps, so a rerun with the same config is byte-identical.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

from . import __version__


def _cell(v):
    if isinstance(v, float):
        return repr(v)
    return v


def _plain(v):
    # JSON has no complex, no NaN/inf; keep values readable and exact
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if hasattr(v, "item"):
        return _plain(v.item())
    return v


def write_csv(path: Path, header, rows, config: dict) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# rankin {__version__}\n")
        fh.write("# config " + json.dumps(_plain(config), sort_keys=True) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(_plain(v)) for v in row])


def summary_dict(command: str, result, config: dict) -> dict:
    return {
        "command": command,
        "version": __version__,
        "config": _plain(config),
        "status": "PASS" if result.passed else "FAIL",
        "assertions": [{"check": label, "result": "PASS" if ok else "FAIL", "detail": detail}
                       for label, ok, detail in result.assertions],
        "summary": _plain(result.summary),
    }


def write_json(path: Path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_report(out_dir, command: str, result, config: dict) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path, json_path = out / f"{command}.csv", out / f"{command}.json"
    write_csv(csv_path, result.header, result.rows, config)
    write_json(json_path, summary_dict(command, result, config))
    return csv_path, json_path
