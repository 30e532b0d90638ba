"""MetricReport serialization and the aligned-column text table."""

import json
from pathlib import Path
from typing import List, Union

from src.core.exceptions import StoreIOError
from src.models import MetricReport


def report_to_json(report: MetricReport) -> str:
    return json.dumps(report.model_dump(mode="json"), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def save_report(report: MetricReport, path: Union[str, Path]) -> None:
    try:
        Path(path).write_text(report_to_json(report), encoding="utf-8")
    except OSError as e:
        raise StoreIOError(f"cannot write report {path}: {e}") from e


def format_report_table(report: MetricReport) -> str:
    """
    Render metrics as a table: one row per metric, the seed mean and one column per seed.

    Example:
        metric    mean    seed=0  seed=1
        rouge1    0.2143  0.2143  0.2143
    """
    per_seed = report.per_seed or []
    header = ["metric", "mean"] + [f"seed={seed}" for seed in report.seeds[:len(per_seed)]]
    rows: List[List[str]] = [header]
    for name, value in report.metrics.items():
        rows.append([name, f"{value:.4f}"] + [f"{values.get(name, float('nan')):.4f}" for values in per_seed])

    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() for row in rows]
    lines.append(
        f"{report.task.value}: {report.n_cases} cases, {report.failed_cases} failed, "
        f"{report.unparseable} unparseable"
    )
    return "\n".join(lines)
