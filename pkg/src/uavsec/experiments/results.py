# experiments/results.py - CSV 결과 파일과 summary.yaml 기록

import csv
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Sequence

import yaml

logger = logging.getLogger(__name__)


def format_value(value: Any) -> str:
    """CSV 셀 문자열 (float는 repr로 재현 가능하게)"""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Mapping[str, Any]]) -> Path:
    """헤더 행이 있는 UTF-8 CSV 기록 (누락된 칸은 빈 문자열)"""
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=list(header), lineterminator="\n")
        writer.writeheader()
        count = 0
        for row in rows:
            writer.writerow({key: format_value(row.get(key)) for key in header})
            count += 1
    logger.info("Wrote %d rows to %s", count, path)
    return path


def write_summary(path: Path, entries: List[Dict[str, Any]], extra: Mapping[str, Any] = None) -> Path:
    """풀이별 메타데이터를 YAML로 기록"""
    document: Dict[str, Any] = {"solves": entries}
    if extra:
        document.update(extra)
    with open(path, "w", encoding="utf-8") as f:
        yaml.safe_dump(document, f, default_flow_style=False, sort_keys=False)
    return path
