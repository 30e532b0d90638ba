"""
History loading - chronological user histories and queries from disk.

JSON Lines histories hold one record per line::

    {"id": "b1", "text": "...", "timestamp": 1700000000, "fields": {"title": "..."}}

Records are ordered by (timestamp, behavior_id) and given their seq_index here;
every other module relies on that order.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

from pydantic import ValidationError

from src.models import BehaviorRecord, HistoryFormat, Query, UserHistory
from .exceptions import HistoryValidationError, ParseError, StoreIOError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def order_records(records: Iterable[Dict[str, Any]], start_index: int = 0) -> List[BehaviorRecord]:
    """
    Validate raw records, sort them chronologically and assign seq_index.

    Args:
        records: Dicts with behavior_id, text, timestamp and optional fields
        start_index: seq_index of the first record (non-zero for update batches)

    Returns:
        List[BehaviorRecord]: Records sorted by (timestamp, behavior_id)

    Raises:
        HistoryValidationError: On blank text or duplicate behavior_id
    """
    seen = set()
    raw = []
    for record in records:
        behavior_id = str(record['behavior_id'])
        if behavior_id in seen:
            raise HistoryValidationError(f"duplicate behavior_id '{behavior_id}'")
        seen.add(behavior_id)
        text = record.get('text') or ''
        if not text.strip():
            raise HistoryValidationError(f"empty text for behavior_id '{behavior_id}'")
        raw.append(record | {'behavior_id': behavior_id})

    raw.sort(key=lambda r: (r['timestamp'], r['behavior_id']))
    return [
        BehaviorRecord(
            behavior_id=r['behavior_id'],
            text=r['text'],
            timestamp=r['timestamp'],
            seq_index=start_index + position,
            fields=r.get('fields') or {},
        )
        for position, r in enumerate(raw)
    ]


def build_history(user_id: str, records: Iterable[Dict[str, Any]]) -> UserHistory:
    return UserHistory(user_id=user_id, records=order_records(records))


def _coerce_timestamp(value: Any, line: int) -> int:
    if isinstance(value, bool):
        raise ParseError("timestamp must be an integer", line=line)
    if isinstance(value, int):
        return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    if isinstance(value, str) and value.strip().lstrip('-').isdigit():
        return int(value.strip())
    raise ParseError(f"timestamp must be integer epoch seconds, got {value!r}", line=line)


def parse_jsonl_records(lines: Iterable[str]) -> List[Dict[str, Any]]:
    """
    Parse JSON Lines history records; blank lines are skipped.

    Raises:
        ParseError: With the 1-based line number of the malformed record
    """
    records = []
    for line_number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            item = json.loads(line)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", line=line_number) from e
        if not isinstance(item, dict):
            raise ParseError("record must be a JSON object", line=line_number)
        missing = [key for key in ('id', 'text', 'timestamp') if key not in item]
        if missing:
            raise ParseError(f"missing key(s) {', '.join(missing)}", line=line_number)
        if not isinstance(item['text'], str):
            raise ParseError("text must be a string", line=line_number)
        fields = item.get('fields') or {}
        if not isinstance(fields, dict):
            raise ParseError("fields must be an object", line=line_number)
        records.append({
            'behavior_id': str(item['id']),
            'text': item['text'],
            'timestamp': _coerce_timestamp(item['timestamp'], line_number),
            'fields': {str(k): str(v) for k, v in fields.items()},
        })
    return records


def _read_text(path: PathLike) -> str:
    try:
        return Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise StoreIOError(f"cannot read {path}: {e}") from e


def load_history(
    path: PathLike,
    fmt: Union[HistoryFormat, str] = HistoryFormat.JSONL,
    user_id: Optional[str] = None,
) -> UserHistory:
    """
    Load a user history from a JSON Lines file or a LaMP questions file.

    Args:
        path: History file
        fmt: 'jsonl' or 'lamp'
        user_id: User id of the result; for LaMP files, the question id whose profile is read

    Returns:
        UserHistory: Sorted, validated history with seq_index assigned

    Raises:
        ParseError: Malformed record (with line number for JSON Lines)
        HistoryValidationError: Empty text or duplicate behavior_id
        StoreIOError: File cannot be read
    """
    fmt = HistoryFormat(fmt)
    if fmt is HistoryFormat.LAMP:
        from .lamp import load_lamp_history
        return load_lamp_history(path, user_id=user_id)

    content = _read_text(path)
    records = parse_jsonl_records(content.splitlines())
    history = build_history(user_id or Path(path).stem, records)
    logger.info(f"Loaded {len(history)} records for user '{history.user_id}' from {path}")
    return history


def load_records(path: PathLike, start_index: int = 0) -> List[BehaviorRecord]:
    """Load a JSON Lines update batch; seq_index continues from start_index."""
    content = _read_text(path)
    return order_records(parse_jsonl_records(content.splitlines()), start_index=start_index)


def load_query(path: PathLike) -> Query:
    """
    Load a query from a JSON file: {"id", "text", "issued_at"?, "task"?, "candidates"?}.

    Raises:
        ParseError: File is not a valid query object
    """
    content = _read_text(path)
    try:
        item = json.loads(content)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid query JSON: {e.msg}", line=e.lineno) from e
    if not isinstance(item, dict) or 'text' not in item:
        raise ParseError("query must be an object with a 'text' key")
    try:
        return Query(
            query_id=str(item.get('id', item.get('query_id', Path(path).stem))),
            text=item['text'],
            issued_at=int(item.get('issued_at', 0)),
            task=item.get('task', 'LaMP-5'),
            candidates=item.get('candidates'),
        )
    except (ValidationError, ValueError) as e:
        raise ParseError(f"invalid query: {e}") from e
