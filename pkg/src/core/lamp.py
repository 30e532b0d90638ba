"""
LaMP adapter - maps the official LaMP JSON files onto histories and queries.

A LaMP questions file is a list of entries ``{"id", "input", "profile": [...]}``;
the outputs file is ``{"task": "LaMP_1", "golds": [{"id", "output"}]}``.

Profile items become BehaviorRecords under these rules:

========  ==================================  =====================
task      text                                fields
========  ==================================  =====================
LaMP-1/5  title + "\\n\\n" + abstract          title, abstract
LaMP-2    description (movies) or text (news)  tag / category, title
LaMP-3    text                                score
LaMP-4    title + "\\n\\n" + text              title, body
LaMP-7    text                                (none)
========  ==================================  =====================

A ``date`` of ``YYYY-MM-DD`` maps to midnight UTC, a bare year to January 1st;
items without a date use their profile position as timestamp.
"""

import json
import logging
import re
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from src.models import Query, TaskType, UserHistory
from .exceptions import ParseError, StoreIOError
from .history import build_history

logger = logging.getLogger(__name__)

TEXT_SEPARATOR = "\n\n"

RATING_LABELS = ["1", "2", "3", "4", "5"]

_DATE_PATTERN = re.compile(r'^(\d{4})-(\d{2})-(\d{2})')
_YEAR_PATTERN = re.compile(r'^\d{4}$')

# question input patterns, matched against the whole "input" string
_LAMP1_TITLE = re.compile(r'title "(.*?)",\s*which reference', re.DOTALL)
_LAMP1_REFS = re.compile(r'\[1\]:\s*"(.*?)"\s*\[2\]:\s*"(.*)"\s*$', re.DOTALL)
_LAMP2_INPUT = re.compile(r'(?:tags|categories):\s*\[(.*?)\]\s*(?:description|article):\s*(.*)$', re.DOTALL)
_TRAILING_PAYLOAD = {
    TaskType.LAMP_3: re.compile(r'review:\s*(.*)$', re.DOTALL),
    TaskType.LAMP_4: re.compile(r'article:\s*(.*)$', re.DOTALL),
    TaskType.LAMP_5: re.compile(r'abstract of a paper:\s*(.*)$', re.DOTALL),
    TaskType.LAMP_7: re.compile(r'before or after it:\s*(.*)$', re.DOTALL),
}
_INPUT_HINTS: List[Tuple[str, TaskType]] = [
    ("which reference is related", TaskType.LAMP_1),
    ("among the following tags", TaskType.LAMP_2),
    ("among the following categories", TaskType.LAMP_2),
    ("score of the following review", TaskType.LAMP_3),
    ("headline", TaskType.LAMP_4),
    ("title for the following abstract", TaskType.LAMP_5),
    ("paraphrase", TaskType.LAMP_7),
]


def parse_lamp_date(value: Any) -> int:
    """
    Convert a LaMP date to epoch seconds (UTC).

    Raises:
        ParseError: Unrecognised date format
    """
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    text = str(value).strip()
    match = _DATE_PATTERN.match(text)
    if match:
        year, month, day = (int(part) for part in match.groups())
        return int(datetime(year, month, day, tzinfo=timezone.utc).timestamp())
    if _YEAR_PATTERN.match(text):
        return int(datetime(int(text), 1, 1, tzinfo=timezone.utc).timestamp())
    raise ParseError(f"unrecognised LaMP date {value!r}")


def infer_task(entry: Dict[str, Any]) -> TaskType:
    """Infer the LaMP task from the question wording, falling back to the profile keys."""
    prompt = str(entry.get('input', '')).lower()
    for hint, task in _INPUT_HINTS:
        if hint in prompt:
            return task
    profile = entry.get('profile') or []
    keys = set(profile[0].keys()) if profile else set()
    if 'abstract' in keys:
        return TaskType.LAMP_5
    if 'tag' in keys or 'category' in keys:
        return TaskType.LAMP_2
    if 'score' in keys:
        return TaskType.LAMP_3
    if 'title' in keys and 'text' in keys:
        return TaskType.LAMP_4
    if 'text' in keys:
        return TaskType.LAMP_7
    raise ParseError("cannot infer LaMP task from entry")


def _join(*parts: Optional[str]) -> str:
    return TEXT_SEPARATOR.join(part.strip() for part in parts if part and part.strip())


def profile_item_to_record(item: Dict[str, Any], task: TaskType, position: int) -> Dict[str, Any]:
    """Map one profile item to raw record fields (see the module table)."""
    if task in (TaskType.LAMP_1, TaskType.LAMP_5):
        title, abstract = item.get('title', ''), item.get('abstract', '')
        text = _join(title, abstract)
        fields = {'title': title, 'abstract': abstract}
    elif task is TaskType.LAMP_2:
        if 'description' in item:
            text = item.get('description', '')
            fields = {'tag': item.get('tag', '')}
        else:
            text = item.get('text', '')
            fields = {'category': item.get('category', ''), 'title': item.get('title', '')}
    elif task is TaskType.LAMP_3:
        text = item.get('text', '')
        fields = {'score': str(item.get('score', ''))}
    elif task is TaskType.LAMP_4:
        title, body = item.get('title', ''), item.get('text', '')
        text = _join(title, body)
        fields = {'title': title, 'body': body}
    else:
        text = item.get('text', '')
        fields = {}

    timestamp = parse_lamp_date(item['date']) if item.get('date') else position
    return {
        'behavior_id': str(item.get('id', f"p{position}")),
        'text': text,
        'timestamp': timestamp,
        'fields': {key: str(value) for key, value in fields.items() if value != ''},
    }


def profile_to_history(user_id: str, profile: List[Dict[str, Any]], task: TaskType) -> UserHistory:
    records = [profile_item_to_record(item, task, position) for position, item in enumerate(profile)]
    return build_history(user_id, records)


def parse_question(entry: Dict[str, Any], task: Optional[TaskType] = None, issued_at: int = 0) -> Query:
    """
    Extract the query text and candidate labels from a LaMP question input.

    Unrecognised wordings keep the full input as query text.
    """
    task = task or infer_task(entry)
    prompt = str(entry.get('input', ''))
    text, candidates = prompt, None

    if task is TaskType.LAMP_1:
        title = _LAMP1_TITLE.search(prompt)
        refs = _LAMP1_REFS.search(prompt)
        if title:
            text = title.group(1)
        if refs:
            candidates = [refs.group(1), refs.group(2)]
    elif task is TaskType.LAMP_2:
        match = _LAMP2_INPUT.search(prompt)
        if match:
            candidates = [label.strip() for label in match.group(1).split(',') if label.strip()]
            text = match.group(2).strip()
    else:
        pattern = _TRAILING_PAYLOAD.get(task)
        match = pattern.search(prompt) if pattern else None
        if match:
            text = match.group(1).strip()
        if task is TaskType.LAMP_3:
            candidates = list(RATING_LABELS)

    return Query(
        query_id=str(entry.get('id', '')),
        text=text,
        issued_at=issued_at,
        task=task,
        candidates=candidates,
    )


def read_json(path: Union[str, Path]) -> Any:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except OSError as e:
        raise StoreIOError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON in {path}: {e.msg}", line=e.lineno) from e


def load_lamp_history(path: Union[str, Path], user_id: Optional[str] = None) -> UserHistory:
    """
    Read the profile of one LaMP question entry as a history.

    Args:
        path: LaMP questions file (list of entries) or a single entry object
        user_id: Entry id to select; defaults to the first entry

    Raises:
        ParseError: No matching entry or malformed profile
    """
    data = read_json(path)
    entries = data if isinstance(data, list) else [data]
    if not entries:
        raise ParseError(f"no LaMP entries in {path}")

    entry = entries[0]
    if user_id is not None:
        matches = [e for e in entries if str(e.get('id')) == str(user_id)]
        if not matches:
            raise ParseError(f"no LaMP entry with id '{user_id}' in {path}")
        entry = matches[0]

    if not isinstance(entry.get('profile'), list):
        raise ParseError("LaMP entry has no 'profile' list")
    task = infer_task(entry)
    history = profile_to_history(str(entry.get('id', user_id or Path(path).stem)), entry['profile'], task)
    logger.info(f"Loaded {len(history)} {task.value} profile records for entry '{history.user_id}'")
    return history


def load_lamp_outputs(path: Union[str, Path]) -> Tuple[Optional[TaskType], Dict[str, str]]:
    """Read a LaMP outputs file into (task, {question id: gold output})."""
    data = read_json(path)
    if not isinstance(data, dict) or 'golds' not in data:
        raise ParseError(f"{path} is not a LaMP outputs file")
    task = TaskType.parse(data['task']) if data.get('task') else None
    return task, {str(gold['id']): str(gold['output']) for gold in data['golds']}
