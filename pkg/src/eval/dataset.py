"""
Evaluation dataset ingestion.

Two layouts are accepted:

* LaMP official files: a questions JSON (entries with ``id``, ``input`` and
  ``profile``) and an outputs JSON (``{"task", "golds": [{"id", "output"}]}``).
  Passing a directory selects ``*questions*.json`` and ``*outputs*.json`` in it.
* Generic JSON Lines: one case per line,
  ``{"user_id", "query": {...}, "gold", "history"?: [records]}``. The history
  may be omitted on later lines of the same user.
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Union

from pydantic import ValidationError

from src.core.exceptions import EmptyDataset, ParseError, StoreIOError
from src.core.history import build_history
from src.core.lamp import infer_task, load_lamp_outputs, parse_question, profile_to_history, read_json
from src.models import EvalCase, Query, TaskType, UserHistory

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _find_one(directory: Path, pattern: str) -> Path:
    matches = sorted(directory.glob(pattern))
    if not matches:
        raise ParseError(f"no file matching '{pattern}' in {directory}")
    return matches[0]


def load_lamp_cases(questions_path: PathLike, outputs_path: PathLike) -> List[EvalCase]:
    """
    Pair LaMP questions with their gold outputs.

    Each question's profile becomes the history of a user keyed by the question
    id; the query is issued at the newest profile timestamp.

    Raises:
        ParseError: Malformed files or a question without gold output
    """
    entries = read_json(questions_path)
    if not isinstance(entries, list):
        raise ParseError(f"{questions_path} is not a list of LaMP questions")
    outputs_task, golds = load_lamp_outputs(outputs_path)

    cases = []
    for entry in entries:
        qid = str(entry.get('id', ''))
        if qid not in golds:
            raise ParseError(f"no gold output for question '{qid}'")
        task = outputs_task or infer_task(entry)
        history = profile_to_history(qid, entry.get('profile') or [], task)
        query = parse_question(entry, task, issued_at=history.max_timestamp or 0)
        try:
            cases.append(EvalCase(user_id=qid, query=query, gold=golds[qid], history_ref=history))
        except ValidationError as e:
            raise ParseError(f"invalid case '{qid}': {e}") from e
    return cases


def load_jsonl_cases(path: PathLike) -> List[EvalCase]:
    """
    Read generic JSON Lines cases.

    Raises:
        ParseError: Malformed line, with its line number
    """
    try:
        lines = Path(path).read_text(encoding='utf-8').splitlines()
    except OSError as e:
        raise StoreIOError(f"cannot read {path}: {e}") from e

    histories: Dict[str, UserHistory] = {}
    cases = []
    for number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            item = json.loads(line)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", line=number) from e
        if not isinstance(item, dict) or not {'user_id', 'query', 'gold'} <= item.keys():
            raise ParseError("case needs 'user_id', 'query' and 'gold'", line=number)

        user_id = str(item['user_id'])
        if item.get('history') is not None and user_id not in histories:
            histories[user_id] = build_history(user_id, item['history'])
        if user_id not in histories:
            raise ParseError(f"no history for user '{user_id}'", line=number)

        try:
            query = item['query']
            query = Query(**query) if isinstance(query, dict) else Query(query_id=str(number), text=str(query))
            cases.append(EvalCase(user_id=user_id, query=query, gold=item['gold'], history_ref=histories[user_id]))
        except (ValidationError, TypeError, ValueError) as e:
            raise ParseError(f"invalid case: {e}", line=number) from e
    return cases


def load_dataset(path: PathLike, outputs_path: Optional[PathLike] = None) -> List[EvalCase]:
    """
    Load evaluation cases from a LaMP directory, a LaMP questions file or JSON Lines.

    Args:
        path: Dataset location
        outputs_path: LaMP outputs file when ``path`` is a questions file

    Raises:
        EmptyDataset: No cases
        ParseError: Malformed input
    """
    path = Path(path)
    if path.is_dir():
        cases = load_lamp_cases(_find_one(path, '*questions*.json'), _find_one(path, '*outputs*.json'))
    elif outputs_path is not None:
        cases = load_lamp_cases(path, outputs_path)
    else:
        cases = load_jsonl_cases(path)

    if not cases:
        raise EmptyDataset(f"no evaluation cases in {path}")
    tasks = {case.query.task for case in cases}
    if len(tasks) > 1:
        raise ParseError(f"dataset mixes tasks: {sorted(t.value for t in tasks)}")
    logger.info(f"Loaded {len(cases)} {cases[0].query.task.value} cases from {path}")
    return cases


def dataset_task(cases: List[EvalCase]) -> TaskType:
    return cases[0].query.task
