"""
Per-task prompt templates.

Every task renders behavioral records as one quoted-field line per record and
ends with a task instruction followed by the query block. Only the LaMP-1
instruction is the published wording; the others follow the same pattern.
"""

from typing import Callable, Dict, List, Optional

from pydantic import BaseModel, ConfigDict

from src.core.exceptions import UnknownTask
from src.models import BehaviorRecord, Query, TaskType
from src.providers.text import collapse_whitespace

LAMP1_LABELS = ["[1]", "[2]"]
RATING_LABELS = ["1", "2", "3", "4", "5"]


def _quoted(name: str, value: str) -> str:
    return f"'{name}': '{collapse_whitespace(value)}'"


def _field(record: BehaviorRecord, name: str) -> str:
    return record.fields.get(name) or record.text


def _lamp1_record(record: BehaviorRecord) -> str:
    return _quoted("title", _field(record, "title"))


def _lamp2_record(record: BehaviorRecord) -> str:
    if "category" in record.fields:
        return f"{_quoted('category', record.fields['category'])}, {_quoted('article', record.text)}"
    return f"{_quoted('tag', record.fields.get('tag', ''))}, {_quoted('description', record.text)}"


def _lamp3_record(record: BehaviorRecord) -> str:
    return f"{_quoted('score', record.fields.get('score', ''))}, {_quoted('review', record.text)}"


def _title_record(record: BehaviorRecord) -> str:
    return _quoted("title", _field(record, "title"))


def _tweet_record(record: BehaviorRecord) -> str:
    return _quoted("tweet", record.text)


def _lamp1_query(query: Query) -> str:
    references = query.candidates or []
    lines = [f"{label} {collapse_whitespace(ref)}" for label, ref in zip(LAMP1_LABELS, references)]
    lines.append(f"'title': {collapse_whitespace(query.text)}")
    return "\n".join(lines)


def _lamp2_query(query: Query) -> str:
    tags = ", ".join(query.candidates or [])
    return f"tags: [{tags}]\n'description': {collapse_whitespace(query.text)}"


def _prefixed(name: str) -> Callable[[Query], str]:
    return lambda query: f"'{name}': {collapse_whitespace(query.text)}"


class TaskTemplate(BaseModel):
    task: TaskType
    instruction: str
    render_record: Callable[[BehaviorRecord], str]
    render_query: Callable[[Query], str]
    fixed_labels: Optional[List[str]] = None

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    def labels(self, query: Query) -> List[str]:
        """Candidate labels the answer is parsed against; empty for generation tasks."""
        if self.fixed_labels is not None:
            return list(self.fixed_labels)
        if self.task is TaskType.LAMP_2:
            return list(query.candidates or [])
        return []


TEMPLATES: Dict[TaskType, TaskTemplate] = {
    TaskType.LAMP_1: TaskTemplate(
        task=TaskType.LAMP_1,
        instruction=(
            "Based on the historical profiles provided, please choose one of the following two references "
            "that is more relevant to the user's input title. Please just answer with '[1]' or '[2]' "
            "without explanation."
        ),
        render_record=_lamp1_record,
        render_query=_lamp1_query,
        fixed_labels=LAMP1_LABELS,
    ),
    TaskType.LAMP_2: TaskTemplate(
        task=TaskType.LAMP_2,
        instruction=(
            "Based on the historical profiles provided, please choose the one tag from the following list "
            "that best describes the user's input description. Please just answer with the tag name "
            "without explanation."
        ),
        render_record=_lamp2_record,
        render_query=_lamp2_query,
    ),
    TaskType.LAMP_3: TaskTemplate(
        task=TaskType.LAMP_3,
        instruction=(
            "Based on the historical profiles provided, please predict the score the user would give to "
            "the following review on a scale of 1 to 5. Please just answer with 1, 2, 3, 4, or 5 "
            "without explanation."
        ),
        render_record=_lamp3_record,
        render_query=_prefixed("review"),
        fixed_labels=RATING_LABELS,
    ),
    TaskType.LAMP_4: TaskTemplate(
        task=TaskType.LAMP_4,
        instruction=(
            "Based on the historical profiles provided, please generate a headline for the following "
            "article in the user's style. Please just answer with the headline without explanation."
        ),
        render_record=_title_record,
        render_query=_prefixed("article"),
    ),
    TaskType.LAMP_5: TaskTemplate(
        task=TaskType.LAMP_5,
        instruction=(
            "Based on the historical profiles provided, please generate a title for the following "
            "abstract of the user's paper. Please just answer with the title without explanation."
        ),
        render_record=_title_record,
        render_query=_prefixed("abstract"),
    ),
    TaskType.LAMP_7: TaskTemplate(
        task=TaskType.LAMP_7,
        instruction=(
            "Based on the historical profiles provided, please paraphrase the following tweet in the "
            "user's style. Please just answer with the paraphrased tweet without explanation."
        ),
        render_record=_tweet_record,
        render_query=_prefixed("tweet"),
    ),
}


def get_template(task) -> TaskTemplate:
    """
    Raises:
        UnknownTask: No template for the task id
    """
    try:
        return TEMPLATES[TaskType.parse(task)]
    except (ValueError, KeyError) as e:
        raise UnknownTask(f"no prompt template for task {task!r}") from e
