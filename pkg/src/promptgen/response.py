"""
Response post-processing and the generation call for an assembled prompt.

Classification outputs are reduced to one label: the first ``[1]``/``[2]`` for
LaMP-1, the earliest mentioned tag for LaMP-2 and the first digit 1-5 for
LaMP-3. Unparseable outputs fall back to the first candidate (LaMP-1/2) or the
middle rating 3 (LaMP-3). Generation outputs are trimmed.
"""

import logging
import re
from typing import Optional, Sequence

from pydantic import BaseModel, ConfigDict

from src.core.exceptions import UnparseableLabel
from src.models import GenerationProviderConfig, PromptBundle, TaskType
from src.providers import BaseGenerationProvider, create_generation_provider

logger = logging.getLogger(__name__)

LAMP3_FALLBACK = "3"

_BRACKETED_CHOICE = re.compile(r"\[\s*([12])\s*\]")
_BARE_CHOICE = re.compile(r"\b([12])\b")
_RATING = re.compile(r"\b([1-5])\b")


class Answer(BaseModel):
    raw: str
    prediction: str
    parsed: bool = True

    model_config = ConfigDict(frozen=True)


def _earliest_label(output: str, labels: Sequence[str]) -> Optional[str]:
    lowered = output.lower()
    best = None
    for label in labels:
        position = lowered.find(label.lower())
        if position < 0:
            continue
        # earliest mention wins, the longer label on equal positions
        key = (position, -len(label))
        if best is None or key < best[0]:
            best = (key, label)
    return best[1] if best else None


def fallback_label(task: TaskType, labels: Sequence[str]) -> Optional[str]:
    if task is TaskType.LAMP_3:
        return LAMP3_FALLBACK
    if task in (TaskType.LAMP_1, TaskType.LAMP_2) and labels:
        return labels[0]
    return None


def parse_response(task: TaskType, raw: str, labels: Sequence[str] = ()) -> str:
    """
    Reduce a raw completion to the task's prediction.

    Raises:
        UnparseableLabel: Classification output matching no label; ``fallback`` holds the fallback prediction
    """
    output = raw.strip()
    if not task.is_classification:
        return output

    label = None
    if task is TaskType.LAMP_1:
        match = _BRACKETED_CHOICE.search(output) or _BARE_CHOICE.search(output)
        label = f"[{match.group(1)}]" if match else None
    elif task is TaskType.LAMP_3:
        match = _RATING.search(output)
        label = match.group(1) if match else None
    else:
        label = _earliest_label(output, labels)

    if label is None:
        raise UnparseableLabel(
            f"{task.value} output {output[:80]!r} matches no label",
            raw=raw,
            fallback=fallback_label(task, labels),
        )
    return label


def answer(bundle: PromptBundle, provider: BaseGenerationProvider) -> Answer:
    """
    Generate and post-process the completion of a prompt bundle.

    Unparseable classification outputs are logged and replaced by the fallback
    label with ``parsed=False``.
    """
    raw = provider.generate(bundle.rendered, choices=bundle.labels or None)
    try:
        return Answer(raw=raw, prediction=parse_response(bundle.task, raw, bundle.labels))
    except UnparseableLabel as e:
        logger.warning(f"{e}; falling back to {e.fallback!r}")
        return Answer(raw=raw, prediction=e.fallback or "", parsed=False)


def generate_response(bundle: PromptBundle, provider_cfg: GenerationProviderConfig,
                      provider: Optional[BaseGenerationProvider] = None) -> str:
    """Prediction string for a bundle; see answer()."""
    provider = provider or create_generation_provider(provider_cfg)
    return answer(bundle, provider).prediction
