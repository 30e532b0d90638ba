"""
Generation providers: the extractive mock and the OpenAI-compatible chat client.

Mock rule (free generation): content tokens of system + prompt (lowercased
alphanumeric runs, shipped stopwords and pure digits removed) are ranked by
frequency, ties broken lexicographically, and the top
``min(mock_keywords, max_new_tokens)`` are joined with single spaces.

Mock rule (classification, ``choices`` given): each choice's option text is the
remainder of the prompt line that starts with the choice (or the choice itself);
the choice whose option shares the most content tokens with the last non-empty
prompt line wins, ties going to the earlier choice.
"""

from collections import Counter
from typing import List, Optional

from src.models import GenerationKind, GenerationProviderConfig
from .base import BaseGenerationProvider
from .http import OpenAICompatibleClient
from .text import content_tokens, tokenize


class MockExtractiveGenerator(BaseGenerationProvider):
    """Deterministic keyword extractor standing in for an LLM."""

    def extract_keywords(self, text: str) -> List[str]:
        counts = Counter(content_tokens(text))
        if not counts:
            counts = Counter(tokenize(text))
        ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
        limit = min(self.config.mock_keywords, self.config.max_new_tokens)
        return [token for token, _ in ranked[:limit]]

    @staticmethod
    def _option_text(prompt_lines: List[str], choice: str) -> str:
        for line in prompt_lines:
            stripped = line.strip()
            if stripped.startswith(choice):
                remainder = stripped[len(choice):].strip()
                if remainder:
                    return remainder
        return choice

    def choose(self, prompt: str, choices: List[str]) -> str:
        lines = [line for line in prompt.splitlines() if line.strip()]
        target = set(content_tokens(lines[-1])) if lines else set()
        best, best_overlap = choices[0], -1
        for choice in choices:
            overlap = len(target & set(content_tokens(self._option_text(lines, choice))))
            if overlap > best_overlap:
                best, best_overlap = choice, overlap
        return best

    def _generate(self, prompt: str, system: Optional[str], choices: Optional[List[str]]) -> str:
        if choices:
            return self.choose(prompt, choices)
        text = f"{system}\n{prompt}" if system else prompt
        return " ".join(self.extract_keywords(text))


class RemoteGenerator(BaseGenerationProvider):
    """
    Client of an OpenAI-compatible ``POST /v1/chat/completions`` endpoint.

    The seed is forwarded when set; whether the endpoint honours it is
    endpoint-specific.
    """

    def __init__(self, config: GenerationProviderConfig, client: Optional[OpenAICompatibleClient] = None):
        super().__init__(config)
        self.client = client or OpenAICompatibleClient(config.endpoint, config)

    def _generate(self, prompt: str, system: Optional[str], choices: Optional[List[str]]) -> str:
        messages = []
        if system:
            messages.append({"role": "system", "content": system})
        messages.append({"role": "user", "content": prompt})
        payload = {
            "model": self.config.model_id,
            "messages": messages,
            "max_tokens": self.config.max_new_tokens,
            "temperature": self.config.temperature,
            "top_p": self.config.top_p,
        }
        if self.config.seed is not None:
            payload["seed"] = self.config.seed
        response = self.client.post_json("/v1/chat/completions", payload)
        try:
            return response["choices"][0]["message"]["content"] or ""
        except (KeyError, IndexError, TypeError):
            self.logger.warning(f"Malformed chat completion response: {str(response)[:200]}")
            return ""


def create_generation_provider(cfg: GenerationProviderConfig) -> BaseGenerationProvider:
    if cfg.kind is GenerationKind.MOCK_EXTRACTIVE:
        return MockExtractiveGenerator(cfg)
    return RemoteGenerator(cfg)


def generate(prompt: str, cfg: GenerationProviderConfig, system: Optional[str] = None) -> str:
    """Generate with a provider built from cfg; see BaseGenerationProvider.generate."""
    return create_generation_provider(cfg).generate(prompt, system=system)
