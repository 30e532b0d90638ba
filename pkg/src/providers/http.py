"""
OpenAI-compatible HTTP client with bounded retries and bounded concurrency.
"""

import logging
import threading
import time
from typing import Any, Dict, Optional

import requests

from src.core.exceptions import ProviderUnavailable
from src.models.params import TransportParams

RETRYABLE_STATUS = frozenset({408, 409, 425, 429})


class OpenAICompatibleClient:
    """
    Minimal JSON client for ``/v1/embeddings`` and ``/v1/chat/completions``.

    Every request is attempted at most ``max_retries`` times; attempt n waits
    ``retry_backoff * 2**(n-1)`` seconds before the next one. At most
    ``max_concurrency`` requests are in flight per client.
    """

    def __init__(self, endpoint: str, transport: TransportParams, session: Optional[requests.Session] = None):
        if not endpoint:
            raise ProviderUnavailable("remote provider configured without an endpoint URL")
        base = endpoint.rstrip("/")
        if base.endswith("/v1"):
            base = base[:-3]
        self.base_url = base
        self.transport = transport
        self.session = session or requests.Session()
        self._semaphore = threading.BoundedSemaphore(transport.max_concurrency)
        self._lock = threading.Lock()
        self.stats = {"requests": 0, "retries": 0, "failures": 0}
        self.logger = logging.getLogger(f"{__name__}.{self.__class__.__name__}")

    def _headers(self) -> Dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self.transport.api_key:
            headers["Authorization"] = f"Bearer {self.transport.api_key}"
        return headers

    def _count(self, key: str) -> None:
        with self._lock:
            self.stats[key] += 1

    def post_json(self, path: str, payload: Dict[str, Any]) -> Dict[str, Any]:
        """
        POST a JSON payload and return the decoded response.

        Raises:
            ProviderUnavailable: Network errors, 5xx or throttling after the last attempt,
                or any other non-2xx status
        """
        url = f"{self.base_url}{path}"
        last_error = None
        for attempt in range(1, self.transport.max_retries + 1):
            self._count("requests")
            try:
                with self._semaphore:
                    response = self.session.post(
                        url, json=payload, headers=self._headers(), timeout=self.transport.timeout
                    )
                if response.status_code >= 500 or response.status_code in RETRYABLE_STATUS:
                    last_error = f"HTTP {response.status_code}"
                elif response.status_code >= 400:
                    self._count("failures")
                    raise ProviderUnavailable(f"{url} rejected the request: HTTP {response.status_code} {response.text[:200]}")
                else:
                    return response.json()
            except requests.RequestException as e:
                last_error = str(e)
            except ValueError as e:
                last_error = f"invalid JSON response: {e}"

            if attempt < self.transport.max_retries:
                delay = self.transport.retry_backoff * 2 ** (attempt - 1)
                self._count("retries")
                self.logger.warning(f"Request to {url} failed ({last_error}); retry {attempt} in {delay:.1f}s")
                time.sleep(delay)

        self._count("failures")
        raise ProviderUnavailable(f"{url} unavailable after {self.transport.max_retries} attempts: {last_error}")
