from typing import Optional

from pydantic import Field, PositiveInt, NonNegativeFloat, PositiveFloat, SecretStr
from pydantic_settings import BaseSettings


class EmbeddingProviderSettings(BaseSettings):
    """
    Embedding back-end, either the offline hashing mock or an OpenAI-compatible endpoint
    """
    EMBED_KIND: str = Field(
        description="Embedding provider kind. Options: 'mock-hash', 'remote'",
        default="mock-hash",
    )
    EMBED_MODEL: str = Field(
        description="Embedding model identifier sent to the endpoint and recorded in the fingerprint",
        default="bge-m3",
    )
    EMBED_URL: str = Field(
        description="Base URL of the OpenAI-compatible embeddings endpoint (remote only)",
        default="",
    )
    EMBED_DIM: PositiveInt = Field(
        description="Embedding dimension; remote responses of another size are rejected",
        default=1024,
    )
    EMBED_BATCH_SIZE: PositiveInt = Field(
        description="Number of texts per embeddings request",
        default=32,
    )
    EMBED_SEED: int = Field(
        description="Seed of the hashing mock embedder",
        default=0,
    )


class GenerationProviderSettings(BaseSettings):
    """
    Text generation back-end. Endpoints may ignore LLM_SEED; repeatability is only
    guaranteed for the mock generator.
    """
    LLM_KIND: str = Field(
        description="Generation provider kind. Options: 'mock-extractive', 'remote'",
        default="mock-extractive",
    )
    LLM_MODEL: str = Field(
        description="Chat model identifier; stands in for the LLM parameters",
        default="qwen3-8b",
    )
    LLM_URL: str = Field(
        description="Base URL of the OpenAI-compatible chat-completions endpoint (remote only)",
        default="",
    )
    LLM_MAX_INPUT_TOKENS: PositiveInt = Field(
        description="Maximum estimated prompt size in tokens",
        default=3000,
    )
    LLM_MAX_NEW_TOKENS: PositiveInt = Field(
        description="Maximum number of generated tokens",
        default=64,
    )
    LLM_TEMPERATURE: NonNegativeFloat = Field(
        description="Sampling temperature",
        default=0.7,
    )
    LLM_TOP_P: PositiveFloat = Field(
        description="Nucleus sampling mass, in (0, 1]",
        default=0.95,
    )
    LLM_SEED: Optional[int] = Field(
        description="Sampling seed forwarded to the endpoint",
        default=None,
    )
    LLM_MOCK_KEYWORDS: PositiveInt = Field(
        description="Number of keywords emitted by the extractive mock generator",
        default=10,
    )


class TransportSettings(BaseSettings):
    """
    Shared HTTP behaviour for remote providers
    """
    API_KEY: SecretStr = Field(
        description="Bearer token sent to both endpoints",
        default=SecretStr(""),
    )
    MAX_RETRIES: PositiveInt = Field(
        description="Maximum attempts per request, including the first one",
        default=3,
    )
    RETRY_BACKOFF: NonNegativeFloat = Field(
        description="Base delay in seconds; attempt n waits RETRY_BACKOFF * 2**(n-1)",
        default=1.0,
    )
    REQUEST_TIMEOUT: PositiveFloat = Field(
        description="Timeout of a single HTTP request in seconds",
        default=60.0,
    )
    MAX_CONCURRENCY: PositiveInt = Field(
        description="Maximum number of in-flight remote requests per provider",
        default=4,
    )


class ApiConfig(
    EmbeddingProviderSettings,
    GenerationProviderSettings,
    TransportSettings
):
    pass
