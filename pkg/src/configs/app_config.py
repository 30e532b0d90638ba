from contextvars import ContextVar
from typing import Any, Optional

from pydantic_settings import (
    BaseSettings,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
    TomlConfigSettingsSource,
)

from .api import ApiConfig
from .database import DataConfig
from .development import DeploymentConfig
from .memory import MemoryConfig
from src.models.params import (
    EmbeddingProviderConfig,
    GenerationProviderConfig,
    SegmentationParams,
    WalkConfig,
)

_config_file: ContextVar[Optional[str]] = ContextVar("memweaver_config_file", default=None)


class AppConfig(
    DataConfig,
    ApiConfig,
    MemoryConfig,
    DeploymentConfig
    ):

    model_config = SettingsConfigDict(
        env_prefix="MEMWEAVER_",
        # read from dotenv format config file
        env_file=".env",
        env_file_encoding="utf-8",
        frozen=True,
        # ignore extra attributes
        extra="ignore",
    )

    # Before adding any config,
    # please consider to arrange it in the proper config group of existed or added
    # for better readability and maintainability.

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        # highest priority first: environment > config file > command line flags
        sources: list[PydanticBaseSettingsSource] = [env_settings, dotenv_settings]
        config_file = _config_file.get()
        if config_file:
            sources.append(TomlConfigSettingsSource(settings_cls, toml_file=config_file))
        sources.append(init_settings)
        return tuple(sources)

    @classmethod
    def resolve(cls, config_file: Optional[str] = None, **flags: Any) -> "AppConfig":
        """
        Resolve the run configuration from flags, an optional TOML file and the environment.

        Args:
            config_file: Path of a TOML file whose keys are the upper-case field names
            **flags: Field values given on the command line; None means "not given"

        Returns:
            AppConfig: Fully resolved, frozen configuration
        """
        given = {key: value for key, value in flags.items() if value is not None}
        token = _config_file.set(config_file)
        try:
            return cls(**given)
        finally:
            _config_file.reset(token)

    def snapshot(self) -> dict[str, Any]:
        """JSON-ready copy of every resolved field; secrets are masked."""
        return self.model_dump(mode="json")

    @property
    def embedding_config(self) -> EmbeddingProviderConfig:
        return EmbeddingProviderConfig(
            kind=self.EMBED_KIND,
            model_id=self.EMBED_MODEL,
            endpoint=self.EMBED_URL,
            dim=self.EMBED_DIM,
            batch_size=self.EMBED_BATCH_SIZE,
            cache_path=self.EMBED_CACHE_PATH,
            seed=self.EMBED_SEED,
            api_key=self.API_KEY.get_secret_value(),
            max_retries=self.MAX_RETRIES,
            retry_backoff=self.RETRY_BACKOFF,
            timeout=self.REQUEST_TIMEOUT,
            max_concurrency=self.MAX_CONCURRENCY,
        )

    @property
    def generation_config(self) -> GenerationProviderConfig:
        return GenerationProviderConfig(
            kind=self.LLM_KIND,
            model_id=self.LLM_MODEL,
            endpoint=self.LLM_URL,
            max_input_tokens=self.LLM_MAX_INPUT_TOKENS,
            max_new_tokens=self.LLM_MAX_NEW_TOKENS,
            temperature=self.LLM_TEMPERATURE,
            top_p=self.LLM_TOP_P,
            seed=self.LLM_SEED,
            mock_keywords=self.LLM_MOCK_KEYWORDS,
            api_key=self.API_KEY.get_secret_value(),
            max_retries=self.MAX_RETRIES,
            retry_backoff=self.RETRY_BACKOFF,
            timeout=self.REQUEST_TIMEOUT,
            max_concurrency=self.MAX_CONCURRENCY,
        )

    @property
    def walk_config(self) -> WalkConfig:
        return WalkConfig(
            alpha=self.WALK_ALPHA,
            lambda1=self.WALK_LAMBDA1,
            lambda2=self.WALK_LAMBDA2,
            max_steps=self.WALK_MAX_STEPS,
            seed=self.WALK_SEED,
            recency_unit=self.WALK_RECENCY_UNIT,
            cos_floor=self.WALK_COS_FLOOR,
            start_policy=self.WALK_START_POLICY,
            num_walks=self.WALK_NUM_WALKS,
            uniform_scores=self.WALK_UNIFORM_SCORES,
            use_temporal_edges=self.WALK_USE_TEMPORAL_EDGES,
            use_semantic_edges=self.WALK_USE_SEMANTIC_EDGES,
        )

    @property
    def segmentation_params(self) -> SegmentationParams:
        return SegmentationParams(
            mode=self.SEGMENT_MODE,
            tau_mode=self.SEGMENT_TAU_MODE,
            tau=self.SEGMENT_TAU,
            min_size=self.SEGMENT_MIN_SIZE,
            max_size=self.SEGMENT_MAX_SIZE,
            k=self.GRAPH_K,
            seed=self.GRAPH_SEED,
        )
