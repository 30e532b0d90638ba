from pydantic import Field
from pydantic_settings import BaseSettings


class DeploymentConfig(BaseSettings):
    """
    Configuration settings for logging
    """

    DEBUG: bool = Field(
        description="Enable debug mode for additional logging, same as --verbose",
        default=False,
    )

    LOG_LEVEL: str = Field(
        description="Root log level configured by the command line entry point",
        default="WARNING",
    )
