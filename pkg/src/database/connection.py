"""
Database connection management for the SQLite embedding cache.

Engines and session factories are created once per database URL and shared
by every cache instance pointing at the same file.
"""
import logging
import threading
from contextlib import contextmanager
from typing import Dict, Generator, Optional, Tuple

from sqlalchemy import create_engine
from sqlalchemy.engine import Engine
from sqlalchemy.orm import Session, sessionmaker

from .models import Base

logger = logging.getLogger(__name__)

_engines: Dict[str, Tuple[Engine, sessionmaker]] = {}
_engines_lock = threading.Lock()


def setup_database_engine(database_url: str, echo: bool = False) -> Engine:
    """Create (or reuse) the engine for a database URL and make sure the tables exist."""
    if not database_url:
        raise ValueError("database URL must not be empty")
    with _engines_lock:
        if database_url in _engines:
            return _engines[database_url][0]
        engine = create_engine(
            database_url,
            echo=echo,
            connect_args={"check_same_thread": False} if database_url.startswith("sqlite") else {},
        )
        session_factory = sessionmaker(
            bind=engine,
            expire_on_commit=False,
            autoflush=True,
        )
        Base.metadata.create_all(engine)
        _engines[database_url] = (engine, session_factory)
        logger.info(f"Database engine initialised for {database_url}")
        return engine


@contextmanager
def get_db_session(database_url: str) -> Generator[Session, None, None]:
    if database_url not in _engines:
        setup_database_engine(database_url)
    session = _engines[database_url][1]()
    try:
        yield session
        session.commit()
    except Exception as e:
        session.rollback()
        logger.error(f"Database session error: {str(e)}")
        raise
    finally:
        session.close()


def close_database(database_url: Optional[str] = None) -> None:
    """Dispose one engine, or every engine when no URL is given."""
    with _engines_lock:
        urls = [database_url] if database_url else list(_engines)
        for url in urls:
            entry = _engines.pop(url, None)
            if entry is None:
                continue
            try:
                entry[0].dispose()
                logger.info(f"Database connection closed for {url}")
            except Exception as e:
                logger.error(f"Failed to close database connection: {str(e)}")
