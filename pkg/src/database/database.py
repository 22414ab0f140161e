"""
Run ledger connection and session management.
"""
from contextlib import contextmanager
from typing import Generator, Optional
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker, Session
from sqlalchemy.pool import StaticPool
from src.config import settings
from src.database.models import Base
import logging

logger = logging.getLogger(__name__)


class Database:
    """Database manager following singleton pattern."""

    _instance = None
    _engine = None
    _session_factory = None
    _url: Optional[str] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        """Engines are created lazily on first use."""

    def configure(self, url: Optional[str] = None):
        """(Re)bind the ledger to a database URL (defaults to settings.database_url)."""
        url = url or settings.database_url
        if self._engine is not None and url == self._url:
            return
        self.dispose()

        kwargs = {"echo": False, "pool_pre_ping": True}
        if url.startswith("sqlite"):
            kwargs["connect_args"] = {"check_same_thread": False}
            if ":memory:" in url or url == "sqlite://":
                kwargs["poolclass"] = StaticPool

        self._engine = create_engine(url, **kwargs)
        self._session_factory = sessionmaker(
            bind=self._engine,
            autocommit=False,
            autoflush=False,
            expire_on_commit=False,
        )
        self._url = url
        logger.info(f"Run ledger bound to {url}")

    def create_tables(self):
        """Create the ledger tables if missing."""
        self.configure(self._url)
        try:
            Base.metadata.create_all(bind=self._engine)
        except Exception as e:
            logger.error(f"Error creating ledger tables: {e}")
            raise

    def get_session(self) -> Session:
        """
        Get a new database session.
        Caller is responsible for closing the session.
        """
        self.configure(self._url)
        return self._session_factory()

    @contextmanager
    def session_scope(self) -> Generator[Session, None, None]:
        """
        Provide a transactional scope for database operations.
        Automatically commits on success, rolls back on error.
        """
        session = self.get_session()
        try:
            yield session
            session.commit()
        except Exception as e:
            session.rollback()
            logger.error(f"Database session error: {e}")
            raise
        finally:
            session.close()

    def dispose(self):
        """Dispose of the database engine and connection pool."""
        if self._engine is not None:
            self._engine.dispose()
            self._engine = None
            self._session_factory = None
            logger.debug("Run ledger engine disposed")


# Global database instance
db = Database()
