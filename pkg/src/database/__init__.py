"""Run ledger package."""
from .database import db, Database
from .models import Base, RunRecordRow

__all__ = [
    "db",
    "Database",
    "Base",
    "RunRecordRow",
]
