"""
Database models for the experiment run ledger.
Rows are only ever appended; a rerun of the same config adds a new row.
"""
from datetime import datetime, timezone
from sqlalchemy import Boolean, Column, DateTime, Index, Integer, String, Text
from sqlalchemy.orm import declarative_base

Base = declarative_base()


def _utcnow() -> datetime:
    return datetime.now(timezone.utc)


class RunRecordRow(Base):
    """One harness run."""
    __tablename__ = "run_records"

    id = Column(Integer, primary_key=True, autoincrement=True)
    config_hash = Column(String(64), nullable=False, index=True)
    kind = Column(String(20), nullable=False, index=True)
    master_seed = Column(Integer, nullable=False)
    mode = Column(String(20), nullable=False)
    corner_rule = Column(String(20), nullable=False)
    off_paper = Column(Text, nullable=True)  # JSON list
    build_id = Column(String(50), nullable=False)

    metrics = Column(Text, nullable=False)  # JSON object
    output_path = Column(Text, nullable=True)
    passed = Column(Boolean, nullable=False)

    execution_time_seconds = Column(Integer, nullable=True)
    created_at = Column(DateTime(timezone=True), nullable=False, default=_utcnow)

    __table_args__ = (
        Index("idx_kind_created", "kind", "created_at"),
    )

    def __repr__(self):
        return f"RunRecordRow(kind={self.kind}, config_hash={self.config_hash[:12]}, passed={self.passed})"
