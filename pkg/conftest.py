"""Shared fixtures."""
import logging

import numpy as np
import pytest

from src.codec import build_concat_code
from src.config import settings
from src.database import db
from src.design import ChannelModel, DesignOverrides, derive_params, solve_k1
from src.outer_code import field_build, rs_build


@pytest.fixture(autouse=True)
def isolated_lab(tmp_path, monkeypatch):
    """Results, logs and the run ledger live under tmp_path."""
    monkeypatch.setattr(settings, "output_dir", str(tmp_path / "results"))
    monkeypatch.setattr(settings, "log_dir", str(tmp_path / "logs"))
    monkeypatch.setattr(settings, "n_jobs", 1)
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    db.configure("sqlite://")
    yield
    db.dispose()
    for handler in root.handlers:
        if handler not in handlers:
            handler.close()
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def gf8():
    return field_build(3)


@pytest.fixture
def rs73(gf8):
    return rs_build(gf8, 7, 3)


@pytest.fixture(scope="session")
def channel():
    return ChannelModel(p=0.05, q=0.25, eps_d=0.1)


@pytest.fixture(scope="session")
def k1_solution(channel):
    return solve_k1(channel)


# Small code whose true codewords sit well inside Bob's boxes:
# silent window [29, 74], active window [79, 207], bob_10 [1, 9], bob_11 [49, 145].
CODEC_OVERRIDES = dict(l2=4, m=4, rho=0.1, dy1=0.45, dxy10=0.95, dxy11=0.5)


@pytest.fixture(scope="session")
def make_params(channel, k1_solution):
    def factory(L=8, B=1024, **overrides):
        values = {**CODEC_OVERRIDES, **overrides}
        return derive_params(channel, L, B, overrides=DesignOverrides(**values), k1_solution=k1_solution)
    return factory


@pytest.fixture(scope="session")
def codec_params(make_params):
    return make_params()


@pytest.fixture(scope="session")
def codec_code(codec_params):
    """First seed whose codewords all have weight in [60, 140]."""
    for seed in range(100):
        code = build_concat_code(codec_params, seed)
        if all(((cb.weights >= 60) & (cb.weights <= 140)).all() for cb in code.inner):
            return code
    raise RuntimeError("no codebook seed passed the weight screen")


def noisy_copy(codeword: np.ndarray, p: float, ones_cleared: int = 4) -> np.ndarray:
    """Deterministic channel output: clear some ones, set round(p * zeros) zeros."""
    y = codeword.copy()
    ones = np.flatnonzero(codeword)
    zeros = np.flatnonzero(codeword == 0)
    y[ones[:ones_cleared]] = 0
    y[zeros[: int(round(p * len(zeros)))]] = 1
    return y
