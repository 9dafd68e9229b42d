import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from melink.config import load_config


@pytest.fixture(scope="session")
def cfg():
    return load_config()


@pytest.fixture(scope="session")
def magnet_params(cfg):
    return cfg.magnet_params()


@pytest.fixture(scope="session")
def magnet_cold(cfg):
    from dataclasses import replace
    return replace(cfg.magnet_params(), temperature=0.0)
