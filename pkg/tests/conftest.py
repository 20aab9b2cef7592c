from pathlib import Path

import pytest

from wlevels.catalog import parse_algebra
from wlevels.matrixalg import realize
from wlevels.settings import RunConfig


@pytest.fixture(scope="session")
def sl3():
    return realize(parse_algebra("sl(3)"))


@pytest.fixture(scope="session")
def sl4():
    return realize(parse_algebra("sl(4)"))


@pytest.fixture(scope="session")
def sl21():
    return realize(parse_algebra("sl(2|1)"))


@pytest.fixture(scope="session")
def spo21():
    return realize(parse_algebra("spo(2|1)"))


@pytest.fixture(scope="session")
def d21a_two():
    return realize(parse_algebra("D(2,1;2)"))


@pytest.fixture
def run_config(tmp_path: Path) -> RunConfig:
    return RunConfig(command="verify", golden_dir=tmp_path / "goldens", jobs=1)
