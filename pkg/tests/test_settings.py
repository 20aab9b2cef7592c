import logging

import pytest
from pydantic import ValidationError

from wlevels.settings import RunConfig


def test_defaults_come_from_environment(monkeypatch) -> None:
    monkeypatch.setenv("WLEVELS_JOBS", "3")
    monkeypatch.setenv("WLEVELS_SEED", "11")
    config = RunConfig(command="verify")
    assert config.jobs == 3
    assert config.seed == 11
    assert config.output_format == "yaml"


def test_bad_environment_value_falls_back(monkeypatch) -> None:
    monkeypatch.setenv("WLEVELS_JOBS", "many")
    assert RunConfig(command="verify").jobs == 1


def test_format_is_normalized_and_checked() -> None:
    assert RunConfig(command="classify", output_format="CSV").output_format == "csv"
    with pytest.raises(ValidationError):
        RunConfig(command="classify", output_format="pdf")


def test_jobs_must_be_positive() -> None:
    with pytest.raises(ValidationError):
        RunConfig(command="verify", jobs=0)


def test_counts_must_be_non_negative() -> None:
    with pytest.raises(ValidationError):
        RunConfig(command="verify", jacobi_samples=-1)


def test_log_level_from_verbosity() -> None:
    assert RunConfig(command="verify").log_level is None
    assert RunConfig(command="verify", verbosity=1).log_level == logging.INFO
    assert RunConfig(command="verify", verbosity=3).log_level == logging.DEBUG
