import dataclasses
import logging

import pytest

from configuration.configuration import Configuration, logger
from services.toolkit_service import ToolkitService


@pytest.fixture
def restore_level():
    level = logger.level
    yield
    logger.setLevel(level)


class TestConfiguration:
    """Validation and the logger level."""

    def test_defaults_validate(self, config):
        assert config.validate()

    def test_unknown_log_level(self, config):
        assert not dataclasses.replace(config, log_level="LOUD").validate()

    def test_bad_characteristic(self, config):
        assert not dataclasses.replace(config, characteristic=6).validate()

    def test_service_applies_log_level(self, config, restore_level):
        ToolkitService(dataclasses.replace(config, log_level="debug"))
        assert logger.level == logging.DEBUG
        ToolkitService(dataclasses.replace(config, log_level="WARNING"))
        assert logger.level == logging.WARNING

    def test_service_rejects_bad_level(self, config, restore_level):
        with pytest.raises(ValueError):
            ToolkitService(dataclasses.replace(config, log_level="LOUD"))
