"""
Main conftest.py for pytest configuration.

Fixtures here install test settings for the library and give the CLI tests
a runner and a scratch directory. Builders for matrices and graphs live in
tests/helpers.py.
"""

import logging
from collections.abc import Generator
from pathlib import Path

import pytest
from click.testing import CliRunner

from treefit.common.parallel import use_settings
from treefit.config import TestSettings, get_config

pytest_plugins = ["tests.fixtures.config"]


@pytest.fixture(scope="session")
def test_config() -> TestSettings:
    """
    Provide test configuration.

    Returns:
        TestSettings: Test configuration instance.
    """
    return get_config(testing=True)


@pytest.fixture(autouse=True)
def library_settings(test_config: TestSettings) -> Generator[TestSettings, None, None]:
    """
    Install the test settings for every library call.

    Yields:
        TestSettings: The installed settings.
    """
    use_settings(test_config)
    yield test_config
    use_settings(None)


@pytest.fixture
def runner() -> Generator[CliRunner, None, None]:
    """
    Provide a click test runner.

    The CLI replaces the root logging handlers on each invocation; they are
    removed afterwards so no handler outlives the captured streams.
    """
    yield CliRunner()
    logging.getLogger().handlers.clear()


@pytest.fixture
def workdir(tmp_path: Path) -> Path:
    """Scratch directory for input and output files."""
    return tmp_path


# Test categorization markers
def pytest_configure(config):
    """Configure pytest markers for test categorization."""
    config.addinivalue_line(
        "markers",
        "unit: Unit tests that test individual components in isolation",
    )
    config.addinivalue_line(
        "markers",
        "integration: Integration tests that run CLI commands end-to-end",
    )
    config.addinivalue_line(
        "markers",
        "slow: Tests that are slow to run",
    )


def pytest_collection_modifyitems(config, items):
    """Add markers based on test location."""
    for item in items:
        if "unit" in str(item.fspath):
            item.add_marker(pytest.mark.unit)
        elif "integration" in str(item.fspath):
            item.add_marker(pytest.mark.integration)
