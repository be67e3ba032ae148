import os

import pytest

from dendriform.tree_series import TreeDendriform
from paths.mat_poly_path import load_path
from utilities.utils import Utils

PROJECT_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), os.pardir))
DEFAULT_PATH_FILE = os.path.join(PROJECT_ROOT, "testdata", "default_path.json")


def pytest_addoption(parser):
    """
    Add command line options for the truncation degree and the matrix path under test.

    --max-degree: Truncation degree N for the series algebras (default 5).
    --path-file: MatPolyPath JSON file used by the numeric tests.

    Args:
        parser: The pytest parser object used to add custom command line options.
    """
    parser.addoption("--max-degree", action="store", type=int, default=5,
                     help="Truncation degree for series tests")
    parser.addoption("--path-file", action="store", default=DEFAULT_PATH_FILE,
                     help="MatPolyPath JSON file for numeric tests")


@pytest.fixture(scope="session")
def max_degree(request) -> int:
    degree = request.config.getoption("--max-degree")
    Utils.custom_logger(__name__).debug(f"Truncation degree selected: {degree}")
    return degree


@pytest.fixture(scope="session")
def path_file(request) -> str:
    return request.config.getoption("--path-file")


@pytest.fixture(scope="function")
def setup(request, max_degree: int, path_file: str):
    """
    Attaches a truncated tree algebra and the configured matrix path to the test class.

    Args:
        request: Pytest's request object for accessing test context.
        max_degree (int): Truncation degree from --max-degree.
        path_file (str): Path JSON from --path-file.
    """
    logger = Utils.custom_logger(__name__)
    request.cls.trunc = max_degree
    request.cls.algebra = TreeDendriform(max_degree)
    request.cls.path = load_path(path_file)
    logger.debug(f"Attached TreeDendriform({max_degree}) and path '{path_file}' to {request.cls.__name__}")
    yield


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item):
    """
    Adds the active truncation degree to the HTML report of each test, when pytest-html is active.

    Args:
        item: The test item.

    Yields:
        The test report.
    """
    pytest_html = item.config.pluginmanager.getplugin("html")
    outcome = yield
    report = outcome.get_result()
    if pytest_html is None or report.when != "call":
        return
    extras = getattr(report, "extras", [])
    extras.append(pytest_html.extras.text(f"truncation degree {item.config.getoption('--max-degree')}",
                                          name="truncation"))
    report.extras = extras
