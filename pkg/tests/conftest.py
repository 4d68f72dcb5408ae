import os
import sys
import time

import pytest

sys.path.insert(0, os.path.dirname(__file__))

CRITERIA = pytest.StashKey[dict]()


def pytest_addoption(parser):
    parser.addoption("--campaign-dir", default=None,
                     help="directory for the acceptance experiment batches; finished "
                          "batches found there are reused instead of re-run")


def pytest_configure(config):
    config.stash[CRITERIA] = {}


@pytest.fixture(scope="session")
def criteria(request):
    """Criterion number -> (passed, detail); printed after the run."""
    return request.config.stash[CRITERIA]


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(CRITERIA, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        passed, detail = results[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if passed else 'FAIL'}  {detail}")


class Campaign:
    """Runs each preset batch at most once per session and times it."""

    def __init__(self, root):
        self.root = root
        self.seconds = {}
        self.reused = set()

    def path(self, name):
        return os.path.join(self.root, name)

    def batch(self, name, argv):
        from pressura.experiments.cli import cli_dispatch

        out = self.path(name)
        if name in self.seconds or name in self.reused:
            return out
        if os.path.isfile(os.path.join(out, "summary.json")):
            self.reused.add(name)
            return out
        t0 = time.perf_counter()
        code = cli_dispatch(argv + ["--out", out])
        self.seconds[name] = time.perf_counter() - t0
        assert code == 0, f"{name} batch exited with {code}"
        return out


@pytest.fixture(scope="session")
def campaign(request, tmp_path_factory):
    root = request.config.getoption("--campaign-dir")
    if root is None:
        root = str(tmp_path_factory.mktemp("campaign"))
    os.makedirs(root, exist_ok=True)
    return Campaign(root)
