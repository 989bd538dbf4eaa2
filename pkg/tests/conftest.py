import pytest

from vdspec import build_scenario, run_scenario


@pytest.fixture(scope="session")
def scenario_result():
    """Memoized catalog runs; each benchmark propagates once per session."""
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = run_scenario(build_scenario(name))
        return cache[name]

    return get
