import pytest

from stada import scalars


@pytest.fixture(autouse=True)
def _restore_default_tolerance():
    # CLI runs may reconfigure the module-wide tolerance; keep tests isolated
    saved = scalars.default_tolerance()
    yield
    scalars.set_default_tolerance(saved)
