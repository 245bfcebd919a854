import pytest

from critexp import _kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the jitted kernels once so timed tests measure runtime only."""
    _kernels.warmup()
