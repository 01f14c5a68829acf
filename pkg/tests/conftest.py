import time

import pytest

SESSION_START = time.monotonic()


@pytest.fixture(scope="session")
def session_start():
    return SESSION_START
