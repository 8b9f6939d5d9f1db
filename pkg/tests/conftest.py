import logging

import pytest

from pqa.encoding.stdlib import stdlib_signature
from tests.helpers import SAMPLES


@pytest.fixture(autouse=True)
def fresh_pqa_logger():
    """Handlers from one CLI run must not write to the next run's closed streams."""
    logger = logging.getLogger("pqa")
    saved = logger.handlers[:]
    logger.handlers.clear()
    yield
    logger.handlers[:] = saved


@pytest.fixture
def sig():
    return stdlib_signature()


@pytest.fixture
def samples():
    return SAMPLES
