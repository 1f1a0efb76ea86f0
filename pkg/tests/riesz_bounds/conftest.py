import logging
from typing import Iterator

import pytest


@pytest.fixture(autouse=True)
def reset_package_logger() -> Iterator[None]:
    # the CLI detaches the package logger from the root logger, which hides records from caplog
    yield
    logger = logging.getLogger("riesz_bounds")
    for handler in logger.handlers[:]:
        logger.removeHandler(handler)
    logger.setLevel(logging.NOTSET)
    logger.propagate = True
