import logging

from wcusp_waves.config.logging import get_logger
from wcusp_waves.config.settings import LOG_LEVEL


def test_get_logger():
    logger = get_logger("wcusp-test")
    assert len(logger.handlers) == 1
    assert not logger.propagate
    if not LOG_LEVEL:
        # ENV is "test", so INFO
        assert logger.level == logging.INFO

    # Asking again does not stack handlers
    assert get_logger("wcusp-test") is logger
    assert len(logger.handlers) == 1
