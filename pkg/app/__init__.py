"""
Signed Qubit Entropy toolkit
Reconstructs the qubit state space from an entropic uncertainty principle
on the eight-point phase space with signed probabilities.
"""

import logging
import sys

import structlog

__version__ = '1.0.0'


def setup_logging(level: str = 'WARNING', fmt: str = 'json'):
    """Configure structured logging on stderr.

    Standard output is reserved for the JSON/CSV documents produced by the
    command line, so every log record goes to stderr.
    """
    log_level = getattr(logging, str(level).upper(), logging.WARNING)

    renderer = (
        structlog.processors.JSONRenderer()
        if fmt == 'json'
        else structlog.dev.ConsoleRenderer(colors=False)
    )
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            renderer,
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )

    logging.basicConfig(level=log_level, stream=sys.stderr, format='%(message)s', force=True)


def init_sentry(config_class):
    """Initialize Sentry error tracking when a DSN is configured."""
    if not getattr(config_class, 'SENTRY_DSN', None):
        return False

    import sentry_sdk

    sentry_sdk.init(
        dsn=config_class.SENTRY_DSN,
        traces_sample_rate=1.0,
        environment=getattr(config_class, 'ENVIRONMENT', 'production'),
        release=f'signed-qubit-entropy@{__version__}',
    )
    return True
