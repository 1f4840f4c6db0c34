# backend/app/logs.py

import logging
import os

from dotenv import load_dotenv

ROOT_LOGGER = "skt"
_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
_configured = False


def _configure_root() -> None:
    global _configured
    if _configured:
        return
    load_dotenv()
    root = logging.getLogger(ROOT_LOGGER)
    if not root.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(_FORMAT))
        root.addHandler(handler)
    root.setLevel(os.getenv("SKT_LOG_LEVEL", "WARNING").upper())
    root.propagate = False
    _configured = True


def get_logger(name: str) -> logging.Logger:
    """
    Return a logger under the package root ("skt.<name>").
    The root handler is installed once, on first use.
    """
    _configure_root()
    if name.startswith("app."):
        name = name[len("app."):]
    return logging.getLogger(f"{ROOT_LOGGER}.{name}")


def set_level(level: str) -> None:
    _configure_root()
    logging.getLogger(ROOT_LOGGER).setLevel(level.upper())
