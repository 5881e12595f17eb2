"""CLI commands and the HTTP session service."""

from .config import build_backends, load_config

__all__ = ["build_backends", "load_config"]
