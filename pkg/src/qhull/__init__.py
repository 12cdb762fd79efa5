"""Injective hulls, rational hulls and maximal rings of quotients of finite modules."""

from .config import Config, configured, get_config, set_config

__version__ = "0.1.0"
