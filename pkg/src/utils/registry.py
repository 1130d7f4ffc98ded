"""
Registry Module.

This module provides a named registry for pluggable components such as
the verification checks.
"""

from typing import Callable, Dict, Generic, List, TypeVar
import logging

logger = logging.getLogger(__name__)

T = TypeVar("T")


class Registry(Generic[T]):
    """Registry mapping keys to components."""

    def __init__(self, label: str = "Component"):
        self.label = label
        self._items: Dict[str, T] = {}

    def register(self, key: str, item: T) -> None:
        """Register a component under ``key``."""
        if key in self._items:
            logger.warning(f"{self.label} '{key}' re-registered")
        self._items[key] = item
        logger.debug(f"Registered {self.label.lower()}: {key}")

    def decorator(self, key: str) -> Callable[[T], T]:
        """Decorator form of :meth:`register`."""
        def wrap(item: T) -> T:
            self.register(key, item)
            return item
        return wrap

    def get(self, key: str) -> T:
        """
        Get a component by key.

        Raises:
            KeyError: If the key is not registered
        """
        if key not in self._items:
            raise KeyError(f"{self.label} '{key}' not found. Available: {self.list_keys()}")
        return self._items[key]

    def list_all(self) -> List[T]:
        return list(self._items.values())

    def list_keys(self) -> List[str]:
        return list(self._items.keys())

    def __contains__(self, key: str) -> bool:
        return key in self._items

    def __len__(self) -> int:
        return len(self._items)
