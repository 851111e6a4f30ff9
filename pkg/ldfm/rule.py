"""Named predicates used to check configuration values."""

from typing import Any, Callable, Optional

from .errors import ConfigError


class Rule:
    """Atomic check over a configuration object.

    :param name: Name of the rule, used in error messages
    :param resolver: Callable that receives the checked object and returns a boolean assertion
    :param error: Custom exception raised by a fail-fast RuleSet when the check is false
    """

    _name: str
    _resolver: Optional[Callable[[Any], bool]]
    _error: Optional[Exception]

    def __init__(
        self,
        name: str,
        resolver: Optional[Callable[[Any], bool]] = None,
        error: Optional[Exception] = None,
    ):
        self._name = name
        self._resolver = resolver
        self._error = error

    @property
    def name(self) -> str:
        """Return the name of the rule."""

        return self._name

    @property
    def error(self) -> Optional[Exception]:
        """Return the custom error, if any."""

        return self._error

    def execute(self, data: Any) -> bool:
        """Evaluate the rule.

        :param data: Object to be checked
        :return bool: True when the object satisfies the rule
        :raises ConfigError: When the resolver is not callable
        """

        if self._resolver is None or not callable(self._resolver):
            raise ConfigError(f"Rule '{self._name}' doesn't have a Callable resolver")

        return bool(self._resolver(data))

    def __hash__(self) -> int:
        return hash((self._name, self._resolver))
