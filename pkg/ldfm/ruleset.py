"""Ordered collections of rules applied to one configuration object."""

from typing import Any, Iterable, List, Set

from .errors import ConfigError, ConfigValueError
from .rule import Rule


class RuleSet:
    """Apply a set of rules to a configuration object.

    :param name: Identifier of the rule set, usually the checked type
    """

    _name: str
    _rules: List[Rule]
    _rule_hashes: Set[int]

    def __init__(self, name: str, rules: Iterable[Rule] = ()):
        self._name = name
        self._rules = []
        self._rule_hashes = set()

        self.add_many(rules)

    @property
    def name(self) -> str:
        """Get the rule set name."""
        return self._name

    def add_many(self, rules: Iterable[Rule]) -> None:
        """Append many rules at once, all or nothing.

        :param rules: Iterable object of rules
        :raises ConfigError: When some rule is repeated or already added
        """

        rules = list(rules)
        hashes = set()

        for rule in rules:
            if hash(rule) in self._rule_hashes:
                raise ConfigError(f"Rule '{rule.name}' was already configured in the RuleSet")

            if hash(rule) in hashes:
                raise ConfigError(f"Rule '{rule.name}' is duplicated on the given rules")

            hashes.add(hash(rule))

        self._rules.extend(rules)
        self._rule_hashes.update(hashes)

    def failing(self, data: Any) -> List[str]:
        """Names of every rule that doesn't hold for the data, in insertion order."""

        return [rule.name for rule in self._rules if not rule.execute(data)]

    def apply(self, data: Any, fail_fast: bool = True) -> None:
        """Check the data against every rule of the set.

        :param data: Object to be checked
        :param fail_fast: Raise at the first failing rule instead of collecting all of them
        :raises ConfigValueError: When some rule fails and it has no custom error
        """

        if not self._rules:
            raise ConfigError(f'No rules configured on rule set {self._name}')

        if fail_fast:
            for rule in self._rules:
                if not rule.execute(data):
                    if rule.error is not None:
                        raise rule.error

                    raise ConfigValueError(f"{self._name}: rule '{rule.name}' fail")

            return

        errors = self.failing(data)

        if errors:
            raise ConfigValueError(f"{self._name}: rules {errors} fail")
