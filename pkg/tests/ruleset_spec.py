"""RuleSet unit testing."""

from expects import be_a, equal, expect, raise_error
from mamba import description, it

from ldfm import Rule, RuleSet
from ldfm.errors import ConfigError, ConfigValueError, OutOfRangeError

with description('Should test RuleSet configuration') as self:
    with it('takes rules on the constructor in order'):
        rule_set = RuleSet(name='set1', rules=[
            Rule(name='rule1', resolver=lambda x: False),
            Rule(name='rule2', resolver=lambda x: False),
        ])

        expect(rule_set.name).to(equal('set1'))
        expect(rule_set.failing({})).to(equal(['rule1', 'rule2']))

    with it('checks error by adding many values with conflict for an existing rule'):
        rule = Rule(name='rule1', resolver=lambda x: False)
        rule_set = RuleSet(name='set1', rules=[rule])

        expect(lambda: rule_set.add_many([rule, Rule(name='rule2', resolver=lambda x: False)])).to(
            raise_error(ConfigError, "Rule 'rule1' was already configured in the RuleSet"))
        expect(rule_set.failing({})).to(equal(['rule1']))

    with it('checks error by adding many values with duplicated rules'):
        rule = Rule(name='rule1', resolver=lambda x: True)

        expect(lambda: RuleSet(name='set1', rules=[rule, rule])).to(
            raise_error(ConfigError, "Rule 'rule1' is duplicated on the given rules"))

    with it('throws fail_fast mode error'):
        rule_set = RuleSet(name='set1')
        rule_set.add_many([Rule(name='rule1', resolver=lambda x: False), Rule(name='rule2', resolver=lambda x: False)])

        expect(lambda: rule_set.apply({}, fail_fast=True)).to(raise_error(ConfigValueError, "set1: rule 'rule1' fail"))

    with it('throws error with fail_fast mode disabled'):
        rule_set = RuleSet(name='set1')
        rule_set.add_many([
            Rule(name='rule1', resolver=lambda x: False),
            Rule(name='rule2', resolver=lambda x: True),
            Rule(name='rule3', resolver=lambda x: False),
        ])

        expect(rule_set.failing({})).to(equal(['rule1', 'rule3']))
        expect(lambda: rule_set.apply({}, fail_fast=False)).to(
            raise_error(ConfigValueError, "set1: rules ['rule1', 'rule3'] fail"))

    with it('apply all rules successfully multiple times'):
        rule_set = RuleSet(name='set1', rules=[Rule(name='rule1', resolver=lambda x: x > 0)])

        rule_set.apply(1)
        rule_set.apply(2)

        expect(rule_set.failing(3)).to(equal([]))

    with it('raises error for not configured rules on RuleSet'):
        rule_set = RuleSet(name='set1')

        expect(lambda: rule_set.apply({})).to(raise_error(ConfigError, 'No rules configured on rule set set1'))

    with it('raises custom rule error'):
        rule_set = RuleSet(name='set1', rules=[
            Rule(name='rule1', resolver=lambda x: False, error=OutOfRangeError('custom error')),
        ])

        try:
            rule_set.apply({})
            assert False
        except OutOfRangeError as error:
            expect(error).to(be_a(OutOfRangeError))
            expect(error.args[0]).to(equal('custom error'))
