"""Fuzzy rules: text DSL, evaluation, and per-consequent aggregation.

A rule is a conjunction of gas-level atoms with a risk-group consequent.
Evaluation follows the usual min/max calculus: AND takes the minimum of
the atom degrees, NOT complements a degree against one, ANY sums a gas's
degrees across its three sets (identically one when the sets partition
unity), and rules sharing a consequent aggregate through the maximum of
their truth values.

Grammar of the rule DSL (case-insensitive keywords, one rule per line,
``#`` starts a comment):

    rule    := "IF" clause ("AND" clause)* "THEN" "risk" "IS" group
    clause  := gas "IS" ("NOT")? level | gas "IS" "ANY"
    gas     := hydrogen|methane|ethane|ethylene|acetylene|carbon_monoxide
               |nitrogen|oxygen|carbon_dioxide|tdcg
    level   := normal|elevated|dangerous
    group   := low|medium|high
"""

import math
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from importlib import resources
from typing import Iterator, List, Optional, Sequence, Set, Tuple

from bushingdx.fuzzify import GasMembershipTable
from bushingdx.membership import GasId, Level


class RiskGroup(Enum):
    """Consequent categories of the decision table."""

    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"


class RuleSyntaxError(ValueError):
    """Rule-DSL parse failure, positioned at a line and column (1-based)."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Atom:
    """One antecedent clause over a single gas.

    ``any_level`` selects the ANY operator, which ignores ``level`` and is
    mutually exclusive with negation.
    """

    gas: GasId
    level: Optional[Level] = None
    negated: bool = False
    any_level: bool = False

    def __post_init__(self) -> None:
        if self.any_level:
            if self.negated:
                raise ValueError("an ANY atom cannot be negated")
            if self.level is not None:
                raise ValueError("an ANY atom carries no level")
        elif self.level is None:
            raise ValueError("a level atom needs a level")

    def __str__(self) -> str:
        if self.any_level:
            return f"{self.gas.value} IS ANY"
        if self.negated:
            return f"{self.gas.value} IS NOT {self.level.value}"
        return f"{self.gas.value} IS {self.level.value}"


@dataclass(frozen=True)
class Rule:
    """Conjunction of atoms with a risk-group consequent."""

    antecedent: Tuple[Atom, ...]
    consequent: RiskGroup

    def __post_init__(self) -> None:
        atoms = tuple(self.antecedent)
        object.__setattr__(self, "antecedent", atoms)
        if not atoms:
            raise ValueError("rule antecedent must not be empty")
        gases = [atom.gas for atom in atoms]
        if len(set(gases)) != len(gases):
            dupe = next(g for g in gases if gases.count(g) > 1)
            raise ValueError(f"gas {dupe.value} appears twice in one antecedent")

    def __str__(self) -> str:
        clauses = " AND ".join(str(atom) for atom in self.antecedent)
        return f"IF {clauses} THEN risk IS {self.consequent.value}"


@dataclass(frozen=True)
class RuleSet:
    """An ordered, immutable collection of rules."""

    rules: Tuple[Rule, ...]
    name: str = "ruleset"

    def __post_init__(self) -> None:
        rules = tuple(self.rules)
        object.__setattr__(self, "rules", rules)
        if not rules:
            raise ValueError("rule set must contain at least one rule")

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def missing_groups(self) -> Set[RiskGroup]:
        """Risk groups that no rule concludes.

        A set used for assessment should cover all three groups, otherwise
        aggregation is all-zero for inputs that only reach the uncovered
        group and the crisp rank is undefined.
        """
        return set(RiskGroup) - {rule.consequent for rule in self.rules}


@dataclass(frozen=True)
class AggregatedMembership:
    """Maximum truth value reached by each risk group (decision-table row)."""

    lr: float
    mr: float
    hr: float

    def __post_init__(self) -> None:
        for name in ("lr", "mr", "hr"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise ValueError(f"{name} must be finite and non-negative, got {v!r}")

    def degree(self, group: RiskGroup) -> float:
        return {RiskGroup.LOW: self.lr, RiskGroup.MEDIUM: self.mr, RiskGroup.HIGH: self.hr}[group]

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.lr, self.mr, self.hr)


_MAX_RESULT_BITS = 4096


def rule_count(categories: int, criteria: int) -> int:
    """Theoretical rule-table size: categories raised to the criteria count.

    Raises:
        ValueError: either argument is below one.
        OverflowError: the count would exceed the supported integer width.
    """
    if categories < 1 or criteria < 1:
        raise ValueError("categories and criteria must both be at least 1")
    if categories > 1 and categories.bit_length() * criteria > _MAX_RESULT_BITS:
        raise OverflowError(f"rule count would exceed {_MAX_RESULT_BITS} bits")
    return categories ** criteria


# --- DSL parsing ------------------------------------------------------------

_KEYWORDS = {"if", "and", "then", "is", "not", "any", "risk"}
_GASES = {gas.value: gas for gas in GasId}
_LEVELS = {level.value: level for level in Level}
_GROUPS = {group.value: group for group in RiskGroup}


@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    column: int

    @property
    def lowered(self) -> str:
        return self.text.lower()


class _TokenStream:
    def __init__(self, tokens: List[_Token], line: int, line_length: int):
        self._tokens = tokens
        self._pos = 0
        self._line = line
        self._end_column = line_length + 1

    def peek(self) -> Optional[_Token]:
        return self._tokens[self._pos] if self._pos < len(self._tokens) else None

    def next(self, expected: str) -> _Token:
        token = self.peek()
        if token is None:
            raise RuleSyntaxError(f"expected {expected}, found end of line", self._line, self._end_column)
        self._pos += 1
        return token

    def expect_keyword(self, keyword: str) -> None:
        token = self.next(f"'{keyword.upper()}'")
        if token.lowered != keyword:
            raise RuleSyntaxError(f"expected '{keyword.upper()}', found '{token.text}'", token.line, token.column)

    def done(self) -> bool:
        return self._pos >= len(self._tokens)


def _tokenize_line(line: str, line_no: int) -> List[_Token]:
    code = line.split("#", 1)[0]
    return [_Token(m.group(), line_no, m.start() + 1) for m in re.finditer(r"\S+", code)]


def _parse_clause(stream: _TokenStream, seen: Set[GasId]) -> Atom:
    gas_token = stream.next("a gas name")
    gas = _GASES.get(gas_token.lowered)
    if gas is None:
        raise RuleSyntaxError(f"unknown gas '{gas_token.text}'", gas_token.line, gas_token.column)
    if gas in seen:
        raise RuleSyntaxError(f"gas '{gas_token.text}' appears twice in one antecedent", gas_token.line, gas_token.column)
    seen.add(gas)
    stream.expect_keyword("is")
    token = stream.next("a level, 'NOT' or 'ANY'")
    if token.lowered == "any":
        return Atom(gas=gas, any_level=True)
    negated = False
    if token.lowered == "not":
        negated = True
        token = stream.next("a level name")
    level = _LEVELS.get(token.lowered)
    if level is None:
        raise RuleSyntaxError(f"unknown level '{token.text}'", token.line, token.column)
    return Atom(gas=gas, level=level, negated=negated)


def _parse_rule_line(line: str, line_no: int) -> Optional[Rule]:
    tokens = _tokenize_line(line, line_no)
    if not tokens:
        return None
    stream = _TokenStream(tokens, line_no, len(line))
    stream.expect_keyword("if")
    seen: Set[GasId] = set()
    atoms = [_parse_clause(stream, seen)]
    while True:
        token = stream.next("'AND' or 'THEN'")
        if token.lowered == "and":
            atoms.append(_parse_clause(stream, seen))
        elif token.lowered == "then":
            break
        else:
            raise RuleSyntaxError(f"expected 'AND' or 'THEN', found '{token.text}'", token.line, token.column)
    stream.expect_keyword("risk")
    stream.expect_keyword("is")
    group_token = stream.next("a risk group")
    group = _GROUPS.get(group_token.lowered)
    if group is None:
        raise RuleSyntaxError(f"unknown risk group '{group_token.text}'", group_token.line, group_token.column)
    trailing = stream.peek()
    if trailing is not None:
        raise RuleSyntaxError(f"unexpected trailing token '{trailing.text}'", trailing.line, trailing.column)
    return Rule(antecedent=tuple(atoms), consequent=group)


def parse_rules(text: str, name: str = "ruleset") -> RuleSet:
    """Parse rule-DSL source into a RuleSet.

    The pretty-printed form of the result (format_rules) re-parses to an
    identical structure.

    Raises:
        RuleSyntaxError: malformed source, with 1-based line and column.
        ValueError: the source contains no rules.
    """
    rules: List[Rule] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        rule = _parse_rule_line(line, line_no)
        if rule is not None:
            rules.append(rule)
    if not rules:
        raise ValueError("rule source contains no rules")
    return RuleSet(rules=tuple(rules), name=name)


def format_rules(ruleset: RuleSet) -> str:
    """Canonical one-rule-per-line rendering of a RuleSet."""
    return "\n".join(str(rule) for rule in ruleset.rules) + "\n"


def load_ruleset(path) -> RuleSet:
    """Parse a rule file from disk; the set is named after the file."""
    import pathlib

    p = pathlib.Path(path)
    return parse_rules(p.read_text(encoding="utf-8"), name=p.stem)


# --- evaluation -------------------------------------------------------------


def eval_atom(atom: Atom, table: GasMembershipTable) -> float:
    """Truth value of one atom against a membership table.

    ANY sums the gas's three degrees and clamps to [0, 1]; under a valid
    catalog the sum is already one, so the clamp is defensive only.
    """
    triple = table.degrees[atom.gas]
    if atom.any_level:
        return min(1.0, max(0.0, triple[0] + triple[1] + triple[2]))
    degree = table.degree(atom.gas, atom.level)
    return 1.0 - degree if atom.negated else degree


def eval_rule(rule: Rule, table: GasMembershipTable) -> Tuple[RiskGroup, float]:
    """Consequent and truth value (min over the antecedent atoms)."""
    truth = min(eval_atom(atom, table) for atom in rule.antecedent)
    return rule.consequent, truth


def aggregate(ruleset: RuleSet, table: GasMembershipTable) -> AggregatedMembership:
    """Per-group maximum of rule truth values; zero for groups no rule reaches."""
    best = {group: 0.0 for group in RiskGroup}
    for rule in ruleset:
        group, truth = eval_rule(rule, table)
        if truth > best[group]:
            best[group] = truth
    return AggregatedMembership(lr=best[RiskGroup.LOW], mr=best[RiskGroup.MEDIUM], hr=best[RiskGroup.HIGH])


@lru_cache(maxsize=1)
def default_ruleset() -> RuleSet:
    """The shipped rule set (see data/default.rules)."""
    text = resources.files("bushingdx").joinpath("data/default.rules").read_text(encoding="utf-8")
    return parse_rules(text, name="default")
