"""Rule DSL parsing, evaluation semantics, and aggregation."""

import random

import pytest
from hypothesis import given, strategies as st

from bushingdx.defuzz import assess
from bushingdx.fuzzify import GasMembershipTable, fuzzify_bushing
from bushingdx.membership import GasId, Level
from bushingdx.rules import (
    AggregatedMembership,
    Atom,
    RiskGroup,
    Rule,
    RuleSet,
    RuleSyntaxError,
    aggregate,
    default_ruleset,
    eval_atom,
    eval_rule,
    format_rules,
    parse_rules,
    rule_count,
)

AR4 = "IF tdcg IS dangerous AND oxygen IS NOT normal AND methane IS NOT normal THEN risk IS high"
AR5 = "IF tdcg IS dangerous AND oxygen IS NOT normal AND methane IS normal THEN risk IS medium"


class TestRuleCount:
    def test_ten_criteria_three_categories(self):
        assert rule_count(3, 10) == 59049

    def test_single_criterion(self):
        assert rule_count(3, 1) == 3

    def test_small_case(self):
        assert rule_count(2, 3) == 8

    @pytest.mark.parametrize("categories,criteria", [(0, 5), (3, 0), (-1, 2)])
    def test_rejects_non_positive(self, categories, criteria):
        with pytest.raises(ValueError):
            rule_count(categories, criteria)

    def test_oversized_result_is_a_range_error(self):
        with pytest.raises(OverflowError):
            rule_count(3, 100000)


class TestParse:
    def test_parses_ar4(self):
        ruleset = parse_rules(AR4)
        assert len(ruleset) == 1
        rule = ruleset.rules[0]
        assert rule.consequent is RiskGroup.HIGH
        assert rule.antecedent == (
            Atom(gas=GasId.TDCG, level=Level.DANGEROUS),
            Atom(gas=GasId.OXYGEN, level=Level.NORMAL, negated=True),
            Atom(gas=GasId.METHANE, level=Level.NORMAL, negated=True),
        )

    def test_parses_any_atom(self):
        ruleset = parse_rules("IF hydrogen IS ANY THEN risk IS low")
        atom = ruleset.rules[0].antecedent[0]
        assert atom.any_level is True
        assert atom.level is None
        assert not atom.negated

    def test_duplicate_gas_is_an_error(self):
        with pytest.raises(RuleSyntaxError, match="twice"):
            parse_rules("IF hydrogen IS dangerous AND hydrogen IS normal THEN risk IS low")

    def test_keywords_are_case_insensitive(self):
        a = parse_rules("if Hydrogen is NOT Normal then RISK is HIGH")
        b = parse_rules("IF hydrogen IS NOT normal THEN risk IS high")
        assert a.rules == b.rules

    def test_comments_and_blank_lines_are_skipped(self):
        text = "# header comment\n\nIF tdcg IS ANY THEN risk IS low  # trailing\n\n"
        assert len(parse_rules(text)) == 1

    def test_unknown_gas_positions_the_error(self):
        with pytest.raises(RuleSyntaxError) as excinfo:
            parse_rules("IF tdcg IS ANY THEN risk IS low\nIF helium IS normal THEN risk IS low")
        assert excinfo.value.line == 2
        assert excinfo.value.column == 4

    def test_unknown_level(self):
        with pytest.raises(RuleSyntaxError, match="unknown level"):
            parse_rules("IF hydrogen IS scary THEN risk IS low")

    def test_missing_then_clause(self):
        with pytest.raises(RuleSyntaxError, match="end of line"):
            parse_rules("IF hydrogen IS normal")

    def test_trailing_tokens_rejected(self):
        with pytest.raises(RuleSyntaxError, match="trailing"):
            parse_rules("IF hydrogen IS normal THEN risk IS low extra")

    def test_empty_source_rejected(self):
        with pytest.raises(ValueError, match="no rules"):
            parse_rules("# only a comment\n")

    def test_not_any_is_rejected(self):
        with pytest.raises(RuleSyntaxError):
            parse_rules("IF hydrogen IS NOT ANY THEN risk IS low")


class TestStructuralInvariants:
    def test_atom_any_excludes_negation(self):
        with pytest.raises(ValueError):
            Atom(gas=GasId.TDCG, negated=True, any_level=True)

    def test_atom_requires_level_or_any(self):
        with pytest.raises(ValueError):
            Atom(gas=GasId.TDCG)

    def test_rule_rejects_duplicate_gas(self):
        atoms = (Atom(gas=GasId.TDCG, level=Level.NORMAL), Atom(gas=GasId.TDCG, level=Level.DANGEROUS))
        with pytest.raises(ValueError, match="twice"):
            Rule(antecedent=atoms, consequent=RiskGroup.LOW)

    def test_rule_rejects_empty_antecedent(self):
        with pytest.raises(ValueError):
            Rule(antecedent=(), consequent=RiskGroup.LOW)

    def test_ruleset_rejects_empty(self):
        with pytest.raises(ValueError):
            RuleSet(rules=())

    def test_missing_groups(self):
        ruleset = parse_rules("IF tdcg IS ANY THEN risk IS low")
        assert ruleset.missing_groups() == {RiskGroup.MEDIUM, RiskGroup.HIGH}
        assert default_ruleset().missing_groups() == set()


@pytest.fixture
def reference_table(reference_reading) -> GasMembershipTable:
    return fuzzify_bushing(reference_reading)


class TestEvalAtom:
    def test_not_normal_oxygen_on_reference(self, reference_table):
        atom = Atom(gas=GasId.OXYGEN, level=Level.NORMAL, negated=True)
        assert eval_atom(atom, reference_table) == 1.0

    def test_any_tdcg_on_reference(self, reference_table):
        assert eval_atom(Atom(gas=GasId.TDCG, any_level=True), reference_table) == 1.0

    def test_plain_normal_acetylene(self, reference_table):
        assert eval_atom(Atom(gas=GasId.ACETYLENE, level=Level.NORMAL), reference_table) == 1.0

    def test_negation_complements_partial_degree(self):
        # methane at 24 ppm sits halfway down the [23, 25] normal ramp
        from bushingdx.fuzzify import GasReading

        reading = GasReading(bushing_id="mid", h2=0, ch4=24, c2h6=0, c2h4=0, c2h2=0, co=0, co2=0, n2=0, o2=0)
        table = fuzzify_bushing(reading)
        atom = Atom(gas=GasId.METHANE, level=Level.NORMAL, negated=True)
        assert eval_atom(atom, table) == pytest.approx(0.5, abs=1e-15)


class TestEvalRule:
    def test_ar4_fires_fully_on_reference(self, reference_table):
        rule = parse_rules(AR4).rules[0]
        assert eval_rule(rule, reference_table) == (RiskGroup.HIGH, 1.0)

    def test_ar5_is_blocked_by_methane(self, reference_table):
        # min(tdcg dangerous = 1, not-normal oxygen = 1, normal methane = 0)
        rule = parse_rules(AR5).rules[0]
        assert eval_rule(rule, reference_table) == (RiskGroup.MEDIUM, 0.0)

    def test_single_atom_rule_passes_through_degree(self, reference_table):
        rule = Rule(antecedent=(Atom(gas=GasId.ETHANE, level=Level.ELEVATED),), consequent=RiskGroup.LOW)
        _, truth = eval_rule(rule, reference_table)
        assert truth == reference_table.degree(GasId.ETHANE, Level.ELEVATED) == 1.0


def brute_force_aggregate(ruleset, table):
    """Independent oracle: literal per-rule min, per-group max."""
    best = {RiskGroup.LOW: 0.0, RiskGroup.MEDIUM: 0.0, RiskGroup.HIGH: 0.0}
    for rule in ruleset.rules:
        degrees = []
        for atom in rule.antecedent:
            n, e, d = table.degrees[atom.gas]
            if atom.any_level:
                degrees.append(min(1.0, n + e + d))
            else:
                value = {Level.NORMAL: n, Level.ELEVATED: e, Level.DANGEROUS: d}[atom.level]
                degrees.append(1.0 - value if atom.negated else value)
        truth = min(degrees)
        best[rule.consequent] = max(best[rule.consequent], truth)
    return (best[RiskGroup.LOW], best[RiskGroup.MEDIUM], best[RiskGroup.HIGH])


class TestAggregate:
    def test_reference_bushing_reaches_all_groups(self, reference_table):
        agg = aggregate(default_ruleset(), reference_table)
        assert agg.as_tuple() == (1.0, 1.0, 1.0)

    def test_all_zero_reading_is_low_risk_only(self, zero_reading):
        table = fuzzify_bushing(zero_reading)
        agg = aggregate(default_ruleset(), table)
        assert agg.as_tuple() == (1.0, 0.0, 0.0)
        assert agg.as_tuple() == brute_force_aggregate(default_ruleset(), table)

    def test_matches_brute_force_on_reference(self, reference_table):
        agg = aggregate(default_ruleset(), reference_table)
        assert agg.as_tuple() == brute_force_aggregate(default_ruleset(), reference_table)

    def test_all_zero_degrees_aggregate_to_zero(self):
        table = GasMembershipTable(bushing_id="x", tdcg_ppm=0.0, degrees={gas: (0.0, 0.0, 0.0) for gas in GasId})
        agg = aggregate(default_ruleset(), table)
        assert agg.as_tuple() == (0.0, 0.0, 0.0)


class TestDefaultRuleset:
    def test_reproduces_reference_aggregation(self, reference_reading):
        assert assess(reference_reading).memberships.as_tuple() == (1.0, 1.0, 1.0)

    def test_contains_ar4_verbatim(self):
        assert parse_rules(AR4).rules[0] in default_ruleset().rules

    def test_high_hydrogen_with_normal_oxygen_is_low_risk(self):
        rule = Rule(
            antecedent=(
                Atom(gas=GasId.HYDROGEN, level=Level.DANGEROUS),
                Atom(gas=GasId.OXYGEN, level=Level.NORMAL),
            ),
            consequent=RiskGroup.LOW,
        )
        assert rule in default_ruleset().rules

    def test_high_hydrogen_with_high_oxygen_is_high_risk(self):
        rule = Rule(
            antecedent=(
                Atom(gas=GasId.HYDROGEN, level=Level.DANGEROUS),
                Atom(gas=GasId.OXYGEN, level=Level.NORMAL, negated=True),
            ),
            consequent=RiskGroup.HIGH,
        )
        assert rule in default_ruleset().rules

    def test_no_high_risk_without_abnormal_oxygen(self):
        # combustibles without oxygen are not an explosion risk: every
        # high-risk rule requires oxygen away from normal
        for rule in default_ruleset():
            if rule.consequent is RiskGroup.HIGH:
                oxygen_atoms = [a for a in rule.antecedent if a.gas is GasId.OXYGEN]
                assert len(oxygen_atoms) == 1
                assert oxygen_atoms[0].negated and oxygen_atoms[0].level is Level.NORMAL

    def test_nitrogen_has_no_rule(self):
        for rule in default_ruleset():
            assert all(atom.gas is not GasId.NITROGEN for atom in rule.antecedent)

    def test_cached_instance_is_stable(self):
        assert default_ruleset() is default_ruleset()


# --- DSL round-trip and algebraic properties --------------------------------

GAS_NAMES = [gas.value for gas in GasId]
LEVEL_NAMES = [level.value for level in Level]
GROUP_NAMES = [group.value for group in RiskGroup]


@st.composite
def rule_line(draw):
    count = draw(st.integers(1, 5))
    gases = draw(st.lists(st.sampled_from(GAS_NAMES), min_size=count, max_size=count, unique=True))
    clauses = []
    for gas in gases:
        kind = draw(st.sampled_from(["plain", "not", "any"]))
        if kind == "any":
            clauses.append(f"{gas} IS ANY")
        elif kind == "not":
            clauses.append(f"{gas} IS NOT {draw(st.sampled_from(LEVEL_NAMES))}")
        else:
            clauses.append(f"{gas} IS {draw(st.sampled_from(LEVEL_NAMES))}")
    return "IF " + " AND ".join(clauses) + f" THEN risk IS {draw(st.sampled_from(GROUP_NAMES))}"


@st.composite
def rule_source(draw):
    lines = draw(st.lists(rule_line(), min_size=1, max_size=8))
    return "\n".join(lines) + "\n"


class TestRoundTrip:
    @given(rule_source())
    def test_parse_print_parse_is_identity(self, source):
        parsed = parse_rules(source)
        reparsed = parse_rules(format_rules(parsed))
        assert reparsed.rules == parsed.rules

    def test_shipped_ruleset_round_trips(self):
        ruleset = default_ruleset()
        assert parse_rules(format_rules(ruleset)).rules == ruleset.rules


def random_table(rng: random.Random) -> GasMembershipTable:
    degrees = {}
    for gas in GasId:
        n = rng.random()
        e = rng.random() * (1 - n)
        degrees[gas] = (n, e, 1 - n - e)
    return GasMembershipTable(bushing_id="prop", tdcg_ppm=0.0, degrees=degrees)


class TestAlgebraicProperties:
    @given(st.integers(0, 2**32 - 1))
    def test_adding_an_atom_never_increases_truth(self, seed):
        rng = random.Random(seed)
        table = random_table(rng)
        gases = rng.sample(list(GasId), 3)
        atoms = tuple(Atom(gas=g, level=rng.choice(list(Level))) for g in gases[:2])
        extended = atoms + (Atom(gas=gases[2], level=rng.choice(list(Level))),)
        _, base = eval_rule(Rule(antecedent=atoms, consequent=RiskGroup.LOW), table)
        _, more = eval_rule(Rule(antecedent=extended, consequent=RiskGroup.LOW), table)
        assert more <= base

    @given(st.integers(0, 2**32 - 1))
    def test_adding_a_rule_never_decreases_aggregation(self, seed):
        rng = random.Random(seed)
        table = random_table(rng)
        base_rule = Rule(antecedent=(Atom(gas=GasId.HYDROGEN, level=Level.NORMAL),), consequent=RiskGroup.LOW)
        extra = Rule(
            antecedent=(Atom(gas=rng.choice(list(GasId)), level=rng.choice(list(Level))),),
            consequent=rng.choice(list(RiskGroup)),
        )
        small = aggregate(RuleSet(rules=(base_rule,)), table)
        grown = aggregate(RuleSet(rules=(base_rule, extra)), table)
        assert grown.lr >= small.lr
        assert grown.mr >= small.mr
        assert grown.hr >= small.hr

    @given(st.integers(0, 2**32 - 1))
    def test_any_is_one_under_partition_of_unity(self, seed):
        rng = random.Random(seed)
        table = random_table(rng)
        for gas in GasId:
            assert eval_atom(Atom(gas=gas, any_level=True), table) == pytest.approx(1.0, abs=1e-12)

    @given(st.integers(0, 2**32 - 1))
    def test_truth_values_stay_in_unit_interval(self, seed):
        rng = random.Random(seed)
        table = random_table(rng)
        for rule in default_ruleset():
            _, truth = eval_rule(rule, table)
            assert 0.0 <= truth <= 1.0


class TestAggregatedMembership:
    def test_rejects_negative_degree(self):
        with pytest.raises(ValueError):
            AggregatedMembership(lr=-0.1, mr=0.0, hr=0.0)

    def test_degree_lookup(self):
        agg = AggregatedMembership(lr=0.2, mr=0.4, hr=0.6)
        assert agg.degree(RiskGroup.LOW) == 0.2
        assert agg.degree(RiskGroup.MEDIUM) == 0.4
        assert agg.degree(RiskGroup.HIGH) == 0.6
