use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::FuzzyError;

/// One `variable is term` pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FuzzyClause {
    pub variable: String,
    pub term: String,
}

impl FuzzyClause {
    pub fn new(variable: impl Into<String>, term: impl Into<String>) -> Self {
        Self { variable: variable.into(), term: term.into() }
    }
}

/// AND-joined antecedent clauses implying one or more output assignments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzyRule {
    antecedent: Vec<FuzzyClause>,
    consequent: Vec<FuzzyClause>,
}

impl FuzzyRule {
    pub fn new(antecedent: Vec<FuzzyClause>, consequent: Vec<FuzzyClause>) -> Result<Self, FuzzyError> {
        if antecedent.is_empty() {
            return Err(FuzzyError::EmptyAntecedent);
        }
        if consequent.is_empty() {
            return Err(FuzzyError::EmptyConsequent);
        }
        for (i, clause) in antecedent.iter().enumerate() {
            if antecedent[..i].iter().any(|c| c.variable == clause.variable) {
                return Err(FuzzyError::RepeatedAntecedent(clause.variable.clone()));
            }
        }
        Ok(Self { antecedent, consequent })
    }

    pub fn antecedent(&self) -> &[FuzzyClause] {
        &self.antecedent
    }

    pub fn consequent(&self) -> &[FuzzyClause] {
        &self.consequent
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleBase {
    rules: Vec<FuzzyRule>,
}

impl RuleBase {
    pub fn new(rules: Vec<FuzzyRule>) -> Result<Self, FuzzyError> {
        if rules.is_empty() {
            Err(FuzzyError::EmptyRuleBase)
        } else {
            Ok(Self { rules })
        }
    }

    pub fn rules(&self) -> &[FuzzyRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

impl<'a> IntoIterator for &'a RuleBase {
    type Item = &'a FuzzyRule;
    type IntoIter = std::slice::Iter<'a, FuzzyRule>;

    fn into_iter(self) -> Self::IntoIter {
        self.rules.iter()
    }
}

/// Membership grades keyed by variable, then term.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GradeTable(BTreeMap<String, BTreeMap<String, f64>>);

impl GradeTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, variable: &str, term: &str, grade: f64) {
        self.0.entry(variable.to_owned()).or_default().insert(term.to_owned(), grade);
    }

    pub fn get(&self, variable: &str, term: &str) -> Option<f64> {
        self.0.get(variable)?.get(term).copied()
    }
}

/// Firing strength of `rule`: the minimum of its antecedent grades.
pub fn fire_rule(rule: &FuzzyRule, grades: &GradeTable) -> Result<f64, FuzzyError> {
    rule.antecedent.iter().try_fold(1.0f64, |acc, c| {
        grades
            .get(&c.variable, &c.term)
            .map(|g| acc.min(g))
            .ok_or_else(|| FuzzyError::UnknownTerm { variable: c.variable.clone(), term: c.term.clone() })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rule(ante: &[(&str, &str)], cons: &[(&str, &str)]) -> FuzzyRule {
        let clauses = |cs: &[(&str, &str)]| cs.iter().map(|(v, t)| FuzzyClause::new(*v, *t)).collect();
        FuzzyRule::new(clauses(ante), clauses(cons)).unwrap()
    }

    #[test]
    fn firing_is_min_of_antecedent() {
        let r1 = rule(&[("front", "far"), ("rear", "near")], &[("steer_y", "front")]);
        let mut g = GradeTable::new();
        g.insert("front", "far", 1.0);
        g.insert("rear", "near", 1.0);
        assert_eq!(fire_rule(&r1, &g), Ok(1.0));
        g.insert("front", "far", 0.5);
        g.insert("rear", "near", 0.5);
        assert_eq!(fire_rule(&r1, &g), Ok(0.5));

        // d_left = 100, d_front = 400 on complementary 0..500 ramps.
        let r3 = rule(&[("left", "near"), ("front", "near")], &[("steer_x", "right")]);
        let mut g = GradeTable::new();
        g.insert("left", "near", 1.0 - 100.0 / 500.0);
        g.insert("front", "near", 1.0 - 400.0 / 500.0);
        let s = fire_rule(&r3, &g).unwrap();
        assert!((s - 0.2).abs() < 1e-12);
    }

    #[test]
    fn unresolved_clause_is_an_error() {
        let r = rule(&[("front", "far")], &[("steer_y", "front")]);
        assert!(matches!(fire_rule(&r, &GradeTable::new()), Err(FuzzyError::UnknownTerm { .. })));
    }

    #[test]
    fn rule_shape_validation() {
        let c = || FuzzyClause::new("front", "far");
        assert_eq!(FuzzyRule::new(vec![], vec![c()]), Err(FuzzyError::EmptyAntecedent));
        assert_eq!(FuzzyRule::new(vec![c()], vec![]), Err(FuzzyError::EmptyConsequent));
        assert_eq!(
            FuzzyRule::new(vec![c(), FuzzyClause::new("front", "near")], vec![c()]),
            Err(FuzzyError::RepeatedAntecedent("front".into()))
        );
        assert_eq!(RuleBase::new(vec![]), Err(FuzzyError::EmptyRuleBase));
    }

    proptest! {
        #[test]
        fn firing_bounded_by_and_equal_to_some_grade(grades in prop::collection::vec(0.0f64..=1.0, 1..6)) {
            let names: Vec<String> = (0..grades.len()).map(|i| format!("v{}", (b'a' + i as u8) as char)).collect();
            let ante = names.iter().map(|n| FuzzyClause::new(n.as_str(), "t")).collect();
            let r = FuzzyRule::new(ante, vec![FuzzyClause::new("out", "t")]).unwrap();
            let mut table = GradeTable::new();
            for (n, g) in names.iter().zip(&grades) {
                table.insert(n, "t", *g);
            }
            let s = fire_rule(&r, &table).unwrap();
            prop_assert!(grades.iter().all(|g| s <= *g));
            prop_assert!(grades.contains(&s));
        }
    }
}
