use serde::{Deserialize, Serialize};

use super::{FuzzyError, MembershipFunction};

/// Closed interval a linguistic variable ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Universe {
    lo: f64,
    hi: f64,
}

impl Universe {
    pub fn new(lo: f64, hi: f64) -> Result<Self, FuzzyError> {
        if lo.is_finite() && hi.is_finite() && lo < hi {
            Ok(Self { lo, hi })
        } else {
            Err(FuzzyError::InvalidUniverse { lo, hi })
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn span(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        (self.lo..=self.hi).contains(&x)
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }

    /// `n` evenly spaced points from `lo` to `hi` inclusive.
    pub fn samples(&self, n: usize) -> impl Iterator<Item = f64> + '_ {
        let step = self.span() / (n.max(2) - 1) as f64;
        (0..n).map(move |i| if i + 1 == n { self.hi } else { self.lo + step * i as f64 })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub name: String,
    pub membership: MembershipFunction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinguisticVariable {
    name: String,
    universe: Universe,
    terms: Vec<Term>,
}

impl LinguisticVariable {
    pub fn new<N, T, I>(name: N, universe: Universe, terms: I) -> Result<Self, FuzzyError>
    where
        N: Into<String>,
        T: Into<String>,
        I: IntoIterator<Item = (T, MembershipFunction)>,
    {
        let name = name.into();
        if !is_identifier(&name) {
            return Err(FuzzyError::InvalidIdentifier(name));
        }
        let mut out: Vec<Term> = Vec::new();
        for (term, membership) in terms {
            let term = term.into();
            if !is_identifier(&term) {
                return Err(FuzzyError::InvalidIdentifier(term));
            }
            if out.iter().any(|t| t.name == term) {
                return Err(FuzzyError::DuplicateTerm { variable: name, term });
            }
            let membership = membership.validated()?;
            if !membership.breakpoints().iter().all(|&p| universe.contains(p)) {
                return Err(FuzzyError::OutsideUniverse { variable: name, term });
            }
            out.push(Term { name: term, membership });
        }
        if out.is_empty() {
            return Err(FuzzyError::NoTerms(name));
        }
        Ok(Self { name, universe, terms: out })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn term_index(&self, term: &str) -> Option<usize> {
        self.terms.iter().position(|t| t.name == term)
    }

    /// Grade of term `index` at `x`, after clamping `x` into the universe.
    pub fn grade(&self, index: usize, x: f64) -> f64 {
        self.terms[index].membership.grade(self.universe.clamp(x))
    }

    /// One grade per declared term, in declaration order.
    pub fn fuzzify(&self, x: f64) -> Vec<(&str, f64)> {
        let x = self.universe.clamp(x);
        self.terms.iter().map(|t| (t.name.as_str(), t.membership.grade(x))).collect()
    }

    pub(crate) fn grades_into(&self, x: f64, out: &mut Vec<f64>) {
        let x = self.universe.clamp(x);
        out.clear();
        out.extend(self.terms.iter().map(|t| t.membership.grade(x)));
    }
}

/// Identifiers are nonempty runs of ASCII letters and underscores.
pub fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphabetic() || b == b'_')
}
