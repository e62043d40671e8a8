use std::collections::BTreeMap;

use super::{FuzzyError, LinguisticVariable, RuleBase, DEFAULT_RESOLUTION, MASS_EPSILON, MIN_RESOLUTION};

/// Crisp values keyed by variable name.
pub type CrispValues = BTreeMap<String, f64>;

#[derive(Debug, Clone)]
struct CompiledRule {
    antecedent: Vec<(usize, usize)>,
    consequent: Vec<(usize, usize)>,
}

/// An immutable Mamdani controller: input and output variables, a rule base
/// and defuzzification settings. Evaluation never mutates the engine, so a
/// shared reference can be used from any number of threads.
#[derive(Debug, Clone)]
pub struct MamdaniEngine {
    inputs: Vec<LinguisticVariable>,
    outputs: Vec<LinguisticVariable>,
    rule_base: RuleBase,
    compiled: Vec<CompiledRule>,
    resolution: usize,
    fallback: Vec<f64>,
}

/// Aggregated activation of one output variable's terms.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputSet {
    pub variable: String,
    pub strengths: Vec<(String, f64)>,
}

/// Result of the inference stage, before defuzzification.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub outputs: Vec<OutputSet>,
}

impl Aggregate {
    pub fn strength(&self, variable: &str, term: &str) -> Option<f64> {
        let set = self.outputs.iter().find(|o| o.variable == variable)?;
        set.strengths.iter().find(|(t, _)| t == term).map(|(_, s)| *s)
    }
}

impl MamdaniEngine {
    /// Validates variables and rules, resolving every clause. Uses
    /// [`DEFAULT_RESOLUTION`] samples and each output's universe midpoint as
    /// the no-activation fallback.
    pub fn new(
        inputs: Vec<LinguisticVariable>,
        outputs: Vec<LinguisticVariable>,
        rule_base: RuleBase,
    ) -> Result<Self, FuzzyError> {
        let mut seen: Vec<&str> = Vec::new();
        for v in inputs.iter().chain(&outputs) {
            if seen.contains(&v.name()) {
                return Err(FuzzyError::DuplicateVariable(v.name().to_owned()));
            }
            seen.push(v.name());
        }

        let mut compiled = Vec::with_capacity(rule_base.len());
        for rule in &rule_base {
            let antecedent = rule
                .antecedent()
                .iter()
                .map(|c| resolve(&inputs, &outputs, &c.variable, &c.term, "an input"))
                .collect::<Result<_, _>>()?;
            let consequent = rule
                .consequent()
                .iter()
                .map(|c| resolve(&outputs, &inputs, &c.variable, &c.term, "an output"))
                .collect::<Result<_, _>>()?;
            compiled.push(CompiledRule { antecedent, consequent });
        }

        let fallback = outputs.iter().map(|v| v.universe().midpoint()).collect();
        Ok(Self { inputs, outputs, rule_base, compiled, resolution: DEFAULT_RESOLUTION, fallback })
    }

    pub fn with_resolution(mut self, resolution: usize) -> Result<Self, FuzzyError> {
        if resolution < MIN_RESOLUTION {
            return Err(FuzzyError::Resolution(resolution));
        }
        self.resolution = resolution;
        Ok(self)
    }

    /// Value returned for `output` when no rule concluding it fires.
    pub fn with_fallback(mut self, output: &str, value: f64) -> Result<Self, FuzzyError> {
        let i = self.output_index(output).ok_or_else(|| FuzzyError::UnknownVariable(output.to_owned()))?;
        self.fallback[i] = self.outputs[i].universe().clamp(value);
        Ok(self)
    }

    pub fn inputs(&self) -> &[LinguisticVariable] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[LinguisticVariable] {
        &self.outputs
    }

    pub fn rule_base(&self) -> &RuleBase {
        &self.rule_base
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn fallback(&self, output: &str) -> Option<f64> {
        self.output_index(output).map(|i| self.fallback[i])
    }

    pub fn input_index(&self, name: &str) -> Option<usize> {
        self.inputs.iter().position(|v| v.name() == name)
    }

    pub fn output_index(&self, name: &str) -> Option<usize> {
        self.outputs.iter().position(|v| v.name() == name)
    }

    /// Orders named crisp inputs by declaration; every declared input must be
    /// present and no undeclared ones may appear.
    pub fn order_inputs(&self, crisp: &CrispValues) -> Result<Vec<f64>, FuzzyError> {
        if let Some(extra) = crisp.keys().find(|k| self.input_index(k).is_none()) {
            return Err(FuzzyError::UnexpectedInput(extra.clone()));
        }
        self.inputs
            .iter()
            .map(|v| crisp.get(v.name()).copied().ok_or_else(|| FuzzyError::MissingInput(v.name().to_owned())))
            .collect()
    }

    /// Rule firing strengths for inputs given in declaration order.
    pub fn firing_strengths(&self, values: &[f64]) -> Result<Vec<f64>, FuzzyError> {
        let grades = self.fuzzify_all(values)?;
        Ok(self.compiled.iter().map(|r| fire(r, &grades)).collect())
    }

    pub fn infer(&self, crisp: &CrispValues) -> Result<Aggregate, FuzzyError> {
        let strengths = self.infer_ordered(&self.order_inputs(crisp)?)?;
        let outputs = self
            .outputs
            .iter()
            .zip(strengths)
            .map(|(v, s)| OutputSet {
                variable: v.name().to_owned(),
                strengths: v.terms().iter().map(|t| t.name.clone()).zip(s).collect(),
            })
            .collect();
        Ok(Aggregate { outputs })
    }

    /// Per output variable, per term: the max firing strength of the rules
    /// that conclude that term.
    pub fn infer_ordered(&self, values: &[f64]) -> Result<Vec<Vec<f64>>, FuzzyError> {
        let grades = self.fuzzify_all(values)?;
        let mut activation: Vec<Vec<f64>> = self.outputs.iter().map(|v| vec![0.0; v.terms().len()]).collect();
        for rule in &self.compiled {
            let strength = fire(rule, &grades);
            for &(var, term) in &rule.consequent {
                let slot = &mut activation[var][term];
                *slot = slot.max(strength);
            }
        }
        Ok(activation)
    }

    pub fn evaluate(&self, crisp: &CrispValues) -> Result<CrispValues, FuzzyError> {
        let values = self.evaluate_ordered(&self.order_inputs(crisp)?)?;
        Ok(self.outputs.iter().map(|v| v.name().to_owned()).zip(values).collect())
    }

    /// Crisp outputs in declaration order for inputs in declaration order.
    pub fn evaluate_ordered(&self, values: &[f64]) -> Result<Vec<f64>, FuzzyError> {
        let activation = self.infer_ordered(values)?;
        self.outputs
            .iter()
            .zip(&activation)
            .zip(&self.fallback)
            .map(|((var, strengths), &fallback)| defuzzify_centroid(var, strengths, self.resolution, fallback))
            .collect()
    }

    fn fuzzify_all(&self, values: &[f64]) -> Result<Vec<Vec<f64>>, FuzzyError> {
        if values.len() != self.inputs.len() {
            return Err(FuzzyError::ArityMismatch { expected: self.inputs.len(), found: values.len() });
        }
        self.inputs
            .iter()
            .zip(values)
            .map(|(v, &x)| {
                if !x.is_finite() {
                    return Err(FuzzyError::NonFiniteInput(v.name().to_owned()));
                }
                let mut g = Vec::with_capacity(v.terms().len());
                v.grades_into(x, &mut g);
                Ok(g)
            })
            .collect()
    }
}

fn resolve(
    home: &[LinguisticVariable],
    other: &[LinguisticVariable],
    variable: &str,
    term: &str,
    expected: &'static str,
) -> Result<(usize, usize), FuzzyError> {
    let Some(vi) = home.iter().position(|v| v.name() == variable) else {
        return Err(if other.iter().any(|v| v.name() == variable) {
            FuzzyError::WrongRole { variable: variable.to_owned(), expected }
        } else {
            FuzzyError::UnknownVariable(variable.to_owned())
        });
    };
    let ti = home[vi]
        .term_index(term)
        .ok_or_else(|| FuzzyError::UnknownTerm { variable: variable.to_owned(), term: term.to_owned() })?;
    Ok((vi, ti))
}

fn fire(rule: &CompiledRule, grades: &[Vec<f64>]) -> f64 {
    rule.antecedent.iter().fold(1.0f64, |acc, &(v, t)| acc.min(grades[v][t]))
}

/// Sampled centroid of the clipped-and-unioned output set.
///
/// `strengths` holds one activation per term of `var`, in declaration order.
/// The universe is sampled at `resolution` evenly spaced points including both
/// ends; the aggregate at each point is the max over terms of
/// `min(strength, grade)`. Returns `fallback` when the total mass is below
/// [`MASS_EPSILON`].
pub fn defuzzify_centroid(
    var: &LinguisticVariable,
    strengths: &[f64],
    resolution: usize,
    fallback: f64,
) -> Result<f64, FuzzyError> {
    if resolution < MIN_RESOLUTION {
        return Err(FuzzyError::Resolution(resolution));
    }
    if strengths.len() != var.terms().len() {
        return Err(FuzzyError::ArityMismatch { expected: var.terms().len(), found: strengths.len() });
    }
    let universe = var.universe();
    let (mut moment, mut mass) = (0.0f64, 0.0f64);
    for x in universe.samples(resolution) {
        let mu = var.terms().iter().zip(strengths).fold(0.0f64, |acc, (t, &s)| acc.max(s.min(t.membership.grade(x))));
        moment += x * mu;
        mass += mu;
    }
    if mass < MASS_EPSILON {
        Ok(fallback)
    } else {
        Ok(universe.clamp(moment / mass))
    }
}
