//! Rule language.
//!
//! ```text
//! rule      := "If" clause ("and" clause)* "then" "support" "is" direction ("and" direction)* ["."]
//! clause    := IDENT "is" IDENT
//! direction := "front" | "rear" | "left" | "right"
//! ```
//!
//! Keywords and identifiers are matched case-insensitively. A rule file holds
//! one rule per line; blank lines and lines starting with `#` are skipped.

use std::fmt;

use thiserror::Error;

use crate::fuzzy::{FuzzyClause, FuzzyError, FuzzyRule, LinguisticVariable, RuleBase};

/// Location of a token in rule source. Line and column are 1-based and count
/// characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleSourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl fmt::Display for RuleSourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Axis {
    Lateral,
    Longitudinal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Front,
    Rear,
    Left,
    Right,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::Front, Direction::Rear, Direction::Left, Direction::Right];

    pub fn word(self) -> &'static str {
        match self {
            Self::Front => "front",
            Self::Rear => "rear",
            Self::Left => "left",
            Self::Right => "right",
        }
    }

    pub fn axis(self) -> Axis {
        match self {
            Self::Front | Self::Rear => Axis::Longitudinal,
            Self::Left | Self::Right => Axis::Lateral,
        }
    }

    fn from_word(word: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|d| d.word() == word)
    }
}

/// Names the parser resolves against: input variables with their terms, and
/// the output variable/term each direction word assigns.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolTable {
    inputs: Vec<(String, Vec<String>)>,
    lateral: String,
    longitudinal: String,
}

impl SymbolTable {
    /// Direction words map to the term of the same name: `left`/`right` on the
    /// lateral output, `front`/`rear` on the longitudinal output.
    pub fn new<I, S, T>(inputs: I, lateral: &str, longitudinal: &str) -> Self
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: IntoIterator,
        T::Item: Into<String>,
    {
        let inputs = inputs
            .into_iter()
            .map(|(name, terms)| (name.into(), terms.into_iter().map(Into::into).collect()))
            .collect();
        Self { inputs, lateral: lateral.to_owned(), longitudinal: longitudinal.to_owned() }
    }

    pub fn from_variables(inputs: &[LinguisticVariable], lateral: &str, longitudinal: &str) -> Self {
        Self::new(inputs.iter().map(|v| (v.name(), v.terms().iter().map(|t| t.name.as_str()))), lateral, longitudinal)
    }

    pub fn output_variable(&self, axis: Axis) -> &str {
        match axis {
            Axis::Lateral => &self.lateral,
            Axis::Longitudinal => &self.longitudinal,
        }
    }

    /// The consequent clause a direction word stands for.
    pub fn direction_clause(&self, direction: Direction) -> FuzzyClause {
        FuzzyClause::new(self.output_variable(direction.axis()), direction.word())
    }

    fn direction_of(&self, clause: &FuzzyClause) -> Option<Direction> {
        Direction::ALL
            .into_iter()
            .find(|&d| clause.term == d.word() && clause.variable == self.output_variable(d.axis()))
    }

    fn input(&self, name: &str) -> Option<&(String, Vec<String>)> {
        self.inputs.iter().find(|(n, _)| n.eq_ignore_ascii_case(name))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleParseError {
    #[error("{span}: unknown variable `{name}`")]
    UnknownVariable { name: String, span: RuleSourceSpan },
    #[error("{span}: unknown term `{term}` for variable `{variable}`")]
    UnknownTerm { variable: String, term: String, span: RuleSourceSpan },
    #[error("{span}: expected {expected}, found {found}")]
    SyntaxError { expected: String, found: String, span: RuleSourceSpan },
    #[error("{span}: second direction on the {axis} axis")]
    ConflictingConsequent { axis: String, span: RuleSourceSpan },
    #[error("{span}: variable `{name}` used twice in one rule")]
    RepeatedVariable { name: String, span: RuleSourceSpan },
}

impl RuleParseError {
    pub fn span(&self) -> RuleSourceSpan {
        match self {
            Self::UnknownVariable { span, .. }
            | Self::UnknownTerm { span, .. }
            | Self::SyntaxError { span, .. }
            | Self::ConflictingConsequent { span, .. }
            | Self::RepeatedVariable { span, .. } => *span,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleFileError {
    #[error("rule file contains no rules")]
    EmptyRuleBase,
    #[error("{} rule error(s), first at {}", .0.len(), .0[0])]
    Invalid(Vec<RuleParseError>),
}

impl RuleFileError {
    pub fn errors(&self) -> &[RuleParseError] {
        match self {
            Self::EmptyRuleBase => &[],
            Self::Invalid(errors) => errors,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Word(String),
    Period,
    Stray(char),
    End,
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    span: RuleSourceSpan,
}

impl Token {
    fn describe(&self) -> String {
        match &self.kind {
            TokenKind::Word(w) => format!("`{w}`"),
            TokenKind::Period => "`.`".to_owned(),
            TokenKind::Stray(c) => format!("`{c}`"),
            TokenKind::End => "end of rule".to_owned(),
        }
    }

    fn lower(&self) -> Option<String> {
        match &self.kind {
            TokenKind::Word(w) => Some(w.to_ascii_lowercase()),
            _ => None,
        }
    }
}

fn tokenize(text: &str, first_line: usize) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (first_line, 1usize);
    while let Some(&c) = chars.peek() {
        let span = |length| RuleSourceSpan { line, column, length };
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
        } else if c.is_whitespace() {
            chars.next();
            column += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut word = String::new();
            while let Some(&w) = chars.peek().filter(|w| w.is_ascii_alphabetic() || **w == '_') {
                word.push(w);
                chars.next();
            }
            let len = word.len();
            tokens.push(Token { kind: TokenKind::Word(word), span: span(len) });
            column += len;
        } else {
            chars.next();
            let kind = if c == '.' { TokenKind::Period } else { TokenKind::Stray(c) };
            tokens.push(Token { kind, span: span(1) });
            column += 1;
        }
    }
    tokens.push(Token { kind: TokenKind::End, span: RuleSourceSpan { line, column, length: 1 } });
    tokens
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    symbols: &'a SymbolTable,
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if !matches!(t.kind, TokenKind::End) {
            self.pos += 1;
        }
        t
    }

    fn at_keyword(&self, keyword: &str) -> bool {
        self.peek().lower().as_deref() == Some(keyword)
    }

    fn syntax(token: &Token, expected: &str) -> RuleParseError {
        RuleParseError::SyntaxError { expected: expected.to_owned(), found: token.describe(), span: token.span }
    }

    fn keyword(&mut self, keyword: &str) -> Result<(), RuleParseError> {
        let t = self.next();
        if t.lower().as_deref() == Some(keyword) {
            Ok(())
        } else {
            Err(Self::syntax(&t, &format!("`{keyword}`")))
        }
    }

    fn identifier(&mut self, what: &str) -> Result<(String, RuleSourceSpan), RuleParseError> {
        let t = self.next();
        match t.lower() {
            Some(w) if !is_keyword(&w) => Ok((w, t.span)),
            _ => Err(Self::syntax(&t, what)),
        }
    }

    fn clause(&mut self) -> Result<(FuzzyClause, RuleSourceSpan), RuleParseError> {
        let (name, span) = self.identifier("variable name")?;
        let (variable, terms) = self.symbols.input(&name).ok_or(RuleParseError::UnknownVariable { name, span })?;
        self.keyword("is")?;
        let (term, term_span) = self.identifier("term name")?;
        let term = terms.iter().find(|t| t.eq_ignore_ascii_case(&term)).ok_or_else(|| RuleParseError::UnknownTerm {
            variable: variable.clone(),
            term,
            span: term_span,
        })?;
        Ok((FuzzyClause::new(variable.as_str(), term.as_str()), span))
    }

    fn direction(&mut self) -> Result<(Direction, RuleSourceSpan), RuleParseError> {
        let t = self.next();
        t.lower()
            .and_then(|w| Direction::from_word(&w))
            .map(|d| (d, t.span))
            .ok_or_else(|| Self::syntax(&t, "direction (front, rear, left or right)"))
    }

    fn rule(&mut self) -> Result<FuzzyRule, RuleParseError> {
        self.keyword("if")?;
        let mut antecedent: Vec<FuzzyClause> = Vec::new();
        loop {
            let (clause, span) = self.clause()?;
            if antecedent.iter().any(|c| c.variable == clause.variable) {
                return Err(RuleParseError::RepeatedVariable { name: clause.variable, span });
            }
            antecedent.push(clause);
            if self.at_keyword("and") {
                self.next();
            } else if self.at_keyword("then") {
                self.next();
                break;
            } else {
                return Err(Self::syntax(self.peek(), "`and` or `then`"));
            }
        }

        self.keyword("support")?;
        self.keyword("is")?;
        let mut directions: Vec<Direction> = Vec::new();
        loop {
            let (d, span) = self.direction()?;
            if directions.iter().any(|seen| seen.axis() == d.axis()) {
                let axis = self.symbols.output_variable(d.axis()).to_owned();
                return Err(RuleParseError::ConflictingConsequent { axis, span });
            }
            directions.push(d);
            if self.at_keyword("and") {
                self.next();
            } else {
                break;
            }
        }
        if matches!(self.peek().kind, TokenKind::Period) {
            self.next();
        }
        if !matches!(self.peek().kind, TokenKind::End) {
            return Err(Self::syntax(self.peek(), "end of rule"));
        }

        // Lateral before longitudinal, so formatting round-trips.
        directions.sort_by_key(|d| d.axis());
        let consequent = directions.into_iter().map(|d| self.symbols.direction_clause(d)).collect();
        Ok(FuzzyRule::new(antecedent, consequent).expect("parser guarantees a well-formed rule"))
    }
}

fn is_keyword(word: &str) -> bool {
    matches!(word, "if" | "and" | "then" | "is" | "support")
}

fn parse_at(text: &str, line: usize, symbols: &SymbolTable) -> Result<FuzzyRule, RuleParseError> {
    Parser { tokens: tokenize(text, line), pos: 0, symbols }.rule()
}

pub fn parse_rule(text: &str, symbols: &SymbolTable) -> Result<FuzzyRule, RuleParseError> {
    parse_at(text, 1, symbols)
}

/// Parses every rule line, collecting all errors before failing.
pub fn parse_rule_file(text: &str, symbols: &SymbolTable) -> Result<RuleBase, RuleFileError> {
    let mut rules = Vec::new();
    let mut errors = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        match parse_at(line, i + 1, symbols) {
            Ok(rule) => rules.push(rule),
            Err(e) => errors.push(e),
        }
    }
    if !errors.is_empty() {
        return Err(RuleFileError::Invalid(errors));
    }
    RuleBase::new(rules).map_err(|_| RuleFileError::EmptyRuleBase)
}

/// Canonical text of `rule`, directions ordered lateral before longitudinal.
pub fn format_rule(rule: &FuzzyRule, symbols: &SymbolTable) -> Result<String, FuzzyError> {
    let mut out = String::from("If ");
    for (i, c) in rule.antecedent().iter().enumerate() {
        let (_, terms) = symbols.input(&c.variable).ok_or_else(|| FuzzyError::UnknownVariable(c.variable.clone()))?;
        if !terms.contains(&c.term) {
            return Err(FuzzyError::UnknownTerm { variable: c.variable.clone(), term: c.term.clone() });
        }
        if i > 0 {
            out.push_str(" and ");
        }
        out.push_str(&format!("{} is {}", c.variable, c.term));
    }
    let mut directions = rule
        .consequent()
        .iter()
        .map(|c| {
            symbols
                .direction_of(c)
                .ok_or_else(|| FuzzyError::UnknownTerm { variable: c.variable.clone(), term: c.term.clone() })
        })
        .collect::<Result<Vec<_>, _>>()?;
    directions.sort_by_key(|d| d.axis());
    let words: Vec<&str> = directions.iter().map(|d| d.word()).collect();
    out.push_str(" then support is ");
    out.push_str(&words.join(" and "));
    out.push('.');
    Ok(out)
}

/// One canonical rule per line, newline-terminated.
pub fn format_rule_base(rules: &RuleBase, symbols: &SymbolTable) -> Result<String, FuzzyError> {
    rules.rules().iter().try_fold(String::new(), |mut acc, r| {
        acc.push_str(&format_rule(r, symbols)?);
        acc.push('\n');
        Ok(acc)
    })
}
