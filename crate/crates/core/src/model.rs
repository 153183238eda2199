//! Abstract syntax for defeasible logic programs: terms, literals, rules,
//! programs, grounding, and validation.
//!
//! A program has a strict part (facts and strict rules) and a defeasible
//! part (defeasible rules, including presumptions). Schematic rules carry
//! variables and are instantiated over the constants of the program before
//! any reasoning takes place.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// A term: a constant or a schematic variable.
///
/// Variable names begin with an uppercase letter, constant names do not.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Constant(String),
    Variable(String),
}

impl Term {
    pub fn constant(name: impl Into<String>) -> Self {
        Term::Constant(name.into())
    }

    pub fn variable(name: impl Into<String>) -> Self {
        Term::Variable(name.into())
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Constant(n) | Term::Variable(n) => n,
        }
    }

    pub fn is_variable(&self) -> bool {
        matches!(self, Term::Variable(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An atom or a strongly negated atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    /// Strong negation `~`.
    pub negated: bool,
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Literal {
    pub fn new(negated: bool, predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Literal { negated, predicate: predicate.into(), args }
    }

    /// Positive ground literal over constant names.
    pub fn pos(predicate: impl Into<String>, args: &[&str]) -> Self {
        Literal::new(false, predicate, args.iter().map(|a| Term::constant(*a)).collect())
    }

    /// Strongly negated ground literal over constant names.
    pub fn neg(predicate: impl Into<String>, args: &[&str]) -> Self {
        Literal::new(true, predicate, args.iter().map(|a| Term::constant(*a)).collect())
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(|t| !t.is_variable())
    }

    /// Flips the strong-negation flag; predicate and arguments are unchanged.
    pub fn complemented(&self) -> Literal {
        Literal { negated: !self.negated, ..self.clone() }
    }
}

impl PartialOrd for Literal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Literal {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Group the two polarities of an atom next to each other.
        (&self.predicate, &self.args, self.negated).cmp(&(
            &other.predicate,
            &other.args,
            other.negated,
        ))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("~")?;
        }
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// One element of a rule body: a literal, optionally under default negation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BodyAtom {
    /// The `not` prefix. Only legal inside defeasible bodies, and only when
    /// the program mode enables default negation.
    pub default_negated: bool,
    pub literal: Literal,
}

impl BodyAtom {
    pub fn plain(literal: Literal) -> Self {
        BodyAtom { default_negated: false, literal }
    }

    pub fn not(literal: Literal) -> Self {
        BodyAtom { default_negated: true, literal }
    }
}

impl PartialOrd for BodyAtom {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BodyAtom {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.literal, self.default_negated).cmp(&(&other.literal, other.default_negated))
    }
}

impl fmt::Display for BodyAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.default_negated {
            f.write_str("not ")?;
        }
        write!(f, "{}", self.literal)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleKind {
    Strict,
    Defeasible,
}

/// A strict or defeasible rule. A defeasible rule with an empty body is a
/// presumption.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub label: Option<String>,
    pub kind: RuleKind,
    pub head: Literal,
    /// Kept sorted and deduplicated: bodies are sets.
    pub body: Vec<BodyAtom>,
}

impl Rule {
    pub fn strict(head: Literal, body: Vec<BodyAtom>) -> Self {
        Rule { label: None, kind: RuleKind::Strict, head, body }.normalized()
    }

    pub fn defeasible(head: Literal, body: Vec<BodyAtom>) -> Self {
        Rule { label: None, kind: RuleKind::Defeasible, head, body }.normalized()
    }

    pub fn presumption(head: Literal) -> Self {
        Rule::defeasible(head, Vec::new())
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn is_presumption(&self) -> bool {
        self.kind == RuleKind::Defeasible && self.body.is_empty()
    }

    pub fn is_ground(&self) -> bool {
        self.head.is_ground() && self.body.iter().all(|b| b.literal.is_ground())
    }

    fn normalized(mut self) -> Self {
        self.body.sort();
        self.body.dedup();
        self
    }

    fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut visit = |lit: &Literal| {
            for t in &lit.args {
                if let Term::Variable(v) = t {
                    out.insert(v.clone());
                }
            }
        };
        visit(&self.head);
        for b in &self.body {
            visit(&b.literal);
        }
        out
    }

    fn sort_key(&self) -> (&Literal, &Vec<BodyAtom>, &Option<String>) {
        (&self.head, &self.body, &self.label)
    }
}

impl PartialOrd for Rule {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rule {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.kind, self.sort_key()).cmp(&(other.kind, other.sort_key()))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(label) = &self.label {
            write!(f, "{label}: ")?;
        }
        write!(f, "{}", self.head)?;
        let arrow = match self.kind {
            RuleKind::Strict => "<-",
            RuleKind::Defeasible => "-<",
        };
        if self.is_presumption() {
            write!(f, " {arrow} true")?;
            return Ok(());
        }
        write!(f, " {arrow} ")?;
        for (i, b) in self.body.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Feature switches for the two language extensions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Mode {
    pub default_negation: bool,
    pub presumptions: bool,
}

impl Mode {
    pub fn core() -> Self {
        Mode::default()
    }

    pub fn with_default_negation() -> Self {
        Mode { default_negation: true, ..Mode::default() }
    }

    pub fn with_presumptions() -> Self {
        Mode { presumptions: true, ..Mode::default() }
    }
}

/// A defeasible logic program: facts and strict rules, defeasible rules
/// and presumptions, plus priority declarations between defeasible-rule
/// labels.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Program {
    pub facts: Vec<Literal>,
    pub strict_rules: Vec<Rule>,
    pub defeasible_rules: Vec<Rule>,
    /// Ordered pairs `(stronger, weaker)` of defeasible-rule labels.
    pub priorities: Vec<(String, String)>,
    pub mode: Mode,
}

impl Program {
    /// Sorts each section and collapses duplicates. Parsing and grounding
    /// both leave programs in this form, so rule order is deterministic.
    pub fn canonicalize(&mut self) {
        self.facts.sort();
        self.facts.dedup();
        self.strict_rules.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        self.strict_rules.dedup();
        self.defeasible_rules.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        self.defeasible_rules.dedup();
        self.priorities.sort();
        self.priorities.dedup();
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.strict_rules.iter().chain(self.defeasible_rules.iter())
    }

    /// All constant names occurring anywhere in the program.
    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut visit = |lit: &Literal| {
            for t in &lit.args {
                if let Term::Constant(c) = t {
                    out.insert(c.clone());
                }
            }
        };
        for fact in &self.facts {
            visit(fact);
        }
        for rule in self.rules() {
            visit(&rule.head);
            for b in &rule.body {
                visit(&b.literal);
            }
        }
        out
    }

    pub fn has_variables(&self) -> bool {
        self.rules().any(|r| !r.is_ground()) || self.facts.iter().any(|f| !f.is_ground())
    }
}

/// A program with every schematic rule instantiated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundProgram {
    pub facts: Vec<Literal>,
    pub strict_rules: Vec<Rule>,
    pub defeasible_rules: Vec<Rule>,
    pub priorities: Vec<(String, String)>,
    pub mode: Mode,
    pub constants: BTreeSet<String>,
    /// Predicate name and arity of every literal occurring in the program.
    pub predicates: BTreeSet<(String, usize)>,
}

impl GroundProgram {
    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.strict_rules.iter().chain(self.defeasible_rules.iter())
    }

    /// Reconstructs the (already ground) `Program` view.
    pub fn as_program(&self) -> Program {
        Program {
            facts: self.facts.clone(),
            strict_rules: self.strict_rules.clone(),
            defeasible_rules: self.defeasible_rules.clone(),
            priorities: self.priorities.clone(),
            mode: self.mode,
        }
    }

    /// Every ground literal of the program language: each known predicate
    /// applied to each tuple of known constants, in both polarities.
    pub fn language_literals(&self) -> Vec<Literal> {
        let consts: Vec<&String> = self.constants.iter().collect();
        let mut out = Vec::new();
        for (pred, arity) in &self.predicates {
            let mut tuples: Vec<Vec<Term>> = vec![Vec::new()];
            for _ in 0..*arity {
                let mut next = Vec::new();
                for t in &tuples {
                    for c in &consts {
                        let mut t = t.clone();
                        t.push(Term::constant((*c).clone()));
                        next.push(t);
                    }
                }
                tuples = next;
            }
            for args in tuples {
                out.push(Literal::new(false, pred.clone(), args.clone()));
                out.push(Literal::new(true, pred.clone(), args));
            }
        }
        out.sort();
        out
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("literal `{0}` is not ground")]
    NonGroundLiteral(Literal),
    #[error("rule `{0}` violates range restriction: head variable `{1}` does not occur in the body")]
    UnboundHeadVariable(Rule, String),
    #[error("fact `{0}` contains variables")]
    NonGroundFact(Literal),
    #[error("program contains variables but no constants (empty Herbrand universe)")]
    EmptyUniverse,
}

/// The complement of a ground literal with respect to strong negation.
pub fn complement(l: &Literal) -> Result<Literal, ModelError> {
    if !l.is_ground() {
        return Err(ModelError::NonGroundLiteral(l.clone()));
    }
    Ok(l.complemented())
}

fn substitute(lit: &Literal, binding: &BTreeMap<&str, &str>) -> Literal {
    Literal {
        negated: lit.negated,
        predicate: lit.predicate.clone(),
        args: lit
            .args
            .iter()
            .map(|t| match t {
                Term::Constant(_) => t.clone(),
                Term::Variable(v) => Term::constant(binding[v.as_str()]),
            })
            .collect(),
    }
}

/// Instantiates every schematic rule over all tuples of constants occurring
/// in the program. Ground rules pass through unchanged; duplicate ground
/// rules are collapsed.
pub fn ground_program(p: &Program) -> Result<GroundProgram, ModelError> {
    for fact in &p.facts {
        if !fact.is_ground() {
            return Err(ModelError::NonGroundFact(fact.clone()));
        }
    }
    for rule in p.rules() {
        let body_vars: BTreeSet<String> = rule
            .body
            .iter()
            .flat_map(|b| {
                b.literal.args.iter().filter_map(|t| match t {
                    Term::Variable(v) => Some(v.clone()),
                    Term::Constant(_) => None,
                })
            })
            .collect();
        for t in &rule.head.args {
            if let Term::Variable(v) = t {
                if !body_vars.contains(v) {
                    return Err(ModelError::UnboundHeadVariable(rule.clone(), v.clone()));
                }
            }
        }
    }

    let constants = p.constants();
    if p.has_variables() && constants.is_empty() {
        return Err(ModelError::EmptyUniverse);
    }
    let consts: Vec<&str> = constants.iter().map(|s| s.as_str()).collect();

    let mut ground = Program { mode: p.mode, priorities: p.priorities.clone(), ..Program::default() };
    ground.facts = p.facts.clone();

    for rule in p.rules() {
        let vars: Vec<String> = rule.variables().into_iter().collect();
        let target = match rule.kind {
            RuleKind::Strict => &mut ground.strict_rules,
            RuleKind::Defeasible => &mut ground.defeasible_rules,
        };
        if vars.is_empty() {
            target.push(rule.clone());
            continue;
        }
        let mut indices = vec![0usize; vars.len()];
        loop {
            let binding: BTreeMap<&str, &str> = vars
                .iter()
                .zip(indices.iter())
                .map(|(v, &i)| (v.as_str(), consts[i]))
                .collect();
            let instance = Rule {
                label: rule.label.clone(),
                kind: rule.kind,
                head: substitute(&rule.head, &binding),
                body: rule
                    .body
                    .iter()
                    .map(|b| BodyAtom {
                        default_negated: b.default_negated,
                        literal: substitute(&b.literal, &binding),
                    })
                    .collect(),
            }
            .normalized();
            target.push(instance);

            let mut carry = indices.len();
            while carry > 0 {
                indices[carry - 1] += 1;
                if indices[carry - 1] < consts.len() {
                    break;
                }
                indices[carry - 1] = 0;
                carry -= 1;
            }
            if carry == 0 {
                break;
            }
        }
    }

    ground.canonicalize();

    let mut predicates = BTreeSet::new();
    {
        let mut visit = |lit: &Literal| {
            predicates.insert((lit.predicate.clone(), lit.arity()));
        };
        for f in &ground.facts {
            visit(f);
        }
        for r in ground.rules() {
            visit(&r.head);
            for b in &r.body {
                visit(&b.literal);
            }
        }
    }

    Ok(GroundProgram {
        facts: ground.facts,
        strict_rules: ground.strict_rules,
        defeasible_rules: ground.defeasible_rules,
        priorities: ground.priorities,
        mode: ground.mode,
        constants,
        predicates,
    })
}

/// True iff the literal's predicate (with its arity) occurs in the program
/// and every constant of the literal occurs in the program. Queries outside
/// the language are answered UNKNOWN.
pub fn in_language(g: &GroundProgram, l: &Literal) -> bool {
    if !l.is_ground() {
        return false;
    }
    g.predicates.contains(&(l.predicate.clone(), l.arity()))
        && l.args.iter().all(|t| g.constants.contains(t.name()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// The grounded strict part derives a complementary pair.
    ContradictoryPi(Literal, Literal),
    /// A strict rule uses default negation.
    DefaultNegationInStrictRule(Rule),
    /// `not` used while the default-negation mode is disabled.
    DefaultNegationDisabled(Rule),
    /// Presumption present while the presumption mode is disabled.
    PresumptionsDisabled(Rule),
    /// A priority references a label that no rule carries.
    UnknownPriorityLabel(String),
    /// A priority references a strict rule's label.
    PriorityOnStrictRule(String),
    /// The priority relation has a cycle through this label.
    CyclicPriorities(String),
    /// A strict rule with an empty body (facts are the bodiless form).
    EmptyStrictBody(Rule),
    Model(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ContradictoryPi(a, b) => {
                write!(f, "the set of facts and strict rules derives both `{a}` and `{b}`")
            }
            Violation::DefaultNegationInStrictRule(r) => {
                write!(f, "default negation not allowed in strict rules: `{r}`")
            }
            Violation::DefaultNegationDisabled(r) => {
                write!(f, "default negation requires the default-negation mode: `{r}`")
            }
            Violation::PresumptionsDisabled(r) => {
                write!(f, "presumptions require the presumption mode: `{r}`")
            }
            Violation::UnknownPriorityLabel(l) => {
                write!(f, "priority references label `{l}` which no rule carries")
            }
            Violation::PriorityOnStrictRule(l) => {
                write!(f, "priority references strict rule `{l}`; priorities relate only defeasible rules")
            }
            Violation::CyclicPriorities(l) => {
                write!(f, "priority relation is cyclic through `{l}`")
            }
            Violation::EmptyStrictBody(r) => {
                write!(f, "strict rule with empty body: `{r}` (write it as a fact)")
            }
            Violation::Model(m) => f.write_str(m),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks the program-level invariants: grounded strict part non-contradictory,
/// priorities acyclic and between defeasible labels only, and every
/// syntactic feature licensed by the mode flags.
pub fn validate(p: &Program) -> Result<GroundProgram, ValidationReport> {
    let mut violations = Vec::new();

    for rule in &p.strict_rules {
        if rule.body.is_empty() {
            violations.push(Violation::EmptyStrictBody(rule.clone()));
        }
        if rule.body.iter().any(|b| b.default_negated) {
            violations.push(Violation::DefaultNegationInStrictRule(rule.clone()));
        }
    }
    for rule in &p.defeasible_rules {
        if rule.is_presumption() && !p.mode.presumptions {
            violations.push(Violation::PresumptionsDisabled(rule.clone()));
        }
        if rule.body.iter().any(|b| b.default_negated) && !p.mode.default_negation {
            violations.push(Violation::DefaultNegationDisabled(rule.clone()));
        }
    }

    let mut defeasible_labels = BTreeSet::new();
    let mut strict_labels = BTreeSet::new();
    for r in &p.defeasible_rules {
        if let Some(l) = &r.label {
            defeasible_labels.insert(l.clone());
        }
    }
    for r in &p.strict_rules {
        if let Some(l) = &r.label {
            strict_labels.insert(l.clone());
        }
    }
    for (a, b) in &p.priorities {
        for l in [a, b] {
            if strict_labels.contains(l) {
                violations.push(Violation::PriorityOnStrictRule(l.clone()));
            } else if !defeasible_labels.contains(l) {
                violations.push(Violation::UnknownPriorityLabel(l.clone()));
            }
        }
        if a == b {
            violations.push(Violation::CyclicPriorities(a.clone()));
        }
    }
    if let Some(l) = priority_cycle(&p.priorities) {
        if !violations.iter().any(|v| matches!(v, Violation::CyclicPriorities(_))) {
            violations.push(Violation::CyclicPriorities(l));
        }
    }

    match ground_program(p) {
        Err(e) => violations.push(Violation::Model(e.to_string())),
        Ok(g) => {
            let pi = crate::derivation::RuleSet::pi_of(&g);
            if let Some((a, b)) = crate::derivation::is_contradictory(&pi, g.mode) {
                violations.push(Violation::ContradictoryPi(a, b));
            }
            if violations.is_empty() {
                return Ok(g);
            }
        }
    }
    Err(ValidationReport { violations })
}

fn priority_cycle(priorities: &[(String, String)]) -> Option<String> {
    let mut adj: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (a, b) in priorities {
        adj.entry(a.as_str()).or_default().push(b.as_str());
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state: BTreeMap<&str, u8> = BTreeMap::new();
    fn dfs<'a>(
        n: &'a str,
        adj: &BTreeMap<&'a str, Vec<&'a str>>,
        state: &mut BTreeMap<&'a str, u8>,
    ) -> Option<String> {
        match state.get(n) {
            Some(1) => return Some(n.to_string()),
            Some(2) => return None,
            _ => {}
        }
        state.insert(n, 1);
        if let Some(next) = adj.get(n) {
            for m in next {
                if let Some(c) = dfs(m, adj, state) {
                    return Some(c);
                }
            }
        }
        state.insert(n, 2);
        None
    }
    let nodes: Vec<&str> = adj.keys().copied().collect();
    for n in nodes {
        if let Some(c) = dfs(n, &adj, &mut state) {
            return Some(c);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(s: &str) -> Literal {
        crate::parser::parse_query(s).unwrap()
    }

    #[test]
    fn complement_flips_strong_negation() {
        assert_eq!(complement(&lit("p")).unwrap(), lit("~p"));
        assert_eq!(complement(&lit("~p")).unwrap(), lit("p"));
        assert_eq!(complement(&lit("flies(tina)")).unwrap(), lit("~flies(tina)"));
        let p = lit("p");
        assert_eq!(complement(&complement(&p).unwrap()).unwrap(), p);
    }

    #[test]
    fn complement_rejects_non_ground() {
        let open = Literal::new(false, "p", vec![Term::variable("X")]);
        assert!(matches!(complement(&open), Err(ModelError::NonGroundLiteral(_))));
    }

    #[test]
    fn grounding_instantiates_over_all_constants() {
        let g = crate::corpus::ground("birds");
        let flies_bird: Vec<&Rule> = g
            .defeasible_rules
            .iter()
            .filter(|r| {
                r.head.predicate == "flies"
                    && !r.head.negated
                    && r.body.len() == 1
                    && r.body[0].literal.predicate == "bird"
            })
            .collect();
        // flies(X) -< bird(X) over {tina, tweety}
        assert_eq!(flies_bird.len(), 2);
    }

    #[test]
    fn grounding_is_idempotent() {
        let g = crate::corpus::ground("stocks");
        let again = ground_program(&g.as_program()).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn grounding_counts_p24_fusion_instances() {
        let g = crate::corpus::ground("stocks");
        let fusion: Vec<&Rule> = g
            .defeasible_rules
            .iter()
            .filter(|r| {
                r.head.predicate == "risky_company"
                    && !r.head.negated
                    && r.body.iter().any(|b| b.literal.predicate == "in_fusion")
            })
            .collect();
        // risky_company(T) -< in_fusion(T, Y) over {acme, steel}^2
        assert_eq!(fusion.len(), 4);
    }

    #[test]
    fn grounding_rejects_empty_universe() {
        let mut p = Program::default();
        p.strict_rules.push(Rule::strict(
            Literal::new(false, "p", vec![Term::variable("X")]),
            vec![BodyAtom::plain(Literal::new(false, "q", vec![Term::variable("X")]))],
        ));
        assert_eq!(ground_program(&p), Err(ModelError::EmptyUniverse));
    }

    #[test]
    fn grounding_rejects_unbound_head_variable() {
        let mut p = Program::default();
        p.facts.push(lit("q(a)"));
        p.defeasible_rules.push(Rule::defeasible(
            Literal::new(false, "p", vec![Term::variable("Y")]),
            vec![BodyAtom::plain(Literal::new(false, "q", vec![Term::variable("X")]))],
        ));
        assert!(matches!(ground_program(&p), Err(ModelError::UnboundHeadVariable(_, _))));
    }

    #[test]
    fn language_membership() {
        let g = crate::corpus::ground("three_lines");
        assert!(!in_language(&g, &lit("w")));
        assert!(in_language(&g, &lit("a")));
        let stocks = crate::corpus::ground("stocks");
        assert!(!in_language(&stocks, &lit("buy_stock(alfa)")));
        assert!(in_language(&stocks, &lit("buy_stock(acme)")));
        let birds = crate::corpus::ground("birds");
        assert!(in_language(&birds, &lit("flies(tina)")));
        assert!(!in_language(&birds, &lit("flies(pluto)")));
    }

    #[test]
    fn validate_rejects_complementary_facts() {
        let mut p = Program::default();
        p.facts.push(lit("b"));
        p.facts.push(lit("~b"));
        let report = validate(&p).unwrap_err();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::ContradictoryPi(_, _))));
    }

    #[test]
    fn validate_rejects_priority_cycle() {
        let mut p = Program::default();
        p.facts.push(lit("q"));
        p.defeasible_rules.push(
            Rule::defeasible(lit("p"), vec![BodyAtom::plain(lit("q"))]).labeled("r1"),
        );
        p.defeasible_rules.push(
            Rule::defeasible(lit("~p"), vec![BodyAtom::plain(lit("q"))]).labeled("r2"),
        );
        p.priorities.push(("r1".into(), "r2".into()));
        p.priorities.push(("r2".into(), "r1".into()));
        let report = validate(&p).unwrap_err();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::CyclicPriorities(_))));
    }

    #[test]
    fn validate_accepts_the_corpus() {
        for entry in crate::corpus::all() {
            let program = crate::corpus::program(entry.name);
            assert!(
                validate(&program).is_ok(),
                "corpus program `{}` should validate",
                entry.name
            );
        }
    }
}
