//! Argument structures, sub-arguments, disagreement, counter-arguments, and
//! assumption attacks.
//!
//! An argument for `h` is a minimal set of defeasible rules that, together
//! with the strict part of the program, derives `h` without contradiction.
//! Attacks land on the points of an argument: the literals it derives that
//! are not strictly derivable. Every attack names the disagreement
//! sub-argument it
//! targets; when several minimal sub-arguments derive the same point, each
//! yields its own attack record.

use std::fmt;

use crate::comparison::CriterionConfig;
use crate::engine::Engine;
use crate::model::{GroundProgram, Literal, Rule};

/// ⟨A, h⟩: a minimal, non-contradictory set of defeasible rules `A`
/// supporting the conclusion `h`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ArgumentStructure {
    /// Defeasible rules, in canonical program order.
    pub rules: Vec<Rule>,
    pub conclusion: Literal,
    /// Literals appearing default-negated in the rules' bodies.
    pub assumptions: Vec<Literal>,
}

impl ArgumentStructure {
    pub fn empty(conclusion: Literal) -> Self {
        ArgumentStructure { rules: Vec::new(), conclusion, assumptions: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

impl fmt::Display for ArgumentStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{{")?;
        for (i, r) in self.rules.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "}}, {}>", self.conclusion)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum AttackKind {
    /// The attacker's conclusion disagrees with a point of the target.
    Disagreement,
    /// The attacker's conclusion is assumed (`not h`) by the target.
    Assumption,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackReport {
    pub attacker: ArgumentStructure,
    pub attacked: ArgumentStructure,
    /// The counter-argument point (for assumption attacks, the assumed
    /// literal).
    pub point: Literal,
    /// The minimal sub-argument of the target deriving the point. Absent
    /// for assumption attacks, where no sub-argument comparison applies.
    pub disagreement_subargument: Option<ArgumentStructure>,
    pub kind: AttackKind,
}

/// All argument structures for `h`, deduplicated, in deterministic order.
/// When `h` is strictly derivable the result is exactly `[⟨∅, h⟩]`.
pub fn arguments_for(g: &GroundProgram, h: &Literal) -> Vec<ArgumentStructure> {
    let eng = Engine::new(g, CriterionConfig::default());
    let Some(id) = eng.lit_id(h) else { return Vec::new() };
    eng.args_for(id).iter().map(|&a| eng.to_public(&eng.arg(a))).collect()
}

/// ⟨B, q⟩ is a sub-argument structure of an argument iff B ⊆ A.
pub fn is_subargument(b: &ArgumentStructure, a: &ArgumentStructure) -> bool {
    b.rules.iter().all(|r| a.rules.contains(r))
}

/// Two literals disagree iff adding both to the strict part (as facts)
/// yields a contradiction.
pub fn disagree(g: &GroundProgram, h: &Literal, h1: &Literal) -> bool {
    if h == &h1.complemented() {
        return true;
    }
    let pi = crate::derivation::RuleSet::pi_of(g)
        .with_facts([h.clone(), h1.clone()]);
    crate::derivation::is_contradictory(&pi, g.mode).is_some()
}

/// One report per (attacker, point, disagreement sub-argument) triple where
/// the attacker's conclusion disagrees with a non-strictly-derivable point
/// of the target. Deterministic order; no preference filtering.
pub fn counter_arguments(g: &GroundProgram, target: &ArgumentStructure) -> Vec<AttackReport> {
    let eng = Engine::new(g, CriterionConfig::default());
    let t = eng.resolve(target);
    let tid = eng.intern_arg(t.rules.clone(), t.conclusion);
    eng.raw_attacks_on(tid)
        .iter()
        .filter(|a| !a.assumption)
        .map(|a| eng.raw_to_report(&t, a))
        .collect()
}

/// For each assumption `not h` of the target, every argument structure for
/// `h`. Empty when default negation is disabled.
pub fn assumption_attacks(g: &GroundProgram, target: &ArgumentStructure) -> Vec<AttackReport> {
    if !g.mode.default_negation {
        return Vec::new();
    }
    let eng = Engine::new(g, CriterionConfig::default());
    let t = eng.resolve(target);
    let tid = eng.intern_arg(t.rules.clone(), t.conclusion);
    eng.raw_attacks_on(tid)
        .iter()
        .filter(|a| a.assumption)
        .map(|a| eng.raw_to_report(&t, a))
        .collect()
}

/// Re-checks the defining conditions of an argument structure directly
/// against the derivation module; used by tests as an independent validator.
pub fn check_argument(g: &GroundProgram, a: &ArgumentStructure) -> Result<(), String> {
    use crate::derivation::{defeasibly_derives, is_contradictory, RuleSet};
    let pi_a = RuleSet::pi_of(g).with_rules(a.rules.iter().cloned());
    let derivation = defeasibly_derives(&pi_a, &a.conclusion, g.mode)
        .ok_or_else(|| format!("{a}: no defeasible derivation"))?;
    if let Some((x, y)) = is_contradictory(&pi_a, g.mode) {
        return Err(format!("{a}: contradictory ({x}, {y})"));
    }
    for (i, _) in a.rules.iter().enumerate() {
        let mut fewer = a.rules.clone();
        fewer.remove(i);
        let sub = RuleSet::pi_of(g).with_rules(fewer);
        if defeasibly_derives(&sub, &a.conclusion, g.mode).is_some() {
            return Err(format!("{a}: not minimal"));
        }
    }
    if g.mode.default_negation {
        let assumed: Vec<&Literal> = a.assumptions.iter().collect();
        for step in &derivation.steps {
            if assumed.contains(&&step.literal) {
                return Err(format!("{a}: derivation mentions assumed literal {}", step.literal));
            }
        }
    }
    Ok(())
}
