//! Defeasible and strict derivation over arbitrary ground rule sets.
//!
//! The closure is a forward-chaining fixpoint; backward chaining exists only
//! to produce witness derivations. In default-negation mode the
//! default-negated body atoms are ignored by the derivation relation (their
//! treatment belongs to the dialectical process); in presumption mode a
//! presumption counts as an axiom next to the facts.

use std::collections::BTreeSet;

use crate::index::{Bits, Index};
use crate::model::{GroundProgram, Literal, Mode, Rule, RuleKind};

/// Any finite set of ground facts, strict rules, and defeasible rules:
/// the strict part of a program, the strict part extended with an
/// argument's rules, or the strict rules together with an activation set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleSet {
    pub facts: Vec<Literal>,
    pub rules: Vec<Rule>,
}

impl RuleSet {
    pub fn new(facts: Vec<Literal>, rules: Vec<Rule>) -> Self {
        RuleSet { facts, rules }
    }

    /// The strict part of a program: its facts and strict rules.
    pub fn pi_of(g: &GroundProgram) -> Self {
        RuleSet { facts: g.facts.clone(), rules: g.strict_rules.clone() }
    }

    /// The whole program: facts, strict rules, and defeasible rules.
    pub fn full(g: &GroundProgram) -> Self {
        RuleSet { facts: g.facts.clone(), rules: g.rules().cloned().collect() }
    }

    pub fn with_facts(mut self, extra: impl IntoIterator<Item = Literal>) -> Self {
        self.facts.extend(extra);
        self
    }

    pub fn with_rules(mut self, extra: impl IntoIterator<Item = Rule>) -> Self {
        self.rules.extend(extra);
        self
    }

    /// Canonicalized ground-program view; the rule order of the view is the
    /// deterministic order used by witness extraction.
    fn to_ground_view(&self, mode: Mode) -> GroundProgram {
        let mut p = crate::model::Program { mode, ..Default::default() };
        p.facts = self.facts.clone();
        for r in &self.rules {
            match r.kind {
                RuleKind::Strict => p.strict_rules.push(r.clone()),
                RuleKind::Defeasible => p.defeasible_rules.push(r.clone()),
            }
        }
        p.canonicalize();
        GroundProgram {
            facts: p.facts,
            strict_rules: p.strict_rules,
            defeasible_rules: p.defeasible_rules,
            priorities: Vec::new(),
            mode,
            constants: BTreeSet::new(),
            predicates: BTreeSet::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    Fact,
    Presumption,
    Rule(Rule),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationStep {
    pub literal: Literal,
    pub justification: Justification,
}

/// A witness for a defeasible derivation: each literal appears because it is
/// a fact (or presumption), or the head of a rule whose body occurs earlier
/// in the sequence. Default-negated atoms the witness skipped over are
/// recorded as assumptions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub steps: Vec<DerivationStep>,
    pub assumptions: Vec<Literal>,
}

impl Derivation {
    pub fn literals(&self) -> Vec<&Literal> {
        self.steps.iter().map(|s| &s.literal).collect()
    }

    /// Re-applies the justifications in order; true iff each step is
    /// licensed by what came before it.
    pub fn replays(&self, rs: &RuleSet, mode: Mode) -> bool {
        let mut seen: BTreeSet<&Literal> = BTreeSet::new();
        for step in &self.steps {
            let ok = match &step.justification {
                Justification::Fact => rs.facts.contains(&step.literal),
                Justification::Presumption => {
                    mode.presumptions
                        && rs.rules.iter().any(|r| r.is_presumption() && r.head == step.literal)
                }
                Justification::Rule(rule) => {
                    rs.rules.contains(rule)
                        && rule.head == step.literal
                        && rule.body.iter().all(|b| {
                            if b.default_negated {
                                mode.default_negation
                            } else {
                                seen.contains(&b.literal)
                            }
                        })
                }
            };
            if !ok {
                return false;
            }
            seen.insert(&step.literal);
        }
        true
    }
}

/// Least fixpoint of forward rule application over the rule set.
pub fn closure(rs: &RuleSet, mode: Mode) -> BTreeSet<Literal> {
    let g = rs.to_ground_view(mode);
    let idx = Index::new(&g);
    let bits = idx.closure(true, &[], true, None, None);
    bits.iter_ones().map(|i| idx.lits[i].clone()).collect()
}

struct Prover<'a> {
    idx: &'a Index,
    g: &'a GroundProgram,
    derivable: &'a Bits,
    fact_bits: Bits,
    just: Vec<Option<Justification>>,
    path: Bits,
}

impl Prover<'_> {
    /// Depth-first backward chaining with an in-path loop check; rules are
    /// tried in canonical program order, facts and presumptions first. Since
    /// the goal is pre-checked against the closure, some acyclic proof
    /// exists and the search finds one.
    fn prove(&mut self, id: u32) -> bool {
        if self.just[id as usize].is_some() {
            return true;
        }
        if self.path.get(id as usize) {
            return false;
        }
        if self.fact_bits.get(id as usize) {
            self.just[id as usize] = Some(Justification::Fact);
            return true;
        }
        if self.g.mode.presumptions {
            let presumed = self
                .idx
                .def
                .iter()
                .any(|r| r.head == id && r.pos.is_empty() && r.neg.is_empty());
            if presumed {
                self.just[id as usize] = Some(Justification::Presumption);
                return true;
            }
        }
        self.path.set(id as usize);
        let mut found = None;
        let candidates = self
            .idx
            .strict
            .iter()
            .map(|r| (r, &self.g.strict_rules[r.src]))
            .chain(self.idx.def.iter().map(|r| (r, &self.g.defeasible_rules[r.src])));
        'rules: for (ir, rule) in candidates {
            if ir.head != id || rule.is_presumption() {
                continue;
            }
            if !self.g.mode.default_negation && !ir.neg.is_empty() {
                continue;
            }
            if ir.pos.iter().any(|&b| !self.derivable.get(b as usize)) {
                continue;
            }
            for &b in &ir.pos {
                if !self.prove(b) {
                    continue 'rules;
                }
            }
            found = Some(Justification::Rule(rule.clone()));
            break;
        }
        self.path.clear(id as usize);
        if let Some(j) = found {
            self.just[id as usize] = Some(j);
            true
        } else {
            false
        }
    }

    fn emit(
        &self,
        id: u32,
        emitted: &mut Bits,
        steps: &mut Vec<DerivationStep>,
        assumptions: &mut BTreeSet<Literal>,
    ) {
        if emitted.get(id as usize) {
            return;
        }
        emitted.set(id as usize);
        let j = self.just[id as usize].clone().expect("proved literal has a justification");
        if let Justification::Rule(rule) = &j {
            for b in &rule.body {
                if b.default_negated {
                    assumptions.insert(b.literal.clone());
                } else {
                    let bid = self.idx.id_of(&b.literal).unwrap();
                    self.emit(bid, emitted, steps, assumptions);
                }
            }
        }
        steps.push(DerivationStep { literal: self.idx.lits[id as usize].clone(), justification: j });
    }
}

/// A witness derivation for `l`, or `None` when `l` has no defeasible
/// derivation from the set.
pub fn defeasibly_derives(rs: &RuleSet, l: &Literal, mode: Mode) -> Option<Derivation> {
    let g = rs.to_ground_view(mode);
    let idx = Index::new(&g);
    let derivable = idx.closure(true, &[], true, None, None);
    let target = idx.id_of(l).filter(|&id| derivable.get(id as usize))?;

    let n = idx.n_lits();
    let mut fact_bits = Bits::new(n);
    for &f in &idx.facts {
        fact_bits.set(f as usize);
    }
    let mut prover = Prover {
        idx: &idx,
        g: &g,
        derivable: &derivable,
        fact_bits,
        just: vec![None; n],
        path: Bits::new(n),
    };
    let proved = prover.prove(target);
    debug_assert!(proved, "closure member must be provable");
    if !proved {
        return None;
    }

    let mut steps = Vec::new();
    let mut assumptions = BTreeSet::new();
    let mut emitted = Bits::new(n);
    prover.emit(target, &mut emitted, &mut steps, &mut assumptions);
    Some(Derivation { steps, assumptions: assumptions.into_iter().collect() })
}

/// True iff `l` is derivable using only the facts and strict rules of the
/// set. Defeasible members are ignored.
pub fn strictly_derives(pi: &RuleSet, l: &Literal) -> bool {
    let strict_only = RuleSet {
        facts: pi.facts.clone(),
        rules: pi.rules.iter().filter(|r| r.kind == RuleKind::Strict).cloned().collect(),
    };
    closure(&strict_only, Mode::core()).contains(l)
}

/// A complementary witness pair from the closure of the set, or `None`.
/// The pair is normalized to (positive, negative) of the smallest
/// contradictory atom.
pub fn is_contradictory(rs: &RuleSet, mode: Mode) -> Option<(Literal, Literal)> {
    let g = rs.to_ground_view(mode);
    let idx = Index::new(&g);
    let bits = idx.closure(true, &[], true, None, None);
    idx.contradiction(&bits)
        .map(|(a, b)| (idx.lits[a as usize].clone(), idx.lits[b as usize].clone()))
}
