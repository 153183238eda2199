//! Argument-preference criteria: generalized specificity, equi-specificity,
//! rule priorities, their combination, and the fact-over-presumption
//! wrapper.
//!
//! Specificity quantifies over activation sets: subsets of the derivable
//! literals, taken as facts next to the strict rules (facts excluded). The
//! production check enumerates only subsets of the body literals the strict
//! rules and the two arguments can read, since literals no body reads
//! cannot change activation; the exhaustive enumeration over the whole
//! derivable set stays available as the arbiter and is differentially
//! tested against the optimized one.

use std::collections::BTreeSet;

use crate::argumentation::ArgumentStructure;
use crate::engine::Engine;
use crate::model::{GroundProgram, Literal, Rule, RuleKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PreferenceOutcome {
    FirstStrictlyPreferred,
    SecondStrictlyPreferred,
    EquiSpecific,
    Incomparable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Criterion {
    Specificity,
    Priorities,
    Combined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CriterionConfig {
    pub criterion: Criterion,
    /// Prefer presumption-free arguments outright before the base
    /// criterion applies.
    pub presumption_penalty: bool,
}

impl Default for CriterionConfig {
    fn default() -> Self {
        CriterionConfig { criterion: Criterion::Specificity, presumption_penalty: false }
    }
}

impl CriterionConfig {
    pub fn specificity() -> Self {
        CriterionConfig::default()
    }

    pub fn priorities() -> Self {
        CriterionConfig { criterion: Criterion::Priorities, presumption_penalty: false }
    }

    pub fn combined() -> Self {
        CriterionConfig { criterion: Criterion::Combined, presumption_penalty: false }
    }

    pub fn with_presumption_penalty(mut self) -> Self {
        self.presumption_penalty = true;
        self
    }

    /// The configuration a program's mode implies: the presumption penalty
    /// is active exactly when presumptions are.
    pub fn for_program(self, g: &GroundProgram) -> Self {
        CriterionConfig { presumption_penalty: g.mode.presumptions, ..self }
    }
}

/// The fixed context of activation checks: the strict rules without facts, and the derivable literals taken as facts.
pub struct ActivationContext<'g> {
    eng: Engine<'g>,
}

impl<'g> ActivationContext<'g> {
    pub fn new(g: &'g GroundProgram) -> Self {
        ActivationContext { eng: Engine::new(g, CriterionConfig::default()) }
    }

    /// The strict rules of the strict part, without the facts.
    pub fn pi_g(&self) -> Vec<Rule> {
        self.eng
            .g
            .strict_rules
            .iter()
            .filter(|r| r.kind == RuleKind::Strict)
            .cloned()
            .collect()
    }

    /// F: every literal with a defeasible derivation from the program.
    pub fn derivable(&self) -> BTreeSet<Literal> {
        self.eng.f_bits.iter_ones().map(|i| self.eng.lit(i as u32)).collect()
    }
}

/// The set activates the argument iff the strict rules, the set's
/// literals as facts, and the argument's rules derive its conclusion.
pub fn activates(ctx: &ActivationContext, h_set: &BTreeSet<Literal>, a: &ArgumentStructure) -> bool {
    let ids: Vec<u32> = h_set.iter().filter_map(|l| ctx.eng.lit_id(l)).collect();
    let ea = ctx.eng.resolve(a);
    ctx.eng.activates(&ids, &ea)
}

/// Generalized specificity: ⟨A1, h1⟩ is strictly more specific than
/// ⟨A2, h2⟩.
pub fn more_specific(ctx: &ActivationContext, a1: &ArgumentStructure, a2: &ArgumentStructure) -> bool {
    ctx.eng.more_specific(&ctx.eng.resolve(a1), &ctx.eng.resolve(a2))
}

/// The exhaustive reference: enumerates every subset of the derivable
/// literals. Slow; kept as the arbiter for the optimized candidate-set
/// enumeration.
pub fn more_specific_reference(
    ctx: &ActivationContext,
    a1: &ArgumentStructure,
    a2: &ArgumentStructure,
) -> bool {
    ctx.eng.more_specific_reference(&ctx.eng.resolve(a1), &ctx.eng.resolve(a2))
}

/// Equi-specificity: equal rule sets and mutually strictly derivable
/// conclusions (each from the strict part extended with the other).
pub fn equi_specific(g: &GroundProgram, a1: &ArgumentStructure, a2: &ArgumentStructure) -> bool {
    let eng = Engine::new(g, CriterionConfig::default());
    eng.equi_specific(&eng.resolve(a1), &eng.resolve(a2))
}

/// Rule-priority preference: some rule of `a1` outranks some rule of `a2`,
/// and no rule of `a2` outranks any rule of `a1`.
pub fn priority_preferred(g: &GroundProgram, a1: &ArgumentStructure, a2: &ArgumentStructure) -> bool {
    let eng = Engine::new(g, CriterionConfig::default());
    eng.priority_preferred(&eng.resolve(a1), &eng.resolve(a2))
}

/// The configured comparison. Never returns both strict preferences; the
/// combined criterion consults priorities only when specificity is
/// incomparable; the presumption penalty applies before the base criterion.
pub fn compare(
    cfg: CriterionConfig,
    g: &GroundProgram,
    a1: &ArgumentStructure,
    a2: &ArgumentStructure,
) -> PreferenceOutcome {
    let eng = Engine::new(g, cfg);
    eng.compare_uncached(&eng.resolve(a1), &eng.resolve(a2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::argumentation::arguments_for;
    use crate::corpus;
    use crate::parser::parse_query;

    fn lit(s: &str) -> Literal {
        parse_query(s).unwrap()
    }

    fn arg(g: &GroundProgram, conclusion: &str, n_rules: usize) -> ArgumentStructure {
        arguments_for(g, &lit(conclusion))
            .into_iter()
            .find(|a| a.rules.len() == n_rules)
            .unwrap_or_else(|| panic!("no {n_rules}-rule argument for {conclusion}"))
    }

    #[test]
    fn activation_set_fixtures() {
        let g = corpus::ground("birds");
        let ctx = ActivationContext::new(&g);
        let a1 = arg(&g, "~flies(tina)", 1);
        let a2 = arguments_for(&g, &lit("flies(tina)"))
            .into_iter()
            .find(|a| a.rules[0].body.len() == 1)
            .unwrap();
        let bird: BTreeSet<Literal> = [lit("bird(tina)")].into();
        assert!(activates(&ctx, &bird, &a2));
        assert!(!activates(&ctx, &bird, &a1));
        let chicken: BTreeSet<Literal> = [lit("chicken(tina)")].into();
        assert!(activates(&ctx, &chicken, &a1));
        let scared_arg = arguments_for(&g, &lit("flies(tina)"))
            .into_iter()
            .find(|a| a.rules[0].body.len() == 2)
            .unwrap();
        assert!(!activates(&ctx, &chicken, &scared_arg));
        // Without facts nothing with a non-empty rule set activates.
        let empty: BTreeSet<Literal> = BTreeSet::new();
        assert!(!activates(&ctx, &empty, &a1));
        assert!(!activates(&ctx, &empty, &a2));
    }

    #[test]
    fn specificity_on_the_tina_arguments() {
        let g = corpus::ground("birds");
        let ctx = ActivationContext::new(&g);
        let a1 = arg(&g, "~flies(tina)", 1);
        let a2 = arguments_for(&g, &lit("flies(tina)"))
            .into_iter()
            .find(|a| a.rules[0].body.len() == 1)
            .unwrap();
        let a3 = arguments_for(&g, &lit("flies(tina)"))
            .into_iter()
            .find(|a| a.rules[0].body.len() == 2)
            .unwrap();
        // More direct wins; more informed wins.
        assert!(more_specific(&ctx, &a1, &a2));
        assert!(!more_specific(&ctx, &a2, &a1));
        assert!(more_specific(&ctx, &a3, &a1));
        assert!(!more_specific(&ctx, &a1, &a3));
        // Irreflexive.
        assert!(!more_specific(&ctx, &a1, &a1));
    }

    #[test]
    fn reciprocal_proper_defeat() {
        let g = corpus::ground("reciprocal");
        let ctx = ActivationContext::new(&g);
        let a2 = arg(&g, "d", 2);
        let sub_nd = arg(&g, "~d", 1);
        let a1 = arg(&g, "b", 2);
        let sub_nb = arg(&g, "~b", 1);
        assert!(more_specific(&ctx, &a2, &sub_nd));
        assert!(more_specific(&ctx, &a1, &sub_nb));
    }

    #[test]
    fn nixon_arguments_are_incomparable() {
        let g = corpus::ground("nixon");
        let pac = arg(&g, "pacifist(nixon)", 1);
        let npac = arg(&g, "~pacifist(nixon)", 1);
        assert_eq!(
            compare(CriterionConfig::specificity(), &g, &pac, &npac),
            PreferenceOutcome::Incomparable
        );
        assert_eq!(
            compare(CriterionConfig::specificity(), &g, &npac, &pac),
            PreferenceOutcome::Incomparable
        );
    }

    #[test]
    fn equi_specificity_cases() {
        let g = corpus::ground("birds");
        let empty1 = arg(&g, "~flies(tweety)", 0);
        let empty2 = arg(&g, "bird(tweety)", 0);
        assert!(equi_specific(&g, &empty1, &empty2));
        let a = arg(&g, "~flies(tina)", 1);
        assert!(equi_specific(&g, &a, &a));
        let flies = arg(&g, "flies(tina)", 1);
        assert!(!equi_specific(&g, &a, &flies));
    }

    #[test]
    fn priority_criterion_on_the_stock_program() {
        let g = corpus::ground("stocks_priorities");
        let nb = arg(&g, "~buy_stock(acme)", 2);
        let b = arg(&g, "buy_stock(acme)", 1);
        assert!(priority_preferred(&g, &nb, &b));
        assert!(!priority_preferred(&g, &b, &nb));
        assert_eq!(
            compare(CriterionConfig::priorities(), &g, &nb, &b),
            PreferenceOutcome::FirstStrictlyPreferred
        );
        // An argument without ranked rules is never preferred.
        let rc = arg(&g, "risky_company(acme)", 1);
        assert!(!priority_preferred(&g, &rc, &b));
    }

    #[test]
    fn combined_uses_priorities_as_tie_breaker() {
        let g = corpus::ground("stocks_priorities");
        let nb = arg(&g, "~buy_stock(acme)", 2);
        let b = arg(&g, "buy_stock(acme)", 1);
        // Under specificity alone the pair is incomparable.
        assert_eq!(
            compare(CriterionConfig::specificity(), &g, &nb, &b),
            PreferenceOutcome::Incomparable
        );
        assert_eq!(
            compare(CriterionConfig::combined(), &g, &nb, &b),
            PreferenceOutcome::FirstStrictlyPreferred
        );
        assert_eq!(
            compare(CriterionConfig::combined(), &g, &b, &nb),
            PreferenceOutcome::SecondStrictlyPreferred
        );
    }

    #[test]
    fn presumption_penalty_prefers_fact_based_arguments() {
        let g = corpus::ground("presumptions");
        let cfg = CriterionConfig::specificity().for_program(&g);
        assert!(cfg.presumption_penalty);
        let a2 = arg(&g, "~a", 1);
        let args_a = arguments_for(&g, &lit("a"));
        let a1 = args_a.iter().find(|a| a.rules.iter().any(|r| r.head == lit("t"))).unwrap();
        let a3 = args_a.iter().find(|a| a.rules.iter().any(|r| r.head == lit("p"))).unwrap();
        assert_eq!(compare(cfg, &g, &a2, a1), PreferenceOutcome::FirstStrictlyPreferred);
        assert_eq!(compare(cfg, &g, &a2, a3), PreferenceOutcome::FirstStrictlyPreferred);
        // Without the penalty: a2 beats a1 by
        // plain specificity but is incomparable with a3.
        let plain = CriterionConfig::specificity();
        assert_eq!(compare(plain, &g, &a2, a1), PreferenceOutcome::FirstStrictlyPreferred);
        assert_eq!(compare(plain, &g, &a2, a3), PreferenceOutcome::Incomparable);
    }

    #[test]
    fn optimized_specificity_agrees_with_reference_on_the_corpus() {
        for entry in corpus::all() {
            let g = corpus::ground(entry.name);
            let ctx = ActivationContext::new(&g);
            if ctx.derivable().len() > 14 {
                continue;
            }
            let mut all_args = Vec::new();
            for l in g.language_literals() {
                all_args.extend(arguments_for(&g, &l));
            }
            for x in &all_args {
                for y in &all_args {
                    assert_eq!(
                        more_specific(&ctx, x, y),
                        more_specific_reference(&ctx, x, y),
                        "{}: {x} vs {y}",
                        entry.name
                    );
                }
            }
        }
    }

    #[test]
    fn equi_specific_arguments_never_disagree() {
        // Prop 3.4 restated testably over the corpus.
        for entry in corpus::all() {
            let g = corpus::ground(entry.name);
            let mut all_args = Vec::new();
            for l in g.language_literals() {
                all_args.extend(arguments_for(&g, &l));
            }
            for x in &all_args {
                for y in &all_args {
                    if equi_specific(&g, x, y) {
                        assert!(
                            !crate::argumentation::disagree(&g, &x.conclusion, &y.conclusion),
                            "{}: {x} vs {y}",
                            entry.name
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn equi_specificity_is_an_equivalence_on_corpus_arguments() {
        for entry in corpus::all() {
            let g = corpus::ground(entry.name);
            let mut all_args = Vec::new();
            for l in g.language_literals() {
                all_args.extend(arguments_for(&g, &l));
            }
            for x in &all_args {
                assert!(equi_specific(&g, x, x));
                for y in &all_args {
                    assert_eq!(equi_specific(&g, x, y), equi_specific(&g, y, x));
                    for z in &all_args {
                        if equi_specific(&g, x, y) && equi_specific(&g, y, z) {
                            assert!(equi_specific(&g, x, z));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn compare_never_returns_both_strict_preferences() {
        for entry in corpus::all() {
            let g = corpus::ground(entry.name);
            let cfg = CriterionConfig::specificity().for_program(&g);
            let mut all_args = Vec::new();
            for l in g.language_literals() {
                all_args.extend(arguments_for(&g, &l));
            }
            for x in &all_args {
                for y in &all_args {
                    let xy = compare(cfg, &g, x, y);
                    let yx = compare(cfg, &g, y, x);
                    use PreferenceOutcome::*;
                    match xy {
                        FirstStrictlyPreferred => assert_eq!(yx, SecondStrictlyPreferred),
                        SecondStrictlyPreferred => assert_eq!(yx, FirstStrictlyPreferred),
                        EquiSpecific => assert_eq!(yx, EquiSpecific),
                        Incomparable => assert_eq!(yx, Incomparable),
                    }
                }
            }
        }
    }
}
