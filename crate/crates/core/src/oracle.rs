//! Brute-force reference implementations, used only for differential
//! testing. Deliberately simple: arguments by subset enumeration straight
//! from the definitions, specificity by enumerating every activation set,
//! warrant by
//! recursion over the full dialectical tree with no pruning. Nothing here
//! shares argument, comparison, or tree code with the engine; only the
//! forward-chaining closure semantics is common ground, and the oracle
//! carries its own naive copy of that fixpoint.

use std::cell::{OnceCell, RefCell};
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::argumentation::ArgumentStructure;
use crate::comparison::{Criterion, PreferenceOutcome};
use crate::dialectics::{AnswerValue, DialecticsConfig};
use crate::model::{
    ground_program, BodyAtom, GroundProgram, Literal, Mode, Program, Rule, RuleKind, Term,
};

#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    /// Refuse programs with more ground defeasible rules than this.
    pub max_delta: usize,
    /// Refuse specificity checks when |F| exceeds this.
    pub max_f: usize,
    /// Tree expansion ceiling.
    pub max_nodes: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_delta: 12, max_f: 14, max_nodes: 100_000 }
    }
}

impl OracleConfig {
    /// Wide enough for every program in the shipped corpus.
    pub fn for_corpus() -> Self {
        OracleConfig { max_delta: 14, ..OracleConfig::default() }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("program has {0} ground defeasible rules, oracle bound is {1}")]
    DeltaTooLarge(usize, usize),
    #[error("|F| = {0} exceeds the oracle bound {1}")]
    FTooLarge(usize, usize),
    #[error("oracle tree search exceeded {0} nodes")]
    ResourceLimit(usize),
}

/// Naive interned view; independent of the engine's tables.
struct Naive<'g> {
    g: &'g GroundProgram,
    lits: Vec<Literal>,
    ids: HashMap<Literal, usize>,
    /// (head, positive body, negative body, defeasible-rule index or usize::MAX)
    rules: Vec<(usize, Vec<usize>, Vec<usize>, usize)>,
    facts: Vec<usize>,
    compl: Vec<usize>,
}

impl<'g> Naive<'g> {
    fn new(g: &'g GroundProgram) -> Self {
        let mut n = Naive {
            g,
            lits: Vec::new(),
            ids: HashMap::new(),
            rules: Vec::new(),
            facts: Vec::new(),
            compl: Vec::new(),
        };
        for f in &g.facts {
            let id = n.intern(f);
            n.facts.push(id);
        }
        for r in &g.strict_rules {
            n.add_rule(r, usize::MAX);
        }
        for (k, r) in g.defeasible_rules.iter().enumerate() {
            n.add_rule(r, k);
        }
        for i in 0..n.lits.len() {
            let c = n.lits[i].complemented();
            n.intern(&c);
        }
        n.compl = (0..n.lits.len()).map(|i| n.ids[&n.lits[i].complemented()]).collect();
        n
    }

    fn intern(&mut self, l: &Literal) -> usize {
        if let Some(&id) = self.ids.get(l) {
            return id;
        }
        let id = self.lits.len();
        self.lits.push(l.clone());
        self.ids.insert(l.clone(), id);
        id
    }

    fn add_rule(&mut self, r: &Rule, def_idx: usize) {
        let head = self.intern(&r.head);
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for b in &r.body {
            let id = self.intern(&b.literal);
            if b.default_negated {
                neg.push(id);
            } else {
                pos.push(id);
            }
        }
        self.rules.push((head, pos, neg, def_idx));
    }

    /// Repeated passes until nothing new is derivable. `delta` is the set
    /// of admitted defeasible-rule indices; strict rules always run.
    /// `extra` are additional axioms; `forbidden` literals never enter.
    fn closure(
        &self,
        use_facts: bool,
        extra: &[usize],
        delta: &[bool],
        forbidden: Option<&[bool]>,
    ) -> Vec<bool> {
        let mut derived = vec![false; self.lits.len()];
        let blocked = |i: usize| forbidden.is_some_and(|f| f[i]);
        if use_facts {
            for &f in &self.facts {
                if !blocked(f) {
                    derived[f] = true;
                }
            }
        }
        for &e in extra {
            if !blocked(e) {
                derived[e] = true;
            }
        }
        loop {
            let mut changed = false;
            for (head, pos, neg, def_idx) in &self.rules {
                if *def_idx != usize::MAX && !delta[*def_idx] {
                    continue;
                }
                if !self.g.mode.default_negation && !neg.is_empty() {
                    continue;
                }
                if *def_idx != usize::MAX
                    && pos.is_empty()
                    && neg.is_empty()
                    && !self.g.mode.presumptions
                {
                    continue;
                }
                if derived[*head] || blocked(*head) {
                    continue;
                }
                if pos.iter().all(|&b| derived[b]) {
                    derived[*head] = true;
                    changed = true;
                }
            }
            if !changed {
                return derived;
            }
        }
    }

    fn contradictory(&self, derived: &[bool]) -> bool {
        derived.iter().enumerate().any(|(i, &d)| d && derived[self.compl[i]])
    }

    fn delta_mask(&self, set: &BTreeSet<usize>) -> Vec<bool> {
        let mut m = vec![false; self.g.defeasible_rules.len()];
        for &i in set {
            m[i] = true;
        }
        m
    }
}

/// An argument as the oracle sees it: defeasible-rule indices plus the
/// conclusion id.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct OArg {
    rules: BTreeSet<usize>,
    conclusion: usize,
}

struct OracleEngine<'g> {
    n: Naive<'g>,
    cfg: DialecticsConfig,
    ocfg: OracleConfig,
    /// Indexed by defeasible-subset bitmask: the subset, its closure with the strict part, and
    /// whether that closure is contradictory.
    subsets: Vec<(BTreeSet<usize>, Vec<bool>, bool)>,
    args: Vec<OArg>,
    /// Ids of all literals in F, enumeration order of the H masks.
    f: Vec<usize>,
    strict_derivable: Vec<bool>,
    /// Per H-mask, the strict closure of the strict rules and an activation set (no facts).
    strict_tables: OnceCell<Vec<Vec<bool>>>,
    /// Per argument, per H-mask: does H activate it?
    act_tables: OnceCell<Vec<Vec<bool>>>,
    defeat_table: OnceCell<Vec<Vec<(usize, u8)>>>,
    cmp_cache: RefCell<HashMap<(usize, usize), PreferenceOutcome>>,
    disagree_cache: RefCell<HashMap<(usize, usize), bool>>,
}

const KIND_PROPER: u8 = 0;
const KIND_BLOCKING: u8 = 1;
const KIND_ASSUMPTION: u8 = 2;
const KIND_ROOT: u8 = 3;

impl<'g> OracleEngine<'g> {
    fn new(
        g: &'g GroundProgram,
        cfg: &DialecticsConfig,
        ocfg: &OracleConfig,
    ) -> Result<Self, OracleError> {
        let n_delta = g.defeasible_rules.len();
        if n_delta > ocfg.max_delta {
            return Err(OracleError::DeltaTooLarge(n_delta, ocfg.max_delta));
        }
        let n = Naive::new(g);
        let mut subsets = Vec::with_capacity(1 << n_delta);
        for mask in 0u32..(1u32 << n_delta) {
            let set: BTreeSet<usize> = (0..n_delta).filter(|i| mask & (1 << i) != 0).collect();
            let derived = n.closure(true, &[], &n.delta_mask(&set), None);
            let contra = n.contradictory(&derived);
            subsets.push((set, derived, contra));
        }
        let full = &subsets[subsets.len() - 1];
        let f: Vec<usize> = (0..n.lits.len()).filter(|&i| full.1[i]).collect();
        if f.len() > ocfg.max_f {
            return Err(OracleError::FTooLarge(f.len(), ocfg.max_f));
        }
        let strict_derivable = n.closure(true, &[], &vec![false; n_delta], None);

        // Every subset against the argument-structure definition:
        // derivation, non-contradiction, coherence with the set's own
        // assumptions, and minimality. Removing one rule at a time decides
        // minimality because forward derivability is monotone in the rule
        // set and every subset of a non-contradictory set stays
        // non-contradictory.
        let mut args = Vec::new();
        for c in 0..n.lits.len() {
            'sets: for (mask, (set, derived, contra)) in subsets.iter().enumerate() {
                if !derived[c] || *contra {
                    continue;
                }
                for &r in set {
                    let smaller = mask & !(1usize << r);
                    if subsets[smaller].1[c] {
                        continue 'sets;
                    }
                }
                if g.mode.default_negation {
                    let mut forbidden = vec![false; n.lits.len()];
                    let mut any = false;
                    for &r in set {
                        for b in &g.defeasible_rules[r].body {
                            if b.default_negated {
                                forbidden[n.ids[&b.literal]] = true;
                                any = true;
                            }
                        }
                    }
                    if any {
                        let avoid = n.closure(true, &[], &n.delta_mask(set), Some(&forbidden));
                        if !avoid[c] {
                            continue;
                        }
                    }
                }
                args.push(OArg { rules: set.clone(), conclusion: c });
            }
        }
        args.sort();
        Ok(OracleEngine {
            n,
            cfg: *cfg,
            ocfg: *ocfg,
            subsets,
            args,
            f,
            strict_derivable,
            strict_tables: OnceCell::new(),
            act_tables: OnceCell::new(),
            defeat_table: OnceCell::new(),
            cmp_cache: RefCell::new(HashMap::new()),
            disagree_cache: RefCell::new(HashMap::new()),
        })
    }

    fn h_of_mask(&self, mask: usize) -> Vec<usize> {
        self.f
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &l)| l)
            .collect()
    }

    fn strict_tables(&self) -> &Vec<Vec<bool>> {
        self.strict_tables.get_or_init(|| {
            let none = vec![false; self.n.g.defeasible_rules.len()];
            (0..(1usize << self.f.len()))
                .map(|mask| self.n.closure(false, &self.h_of_mask(mask), &none, None))
                .collect()
        })
    }

    fn act_tables(&self) -> &Vec<Vec<bool>> {
        self.act_tables.get_or_init(|| {
            self.args
                .iter()
                .map(|a| {
                    let m = self.n.delta_mask(&a.rules);
                    (0..(1usize << self.f.len()))
                        .map(|mask| self.n.closure(false, &self.h_of_mask(mask), &m, None)[a.conclusion])
                        .collect()
                })
                .collect()
        })
    }

    fn subset_entry(&self, set: &BTreeSet<usize>) -> &(BTreeSet<usize>, Vec<bool>, bool) {
        let mask: usize = set.iter().fold(0, |m, &i| m | (1 << i));
        &self.subsets[mask]
    }

    fn disagree(&self, a: usize, b: usize) -> bool {
        let key = if a <= b { (a, b) } else { (b, a) };
        if let Some(&v) = self.disagree_cache.borrow().get(&key) {
            return v;
        }
        let none = vec![false; self.n.g.defeasible_rules.len()];
        let derived = self.n.closure(true, &[key.0, key.1], &none, None);
        let v = self.n.contradictory(&derived);
        self.disagree_cache.borrow_mut().insert(key, v);
        v
    }

    fn args_for(&self, h: usize) -> Vec<usize> {
        (0..self.args.len()).filter(|&i| self.args[i].conclusion == h).collect()
    }

    /// Literal transcription of generalized specificity over every subset
    /// of the derivable literals, reading the precomputed activation tables.
    fn more_specific_indexed(&self, i1: usize, i2: usize) -> bool {
        let strict = self.strict_tables();
        let act = self.act_tables();
        let (c1, c2) = (self.args[i1].conclusion, self.args[i2].conclusion);
        let mut cond2 = false;
        for mask in 0..(1usize << self.f.len()) {
            let act1 = act[i1][mask];
            let act2 = act[i2][mask];
            if act1 && !strict[mask][c1] && !act2 {
                return false;
            }
            if act2 && !strict[mask][c2] && !act1 {
                cond2 = true;
            }
        }
        cond2
    }

    /// Uncached per-pair variant for arguments not in the enumeration.
    fn more_specific_raw(&self, a1: &OArg, a2: &OArg) -> bool {
        let m1 = self.n.delta_mask(&a1.rules);
        let m2 = self.n.delta_mask(&a2.rules);
        let none = vec![false; self.n.g.defeasible_rules.len()];
        let mut cond2 = false;
        for mask in 0..(1usize << self.f.len()) {
            let h = self.h_of_mask(mask);
            let act1 = self.n.closure(false, &h, &m1, None)[a1.conclusion];
            let act2 = self.n.closure(false, &h, &m2, None)[a2.conclusion];
            let strict = self.n.closure(false, &h, &none, None);
            if act1 && !strict[a1.conclusion] && !act2 {
                return false;
            }
            if act2 && !strict[a2.conclusion] && !act1 {
                cond2 = true;
            }
        }
        cond2
    }

    fn equi_specific(&self, a1: &OArg, a2: &OArg) -> bool {
        if a1.rules != a2.rules {
            return false;
        }
        let none = vec![false; self.n.g.defeasible_rules.len()];
        let c1 = self.n.closure(true, &[a1.conclusion], &none, None);
        let c2 = self.n.closure(true, &[a2.conclusion], &none, None);
        c1[a2.conclusion] && c2[a1.conclusion]
    }

    fn priority_preferred(&self, a1: &OArg, a2: &OArg) -> bool {
        let stronger = |x: &BTreeSet<usize>, y: &BTreeSet<usize>| {
            x.iter().any(|&ra| {
                y.iter().any(|&rb| {
                    let la = self.n.g.defeasible_rules[ra].label.as_deref();
                    let lb = self.n.g.defeasible_rules[rb].label.as_deref();
                    match (la, lb) {
                        (Some(la), Some(lb)) => {
                            self.n.g.priorities.iter().any(|(s, w)| s == la && w == lb)
                        }
                        _ => false,
                    }
                })
            })
        };
        stronger(&a1.rules, &a2.rules) && !stronger(&a2.rules, &a1.rules)
    }

    fn compare_indexed(&self, i1: usize, i2: usize) -> PreferenceOutcome {
        if let Some(&v) = self.cmp_cache.borrow().get(&(i1, i2)) {
            return v;
        }
        let (a1, a2) = (&self.args[i1], &self.args[i2]);
        let cfg = self.cfg.criterion;
        let mut outcome = None;
        if cfg.presumption_penalty {
            let presumes =
                |a: &OArg| a.rules.iter().any(|&r| self.n.g.defeasible_rules[r].is_presumption());
            match (presumes(a1), presumes(a2)) {
                (false, true) => outcome = Some(PreferenceOutcome::FirstStrictlyPreferred),
                (true, false) => outcome = Some(PreferenceOutcome::SecondStrictlyPreferred),
                _ => {}
            }
        }
        let specificity = |this: &Self| {
            if this.equi_specific(a1, a2) {
                PreferenceOutcome::EquiSpecific
            } else if this.more_specific_indexed(i1, i2) {
                PreferenceOutcome::FirstStrictlyPreferred
            } else if this.more_specific_indexed(i2, i1) {
                PreferenceOutcome::SecondStrictlyPreferred
            } else {
                PreferenceOutcome::Incomparable
            }
        };
        let priorities = |this: &Self| {
            match (this.priority_preferred(a1, a2), this.priority_preferred(a2, a1)) {
                (true, false) => PreferenceOutcome::FirstStrictlyPreferred,
                (false, true) => PreferenceOutcome::SecondStrictlyPreferred,
                _ => {
                    if this.equi_specific(a1, a2) {
                        PreferenceOutcome::EquiSpecific
                    } else {
                        PreferenceOutcome::Incomparable
                    }
                }
            }
        };
        let v = outcome.unwrap_or_else(|| match cfg.criterion {
            Criterion::Specificity => specificity(self),
            Criterion::Priorities => priorities(self),
            Criterion::Combined => match specificity(self) {
                PreferenceOutcome::Incomparable => priorities(self),
                other => other,
            },
        });
        self.cmp_cache.borrow_mut().insert((i1, i2), v);
        v
    }

    /// Defeat records per argument: (attacker index, kind).
    fn defeat_table(&self) -> &Vec<Vec<(usize, u8)>> {
        self.defeat_table.get_or_init(|| {
            (0..self.args.len()).map(|t| self.defeaters(t)).collect()
        })
    }

    fn defeaters(&self, target_idx: usize) -> Vec<(usize, u8)> {
        let target = &self.args[target_idx];
        let mut out = Vec::new();
        let (_, tclosure, _) = self.subset_entry(&target.rules);
        for ai in 0..self.args.len() {
            let attacker = &self.args[ai];
            let mut kinds = BTreeSet::new();
            for (point, derived) in tclosure.iter().enumerate() {
                if !derived || self.strict_derivable[point] {
                    continue;
                }
                if !self.disagree(point, attacker.conclusion) {
                    continue;
                }
                for sub in self.args_for(point) {
                    if !self.args[sub].rules.is_subset(&target.rules) {
                        continue;
                    }
                    match self.compare_indexed(ai, sub) {
                        PreferenceOutcome::FirstStrictlyPreferred => {
                            kinds.insert(KIND_PROPER);
                        }
                        PreferenceOutcome::Incomparable => {
                            kinds.insert(KIND_BLOCKING);
                        }
                        _ => {}
                    }
                }
            }
            if self.n.g.mode.default_negation {
                let assumed = target.rules.iter().flat_map(|&r| {
                    self.n.g.defeasible_rules[r]
                        .body
                        .iter()
                        .filter(|b| b.default_negated)
                        .map(|b| self.n.ids[&b.literal])
                });
                for asm in assumed {
                    if attacker.conclusion == asm {
                        kinds.insert(KIND_ASSUMPTION);
                    }
                }
            }
            for k in kinds {
                out.push((ai, k));
            }
        }
        out
    }

    /// A node is undefeated iff every defeater admissible on the line is
    /// itself defeated.
    fn undefeated(
        &self,
        node: usize,
        node_kind: u8,
        line: &[(usize, u8)],
        budget: &mut usize,
    ) -> Result<bool, OracleError> {
        if *budget == 0 {
            return Err(OracleError::ResourceLimit(self.ocfg.max_nodes));
        }
        *budget -= 1;
        let mut extended: Vec<(usize, u8)> = line.to_vec();
        extended.push((node, node_kind));
        for &(child, kind) in &self.defeat_table()[node] {
            if !self.acceptable(&extended, child, kind) {
                continue;
            }
            if self.undefeated(child, kind, &extended, budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Conditions 2-4 of the acceptable-line definition, transcribed.
    fn acceptable(&self, line: &[(usize, u8)], cand: usize, kind: u8) -> bool {
        let cand_arg = &self.args[cand];
        let exempt = kind == KIND_ASSUMPTION && cand_arg.rules.is_empty();
        if !exempt {
            for &(earlier, _) in line {
                if cand_arg.rules.is_subset(&self.args[earlier].rules) {
                    return false;
                }
            }
        }
        if let Some(&(_, last_kind)) = line.last() {
            if last_kind == KIND_BLOCKING && kind == KIND_BLOCKING {
                return false;
            }
        }
        // Concordance of the side the candidate joins.
        let mut side_rules: BTreeSet<usize> = cand_arg.rules.clone();
        let parity = line.len() % 2;
        for (i, &(a, _)) in line.iter().enumerate() {
            if i % 2 == parity {
                side_rules.extend(self.args[a].rules.iter().copied());
            }
        }
        let (_, _, contra) = self.subset_entry(&side_rules);
        !*contra
    }

    fn warranted(&self, h: usize) -> Result<bool, OracleError> {
        for ri in 0..self.args.len() {
            if self.args[ri].conclusion != h {
                continue;
            }
            let mut budget = self.ocfg.max_nodes;
            if self.undefeated(ri, KIND_ROOT, &[], &mut budget)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn answer(&self, h: &Literal) -> Result<AnswerValue, OracleError> {
        if !crate::model::in_language(self.n.g, h) {
            return Ok(AnswerValue::Unknown);
        }
        if let Some(&id) = self.n.ids.get(h) {
            if self.warranted(id)? {
                return Ok(AnswerValue::Yes);
            }
        }
        if let Some(&cid) = self.n.ids.get(&h.complemented()) {
            if self.warranted(cid)? {
                return Ok(AnswerValue::No);
            }
        }
        Ok(AnswerValue::Undecided)
    }

    fn to_public(&self, a: &OArg) -> ArgumentStructure {
        let rules: Vec<Rule> =
            a.rules.iter().map(|&i| self.n.g.defeasible_rules[i].clone()).collect();
        let mut assumptions: Vec<Literal> = rules
            .iter()
            .flat_map(|r| r.body.iter().filter(|b| b.default_negated).map(|b| b.literal.clone()))
            .collect();
        assumptions.sort();
        assumptions.dedup();
        ArgumentStructure { rules, conclusion: self.n.lits[a.conclusion].clone(), assumptions }
    }

    fn resolve(&self, a: &ArgumentStructure) -> OArg {
        OArg {
            rules: a
                .rules
                .iter()
                .map(|r| {
                    self.n
                        .g
                        .defeasible_rules
                        .iter()
                        .position(|x| x == r)
                        .expect("rule belongs to the program")
                })
                .collect(),
            conclusion: self.n.ids[&a.conclusion],
        }
    }
}

/// Every subset of the defeasible rules checked directly against the argument-structure
/// definition.
pub fn oracle_arguments_for(
    g: &GroundProgram,
    h: &Literal,
    ocfg: &OracleConfig,
) -> Result<Vec<ArgumentStructure>, OracleError> {
    let eng = OracleEngine::new(g, &DialecticsConfig::default(), ocfg)?;
    let Some(&id) = eng.n.ids.get(h) else { return Ok(Vec::new()) };
    let mut out: Vec<ArgumentStructure> =
        eng.args_for(id).into_iter().map(|i| eng.to_public(&eng.args[i])).collect();
    out.sort();
    Ok(out)
}

/// Full enumeration of every activation set, straight from the definition.
pub fn oracle_more_specific(
    g: &GroundProgram,
    a1: &ArgumentStructure,
    a2: &ArgumentStructure,
    ocfg: &OracleConfig,
) -> Result<bool, OracleError> {
    let eng = OracleEngine::new(g, &DialecticsConfig::default(), ocfg)?;
    Ok(eng.more_specific_raw(&eng.resolve(a1), &eng.resolve(a2)))
}

/// The oracle's own four-valued answer.
pub fn oracle_answer(
    g: &GroundProgram,
    cfg: &DialecticsConfig,
    h: &Literal,
    ocfg: &OracleConfig,
) -> Result<AnswerValue, OracleError> {
    OracleEngine::new(g, cfg, ocfg)?.answer(h)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    /// What was compared (query literal or argument pair).
    pub subject: String,
    pub engine: String,
    pub oracle: String,
    pub agree: bool,
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.agree {
            write!(f, "ok   {}: {}", self.subject, self.engine)
        } else {
            write!(f, "DIFF {}: engine={} oracle={}", self.subject, self.engine, self.oracle)
        }
    }
}

#[derive(Debug, Default)]
pub struct DifferentialOutcome {
    pub reports: Vec<OracleReport>,
    pub disagreements: usize,
    /// Set when the program exceeded an oracle bound and was not compared.
    pub skipped: Option<String>,
}

impl DifferentialOutcome {
    pub fn differences(&self) -> impl Iterator<Item = &OracleReport> {
        self.reports.iter().filter(|r| !r.agree)
    }
}

/// Knobs for deliberately breaking the engine under test; the harness must
/// detect such builds.
#[derive(Debug, Clone, Copy, Default)]
pub struct Mutation {
    pub skip_minimality: bool,
}

/// Compares answers, warranted sets, argument enumeration, and specificity
/// verdicts between the engine (pruned and exhaustive) and the oracle, for
/// every language literal and argument pair. Disagreements are reported,
/// not thrown.
pub fn differential_run(
    g: &GroundProgram,
    cfg: &DialecticsConfig,
    ocfg: &OracleConfig,
) -> DifferentialOutcome {
    differential_run_mutated(g, cfg, ocfg, Mutation::default())
}

pub fn differential_run_mutated(
    g: &GroundProgram,
    cfg: &DialecticsConfig,
    ocfg: &OracleConfig,
    mutation: Mutation,
) -> DifferentialOutcome {
    let mut out = DifferentialOutcome::default();
    let oracle = match OracleEngine::new(g, cfg, ocfg) {
        Ok(o) => o,
        Err(e) => {
            out.skipped = Some(e.to_string());
            return out;
        }
    };
    let eng = crate::engine::Engine::with_mutation(g, cfg.criterion, mutation.skip_minimality);

    let push = |out: &mut DifferentialOutcome, subject: String, engine: String, oracle: String| {
        let agree = engine == oracle;
        if !agree {
            out.disagreements += 1;
        }
        out.reports.push(OracleReport { subject, engine, oracle, agree });
    };

    // Argument enumeration per language literal.
    for l in g.language_literals() {
        let engine_args: Vec<ArgumentStructure> = match eng.lit_id(&l) {
            Some(id) => {
                let mut v: Vec<ArgumentStructure> =
                    eng.args_for(id).iter().map(|&a| eng.to_public(&eng.arg(a))).collect();
                v.sort();
                v
            }
            None => Vec::new(),
        };
        let oracle_args: Vec<ArgumentStructure> = match oracle.n.ids.get(&l) {
            Some(&id) => oracle.args_for(id).into_iter().map(|i| oracle.to_public(&oracle.args[i])).collect(),
            None => Vec::new(),
        };
        let show =
            |v: &[ArgumentStructure]| v.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" ");
        push(&mut out, format!("arguments({l})"), show(&engine_args), show(&oracle_args));
    }

    // Specificity verdicts for every argument pair the oracle enumerated.
    for i in 0..oracle.args.len() {
        for j in 0..oracle.args.len() {
            let px = oracle.to_public(&oracle.args[i]);
            let py = oracle.to_public(&oracle.args[j]);
            let engine_ms = eng.more_specific(&eng.resolve(&px), &eng.resolve(&py));
            let oracle_ms = oracle.more_specific_indexed(i, j);
            push(
                &mut out,
                format!("more_specific({px}, {py})"),
                engine_ms.to_string(),
                oracle_ms.to_string(),
            );
        }
    }

    // Answers: pruned engine, exhaustive engine, oracle; plus warranted sets.
    let mut engine_warranted = BTreeSet::new();
    let mut oracle_warranted = BTreeSet::new();
    for l in g.language_literals() {
        let pruned = crate::dialectics::answer_with(&eng, cfg, &l);
        let exhaustive = crate::dialectics::answer_exhaustive_with(&eng, cfg, &l);
        let o = oracle.answer(&l);
        let (pruned, exhaustive, o) = match (pruned, exhaustive, o) {
            (Ok(p), Ok(e), Ok(o)) => (p, e, o),
            _ => {
                out.skipped = Some(format!("resource limit while answering {l}"));
                return out;
            }
        };
        push(&mut out, format!("answer({l})"), pruned.value.to_string(), o.to_string());
        push(&mut out, format!("answer_exhaustive({l})"), exhaustive.to_string(), o.to_string());
        if pruned.value == AnswerValue::Yes {
            engine_warranted.insert(l.clone());
        }
        if o == AnswerValue::Yes {
            oracle_warranted.insert(l.clone());
        }
    }
    let show_set =
        |s: &BTreeSet<Literal>| s.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(", ");
    push(
        &mut out,
        "warranted_literals".into(),
        show_set(&engine_warranted),
        show_set(&oracle_warranted),
    );
    out
}

/// Checks the structural properties every program must satisfy against the
/// public engine surface; returns human-readable violations. Used by the
/// differential tests over corpus and fuzz programs.
///
/// Covered: strictly derived literals have exactly the empty argument, no
/// counter-arguments against it, and answer YES; the empty argument never
/// attacks; no argument defeats itself; marking is child-order independent;
/// YES and NO exclude each other; in default-negation mode a warranted ~p
/// never coexists with a warranted p (coherence).
pub fn invariant_violations(g: &GroundProgram, cfg: &DialecticsConfig) -> Vec<String> {
    use crate::argumentation::{arguments_for, counter_arguments};
    use crate::derivation::{strictly_derives, RuleSet};
    use crate::dialectics::{answer, build_tree, mark_tree, Mark, TreeNode};

    let mut out = Vec::new();
    let pi = RuleSet::pi_of(g);
    let literals = g.language_literals();

    let mut answers = std::collections::BTreeMap::new();
    for l in &literals {
        match answer(g, cfg, l) {
            Ok(a) => {
                answers.insert(l.clone(), a.value);
            }
            Err(e) => out.push(format!("answer({l}) failed: {e}")),
        }
    }

    for l in &literals {
        let args = arguments_for(g, l);
        if strictly_derives(&pi, l) {
            if args.len() != 1 || !args[0].is_empty() {
                out.push(format!("strictly derived {l} should have exactly the empty argument"));
            }
            if !counter_arguments(g, &args[0]).is_empty() {
                out.push(format!("the empty argument for {l} has counter-arguments"));
            }
            if answers.get(l) != Some(&AnswerValue::Yes) {
                out.push(format!("strictly derived {l} is not answered YES"));
            }
        }
        for a in &args {
            for report in counter_arguments(g, a) {
                if report.attacker.is_empty() {
                    out.push(format!("empty argument attacks {a}"));
                }
                if report.attacker == *a {
                    out.push(format!("{a} attacks itself"));
                }
                // Direct attacks are symmetric: an attack on the
                // conclusion itself has a converse attack.
                if report.point == a.conclusion {
                    let converse = counter_arguments(g, &report.attacker);
                    if !converse.iter().any(|c| {
                        c.attacker == *a && c.point == report.attacker.conclusion
                    }) {
                        out.push(format!(
                            "direct attack of {} on {a} has no converse",
                            report.attacker
                        ));
                    }
                }
            }
            match build_tree(g, cfg, a) {
                Err(e) => out.push(format!("tree for {a} failed: {e}")),
                Ok(tree) => {
                    fn permute(node: &mut TreeNode, salt: usize) {
                        node.children.reverse();
                        let n = node.children.len().max(1);
                        node.children.rotate_left(salt % n);
                        for (i, c) in node.children.iter_mut().enumerate() {
                            permute(c, salt + i + 1);
                        }
                    }
                    let baseline = mark_tree(tree.clone()).root_mark();
                    for salt in 1..3 {
                        let mut shuffled = tree.clone();
                        permute(&mut shuffled.root, salt);
                        if mark_tree(shuffled).root_mark() != baseline {
                            out.push(format!("marking of {a} depends on child order"));
                        }
                    }
                    let _ = baseline == Mark::Undefeated;
                }
            }
        }
        if !l.negated {
            let pos = answers.get(l);
            let neg = answers.get(&l.complemented());
            if pos == Some(&AnswerValue::Yes) && neg != Some(&AnswerValue::No) {
                out.push(format!("YES({l}) without NO({})", l.complemented()));
            }
            if neg == Some(&AnswerValue::Yes) && pos != Some(&AnswerValue::No) {
                out.push(format!("YES({}) without NO({l})", l.complemented()));
            }
        }
    }
    if g.mode.default_negation {
        for l in &literals {
            if l.negated
                && answers.get(l) == Some(&AnswerValue::Yes)
                && answers.get(&l.complemented()) == Some(&AnswerValue::Yes)
            {
                out.push(format!("coherence: both {l} and {} warranted", l.complemented()));
            }
        }
    }
    out
}

/// Parameters of the random ground-program generator. Fixed-seed by
/// default for reproducibility.
#[derive(Debug, Clone, Copy)]
pub struct GeneratorParams {
    pub seed: u64,
    pub max_predicates: usize,
    pub max_constants: usize,
    pub max_rules: usize,
    pub strong_negation_prob: f64,
    pub defeasible_fraction: f64,
    /// Probability that a defeasible body atom is default-negated (only in
    /// default-negation mode).
    pub default_negation_prob: f64,
    pub mode: Mode,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            seed: 0xde1f,
            max_predicates: 6,
            max_constants: 3,
            max_rules: 10,
            strong_negation_prob: 0.3,
            defeasible_fraction: 0.7,
            default_negation_prob: 0.0,
            mode: Mode::core(),
        }
    }
}

/// A random ground program whose strict part is non-contradictory. Deterministic for
/// a given seed and index.
pub fn random_program(params: &GeneratorParams, index: u64) -> GroundProgram {
    let mut rng = StdRng::seed_from_u64(params.seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    loop {
        if let Some(g) = try_random_program(params, &mut rng) {
            return g;
        }
    }
}

fn try_random_program(params: &GeneratorParams, rng: &mut StdRng) -> Option<GroundProgram> {
    let n_preds = rng.gen_range(2..=params.max_predicates);
    let n_consts = rng.gen_range(1..=params.max_constants);
    let preds: Vec<(String, usize)> = (0..n_preds)
        .map(|i| (format!("p{i}"), if rng.gen_bool(0.5) { 1 } else { 0 }))
        .collect();
    let consts: Vec<String> = (0..n_consts).map(|i| format!("c{i}")).collect();

    let strong_neg = params.strong_negation_prob;
    let random_literal = |rng: &mut StdRng| -> Literal {
        let (name, arity) = preds[rng.gen_range(0..preds.len())].clone();
        let args = (0..arity)
            .map(|_| Term::constant(consts[rng.gen_range(0..consts.len())].clone()))
            .collect();
        Literal::new(rng.gen_bool(strong_neg), name, args)
    };

    let mut p = Program { mode: params.mode, ..Program::default() };
    let n_rules = rng.gen_range(3..=params.max_rules);
    for _ in 0..n_rules {
        let roll: f64 = rng.gen();
        if roll < 0.3 {
            p.facts.push(random_literal(rng));
            continue;
        }
        let defeasible = rng.gen_bool(params.defeasible_fraction);
        let head = random_literal(rng);
        let n_body = rng.gen_range(1..=2);
        let body: Vec<BodyAtom> = (0..n_body)
            .map(|_| {
                let default_negated = defeasible
                    && params.mode.default_negation
                    && rng.gen_bool(params.default_negation_prob);
                BodyAtom { default_negated, literal: random_literal(rng) }
            })
            .collect();
        let rule = if defeasible { Rule::defeasible(head, body) } else { Rule::strict(head, body) };
        match rule.kind {
            RuleKind::Strict => p.strict_rules.push(rule),
            RuleKind::Defeasible => p.defeasible_rules.push(rule),
        }
    }
    if params.mode.presumptions && rng.gen_bool(0.5) {
        p.defeasible_rules.push(Rule::presumption(random_literal(rng)));
    }
    p.canonicalize();
    let g = ground_program(&p).ok()?;
    // Keep the strict part non-contradictory, as every valid program must.
    let pi = crate::derivation::RuleSet::pi_of(&g);
    if crate::derivation::is_contradictory(&pi, g.mode).is_some() {
        return None;
    }
    Some(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comparison::CriterionConfig;
    use crate::corpus;
    use crate::parser::parse_query;

    fn lit(s: &str) -> Literal {
        parse_query(s).unwrap()
    }

    #[test]
    fn oracle_finds_the_tina_arguments() {
        let g = corpus::ground("birds");
        let found = oracle_arguments_for(&g, &lit("flies(tina)"), &OracleConfig::default()).unwrap();
        let engine = {
            let mut v = crate::argumentation::arguments_for(&g, &lit("flies(tina)"));
            v.sort();
            v
        };
        assert_eq!(found, engine);
        assert_eq!(found.len(), 2);
    }

    #[test]
    fn oracle_returns_the_empty_argument_for_strict_literals() {
        let g = corpus::ground("birds");
        let found =
            oracle_arguments_for(&g, &lit("~flies(tweety)"), &OracleConfig::default()).unwrap();
        assert_eq!(found.len(), 1);
        assert!(found[0].is_empty());
    }

    #[test]
    fn oracle_rejects_union_arguments() {
        let g = corpus::ground("union_not_argument");
        assert!(oracle_arguments_for(&g, &lit("h"), &OracleConfig::default())
            .unwrap()
            .is_empty());
        let empty_delta = oracle_arguments_for(&g, &lit("c"), &OracleConfig::default()).unwrap();
        assert_eq!(empty_delta.len(), 1);
        assert!(empty_delta[0].is_empty());
    }

    #[test]
    fn oracle_specificity_fixtures() {
        let g = corpus::ground("birds");
        let ocfg = OracleConfig::default();
        let args = crate::argumentation::arguments_for(&g, &lit("flies(tina)"));
        let a2 = args.iter().find(|a| a.rules[0].body.len() == 1).unwrap();
        let a3 = args.iter().find(|a| a.rules[0].body.len() == 2).unwrap();
        let a1 = &crate::argumentation::arguments_for(&g, &lit("~flies(tina)"))[0];
        assert!(oracle_more_specific(&g, a1, a2, &ocfg).unwrap());
        assert!(!oracle_more_specific(&g, a2, a1, &ocfg).unwrap());
        assert!(oracle_more_specific(&g, a3, a1, &ocfg).unwrap());
        assert!(!oracle_more_specific(&g, a1, a1, &ocfg).unwrap());

        let nixon = corpus::ground("nixon");
        let pac = &crate::argumentation::arguments_for(&nixon, &lit("pacifist(nixon)"))[0];
        let npac = &crate::argumentation::arguments_for(&nixon, &lit("~pacifist(nixon)"))[0];
        assert!(!oracle_more_specific(&nixon, pac, npac, &ocfg).unwrap());
        assert!(!oracle_more_specific(&nixon, npac, pac, &ocfg).unwrap());
    }

    #[test]
    fn oracle_refuses_oversized_programs() {
        let g = corpus::ground("birds");
        let tight = OracleConfig { max_delta: 2, ..OracleConfig::default() };
        assert!(matches!(
            oracle_arguments_for(&g, &lit("flies(tina)"), &tight),
            Err(OracleError::DeltaTooLarge(_, 2))
        ));
    }

    #[test]
    fn differential_run_is_clean_on_the_corpus() {
        for entry in corpus::all() {
            let g = corpus::ground(entry.name);
            let mut cfg = DialecticsConfig::default().for_program(&g);
            if entry.name == "stocks_priorities" {
                cfg.criterion = CriterionConfig::priorities();
            }
            let outcome = differential_run(&g, &cfg, &OracleConfig::for_corpus());
            assert!(outcome.skipped.is_none(), "{}: {:?}", entry.name, outcome.skipped);
            let diffs: Vec<&OracleReport> = outcome.differences().collect();
            assert!(diffs.is_empty(), "{}: {:#?}", entry.name, diffs);
        }
    }

    #[test]
    fn minimality_mutation_is_detected() {
        // A strict shortcut makes one backward-chaining support redundant:
        // with the antichain disabled the engine reports a fat argument for
        // p that the oracle rejects as non-minimal.
        let p = crate::parser::parse_program("a. b. h1 <- a. h1 -< b. p -< h1.", Mode::core())
            .unwrap();
        let g = ground_program(&p).unwrap();
        let cfg = DialecticsConfig::default();
        let clean = differential_run(&g, &cfg, &OracleConfig::default());
        assert_eq!(clean.disagreements, 0);
        let broken = differential_run_mutated(
            &g,
            &cfg,
            &OracleConfig::default(),
            Mutation { skip_minimality: true },
        );
        assert!(broken.disagreements >= 1);
    }

    #[test]
    fn random_programs_are_reproducible_and_valid() {
        let params = GeneratorParams::default();
        for i in 0..20 {
            let a = random_program(&params, i);
            let b = random_program(&params, i);
            assert_eq!(a, b);
            let pi = crate::derivation::RuleSet::pi_of(&a);
            assert!(crate::derivation::is_contradictory(&pi, a.mode).is_none());
        }
    }

    #[test]
    fn differential_sample_of_random_programs() {
        let params = GeneratorParams::default();
        let cfg = DialecticsConfig::default();
        let ocfg = OracleConfig::default();
        for i in 0..50 {
            let g = random_program(&params, i);
            let outcome = differential_run(&g, &cfg, &ocfg);
            if outcome.skipped.is_some() {
                continue;
            }
            let diffs: Vec<&OracleReport> = outcome.differences().collect();
            assert!(
                diffs.is_empty(),
                "program {i}: {:#?}\n{}",
                diffs,
                crate::parser::format_program(&g.as_program())
            );
        }
    }
}
