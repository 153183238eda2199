//! The shared query engine behind `argumentation`, `comparison`, and
//! `dialectics`: minimal-support enumeration, argument construction, attack
//! harvesting, and memoized preference comparison over one interned program.
//!
//! An `Engine` is built per query (its caches are never shared across
//! queries) and is confined to one thread.

use std::cell::{OnceCell, RefCell};
use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use crate::argumentation::{ArgumentStructure, AttackKind, AttackReport};
use crate::comparison::{Criterion, CriterionConfig, PreferenceOutcome};
use crate::dialectics::DefeatKind;
use crate::index::{Bits, Index, LitId};
use crate::model::{GroundProgram, Literal, Rule};

pub(crate) type ArgId = u32;

/// Interned argument: sorted defeasible-rule indices plus the conclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct EArg {
    pub rules: Vec<u16>,
    pub conclusion: LitId,
    /// Literals occurring default-negated in the argument's rule bodies.
    pub assumptions: Vec<LitId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct EDefeater {
    pub attacker: ArgId,
    pub point: LitId,
    pub subarg: Option<ArgId>,
    pub kind: DefeatKind,
}

/// Unclassified attack (no preference comparison applied yet).
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ERawAttack {
    pub attacker: ArgId,
    pub point: LitId,
    pub subarg: Option<ArgId>,
    pub assumption: bool,
}

pub(crate) struct Engine<'g> {
    pub g: &'g GroundProgram,
    pub cfg: CriterionConfig,
    pub idx: Index,
    /// Literals strictly derivable from the strict part.
    pub strict_bits: Bits,
    /// F: every literal with a defeasible derivation from the program.
    pub f_bits: Bits,
    /// Sorted (stronger, weaker) pairs of defeasible-rule indices.
    priority_pairs: Vec<(u16, u16)>,
    families: OnceCell<Vec<Vec<Vec<u16>>>>,
    arg_ids: RefCell<HashMap<(Vec<u16>, LitId), ArgId>>,
    arg_list: RefCell<Vec<Rc<EArg>>>,
    args_for: RefCell<HashMap<LitId, Rc<Vec<ArgId>>>>,
    raw_attacks: RefCell<HashMap<ArgId, Rc<Vec<ERawAttack>>>>,
    defeaters: RefCell<HashMap<ArgId, Rc<Vec<EDefeater>>>>,
    cmp: RefCell<HashMap<(ArgId, ArgId), PreferenceOutcome>>,
    disagrees: RefCell<HashMap<(LitId, LitId), bool>>,
    contra: RefCell<HashMap<Vec<u16>, bool>>,
    pub skip_minimality: bool,
}

impl<'g> Engine<'g> {
    pub fn new(g: &'g GroundProgram, cfg: CriterionConfig) -> Self {
        Self::with_mutation(g, cfg, false)
    }

    /// `skip_minimality` disables the minimal-support antichain; it exists
    /// only so the differential harness can prove it detects a broken build.
    pub fn with_mutation(g: &'g GroundProgram, cfg: CriterionConfig, skip_minimality: bool) -> Self {
        let idx = Index::new(g);
        let strict_bits = idx.closure(true, &[], true, Some(&Bits::new(idx.def.len())), None);
        let all = idx.all_def_mask();
        let f_bits = idx.closure(true, &[], true, Some(&all), None);
        let mut priority_pairs = Vec::new();
        let label_of = |i: usize| g.defeasible_rules[idx.def[i].src].label.as_deref();
        for (stronger, weaker) in &g.priorities {
            for i in 0..idx.def.len() {
                if label_of(i) != Some(stronger.as_str()) {
                    continue;
                }
                for j in 0..idx.def.len() {
                    if label_of(j) == Some(weaker.as_str()) {
                        priority_pairs.push((i as u16, j as u16));
                    }
                }
            }
        }
        priority_pairs.sort_unstable();
        priority_pairs.dedup();
        Engine {
            g,
            cfg,
            idx,
            strict_bits,
            f_bits,
            priority_pairs,
            families: OnceCell::new(),
            arg_ids: RefCell::new(HashMap::new()),
            arg_list: RefCell::new(Vec::new()),
            args_for: RefCell::new(HashMap::new()),
            raw_attacks: RefCell::new(HashMap::new()),
            defeaters: RefCell::new(HashMap::new()),
            cmp: RefCell::new(HashMap::new()),
            disagrees: RefCell::new(HashMap::new()),
            contra: RefCell::new(HashMap::new()),
            skip_minimality,
        }
    }

    pub fn arg(&self, id: ArgId) -> Rc<EArg> {
        self.arg_list.borrow()[id as usize].clone()
    }

    fn def_mask(&self, rules: &[u16]) -> Bits {
        let mut b = Bits::new(self.idx.def.len());
        for &r in rules {
            b.set(r as usize);
        }
        b
    }

    fn is_presumption_rule(&self, i: u16) -> bool {
        let r = &self.idx.def[i as usize];
        r.pos.is_empty() && r.neg.is_empty()
    }

    pub fn uses_presumption(&self, a: &EArg) -> bool {
        a.rules.iter().any(|&r| self.is_presumption_rule(r))
    }

    fn assumptions_of(&self, rules: &[u16]) -> Vec<LitId> {
        let mut out: Vec<LitId> = rules
            .iter()
            .flat_map(|&r| self.idx.def[r as usize].neg.iter().copied())
            .collect();
        out.sort_by_key(|&l| self.idx.rank[l as usize]);
        out.dedup();
        out
    }

    pub fn intern_arg(&self, rules: Vec<u16>, conclusion: LitId) -> ArgId {
        if let Some(&id) = self.arg_ids.borrow().get(&(rules.clone(), conclusion)) {
            return id;
        }
        let assumptions = self.assumptions_of(&rules);
        let mut list = self.arg_list.borrow_mut();
        let id = list.len() as ArgId;
        list.push(Rc::new(EArg { rules: rules.clone(), conclusion, assumptions }));
        self.arg_ids.borrow_mut().insert((rules, conclusion), id);
        id
    }

    /// Closure of the strict part together with the given defeasible rules.
    fn closure_pi_with(&self, rules: &[u16]) -> Bits {
        self.idx.closure(true, &[], true, Some(&self.def_mask(rules)), None)
    }

    /// Memoized: does the strict part together with these defeasible rules derive a
    /// complementary pair?
    pub fn contradictory_with_pi(&self, rules: &[u16]) -> bool {
        let key: Vec<u16> = rules.to_vec();
        if let Some(&v) = self.contra.borrow().get(&key) {
            return v;
        }
        let bits = self.closure_pi_with(rules);
        let v = self.idx.contradiction(&bits).is_some();
        self.contra.borrow_mut().insert(key, v);
        v
    }

    /// Extended-argument coherence: some derivation of the conclusion from
    /// the strict part and the argument's rules mentions no literal that
    /// occurs default-negated in those rules.
    fn assumption_coherent(&self, rules: &[u16], conclusion: LitId) -> bool {
        if !self.g.mode.default_negation {
            return true;
        }
        let assumptions = self.assumptions_of(rules);
        if assumptions.is_empty() {
            return true;
        }
        let mut forbidden = Bits::new(self.idx.n_lits());
        for a in assumptions {
            forbidden.set(a as usize);
        }
        let bits =
            self.idx.closure(true, &[], true, Some(&self.def_mask(rules)), Some(&forbidden));
        bits.get(conclusion as usize)
    }

    /// Per literal, the antichain of minimal sets of defeasible rules that
    /// derive it together with the strict part. With `skip_minimality` the antichain
    /// pruning is disabled and dominated sets survive.
    pub fn families(&self) -> &Vec<Vec<Vec<u16>>> {
        self.families.get_or_init(|| {
            let n = self.idx.n_lits();
            let mut fam: Vec<Vec<Vec<u16>>> = vec![Vec::new(); n];
            let skip_min = self.skip_minimality;
            fn insert(fam: &mut Vec<Vec<u16>>, set: Vec<u16>, skip_min: bool) -> bool {
                if skip_min {
                    if fam.contains(&set) {
                        return false;
                    }
                    fam.push(set);
                    return true;
                }
                if fam.iter().any(|e| is_subset(e, &set)) {
                    return false;
                }
                fam.retain(|e| !is_subset(&set, e));
                fam.push(set);
                true
            }
            for &f in &self.idx.facts {
                insert(&mut fam[f as usize], Vec::new(), skip_min);
            }
            if self.g.mode.presumptions {
                for (i, r) in self.idx.def.iter().enumerate() {
                    if r.pos.is_empty() && r.neg.is_empty() {
                        insert(&mut fam[r.head as usize], vec![i as u16], skip_min);
                    }
                }
            }
            loop {
                let mut changed = false;
                let rules = self
                    .idx
                    .strict
                    .iter()
                    .map(|r| (r, None))
                    .chain(self.idx.def.iter().enumerate().map(|(i, r)| (r, Some(i as u16))));
                for (rule, def_idx) in rules {
                    if !self.g.mode.default_negation && !rule.neg.is_empty() {
                        continue;
                    }
                    if def_idx.is_some() && rule.pos.is_empty() && rule.neg.is_empty() {
                        continue; // presumptions seeded above
                    }
                    if rule.pos.iter().any(|&b| fam[b as usize].is_empty()) {
                        continue;
                    }
                    let mut combos: Vec<Vec<u16>> = vec![match def_idx {
                        Some(i) => vec![i],
                        None => Vec::new(),
                    }];
                    for &b in &rule.pos {
                        let mut next = Vec::new();
                        for c in &combos {
                            for s in &fam[b as usize] {
                                next.push(union_sorted(c, s));
                            }
                        }
                        next.sort();
                        next.dedup();
                        combos = next;
                    }
                    for c in combos {
                        if insert(&mut fam[rule.head as usize], c, skip_min) {
                            changed = true;
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
            for f in fam.iter_mut() {
                f.sort();
            }
            fam
        })
    }

    /// All argument structures for the literal, in deterministic order.
    pub fn args_for(&self, h: LitId) -> Rc<Vec<ArgId>> {
        if let Some(v) = self.args_for.borrow().get(&h) {
            return v.clone();
        }
        let mut out = Vec::new();
        for set in &self.families()[h as usize] {
            if self.contradictory_with_pi(set) {
                continue;
            }
            if !self.assumption_coherent(set, h) {
                continue;
            }
            out.push(self.intern_arg(set.clone(), h));
        }
        let rc = Rc::new(out);
        self.args_for.borrow_mut().insert(h, rc.clone());
        rc
    }

    /// Do the two literals disagree: is the strict part extended with both
    /// of them (as facts) contradictory?
    pub fn disagree(&self, a: LitId, b: LitId) -> bool {
        let key = if a <= b { (a, b) } else { (b, a) };
        if let Some(&v) = self.disagrees.borrow().get(&key) {
            return v;
        }
        let none = Bits::new(self.idx.def.len());
        let bits = self.idx.closure(true, &[key.0, key.1], true, Some(&none), None);
        let v = self.idx.contradiction(&bits).is_some();
        self.disagrees.borrow_mut().insert(key, v);
        v
    }

    /// Counter-arguments and assumption attacks against the target, without
    /// preference classification. Deterministic order.
    pub fn raw_attacks_on(&self, target: ArgId) -> Rc<Vec<ERawAttack>> {
        if let Some(v) = self.raw_attacks.borrow().get(&target) {
            return v.clone();
        }
        let t = self.arg(target);
        let tclosure = self.closure_pi_with(&t.rules);
        let mut out = Vec::new();

        let points: Vec<LitId> = self.idx.sorted_ids(
            tclosure
                .iter_ones()
                .map(|i| i as LitId)
                .filter(|&i| !self.strict_bits.get(i as usize)),
        );
        for p in points {
            let subargs: Vec<ArgId> = self.families()[p as usize]
                .iter()
                .filter(|s| is_subset(s, &t.rules))
                .filter(|s| self.assumption_coherent(s, p))
                .map(|s| self.intern_arg(s.clone(), p))
                .collect();
            if subargs.is_empty() {
                continue;
            }
            let rivals: Vec<LitId> = self.idx.sorted_ids(
                self.f_bits.iter_ones().map(|i| i as LitId).filter(|&h1| self.disagree(p, h1)),
            );
            for h1 in rivals {
                for &attacker in self.args_for(h1).iter() {
                    for &sub in &subargs {
                        out.push(ERawAttack {
                            attacker,
                            point: p,
                            subarg: Some(sub),
                            assumption: false,
                        });
                    }
                }
            }
        }
        for &asm in &t.assumptions {
            for &attacker in self.args_for(asm).iter() {
                out.push(ERawAttack { attacker, point: asm, subarg: None, assumption: true });
            }
        }
        let rc = Rc::new(out);
        self.raw_attacks.borrow_mut().insert(target, rc.clone());
        rc
    }

    /// Classified defeaters: attacks where the disagreement sub-argument is
    /// strictly preferred to the attacker are dropped; proper sorts before
    /// blocking before assumption, then by conclusion, then by rule set.
    pub fn defeaters_of(&self, target: ArgId) -> Rc<Vec<EDefeater>> {
        if let Some(v) = self.defeaters.borrow().get(&target) {
            return v.clone();
        }
        let mut out = Vec::new();
        for attack in self.raw_attacks_on(target).iter() {
            let kind = if attack.assumption {
                DefeatKind::Assumption
            } else {
                let sub = attack.subarg.expect("disagreement attack has a sub-argument");
                match self.compare(attack.attacker, sub) {
                    PreferenceOutcome::FirstStrictlyPreferred => DefeatKind::Proper,
                    PreferenceOutcome::Incomparable => DefeatKind::Blocking,
                    PreferenceOutcome::SecondStrictlyPreferred
                    | PreferenceOutcome::EquiSpecific => continue,
                }
            };
            out.push(EDefeater {
                attacker: attack.attacker,
                point: attack.point,
                subarg: attack.subarg,
                kind,
            });
        }
        out.sort_by(|a, b| {
            let key = |d: &EDefeater| {
                let arg = self.arg(d.attacker);
                (
                    d.kind as u8,
                    self.idx.rank[arg.conclusion as usize],
                    arg.rules.clone(),
                    self.idx.rank[d.point as usize],
                    d.subarg.map(|s| self.arg(s).rules.clone()),
                )
            };
            key(a).cmp(&key(b))
        });
        let rc = Rc::new(out);
        self.defeaters.borrow_mut().insert(target, rc.clone());
        rc
    }

    // ----- preference criteria -----

    /// Does the set activate the argument: do the strict rules, the given
    /// literals as facts, and the argument's rules derive the conclusion?
    pub fn activates(&self, h_set: &[LitId], a: &EArg) -> bool {
        let bits = self.idx.closure(false, h_set, true, Some(&self.def_mask(&a.rules)), None);
        bits.get(a.conclusion as usize)
    }

    fn strict_from(&self, h_set: &[LitId]) -> Bits {
        let none = Bits::new(self.idx.def.len());
        self.idx.closure(false, h_set, true, Some(&none), None)
    }

    /// Candidate activation literals for the optimized specificity check:
    /// body literals of the strict rules and of the two arguments' rules,
    /// restricted to F. Literals no body reads cannot change activation.
    fn specificity_candidates(&self, a1: &EArg, a2: &EArg) -> Vec<LitId> {
        let mut cand = BTreeSet::new();
        for r in &self.idx.strict {
            cand.extend(r.pos.iter().copied());
        }
        for arg in [a1, a2] {
            for &i in &arg.rules {
                cand.extend(self.idx.def[i as usize].pos.iter().copied());
            }
        }
        self.idx.sorted_ids(cand.into_iter().filter(|&c| self.f_bits.get(c as usize)))
    }

    pub fn more_specific(&self, a1: &EArg, a2: &EArg) -> bool {
        let cand = self.specificity_candidates(a1, a2);
        self.more_specific_over(&cand, a1, a2)
    }

    /// Exhaustive reference: enumerate every subset of the derivable
    /// literals.
    pub fn more_specific_reference(&self, a1: &EArg, a2: &EArg) -> bool {
        let f: Vec<LitId> = self.idx.sorted_ids(self.f_bits.iter_ones().map(|i| i as LitId));
        self.more_specific_over(&f, a1, a2)
    }

    fn more_specific_over(&self, cand: &[LitId], a1: &EArg, a2: &EArg) -> bool {
        assert!(cand.len() <= 24, "activation candidate set too large");
        let mut cond2 = false;
        let mut subset: Vec<LitId> = Vec::new();
        for mask in 0u64..(1u64 << cand.len()) {
            subset.clear();
            for (i, &c) in cand.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    subset.push(c);
                }
            }
            let strict = self.strict_from(&subset);
            let act1 = self.activates(&subset, a1);
            let act2 = self.activates(&subset, a2);
            // Condition 1: every non-trivial activation of a1 activates a2.
            if act1 && !strict.get(a1.conclusion as usize) && !act2 {
                return false;
            }
            // Condition 2: some non-trivial activation of a2 misses a1.
            if act2 && !strict.get(a2.conclusion as usize) && !act1 {
                cond2 = true;
            }
        }
        cond2
    }

    pub fn equi_specific(&self, a1: &EArg, a2: &EArg) -> bool {
        if a1.rules != a2.rules {
            return false;
        }
        let none = Bits::new(self.idx.def.len());
        let from_h1 = self.idx.closure(true, &[a1.conclusion], true, Some(&none), None);
        let from_h2 = self.idx.closure(true, &[a2.conclusion], true, Some(&none), None);
        from_h1.get(a2.conclusion as usize) && from_h2.get(a1.conclusion as usize)
    }

    pub fn priority_preferred(&self, a1: &EArg, a2: &EArg) -> bool {
        let outranks = |x: &[u16], y: &[u16]| {
            x.iter().any(|&ra| y.iter().any(|&rb| self.priority_pairs.binary_search(&(ra, rb)).is_ok()))
        };
        outranks(&a1.rules, &a2.rules) && !outranks(&a2.rules, &a1.rules)
    }

    pub fn compare(&self, a1: ArgId, a2: ArgId) -> PreferenceOutcome {
        if let Some(&v) = self.cmp.borrow().get(&(a1, a2)) {
            return v;
        }
        let v = self.compare_uncached(&self.arg(a1), &self.arg(a2));
        self.cmp.borrow_mut().insert((a1, a2), v);
        v
    }

    pub fn compare_uncached(&self, a1: &EArg, a2: &EArg) -> PreferenceOutcome {
        if self.cfg.presumption_penalty {
            let p1 = self.uses_presumption(a1);
            let p2 = self.uses_presumption(a2);
            if !p1 && p2 {
                return PreferenceOutcome::FirstStrictlyPreferred;
            }
            if p1 && !p2 {
                return PreferenceOutcome::SecondStrictlyPreferred;
            }
        }
        match self.cfg.criterion {
            Criterion::Specificity => self.compare_specificity(a1, a2),
            Criterion::Priorities => self.compare_priorities(a1, a2),
            Criterion::Combined => match self.compare_specificity(a1, a2) {
                PreferenceOutcome::Incomparable => self.compare_priorities(a1, a2),
                other => other,
            },
        }
    }

    fn compare_specificity(&self, a1: &EArg, a2: &EArg) -> PreferenceOutcome {
        if self.equi_specific(a1, a2) {
            PreferenceOutcome::EquiSpecific
        } else if self.more_specific(a1, a2) {
            PreferenceOutcome::FirstStrictlyPreferred
        } else if self.more_specific(a2, a1) {
            PreferenceOutcome::SecondStrictlyPreferred
        } else {
            PreferenceOutcome::Incomparable
        }
    }

    fn compare_priorities(&self, a1: &EArg, a2: &EArg) -> PreferenceOutcome {
        let first_over_second = self.priority_preferred(a1, a2);
        let second_over_first = self.priority_preferred(a2, a1);
        match (first_over_second, second_over_first) {
            (true, false) => PreferenceOutcome::FirstStrictlyPreferred,
            (false, true) => PreferenceOutcome::SecondStrictlyPreferred,
            _ => {
                if self.equi_specific(a1, a2) {
                    PreferenceOutcome::EquiSpecific
                } else {
                    PreferenceOutcome::Incomparable
                }
            }
        }
    }

    // ----- conversions to the public model types -----

    pub fn lit(&self, id: LitId) -> Literal {
        self.idx.lits[id as usize].clone()
    }

    pub fn lit_id(&self, l: &Literal) -> Option<LitId> {
        self.idx.id_of(l)
    }

    pub fn def_rule(&self, i: u16) -> &Rule {
        &self.g.defeasible_rules[self.idx.def[i as usize].src]
    }

    pub fn to_public(&self, a: &EArg) -> ArgumentStructure {
        ArgumentStructure {
            rules: a.rules.iter().map(|&i| self.def_rule(i).clone()).collect(),
            conclusion: self.lit(a.conclusion),
            assumptions: a.assumptions.iter().map(|&l| self.lit(l)).collect(),
        }
    }

    /// Resolves a caller-provided argument against this program.
    pub fn resolve(&self, a: &ArgumentStructure) -> EArg {
        let mut rules = Vec::new();
        for r in &a.rules {
            let i = (0..self.idx.def.len())
                .find(|&i| self.def_rule(i as u16) == r)
                .unwrap_or_else(|| panic!("rule `{r}` is not a defeasible rule of this program"));
            rules.push(i as u16);
        }
        rules.sort_unstable();
        rules.dedup();
        let conclusion = self
            .lit_id(&a.conclusion)
            .unwrap_or_else(|| panic!("literal `{}` does not occur in this program", a.conclusion));
        let assumptions = self.assumptions_of(&rules);
        EArg { rules, conclusion, assumptions }
    }

    pub fn intern_public(&self, a: &ArgumentStructure) -> ArgId {
        let e = self.resolve(a);
        self.intern_arg(e.rules, e.conclusion)
    }

    pub fn raw_to_report(&self, target: &EArg, raw: &ERawAttack) -> AttackReport {
        AttackReport {
            attacker: self.to_public(&self.arg(raw.attacker)),
            attacked: self.to_public(target),
            point: self.lit(raw.point),
            disagreement_subargument: raw.subarg.map(|s| self.to_public(&self.arg(s))),
            kind: if raw.assumption { AttackKind::Assumption } else { AttackKind::Disagreement },
        }
    }
}

pub(crate) fn is_subset(a: &[u16], b: &[u16]) -> bool {
    let mut bi = b.iter();
    'outer: for x in a {
        for y in bi.by_ref() {
            match y.cmp(x) {
                std::cmp::Ordering::Less => continue,
                std::cmp::Ordering::Equal => continue 'outer,
                std::cmp::Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}

pub(crate) fn union_sorted(a: &[u16], b: &[u16]) -> Vec<u16> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    out.extend_from_slice(a);
    out.extend_from_slice(b);
    out.sort_unstable();
    out.dedup();
    out
}
