//! Interned view of a ground program: literal ids, rule tables, and the
//! forward-chaining fixpoint all engine modules run on. Crate-private; the
//! public modules expose model-typed wrappers.

use std::collections::HashMap;

use crate::model::{GroundProgram, Literal, Mode, Rule};

pub(crate) type LitId = u32;

/// Fixed-width bitset over literal ids or rule indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct Bits(pub Vec<u64>);

impl Bits {
    pub fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, w)| {
            let mut w = *w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }
}

#[derive(Debug, Clone)]
pub(crate) struct IRule {
    pub head: LitId,
    /// Positive body literals (sorted, deduplicated).
    pub pos: Vec<LitId>,
    /// Default-negated body literals.
    pub neg: Vec<LitId>,
    /// Index into the source program's rule vector.
    pub src: usize,
}

/// Interned ground program. Ids are assigned in a deterministic order:
/// facts first, then rule heads and bodies in canonical program order,
/// then the complements of everything seen.
pub(crate) struct Index {
    pub lits: Vec<Literal>,
    by_lit: HashMap<Literal, LitId>,
    pub compl: Vec<LitId>,
    pub facts: Vec<LitId>,
    pub strict: Vec<IRule>,
    pub def: Vec<IRule>,
    pub mode: Mode,
    /// Rank of each literal id in the canonical `Literal` order.
    pub rank: Vec<u32>,
}

impl Index {
    pub fn new(g: &GroundProgram) -> Self {
        let mut idx = Index {
            lits: Vec::new(),
            by_lit: HashMap::new(),
            compl: Vec::new(),
            facts: Vec::new(),
            strict: Vec::new(),
            def: Vec::new(),
            mode: g.mode,
            rank: Vec::new(),
        };
        for f in &g.facts {
            let id = idx.intern(f);
            idx.facts.push(id);
        }
        let intern_rule = |idx: &mut Index, r: &Rule, src: usize| -> IRule {
            let head = idx.intern(&r.head);
            let mut pos = Vec::new();
            let mut neg = Vec::new();
            for b in &r.body {
                let id = idx.intern(&b.literal);
                if b.default_negated {
                    neg.push(id);
                } else {
                    pos.push(id);
                }
            }
            pos.sort_unstable();
            pos.dedup();
            neg.sort_unstable();
            neg.dedup();
            IRule { head, pos, neg, src }
        };
        for (i, r) in g.strict_rules.iter().enumerate() {
            let ir = intern_rule(&mut idx, r, i);
            idx.strict.push(ir);
        }
        for (i, r) in g.defeasible_rules.iter().enumerate() {
            let ir = intern_rule(&mut idx, r, i);
            idx.def.push(ir);
        }
        // Make complement lookups total.
        for i in 0..idx.lits.len() {
            let c = idx.lits[i].complemented();
            idx.intern(&c);
        }
        idx.compl = (0..idx.lits.len() as LitId)
            .map(|i| idx.by_lit[&idx.lits[i as usize].complemented()])
            .collect();
        let mut order: Vec<LitId> = (0..idx.lits.len() as LitId).collect();
        order.sort_by(|a, b| idx.lits[*a as usize].cmp(&idx.lits[*b as usize]));
        idx.rank = vec![0; idx.lits.len()];
        for (r, id) in order.iter().enumerate() {
            idx.rank[*id as usize] = r as u32;
        }
        idx
    }

    fn intern(&mut self, l: &Literal) -> LitId {
        if let Some(&id) = self.by_lit.get(l) {
            return id;
        }
        let id = self.lits.len() as LitId;
        self.lits.push(l.clone());
        self.by_lit.insert(l.clone(), id);
        id
    }

    pub fn id_of(&self, l: &Literal) -> Option<LitId> {
        self.by_lit.get(l).copied()
    }

    pub fn n_lits(&self) -> usize {
        self.lits.len()
    }

    /// Least fixpoint of forward rule application.
    ///
    /// * `base_facts`: include the program facts as axioms.
    /// * `extra`: additional literals treated as facts.
    /// * `use_strict` / `def_mask`: which rules may fire (`None` = all
    ///   defeasible rules, `Some` = the masked subset).
    /// * `forbidden`: literals that may never enter the sequence (used for
    ///   the assumption-coherence check on extended arguments).
    ///
    /// Default-negated body atoms are ignored when the mode enables default
    /// negation; otherwise a rule carrying one can never fire. Presumptions
    /// fire unconditionally only in presumption mode.
    pub fn closure(
        &self,
        base_facts: bool,
        extra: &[LitId],
        use_strict: bool,
        def_mask: Option<&Bits>,
        forbidden: Option<&Bits>,
    ) -> Bits {
        let mut out = Bits::new(self.n_lits());
        let blocked = |id: LitId| forbidden.is_some_and(|f| f.get(id as usize));
        if base_facts {
            for &f in &self.facts {
                if !blocked(f) {
                    out.set(f as usize);
                }
            }
        }
        for &e in extra {
            if !blocked(e) {
                out.set(e as usize);
            }
        }
        let fires = |r: &IRule, out: &Bits| -> bool {
            if !self.mode.default_negation && !r.neg.is_empty() {
                return false;
            }
            r.pos.iter().all(|&b| out.get(b as usize))
        };
        loop {
            let mut changed = false;
            if use_strict {
                for r in &self.strict {
                    if !out.get(r.head as usize) && !blocked(r.head) && fires(r, &out) {
                        out.set(r.head as usize);
                        changed = true;
                    }
                }
            }
            for (i, r) in self.def.iter().enumerate() {
                if let Some(mask) = def_mask {
                    if !mask.get(i) {
                        continue;
                    }
                }
                if r.pos.is_empty() && r.neg.is_empty() && !self.mode.presumptions {
                    continue;
                }
                if !out.get(r.head as usize) && !blocked(r.head) && fires(r, &out) {
                    out.set(r.head as usize);
                    changed = true;
                }
            }
            if !changed {
                return out;
            }
        }
    }

    /// First complementary pair in the set, normalized to (positive,
    /// negative) of the smallest contradictory atom.
    pub fn contradiction(&self, bits: &Bits) -> Option<(LitId, LitId)> {
        let mut best: Option<LitId> = None;
        for id in bits.iter_ones() {
            let id = id as LitId;
            let c = self.compl[id as usize];
            if bits.get(c as usize) {
                let pos = if self.lits[id as usize].negated { c } else { id };
                best = match best {
                    None => Some(pos),
                    Some(b) if self.rank[pos as usize] < self.rank[b as usize] => Some(pos),
                    keep => keep,
                };
            }
        }
        best.map(|p| (p, self.compl[p as usize]))
    }

    pub fn all_def_mask(&self) -> Bits {
        let mut b = Bits::new(self.def.len());
        for i in 0..self.def.len() {
            b.set(i);
        }
        b
    }

    /// Ids in canonical literal order.
    pub fn sorted_ids(&self, ids: impl Iterator<Item = LitId>) -> Vec<LitId> {
        let mut v: Vec<LitId> = ids.collect();
        v.sort_by_key(|&i| self.rank[i as usize]);
        v
    }
}
