//! Defeaters, acceptable argumentation lines, dialectical trees, marking,
//! warrant, and the four-valued answers.
//!
//! A dialectical tree roots at an argument for the query; children of a node
//! are exactly the defeaters whose addition keeps the root-to-node line
//! acceptable: each side of the line stays concordant, no argument is a
//! sub-argument of an earlier one, and a blocking defeater may only be
//! followed by a proper one (assumption attacks count as proper-like there).
//! Marking is bottom-up: leaves are undefeated, an inner node is undefeated
//! iff every child is defeated. The pruned search stops expanding siblings
//! as soon as one child is undefeated, exactly like an alpha-beta cutoff.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::argumentation::{ArgumentStructure, AttackReport};
use crate::comparison::{Criterion, CriterionConfig};
use crate::engine::{ArgId, EDefeater, Engine};
use crate::model::{in_language, GroundProgram, Literal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DefeatKind {
    Proper,
    Blocking,
    Assumption,
}

impl fmt::Display for DefeatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DefeatKind::Proper => "proper",
            DefeatKind::Blocking => "blocking",
            DefeatKind::Assumption => "assumption",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Defeater {
    pub attack: AttackReport,
    pub kind: DefeatKind,
}

/// Which condition of the acceptability definition a rejected extension
/// violates. Finiteness is implied by the sub-argument condition on finite
/// programs and has no variant here.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AcceptabilityViolation {
    /// Condition 2: the supporting or interfering set would stop being
    /// concordant.
    Concordance,
    /// Condition 3: the argument is a sub-argument of an earlier one.
    SubargumentReintroduction,
    /// Condition 4: a blocking defeater may only be followed by a proper
    /// defeater.
    BlockingAfterBlocking,
}

impl AcceptabilityViolation {
    pub fn condition(&self) -> u8 {
        match self {
            AcceptabilityViolation::Concordance => 2,
            AcceptabilityViolation::SubargumentReintroduction => 3,
            AcceptabilityViolation::BlockingAfterBlocking => 4,
        }
    }
}

impl fmt::Display for AcceptabilityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AcceptabilityViolation::Concordance => write!(f, "condition 2 (concordance)"),
            AcceptabilityViolation::SubargumentReintroduction => {
                write!(f, "condition 3 (sub-argument reintroduction)")
            }
            AcceptabilityViolation::BlockingAfterBlocking => {
                write!(f, "condition 4 (blocking defeater after blocking defeater)")
            }
        }
    }
}

/// A sequence of argument structures, each one a defeater of its
/// predecessor. Even positions support the root's conclusion, odd positions
/// interfere with it.
#[derive(Debug, Clone, Default)]
pub struct ArgumentationLine {
    /// The defeat kind is how the argument entered the line (`None` for the
    /// root).
    pub steps: Vec<(ArgumentStructure, Option<DefeatKind>)>,
}

impl ArgumentationLine {
    pub fn rooted_at(root: ArgumentStructure) -> Self {
        ArgumentationLine { steps: vec![(root, None)] }
    }

    pub fn push(&mut self, d: &Defeater) {
        self.steps.push((d.attack.attacker.clone(), Some(d.kind)));
    }

    pub fn supporting(&self) -> Vec<&ArgumentStructure> {
        self.steps.iter().step_by(2).map(|(a, _)| a).collect()
    }

    pub fn interfering(&self) -> Vec<&ArgumentStructure> {
        self.steps.iter().skip(1).step_by(2).map(|(a, _)| a).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mark {
    Undefeated,
    Defeated,
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mark::Undefeated => "U",
            Mark::Defeated => "D",
        })
    }
}

#[derive(Debug, Clone)]
pub struct TreeNode {
    pub argument: ArgumentStructure,
    /// How this node defeats its parent (`None` at the root).
    pub incoming: Option<(DefeatKind, Literal)>,
    pub mark: Option<Mark>,
    pub children: Vec<TreeNode>,
    /// Defeaters skipped because an earlier sibling already settled the
    /// parent (pruned search only).
    pub pruned: Vec<Defeater>,
    /// Defeaters whose extension was not an acceptable line, with the
    /// violated condition.
    pub rejected: Vec<(Defeater, AcceptabilityViolation)>,
}

impl TreeNode {
    pub fn count_nodes(&self) -> usize {
        1 + self.children.iter().map(TreeNode::count_nodes).sum::<usize>()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    /// Nodes materialized in the tree.
    pub expanded: usize,
    /// Defeaters skipped once a sibling settled the node (their
    /// acceptability is never checked; they are don't-cares).
    pub pruned: usize,
}

#[derive(Debug, Clone)]
pub struct DialecticalTree {
    pub root: TreeNode,
    pub stats: Stats,
}

impl DialecticalTree {
    pub fn root_mark(&self) -> Mark {
        self.root.mark.expect("tree is marked")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnswerValue {
    Yes,
    No,
    Undecided,
    Unknown,
}

impl fmt::Display for AnswerValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AnswerValue::Yes => "YES",
            AnswerValue::No => "NO",
            AnswerValue::Undecided => "UNDECIDED",
            AnswerValue::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Answer {
    pub value: AnswerValue,
    /// For YES, a warrant for the query; for NO, a warrant for its
    /// complement.
    pub witness: Option<(ArgumentStructure, DialecticalTree)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Exhaustive,
    Pruned,
}

/// Everything one warrant search produced: the trees of the arguments
/// examined, in order, and which of them (if any) is a warrant.
#[derive(Debug, Clone)]
pub struct Exploration {
    pub query: Literal,
    pub arguments: Vec<ArgumentStructure>,
    pub trees: Vec<DialecticalTree>,
    pub warrant: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DialecticsConfig {
    pub criterion: CriterionConfig,
    /// Expansion ceiling: a runaway tree raises a resource error instead of
    /// spinning. Never reached by valid finite ground programs.
    pub max_nodes: usize,
}

impl Default for DialecticsConfig {
    fn default() -> Self {
        DialecticsConfig { criterion: CriterionConfig::default(), max_nodes: 10_000 }
    }
}

impl DialecticsConfig {
    pub fn with_criterion(criterion: CriterionConfig) -> Self {
        DialecticsConfig { criterion, ..Default::default() }
    }

    pub fn for_program(self, g: &GroundProgram) -> Self {
        DialecticsConfig { criterion: self.criterion.for_program(g), ..self }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DialecticsError {
    #[error("dialectical tree exceeded the node ceiling of {0}")]
    ResourceLimit(usize),
    #[error("the priorities criterion requires at least one priority declaration")]
    NoPriorities,
}

fn check_config(g: &GroundProgram, cfg: &DialecticsConfig) -> Result<(), DialecticsError> {
    if cfg.criterion.criterion == Criterion::Priorities && g.priorities.is_empty() {
        return Err(DialecticsError::NoPriorities);
    }
    Ok(())
}

/// Every defeater for the target: counter-arguments and assumption attacks,
/// classified, minus attacks whose disagreement sub-argument is strictly
/// preferred to the attacker.
pub fn defeaters_of(
    g: &GroundProgram,
    cfg: &DialecticsConfig,
    target: &ArgumentStructure,
) -> Result<Vec<Defeater>, DialecticsError> {
    check_config(g, cfg)?;
    let eng = Engine::new(g, cfg.criterion);
    let tid = eng.intern_public(target);
    let t = eng.arg(tid);
    Ok(eng
        .defeaters_of(tid)
        .iter()
        .map(|d| to_public_defeater(&eng, &t, d))
        .collect())
}

fn to_public_defeater(eng: &Engine, target: &crate::engine::EArg, d: &EDefeater) -> Defeater {
    Defeater {
        attack: AttackReport {
            attacker: eng.to_public(&eng.arg(d.attacker)),
            attacked: eng.to_public(target),
            point: eng.lit(d.point),
            disagreement_subargument: d.subarg.map(|s| eng.to_public(&eng.arg(s))),
            kind: match d.kind {
                DefeatKind::Assumption => crate::argumentation::AttackKind::Assumption,
                _ => crate::argumentation::AttackKind::Disagreement,
            },
        },
        kind: d.kind,
    }
}

/// Would appending `next` keep the line acceptable? On rejection, names the
/// violated condition.
pub fn is_acceptable_extension(
    g: &GroundProgram,
    cfg: &DialecticsConfig,
    line: &ArgumentationLine,
    next: &Defeater,
) -> Result<(), AcceptabilityViolation> {
    let eng = Engine::new(g, cfg.criterion);
    let mut state = LineState::new(&eng);
    for (arg, kind) in &line.steps {
        let id = eng.intern_public(arg);
        state.push(&eng, id, *kind);
    }
    let cand = eng.intern_public(&next.attack.attacker);
    state.check(&eng, cand, next.kind)
}

/// Path state for acceptability checks: the arguments on the line and the
/// union of each side's rules.
struct LineState {
    entries: Vec<(ArgId, Option<DefeatKind>)>,
    supporting_rules: Vec<u16>,
    interfering_rules: Vec<u16>,
}

impl LineState {
    fn new(_eng: &Engine) -> Self {
        LineState { entries: Vec::new(), supporting_rules: Vec::new(), interfering_rules: Vec::new() }
    }

    fn push(&mut self, eng: &Engine, arg: ArgId, kind: Option<DefeatKind>) {
        let rules = eng.arg(arg).rules.clone();
        let side = if self.entries.len().is_multiple_of(2) {
            &mut self.supporting_rules
        } else {
            &mut self.interfering_rules
        };
        *side = crate::engine::union_sorted(side, &rules);
        self.entries.push((arg, kind));
    }

    fn pop(&mut self, supporting_before: Vec<u16>, interfering_before: Vec<u16>) {
        self.entries.pop();
        self.supporting_rules = supporting_before;
        self.interfering_rules = interfering_before;
    }

    /// Conditions checked in the order 3, 4, 2; the first violation is
    /// reported.
    fn check(&self, eng: &Engine, cand: ArgId, kind: DefeatKind) -> Result<(), AcceptabilityViolation> {
        let cand_arg = eng.arg(cand);
        // An assumption attack by the empty argument introduces no
        // defeasible rules and cannot be circular; the sub-argument test
        // would otherwise bar every fact-based assumption attack.
        let exempt = kind == DefeatKind::Assumption && cand_arg.rules.is_empty();
        if !exempt {
            for (earlier, _) in &self.entries {
                if crate::engine::is_subset(&cand_arg.rules, &eng.arg(*earlier).rules) {
                    return Err(AcceptabilityViolation::SubargumentReintroduction);
                }
            }
        }
        if let Some((_, Some(DefeatKind::Blocking))) = self.entries.last() {
            if kind == DefeatKind::Blocking {
                return Err(AcceptabilityViolation::BlockingAfterBlocking);
            }
        }
        let side = if self.entries.len().is_multiple_of(2) {
            &self.supporting_rules
        } else {
            &self.interfering_rules
        };
        let union = crate::engine::union_sorted(side, &cand_arg.rules);
        if eng.contradictory_with_pi(&union) {
            return Err(AcceptabilityViolation::Concordance);
        }
        Ok(())
    }
}

struct Builder<'e, 'g> {
    eng: &'e Engine<'g>,
    max_nodes: usize,
    expanded: usize,
    pruned: usize,
}

impl Builder<'_, '_> {
    fn charge(&mut self) -> Result<(), DialecticsError> {
        self.expanded += 1;
        if self.expanded > self.max_nodes {
            return Err(DialecticsError::ResourceLimit(self.max_nodes));
        }
        Ok(())
    }

    fn node_for(&self, arg: ArgId, incoming: Option<&EDefeater>) -> TreeNode {
        TreeNode {
            argument: self.eng.to_public(&self.eng.arg(arg)),
            incoming: incoming.map(|d| (d.kind, self.eng.lit(d.point))),
            mark: None,
            children: Vec::new(),
            pruned: Vec::new(),
            rejected: Vec::new(),
        }
    }

    fn public_defeater(&self, target: ArgId, d: &EDefeater) -> Defeater {
        to_public_defeater(self.eng, &self.eng.arg(target), d)
    }

    fn expand_exhaustive(
        &mut self,
        arg: ArgId,
        incoming: Option<&EDefeater>,
        state: &mut LineState,
    ) -> Result<TreeNode, DialecticsError> {
        self.charge()?;
        let mut node = self.node_for(arg, incoming);
        for d in self.eng.defeaters_of(arg).iter() {
            match state.check(self.eng, d.attacker, d.kind) {
                Err(v) => node.rejected.push((self.public_defeater(arg, d), v)),
                Ok(()) => {
                    let supp = state.supporting_rules.clone();
                    let intf = state.interfering_rules.clone();
                    state.push(self.eng, d.attacker, Some(d.kind));
                    let child = self.expand_exhaustive(d.attacker, Some(d), state)?;
                    state.pop(supp, intf);
                    node.children.push(child);
                }
            }
        }
        Ok(node)
    }

    fn expand_pruned(
        &mut self,
        arg: ArgId,
        incoming: Option<&EDefeater>,
        state: &mut LineState,
    ) -> Result<TreeNode, DialecticsError> {
        self.charge()?;
        let mut node = self.node_for(arg, incoming);
        let mut defeated = false;
        for d in self.eng.defeaters_of(arg).iter() {
            if defeated {
                // A child already marked U settles this node; the sibling
                // subtrees cannot change the root's mark.
                node.pruned.push(self.public_defeater(arg, d));
                self.pruned += 1;
                continue;
            }
            match state.check(self.eng, d.attacker, d.kind) {
                Err(v) => node.rejected.push((self.public_defeater(arg, d), v)),
                Ok(()) => {
                    let supp = state.supporting_rules.clone();
                    let intf = state.interfering_rules.clone();
                    state.push(self.eng, d.attacker, Some(d.kind));
                    let child = self.expand_pruned(d.attacker, Some(d), state)?;
                    state.pop(supp, intf);
                    if child.mark == Some(Mark::Undefeated) {
                        defeated = true;
                    }
                    node.children.push(child);
                }
            }
        }
        node.mark = Some(if defeated { Mark::Defeated } else { Mark::Undefeated });
        Ok(node)
    }
}

fn mark_node(node: &mut TreeNode) {
    for c in &mut node.children {
        mark_node(c);
    }
    let defeated = node.children.iter().any(|c| c.mark == Some(Mark::Undefeated));
    node.mark = Some(if defeated { Mark::Defeated } else { Mark::Undefeated });
}

/// The exhaustive dialectical tree for the root argument, unmarked.
pub fn build_tree(
    g: &GroundProgram,
    cfg: &DialecticsConfig,
    root: &ArgumentStructure,
) -> Result<DialecticalTree, DialecticsError> {
    check_config(g, cfg)?;
    let eng = Engine::new(g, cfg.criterion);
    build_tree_with(&eng, cfg, root)
}

pub(crate) fn build_tree_with(
    eng: &Engine,
    cfg: &DialecticsConfig,
    root: &ArgumentStructure,
) -> Result<DialecticalTree, DialecticsError> {
    let rid = eng.intern_public(root);
    let mut builder = Builder { eng, max_nodes: cfg.max_nodes, expanded: 0, pruned: 0 };
    let mut state = LineState::new(eng);
    state.push(eng, rid, None);
    let node = builder.expand_exhaustive(rid, None, &mut state)?;
    Ok(DialecticalTree {
        root: node,
        stats: Stats { expanded: builder.expanded, pruned: 0 },
    })
}

/// Bottom-up marking: leaves are undefeated; an inner node is undefeated
/// iff every child is defeated.
pub fn mark_tree(mut tree: DialecticalTree) -> DialecticalTree {
    mark_node(&mut tree.root);
    tree
}

fn explore_with(
    eng: &Engine,
    cfg: &DialecticsConfig,
    h: &Literal,
    strategy: Strategy,
) -> Result<Exploration, DialecticsError> {
    let mut exploration = Exploration {
        query: h.clone(),
        arguments: Vec::new(),
        trees: Vec::new(),
        warrant: None,
    };
    let Some(hid) = eng.lit_id(h) else { return Ok(exploration) };
    for &aid in eng.args_for(hid).iter() {
        let root = eng.to_public(&eng.arg(aid));
        let tree = match strategy {
            Strategy::Exhaustive => mark_tree(build_tree_with(eng, cfg, &root)?),
            Strategy::Pruned => {
                let mut builder =
                    Builder { eng, max_nodes: cfg.max_nodes, expanded: 0, pruned: 0 };
                let mut state = LineState::new(eng);
                state.push(eng, aid, None);
                let node = builder.expand_pruned(aid, None, &mut state)?;
                DialecticalTree {
                    root: node,
                    stats: Stats { expanded: builder.expanded, pruned: builder.pruned },
                }
            }
        };
        let undefeated = tree.root_mark() == Mark::Undefeated;
        exploration.arguments.push(root);
        exploration.trees.push(tree);
        if undefeated {
            exploration.warrant = Some(exploration.trees.len() - 1);
            break;
        }
    }
    Ok(exploration)
}

/// Considers each argument for `h` in turn; the trees of all examined
/// arguments are returned together with the index of the warrant, if any.
pub fn explore(
    g: &GroundProgram,
    cfg: &DialecticsConfig,
    h: &Literal,
    strategy: Strategy,
) -> Result<Exploration, DialecticsError> {
    check_config(g, cfg)?;
    let eng = Engine::new(g, cfg.criterion);
    explore_with(&eng, cfg, h, strategy)
}

/// The first argument for `h` whose exhaustive marked tree has an
/// undefeated root, with that tree as witness.
pub fn warrants(
    g: &GroundProgram,
    cfg: &DialecticsConfig,
    h: &Literal,
) -> Result<Option<(ArgumentStructure, DialecticalTree)>, DialecticsError> {
    let mut e = explore(g, cfg, h, Strategy::Exhaustive)?;
    Ok(e.warrant.map(|i| (e.arguments.swap_remove(i), e.trees.swap_remove(i))))
}

/// Depth-first warrant search with sibling pruning; the verdict is
/// identical to the exhaustive search, the returned tree may be partial.
pub fn warrants_pruned(
    g: &GroundProgram,
    cfg: &DialecticsConfig,
    h: &Literal,
) -> Result<Option<(ArgumentStructure, DialecticalTree)>, DialecticsError> {
    let mut e = explore(g, cfg, h, Strategy::Pruned)?;
    Ok(e.warrant.map(|i| (e.arguments.swap_remove(i), e.trees.swap_remove(i))))
}

pub(crate) fn answer_with(
    eng: &Engine,
    cfg: &DialecticsConfig,
    h: &Literal,
) -> Result<Answer, DialecticsError> {
    if !in_language(eng.g, h) {
        return Ok(Answer { value: AnswerValue::Unknown, witness: None });
    }
    let mut e = explore_with(eng, cfg, h, Strategy::Pruned)?;
    if let Some(i) = e.warrant {
        return Ok(Answer {
            value: AnswerValue::Yes,
            witness: Some((e.arguments.swap_remove(i), e.trees.swap_remove(i))),
        });
    }
    let complement = h.complemented();
    let mut ec = explore_with(eng, cfg, &complement, Strategy::Pruned)?;
    if let Some(i) = ec.warrant {
        return Ok(Answer {
            value: AnswerValue::No,
            witness: Some((ec.arguments.swap_remove(i), ec.trees.swap_remove(i))),
        });
    }
    Ok(Answer { value: AnswerValue::Undecided, witness: None })
}

/// The answer computed with exhaustive trees; the differential harness
/// compares it against the pruned path.
pub(crate) fn answer_exhaustive_with(
    eng: &Engine,
    cfg: &DialecticsConfig,
    h: &Literal,
) -> Result<AnswerValue, DialecticsError> {
    if !in_language(eng.g, h) {
        return Ok(AnswerValue::Unknown);
    }
    if explore_with(eng, cfg, h, Strategy::Exhaustive)?.warrant.is_some() {
        return Ok(AnswerValue::Yes);
    }
    if explore_with(eng, cfg, &h.complemented(), Strategy::Exhaustive)?.warrant.is_some() {
        return Ok(AnswerValue::No);
    }
    Ok(AnswerValue::Undecided)
}

/// UNKNOWN if the literal is outside the program language; YES if it is
/// warranted; NO if its complement is; UNDECIDED otherwise.
pub fn answer(
    g: &GroundProgram,
    cfg: &DialecticsConfig,
    h: &Literal,
) -> Result<Answer, DialecticsError> {
    check_config(g, cfg)?;
    let eng = Engine::new(g, cfg.criterion);
    answer_with(&eng, cfg, h)
}

/// All language literals with answer YES.
pub fn warranted_literals(
    g: &GroundProgram,
    cfg: &DialecticsConfig,
) -> Result<BTreeSet<Literal>, DialecticsError> {
    check_config(g, cfg)?;
    let eng = Engine::new(g, cfg.criterion);
    let mut out = BTreeSet::new();
    for l in g.language_literals() {
        let e = explore_with(&eng, cfg, &l, Strategy::Pruned)?;
        if e.warrant.is_some() {
            out.insert(l);
        }
    }
    Ok(out)
}
