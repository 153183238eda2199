//! Dialectical-tree export: DOT for rendering, line-delimited JSON records
//! for machines. The JSON records round-trip: rebuilding the trees and
//! re-running the marking procedure reproduces the recorded marks.

use delp_core::dialectics::{DefeatKind, DialecticalTree, Mark, TreeNode};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TreeRecord {
    pub tree: usize,
    pub node: usize,
    pub parent: Option<usize>,
    pub conclusion: String,
    pub rules: Vec<String>,
    /// "U" or "D"; absent on pruned placeholders.
    pub mark: Option<String>,
    /// Defeat kind of the incoming edge; absent at roots.
    pub defeat: Option<String>,
    /// Attack point of the incoming edge; absent at roots.
    pub point: Option<String>,
    pub pruned: bool,
}

fn mark_str(m: Option<Mark>) -> Option<String> {
    m.map(|m| m.to_string())
}

fn push_node(
    records: &mut Vec<TreeRecord>,
    tree: usize,
    node: &TreeNode,
    parent: Option<usize>,
    next_id: &mut usize,
) {
    let id = *next_id;
    *next_id += 1;
    records.push(TreeRecord {
        tree,
        node: id,
        parent,
        conclusion: node.argument.conclusion.to_string(),
        rules: node.argument.rules.iter().map(|r| r.to_string()).collect(),
        mark: mark_str(node.mark),
        defeat: node.incoming.as_ref().map(|(k, _)| k.to_string()),
        point: node.incoming.as_ref().map(|(_, p)| p.to_string()),
        pruned: false,
    });
    for child in &node.children {
        push_node(records, tree, child, Some(id), next_id);
    }
    for skipped in &node.pruned {
        let pid = *next_id;
        *next_id += 1;
        records.push(TreeRecord {
            tree,
            node: pid,
            parent: Some(id),
            conclusion: skipped.attack.attacker.conclusion.to_string(),
            rules: skipped.attack.attacker.rules.iter().map(|r| r.to_string()).collect(),
            mark: None,
            defeat: Some(skipped.kind.to_string()),
            point: Some(skipped.attack.point.to_string()),
            pruned: true,
        });
    }
}

pub fn to_records(trees: &[&DialecticalTree]) -> Vec<TreeRecord> {
    let mut records = Vec::new();
    for (ti, tree) in trees.iter().enumerate() {
        let mut next_id = 0;
        push_node(&mut records, ti, &tree.root, None, &mut next_id);
    }
    records
}

pub fn to_jsonl(records: &[TreeRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("record serializes"));
        out.push('\n');
    }
    out
}

pub fn parse_jsonl(text: &str) -> Result<Vec<TreeRecord>, serde_json::Error> {
    text.lines().filter(|l| !l.trim().is_empty()).map(serde_json::from_str).collect()
}

/// Re-runs the bottom-up marking over the deserialized records, ignoring
/// pruned placeholders, and checks it reproduces the recorded marks.
pub fn remark_matches(records: &[TreeRecord]) -> bool {
    use std::collections::BTreeMap;
    let mut children: BTreeMap<(usize, usize), Vec<&TreeRecord>> = BTreeMap::new();
    for r in records {
        if let Some(p) = r.parent {
            children.entry((r.tree, p)).or_default().push(r);
        }
    }
    fn remark(
        r: &TreeRecord,
        children: &std::collections::BTreeMap<(usize, usize), Vec<&TreeRecord>>,
    ) -> Option<String> {
        let kids = children.get(&(r.tree, r.node));
        let mut any_undefeated = false;
        if let Some(kids) = kids {
            for k in kids {
                if k.pruned {
                    continue;
                }
                if remark(k, children).as_deref() == Some("U") {
                    any_undefeated = true;
                }
            }
        }
        Some(if any_undefeated { "D".into() } else { "U".into() })
    }
    records
        .iter()
        .filter(|r| !r.pruned)
        .all(|r| remark(r, &children) == r.mark)
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn dot_node(out: &mut String, tree: usize, node: &TreeNode, parent: Option<usize>, next_id: &mut usize) {
    let id = *next_id;
    *next_id += 1;
    let mark = node.mark.map(|m| m.to_string()).unwrap_or_else(|| "?".into());
    out.push_str(&format!(
        "  n{tree}_{id} [label=\"{} / {mark}\"];\n",
        dot_escape(&node.argument.to_string())
    ));
    if let (Some(p), Some((kind, _))) = (parent, &node.incoming) {
        out.push_str(&format!("  n{tree}_{p} -> n{tree}_{id} [style={}];\n", edge_style(*kind)));
    }
    for child in &node.children {
        dot_node(out, tree, child, Some(id), next_id);
    }
    for skipped in &node.pruned {
        let pid = *next_id;
        *next_id += 1;
        out.push_str(&format!(
            "  n{tree}_{pid} [label=\"pruned: {}\", style=dashed];\n",
            dot_escape(&skipped.attack.attacker.to_string())
        ));
        out.push_str(&format!(
            "  n{tree}_{id} -> n{tree}_{pid} [style={}, color=gray];\n",
            edge_style(skipped.kind)
        ));
    }
}

fn edge_style(kind: DefeatKind) -> &'static str {
    match kind {
        DefeatKind::Proper => "solid",
        DefeatKind::Blocking => "dashed",
        DefeatKind::Assumption => "dotted",
    }
}

pub fn to_dot(trees: &[&DialecticalTree]) -> String {
    let mut out = String::from("digraph dialectical_trees {\n  node [shape=box];\n");
    for (ti, tree) in trees.iter().enumerate() {
        let mut next_id = 0;
        dot_node(&mut out, ti, &tree.root, None, &mut next_id);
    }
    out.push_str("}\n");
    out
}
