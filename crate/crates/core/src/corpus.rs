//! The program corpus shipped with the crate, used by tests, the
//! differential harness, and the benchmarks. The `.delp` files are the wire
//! format of record; `format_program` output for them is checked for
//! stability.

use crate::model::{GroundProgram, Mode, Program};

#[derive(Debug, Clone, Copy)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub text: &'static str,
    pub mode: Mode,
}

const DN: Mode = Mode { default_negation: true, presumptions: false };
const PRESUMPTIONS: Mode = Mode { default_negation: false, presumptions: true };

const ENTRIES: &[CorpusEntry] = &[
    CorpusEntry { name: "birds", text: include_str!("../corpus/birds.delp"), mode: Mode { default_negation: false, presumptions: false } },
    CorpusEntry { name: "nixon", text: include_str!("../corpus/nixon.delp"), mode: Mode { default_negation: false, presumptions: false } },
    CorpusEntry { name: "indirect_conflict", text: include_str!("../corpus/indirect_conflict.delp"), mode: Mode { default_negation: false, presumptions: false } },
    CorpusEntry { name: "stocks", text: include_str!("../corpus/stocks.delp"), mode: Mode { default_negation: false, presumptions: false } },
    CorpusEntry { name: "union_not_argument", text: include_str!("../corpus/union_not_argument.delp"), mode: Mode { default_negation: false, presumptions: false } },
    CorpusEntry { name: "stocks_priorities", text: include_str!("../corpus/stocks_priorities.delp"), mode: Mode { default_negation: false, presumptions: false } },
    CorpusEntry { name: "reciprocal", text: include_str!("../corpus/reciprocal.delp"), mode: Mode { default_negation: false, presumptions: false } },
    CorpusEntry { name: "three_lines", text: include_str!("../corpus/three_lines.delp"), mode: Mode { default_negation: false, presumptions: false } },
    CorpusEntry { name: "subtree", text: include_str!("../corpus/subtree.delp"), mode: Mode { default_negation: false, presumptions: false } },
    CorpusEntry { name: "concordance", text: include_str!("../corpus/concordance.delp"), mode: Mode { default_negation: false, presumptions: false } },
    CorpusEntry { name: "hobbes", text: include_str!("../corpus/hobbes.delp"), mode: Mode { default_negation: false, presumptions: false } },
    CorpusEntry { name: "molluscs", text: include_str!("../corpus/molluscs.delp"), mode: Mode { default_negation: false, presumptions: false } },
    CorpusEntry { name: "reinstatement", text: include_str!("../corpus/reinstatement.delp"), mode: Mode { default_negation: false, presumptions: false } },
    CorpusEntry { name: "default_negation", text: include_str!("../corpus/default_negation.delp"), mode: DN },
    CorpusEntry { name: "presumptions", text: include_str!("../corpus/presumptions.delp"), mode: PRESUMPTIONS },
    CorpusEntry { name: "railway", text: include_str!("../corpus/railway.delp"), mode: DN },
    CorpusEntry { name: "railway_attacked", text: include_str!("../corpus/railway_attacked.delp"), mode: DN },
];

pub fn all() -> &'static [CorpusEntry] {
    ENTRIES
}

pub fn entry(name: &str) -> &'static CorpusEntry {
    ENTRIES
        .iter()
        .find(|e| e.name == name)
        .unwrap_or_else(|| panic!("no corpus program named `{name}`"))
}

pub fn program(name: &str) -> Program {
    let e = entry(name);
    crate::parser::parse_program(e.text, e.mode)
        .unwrap_or_else(|d| panic!("corpus program `{name}` failed to parse: {d:?}"))
}

pub fn ground(name: &str) -> GroundProgram {
    crate::model::ground_program(&program(name))
        .unwrap_or_else(|e| panic!("corpus program `{name}` failed to ground: {e}"))
}
