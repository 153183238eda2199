//! An interpreter for defeasible logic programs: parse a program of facts,
//! strict rules, and defeasible rules, build arguments for a query, run the
//! dialectical warrant procedure, and answer YES, NO, UNDECIDED, or UNKNOWN
//! with an exportable dialectical tree as the explanation.

pub mod argumentation;
pub mod comparison;
pub mod corpus;
pub mod derivation;
pub mod dialectics;
pub mod model;
pub mod oracle;
pub mod parser;

mod engine;
mod index;
