//! Library surface of the `delp` binary: the tree-export formats, shared
//! with the integration tests.

pub mod export;
