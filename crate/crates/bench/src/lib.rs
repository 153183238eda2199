//! Benchmark-only crate; see `benches/queries.rs`.
