//! Criterion benchmarks for the core crate; see `benches/holonomy.rs`.
