//! Criterion benchmarks for `rydcryst-core`; see `benches/solvers.rs`.
