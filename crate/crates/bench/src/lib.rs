//! Criterion benchmarks for the solver and the simulator; see `benches/`.
