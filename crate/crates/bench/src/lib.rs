//! Criterion benchmarks for `walkers-core` live in `benches/`.
