//! Criterion benchmarks for `ftrl-bandits`; see `benches/`.
