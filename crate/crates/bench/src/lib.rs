//! Criterion benchmarks for `lndkit`; see `benches/`.
