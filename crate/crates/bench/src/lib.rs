//! Criterion benchmarks for ifsdyn; see `benches/`.
