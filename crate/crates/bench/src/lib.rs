//! Criterion benchmarks for `quantinv-core`; see `benches/kernels.rs`.
