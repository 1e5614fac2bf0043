//! Criterion benchmarks for the numerical kernels of `pvi-core`; see `benches/`.
