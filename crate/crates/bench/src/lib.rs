//! Criterion benchmarks for kim-core; the targets live in `benches/kernels.rs`
//! and run with `cargo bench -p kim-bench`.
