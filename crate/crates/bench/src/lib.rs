//! Benchmark-only crate. Run `cargo bench -p ejmnet-bench`; the benchmarks
//! live in `benches/contraction.rs` and compare the dense and ring-contraction
//! evaluators, the O(N) aggregates, and sweep throughput.
