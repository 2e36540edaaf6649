//! Benchmarks live in `benches/`; run them with `cargo bench -p hallp1-bench`.
