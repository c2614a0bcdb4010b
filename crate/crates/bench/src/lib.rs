//! Criterion benchmarks for `gkcs-core`; run with `cargo bench -p gkcs-bench`.
