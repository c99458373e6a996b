//! Benchmark-only crate; see `benches/kernels.rs`.

pub use lparity_core as core;
