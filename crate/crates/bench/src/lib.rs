//! Benchmark-only crate; see `benches/fricke.rs`.
