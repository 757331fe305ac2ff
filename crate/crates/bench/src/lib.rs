//! Benchmark-only crate; see the `benches/` directory. The library target
//! exists solely so cargo accepts the package.
