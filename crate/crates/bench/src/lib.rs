//! Benchmarks for the solvers, the reduction and the gap machinery; see `benches/`.
