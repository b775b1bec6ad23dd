//! Shared fixtures for the solver benchmarks.
